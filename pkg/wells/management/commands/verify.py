import io

from django.core.management.base import CommandError
from rich.console import Console
from rich.table import Table

from wells.constants import CERTIFY_KAPPA_L, OVERLAP_FLOOR
from wells.management.commands._options import (
    VERIFY_FAILURE,
    WellsCommand,
    add_output_arguments,
    add_scan_arguments,
    add_well_arguments,
    build_spec,
    positive_float,
    positive_int,
    scan_options,
    solver_errors,
    wells_setting,
)
from wells.oracle import OracleConfig, overlap, solve_fd_extrapolated
from wells.spectrum import scan_spectrum
from wells.wavefun import default_extent, normalize

TABLE_WIDTH = 110


def compare(spec, states, oracle, tolerance, samples):
    """One row per analytic state against the oracle state of the same index."""
    rows = []
    half_width = oracle.config.half_width_over_d
    for state in states:
        row = {
            "index": state.index,
            "parity": state.parity.label,
            "kappa_d": state.kappa_d,
            "oracle_kappa_d": None,
            "abs_delta": None,
            "rel_delta": None,
            "overlap": None,
            "certified": False,
            "domain_limited": True,
            "passed": None,
        }
        if state.index < len(oracle.eigen_kappa_d):
            fd_kappa = oracle.eigen_kappa_d[state.index]
            row["oracle_kappa_d"] = fd_kappa
            row["abs_delta"] = abs(fd_kappa - state.kappa_d)
            row["rel_delta"] = row["abs_delta"] / state.kappa_d
            row["domain_limited"] = oracle.domain_limited[state.index]
        row["certified"] = state.decay_kappa_d * half_width >= CERTIFY_KAPPA_L
        if row["certified"]:
            if row["oracle_kappa_d"] is None:
                row["passed"] = False
            else:
                extent = max(default_extent(state), half_width)
                grid = normalize(spec, state, extent, samples)
                row["overlap"] = overlap(oracle.state(state.index), grid)
                row["passed"] = row["rel_delta"] <= tolerance and row["overlap"] >= OVERLAP_FLOOR
        rows.append(row)
    return rows


def _cell(value, digits=6):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def render_table(spec, rows, config, passed):
    table = Table(title=f"class {spec.class_p}, u = {spec.u:g}: analytic vs finite differences "
                        f"(L = {config.half_width_over_d:g} d, {config.points} points, Richardson)")
    for header in ("n", "parity", "kappa_d", "oracle", "abs delta", "rel delta",
                   "overlap", "certified", "result"):
        table.add_column(header, justify="right")
    for row in rows:
        result = "-" if row["passed"] is None else ("pass" if row["passed"] else "FAIL")
        table.add_row(
            str(row["index"]), row["parity"], _cell(row["kappa_d"], 9), _cell(row["oracle_kappa_d"], 9),
            _cell(row["abs_delta"], 3), _cell(row["rel_delta"], 3), _cell(row["overlap"], 7),
            _cell(row["certified"]), result,
        )
    buffer = io.StringIO()
    console = Console(file=buffer, width=TABLE_WIDTH, color_system=None, force_terminal=False,
                      highlight=False, emoji=False)
    console.print(table)
    certified = sum(row["certified"] for row in rows)
    console.print(f"{certified}/{len(rows)} states certified; verification {'passed' if passed else 'FAILED'}")
    return buffer.getvalue()


class Command(WellsCommand):
    help = "Compare analytic eigenvalues and wavefunctions with a finite-difference solution."
    command_name = "verify"

    def add_arguments(self, parser):
        add_well_arguments(parser)
        add_scan_arguments(parser)
        parser.add_argument("--grid", type=positive_int, default=None,
                            help="Odd number of interior finite-difference points (default 24001).")
        parser.add_argument("--halfwidth", type=positive_float, default=None,
                            help="Box half width L in units of d (default 60).")
        parser.add_argument("--tolerance", type=positive_float, default=None,
                            help="Relative kappa_d tolerance (default 1e-3).")
        add_output_arguments(parser, ("table", "json"), "table")

    def handle(self, *args, **options):
        spec = build_spec(options["class_p"], options["depth"], options)
        n_states = options["states"] or wells_setting("STATES")
        kappa_min = options["kappa_min"] or wells_setting("KAPPA_MIN")
        tolerance = options["tolerance"] or wells_setting("VERIFY_TOLERANCE")
        samples = wells_setting("GRID_SAMPLES")

        with solver_errors():
            config = OracleConfig(
                half_width_over_d=options["halfwidth"] or wells_setting("ORACLE_HALF_WIDTH"),
                points=options["grid"] or wells_setting("ORACLE_POINTS"),
            )
            scan = scan_spectrum(spec, n_states, kappa_min, **scan_options())
            oracle = solve_fd_extrapolated(spec, config, n_states)
            rows = compare(spec, scan.states, oracle, tolerance, samples)

        checked = [row for row in rows if row["certified"]]
        passed = bool(checked) and all(row["passed"] for row in checked)
        if options["format"] == "table":
            self.emit(render_table(spec, rows, config, passed), options)
        else:
            diagnostics = {
                "passed": passed,
                "certified": len(checked),
                "tolerance": tolerance,
                "oracle": oracle.to_dict(),
                "warnings": list(scan.warnings),
            }
            record = self.record(options, spec.to_dict(), {"states": rows}, diagnostics)
            self.emit(record.to_json(), options)
        if not passed:
            raise CommandError("analytic and finite-difference results disagree", returncode=VERIFY_FAILURE)
