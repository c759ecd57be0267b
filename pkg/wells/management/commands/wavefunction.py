from django.core.management.base import CommandError

from wells.management.commands._options import (
    SOLVER_ERROR,
    WellsCommand,
    add_output_arguments,
    add_scan_arguments,
    add_well_arguments,
    build_spec,
    non_negative_int,
    positive_float,
    positive_int,
    scan_options,
    solver_errors,
    wells_setting,
)
from wells.model import reduction
from wells.records import table_to_csv
from wells.spectrum import scan_spectrum
from wells.wavefun import count_nodes, normalize


class Command(WellsCommand):
    help = "Normalised wavefunction of one bound state sampled on a symmetric grid."
    command_name = "wavefunction"

    def add_arguments(self, parser):
        add_well_arguments(parser)
        parser.add_argument("--state", type=non_negative_int, required=True,
                            help="State index, 0 for the ground state.")
        parser.add_argument("--xmax", type=positive_float, default=None,
                            help="Half width of the grid in units of d (default 40 decay lengths).")
        parser.add_argument("--samples", type=positive_int, default=None,
                            help="Odd number of samples per half axis (default 4001).")
        parser.add_argument("--density", action="store_true", help="Also emit psi^2.")
        add_scan_arguments(parser, states=False)
        add_output_arguments(parser, ("csv", "json"), "csv")

    def handle(self, *args, **options):
        spec = build_spec(options["class_p"], options["depth"], options)
        index = options["state"]
        kappa_min = options["kappa_min"] or wells_setting("KAPPA_MIN")
        samples = options["samples"] or wells_setting("GRID_SAMPLES")

        with solver_errors():
            scan = scan_spectrum(spec, index + 1, kappa_min, **scan_options())
            if len(scan.states) <= index:
                raise CommandError(
                    f"state {index} not found: the scan above kappa_min = {kappa_min:g} "
                    f"holds {len(scan.states)} state(s)",
                    returncode=SOLVER_ERROR,
                )
            state = scan.states[index]
            grid = normalize(spec, state, options["xmax"], samples,
                             enforce_extent=options["xmax"] is None)
            nodes = count_nodes(grid)

        columns = ["x_over_d", "psi"] + (["density"] if options["density"] else [])
        data = {"x_over_d": grid.x_over_d, "psi": grid.psi}
        if options["density"]:
            data["density"] = grid.density
        if options["format"] == "csv":
            self.emit(table_to_csv(data, columns), options)
            return
        results = {
            "state": state.to_dict(),
            "norm_constant": grid.norm_constant,
            "node_count": nodes,
            **{column: data[column] for column in columns},
        }
        diagnostics = {
            "tail_fraction": grid.tail_fraction,
            "points": len(grid.x_over_d),
            "reduction": reduction(spec, state.kappa_d).to_dict(),
        }
        self.emit(self.record(options, spec.to_dict(), results, diagnostics).to_json(), options)
