import numpy as np
from django.core.management.base import CommandError

from wells.management.commands._options import (
    SOLVER_ERROR,
    USAGE_ERROR,
    WellsCommand,
    add_class_argument,
    add_extension_arguments,
    add_output_arguments,
    add_scan_arguments,
    extension_from,
    positive_float,
    positive_int,
    scan_options,
    solver_errors,
    wells_setting,
)
from wells.records import table_to_csv
from wells.spectrum import sweep


def depth_grid(depth_min, depth_max, steps, log):
    if steps == 1:
        return [depth_min]
    if depth_max <= depth_min:
        raise CommandError("--depth-max must exceed --depth-min", returncode=USAGE_ERROR)
    space = np.geomspace if log else np.linspace
    return [float(u) for u in space(depth_min, depth_max, steps)]


class Command(WellsCommand):
    help = "kappa_d of the lowest states over a range of depths u, one row per depth."
    command_name = "sweep"

    def add_arguments(self, parser):
        add_class_argument(parser)
        add_extension_arguments(parser)
        parser.add_argument("--depth-min", dest="depth_min", type=positive_float, required=True)
        parser.add_argument("--depth-max", dest="depth_max", type=positive_float, required=True)
        parser.add_argument("--steps", type=positive_int, required=True)
        parser.add_argument("--log", action="store_true", help="Space depths geometrically.")
        parser.add_argument("--jobs", type=int, default=None,
                            help="Parallel workers (joblib n_jobs; default from settings).")
        add_scan_arguments(parser)
        add_output_arguments(parser, ("csv", "json"), "csv")

    def handle(self, *args, **options):
        u_grid = depth_grid(options["depth_min"], options["depth_max"], options["steps"], options["log"])
        n_states = options["states"] or wells_setting("STATES")
        kappa_min = options["kappa_min"] or wells_setting("KAPPA_MIN")
        n_jobs = options["jobs"] or wells_setting("SWEEP_JOBS")
        try:
            extension = extension_from(options)
        except ValueError as error:
            raise CommandError(str(error), returncode=USAGE_ERROR)

        with solver_errors():
            rows = sweep(options["class_p"], u_grid, n_states, kappa_min, n_jobs=n_jobs,
                         extension=extension, **scan_options())

        failed = [row for row in rows if row.error is not None]
        for row in failed:
            self.stderr.write(f"u={row.u:.12g}: {row.error}")
        if len(failed) == len(rows):
            raise CommandError("every sweep row failed", returncode=SOLVER_ERROR)

        columns = ["u"] + [f"kappa_d_{index}" for index in range(n_states)]
        table = [dict(zip(columns, [row.u] + row.kappa_values(n_states))) for row in rows]
        if options["format"] == "csv":
            self.emit(table_to_csv(table, columns), options)
            return
        results = {
            "rows": [
                {
                    "u": row.u,
                    "kappa_d": row.kappa_values(n_states),
                    "possibly_incomplete": row.possibly_incomplete,
                    "error": row.error,
                }
                for row in rows
            ]
        }
        spec = {"class": options["class_p"], "reference": "shifted" if options["class_p"] == 2 else "asymptotic"}
        if extension is not None:
            spec.update(u1=extension.u1, q=extension.q)
        diagnostics = {"rows_failed": len(failed), "rows": len(rows)}
        self.emit(self.record(options, spec, results, diagnostics).to_json(), options)
