from wells.management.commands._options import (
    WellsCommand,
    add_output_arguments,
    add_scan_arguments,
    add_unit_arguments,
    add_well_arguments,
    build_spec,
    energy_scale,
    scan_options,
    solver_errors,
    wells_setting,
)
from wells.records import table_to_csv
from wells.spectrum import scan_spectrum

STATE_COLUMNS = ["index", "parity", "kappa_d", "energy_dimless", "node_count"]


def state_rows(spec, states, scale_ev=None):
    rows = []
    for state in states:
        row = state.to_dict()
        if spec.threshold == 0:
            row.pop("decay_kappa_d")
        if scale_ev is not None:
            row["energy_ev"] = state.energy_dimless * scale_ev
        rows.append(row)
    return rows


def state_columns(spec, scale_ev=None):
    columns = list(STATE_COLUMNS)
    if spec.threshold != 0:
        columns.insert(3, "decay_kappa_d")
    if scale_ev is not None:
        columns.append("energy_ev")
    return columns


class Command(WellsCommand):
    help = "Bound-state spectrum of one well: kappa_d, parity and energy per state."
    command_name = "solve"

    def add_arguments(self, parser):
        add_well_arguments(parser)
        add_scan_arguments(parser)
        add_unit_arguments(parser)
        add_output_arguments(parser, ("json", "csv"), "json")

    def handle(self, *args, **options):
        spec = build_spec(options["class_p"], options["depth"], options)
        scale_ev = energy_scale(options)
        n_states = options["states"] or wells_setting("STATES")
        kappa_min = options["kappa_min"] or wells_setting("KAPPA_MIN")

        with solver_errors():
            scan = scan_spectrum(spec, n_states, kappa_min, **scan_options())

        for warning in scan.warnings:
            self.stderr.write(warning)
        rows = state_rows(spec, scan.states, scale_ev)
        if options["format"] == "csv":
            self.emit(table_to_csv(rows, state_columns(spec, scale_ev)), options)
            return
        diagnostics = {
            "possibly_incomplete": scan.possibly_incomplete,
            "states_found": len(scan.states),
            "warnings": list(scan.warnings),
        }
        if scale_ev is not None:
            diagnostics["energy_scale_ev"] = scale_ev
        record = self.record(options, spec.to_dict(), {"states": rows}, diagnostics)
        self.emit(record.to_json(), options)
