import io
import json
import os
import tempfile
from contextlib import redirect_stderr

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from wells.management.commands import solve, sweep, verify, wavefunction

DOUBLE = [0.408, 0.290, 0.222, 0.183]


def run(name, *argv, **kwargs):
    out, err = io.StringIO(), io.StringIO()
    call_command(name, *argv, stdout=out, stderr=err, **kwargs)
    return out.getvalue(), err.getvalue()


def exit_code(module, name, *argv):
    """Exit status of the command as started from manage.py."""
    command = module.Command(stdout=io.StringIO(), stderr=io.StringIO())
    with redirect_stderr(io.StringIO()):
        try:
            command.run_from_argv(["manage.py", name, *argv])
        except SystemExit as stopped:
            return stopped.code
    return 0


class SolveCommandTests(SimpleTestCase):
    def test_json_record(self):
        out, _ = run("solve", "--class", "1", "--depth", "1")
        record = json.loads(out)
        self.assertEqual(record["schema_version"], "1")
        self.assertEqual(record["command"], "solve")
        self.assertEqual(record["spec"], {"class": 1, "name": "double", "u": 1.0, "reference": "asymptotic"})
        self.assertEqual(record["options"]["class_p"], 1)
        self.assertNotIn("generated_at", record)
        states = record["results"]["states"]
        self.assertEqual([state["parity"] for state in states], ["even", "odd", "even", "odd"])
        for state, kappa_d in zip(states, DOUBLE):
            self.assertLessEqual(abs(state["kappa_d"] - kappa_d), 0.01 * kappa_d)
            self.assertNotIn("decay_kappa_d", state)
        self.assertFalse(record["diagnostics"]["possibly_incomplete"])
        self.assertEqual(record["diagnostics"]["states_found"], 4)

    def test_csv_matches_json(self):
        text, _ = run("solve", "--class", "2", "--depth", "1", "--format", "csv")
        lines = text.splitlines()
        self.assertEqual(lines[0], "index,parity,kappa_d,energy_dimless,node_count")
        self.assertEqual(len(lines), 5)
        csv_kappa = [float(line.split(",")[2]) for line in lines[1:]]
        record = json.loads(run("solve", "--class", "2", "--depth", "1")[0])
        self.assertEqual(csv_kappa, [state["kappa_d"] for state in record["results"]["states"]])

    def test_deterministic(self):
        first, _ = run("solve", "--class", "1", "--depth", "1.5", "--states", "3")
        second, _ = run("solve", "--class", "1", "--depth", "1.5", "--states", "3")
        self.assertEqual(first, second)

    def test_stamp(self):
        out, _ = run("solve", "--class", "1", "--depth", "1", "--states", "1", "--stamp")
        self.assertIn("generated_at", json.loads(out))

    def test_incomplete_scan_is_reported(self):
        out, err = run("solve", "--class", "0", "--depth", "0.1")
        record = json.loads(out)
        self.assertTrue(record["diagnostics"]["possibly_incomplete"])
        self.assertEqual(len(record["results"]["states"]), 1)
        self.assertIn("found 1 of 4", err)

    def test_physical_units(self):
        out, _ = run("solve", "--class", "1", "--depth", "1", "--states", "1", "--mass", "1", "--width", "1")
        record = json.loads(out)
        scale = record["diagnostics"]["energy_scale_ev"]
        self.assertAlmostEqual(scale, 0.0380998, delta=1e-6)
        state = record["results"]["states"][0]
        self.assertAlmostEqual(state["energy_ev"], state["energy_dimless"] * scale, places=10)
        text, _ = run("solve", "--class", "1", "--depth", "1", "--states", "1", "--mass", "1", "--width", "1",
                      "--format", "csv")
        self.assertTrue(text.startswith("index,parity,kappa_d,energy_dimless,node_count,energy_ev\n"))

    def test_loudon_columns(self):
        text, _ = run("solve", "--class", "1", "--depth", "1", "--u1", "0.04", "--q", "1", "--states", "2",
                      "--format", "csv")
        self.assertTrue(text.startswith("index,parity,kappa_d,decay_kappa_d,energy_dimless,node_count\n"))
        record = json.loads(run("solve", "--class", "1", "--depth", "1", "--u1", "0.04", "--q", "1",
                                "--states", "2")[0])
        self.assertEqual(record["spec"]["u1"], 0.04)
        self.assertEqual(record["spec"]["q"], 1)

    def test_out_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "spectrum.json")
            out, _ = run("solve", "--class", "1", "--depth", "1", "--states", "2", "--out", path)
            self.assertEqual(out, "")
            with open(path, encoding="utf-8") as stream:
                written = stream.read()
        self.assertEqual(written, run("solve", "--class", "1", "--depth", "1", "--states", "2")[0])

    def test_usage_errors(self):
        with self.assertRaises(CommandError) as raised:
            run("solve", "--class", "1", "--depth", "1", "--mass", "1")
        self.assertEqual(raised.exception.returncode, 2)
        with self.assertRaises(CommandError) as raised:
            run("solve", "--class", "0", "--depth", "1", "--u1", "0.1")
        self.assertEqual(raised.exception.returncode, 2)
        with self.assertRaises(CommandError):
            run("solve", "--class", "3", "--depth", "1")

    def test_exit_codes(self):
        self.assertEqual(exit_code(solve, "solve", "--class", "3", "--depth", "1"), 2)
        self.assertEqual(exit_code(solve, "solve", "--class", "1", "--depth", "-1"), 2)
        self.assertEqual(exit_code(solve, "solve", "--class", "0", "--depth", "1", "--u1", "0.1"), 2)
        self.assertEqual(exit_code(solve, "solve", "--class", "1", "--depth", "1", "--states", "1"), 0)


class SweepCommandTests(SimpleTestCase):
    def test_csv(self):
        text, _ = run("sweep", "--class", "1", "--depth-min", "0.5", "--depth-max", "1", "--steps", "2",
                      "--states", "2")
        lines = text.splitlines()
        self.assertEqual(lines[0], "u,kappa_d_0,kappa_d_1")
        self.assertEqual(len(lines), 3)
        u, kappa_0, kappa_1 = (float(cell) for cell in lines[2].split(","))
        self.assertEqual(u, 1.0)
        self.assertAlmostEqual(kappa_0, 0.408, delta=0.004)
        self.assertAlmostEqual(kappa_1, 0.290, delta=0.003)

    def test_single_step_matches_solve(self):
        text, _ = run("sweep", "--class", "2", "--depth-min", "1.3", "--depth-max", "1.3", "--steps", "1")
        lines = text.splitlines()
        self.assertEqual(len(lines), 2)
        cells = lines[1].split(",")
        self.assertEqual(float(cells[0]), 1.3)
        record = json.loads(run("solve", "--class", "2", "--depth", "1.3")[0])
        self.assertEqual([float(cell) for cell in cells[1:]],
                         [state["kappa_d"] for state in record["results"]["states"]])

    def test_depth_range_without_failures(self):
        for class_p in ("0", "1", "2"):
            out, _ = run("sweep", "--class", class_p, "--depth-min", "0.1", "--depth-max", "5", "--steps", "6",
                         "--format", "json")
            record = json.loads(out)
            self.assertEqual(record["diagnostics"]["rows_failed"], 0)
            rows = record["results"]["rows"]
            for index in range(4):
                found = [row["kappa_d"][index] for row in rows if row["kappa_d"][index] is not None]
                self.assertEqual(found, sorted(found), msg=f"class {class_p} state {index}")

    def test_missing_states_are_empty_cells(self):
        text, _ = run("sweep", "--class", "0", "--depth-min", "0.1", "--depth-max", "1", "--steps", "2",
                      "--states", "2")
        first = text.splitlines()[1]
        self.assertTrue(first.startswith("0.1,"))
        self.assertTrue(first.endswith(","))

    def test_failed_rows(self):
        out, err = run("sweep", "--class", "0", "--u1", "0.1", "--depth-min", "0.2", "--depth-max", "0.3",
                       "--steps", "2", "--states", "1", "--format", "json")
        rows = json.loads(out)["results"]["rows"]
        self.assertIsNone(rows[0]["error"])
        self.assertIsNotNone(rows[1]["error"])
        self.assertEqual(rows[1]["kappa_d"], [None])
        self.assertIn("u=0.3", err)
        with self.assertRaises(CommandError) as raised:
            run("sweep", "--class", "0", "--u1", "0.1", "--depth-min", "0.3", "--depth-max", "0.5",
                "--steps", "2")
        self.assertEqual(raised.exception.returncode, 3)

    def test_depth_grid(self):
        self.assertEqual(sweep.depth_grid(0.5, 0.1, 1, False), [0.5])
        self.assertEqual(sweep.depth_grid(1.0, 3.0, 3, False), [1.0, 2.0, 3.0])
        grid = sweep.depth_grid(0.01, 1.0, 3, True)
        self.assertAlmostEqual(grid[1], 0.1, places=12)
        with self.assertRaises(CommandError) as raised:
            sweep.depth_grid(1.0, 1.0, 3, False)
        self.assertEqual(raised.exception.returncode, 2)


class WavefunctionCommandTests(SimpleTestCase):
    def test_csv(self):
        text, _ = run("wavefunction", "--class", "1", "--depth", "1", "--state", "0", "--density")
        lines = text.splitlines()
        self.assertEqual(lines[0], "x_over_d,psi,density")
        self.assertEqual(len(lines), 1 + 2 * 4001 - 1)
        first, last = lines[1].split(","), lines[-1].split(",")
        self.assertEqual(float(first[0]), -float(last[0]))
        self.assertEqual(first[1], last[1])

    def test_json(self):
        out, _ = run("wavefunction", "--class", "2", "--depth", "1", "--state", "1", "--samples", "2001",
                     "--format", "json")
        record = json.loads(out)
        results = record["results"]
        self.assertEqual(results["node_count"], 1)
        self.assertEqual(results["state"]["parity"], "odd")
        self.assertEqual(len(results["psi"]), 2 * 2001 - 1)
        self.assertNotIn("density", results)
        self.assertGreater(results["norm_constant"], 0.0)
        reduced = record["diagnostics"]["reduction"]
        self.assertEqual(reduced["kind"], "whittaker")
        self.assertEqual(reduced["decay_kappa_d"], results["state"]["kappa_d"])
        self.assertAlmostEqual(reduced["whittaker"]["mu"], 1.0 / reduced["decay_kappa_d"], places=9)

    def test_solver_errors(self):
        with self.assertRaises(CommandError) as raised:
            run("wavefunction", "--class", "0", "--depth", "0.1", "--state", "1")
        self.assertEqual(raised.exception.returncode, 3)
        with self.assertRaises(CommandError) as raised:
            run("wavefunction", "--class", "1", "--depth", "1", "--state", "0", "--xmax", "2")
        self.assertEqual(raised.exception.returncode, 3)
        self.assertEqual(
            exit_code(wavefunction, "wavefunction", "--class", "1", "--depth", "1", "--state", "0",
                      "--xmax", "2"),
            3,
        )


class VerifyCommandTests(SimpleTestCase):
    def test_double_well_table(self):
        out, _ = run("verify", "--class", "1", "--depth", "1")
        self.assertIn("4/4 states certified; verification passed", out)

    def test_steep_well_certifies_ground_only(self):
        out, _ = run("verify", "--class", "0", "--depth", "1", "--halfwidth", "200", "--format", "json")
        record = json.loads(out)
        self.assertTrue(record["diagnostics"]["passed"])
        self.assertEqual(record["diagnostics"]["certified"], 1)
        rows = record["results"]["states"]
        self.assertTrue(rows[0]["certified"])
        self.assertGreaterEqual(rows[0]["overlap"], 0.999)
        self.assertFalse(rows[3]["certified"])
        self.assertIsNone(rows[3]["passed"])

    def test_failure_exit_code(self):
        out, err = io.StringIO(), io.StringIO()
        with self.assertRaises(CommandError) as raised:
            call_command("verify", "--class", "2", "--depth", "1", "--states", "1", "--tolerance", "1e-12",
                         stdout=out, stderr=err)
        self.assertEqual(raised.exception.returncode, 4)
        self.assertIn("FAIL", out.getvalue())
        self.assertEqual(
            exit_code(verify, "verify", "--class", "2", "--depth", "1", "--states", "1",
                      "--grid", "4001", "--tolerance", "1e-12"),
            4,
        )
