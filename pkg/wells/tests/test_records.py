import math
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from wells.records import OutputRecord, round_significant, table_to_csv, write_atomic
from wells.units import energy_scale_ev


class RoundingTests(SimpleTestCase):
    def test_scalars(self):
        self.assertEqual(round_significant(1.0 / 3.0), 0.333333333333)
        self.assertEqual(round_significant(np.float64(2.0 / 3.0)), 0.666666666667)
        self.assertIsNone(round_significant(float("nan")))
        self.assertIsNone(round_significant(math.inf))
        self.assertIs(round_significant(np.bool_(True)), True)
        self.assertEqual(type(round_significant(np.int64(3))), int)
        self.assertEqual(round_significant("even"), "even")

    def test_containers(self):
        value = {"a": [1.0 / 3.0, None], "b": (np.array([0.1, 0.2]),)}
        self.assertEqual(round_significant(value), {"a": [0.333333333333, None], "b": [[0.1, 0.2]]})


class OutputRecordTests(SimpleTestCase):
    def record(self, **kwargs):
        return OutputRecord(command="solve", options={"class_p": 1}, spec={"class": 1},
                            results={"states": [{"kappa_d": 0.40824829046386}]}, **kwargs)

    def test_json_layout(self):
        text = self.record().to_json()
        self.assertTrue(text.endswith("}\n"))
        self.assertTrue(text.startswith('{\n  "schema_version": "1",\n  "command": "solve"'))
        self.assertNotIn("generated_at", text)

    def test_round_trip(self):
        record = self.record(generated_at="2024-01-01T00:00:00+00:00")
        parsed = OutputRecord.from_json(record.to_json())
        self.assertEqual(parsed.to_dict(), record.to_dict())
        self.assertEqual(parsed.results["states"][0]["kappa_d"], 0.408248290464)


class CsvTests(SimpleTestCase):
    def test_rows_with_missing_values(self):
        rows = [{"u": 0.5, "kappa_d_0": 0.25, "kappa_d_1": None}, {"u": 1.0, "kappa_d_0": 1.0 / 3.0, "kappa_d_1": 0.1}]
        text = table_to_csv(rows, ["u", "kappa_d_0", "kappa_d_1"])
        self.assertEqual(text, "u,kappa_d_0,kappa_d_1\n0.5,0.25,\n1,0.333333333333,0.1\n")

    def test_column_dict(self):
        text = table_to_csv({"x_over_d": np.array([-1.0, 0.0, 1.0]), "psi": np.array([0.5, 1.0, 0.5])},
                            ["x_over_d", "psi"])
        self.assertEqual(text, "x_over_d,psi\n-1,0.5\n0,1\n1,0.5\n")


class WriteAtomicTests(SimpleTestCase):
    def test_writes_and_cleans_up(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "nested", "out.csv")
            write_atomic(path, "a,b\n1,2\n")
            write_atomic(path, "a,b\n3,4\n")
            with open(path, encoding="utf-8") as stream:
                self.assertEqual(stream.read(), "a,b\n3,4\n")
            self.assertEqual(os.listdir(os.path.dirname(path)), ["out.csv"])


class UnitsTests(SimpleTestCase):
    def test_free_electron_in_one_nanometre(self):
        self.assertAlmostEqual(energy_scale_ev(1.0, 1.0), 0.0380998, delta=1e-7)

    def test_scaling(self):
        base = energy_scale_ev(1.0, 1.0)
        self.assertAlmostEqual(energy_scale_ev(0.067, 10.0), base / (0.067 * 100.0), places=12)

    def test_rejects_non_positive(self):
        with self.assertRaises(ValueError):
            energy_scale_ev(0.0, 1.0)
