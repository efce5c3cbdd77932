import shutil
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings
from rest_framework.test import APIClient

from apps.reconciliation.calibration import parse_table
from sp_recon.exceptions import ConfigError
from .config import load_config
from .models import ExperimentRun
from .reports import COLUMNS, format_cell, read_csv

CODE = "gallager:n=240,col=3,row=6,seed=1"
HEADER = ",".join(COLUMNS) + "\n"


class TempDirMixin:
    def setUp(self):
        super().setUp()
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp, ignore_errors=True)


class ConfigTests(TempDirMixin, SimpleTestCase):
    def write(self, text):
        path = self.tmp / "run.cfg"
        path.write_text(text)
        return path

    def test_file_values_and_defaults(self):
        path = self.write(f"# desk run\ncode={CODE}\ndelta=0.1\ngrid=0.01:0.03:0.01\nf_eff=1.2\n")
        config = load_config(path)
        self.assertEqual(config.code, CODE)
        self.assertEqual(config.delta, Fraction(1, 10))
        self.assertEqual(config.grid, (0.01, 0.02, 0.03))
        self.assertEqual(config.frames, 100)
        self.assertEqual(config.t, float(settings.RECON["SECURITY_T"]))

    def test_overrides_win(self):
        path = self.write(f"code={CODE}\nframes=10\nseed=3\n")
        config = load_config(path, {"frames": 25, "seed": None})
        self.assertEqual(config.frames, 25)
        self.assertEqual(config.seed, 3)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config(self.write("colour=blue\n"))
        self.assertIn("colour", ctx.exception.errors)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(self.tmp / "absent.cfg")

    def test_invalid_values(self):
        for overrides, key in (
            ({"grid": "0.03,0.01"}, "grid"),
            ({"grid": "0.2,0.6"}, "grid"),
            ({"delta": "1.5"}, "delta"),
            ({"f_eff": "0.9"}, "f_eff"),
            ({"fer_target": 1.5}, "fer_target"),
        ):
            with self.assertRaises(ConfigError) as ctx:
                load_config(overrides=overrides)
            self.assertIn(key, ctx.exception.errors)

    def test_efficiency_constant_or_table(self):
        self.assertEqual(load_config(overrides={"f_eff": "1.3"}).efficiency(), 1.3)
        table = self.tmp / "f.table"
        table.write_text("0.01 1.50\n0.05 1.20\n")
        efficiency = load_config(overrides={"f_eff": str(table)}).efficiency()
        self.assertAlmostEqual(efficiency(0.03), 1.35)


class ReportTests(SimpleTestCase):
    def test_cells(self):
        self.assertEqual(format_cell(None), "")
        self.assertEqual(format_cell(7), "7")
        self.assertEqual(format_cell(0.1), "0.100000")
        self.assertEqual(format_cell(Fraction(1, 3)), "0.333333")


class SweepCommandTests(TempDirMixin, TestCase):
    def sweep(self, *args):
        out = self.tmp / "sweep.csv"
        call_command(
            "sweep", "--code", CODE, "--delta", "0.1", "--f-eff", "1.2",
            "--frames", "10", "--seed", "7", "--out", str(out), *args,
            stdout=StringIO(), stderr=StringIO(),
        )
        return out.read_text()

    def test_rows_in_grid_order(self):
        text = self.sweep("--grid", "0.02,0.04")
        self.assertTrue(text.startswith(HEADER))
        rows = read_csv(self.tmp / "sweep.csv")
        self.assertEqual([row["p_err"] for row in rows], ["0.020000", "0.040000"])
        for row in rows:
            self.assertEqual(row["status"], "ok")
            self.assertEqual(row["frames"], "10")
            self.assertEqual(row["seed"], "7")
            self.assertEqual(row["n"], "240")

    def test_thread_count_does_not_change_output(self):
        with override_settings(RECON={**settings.RECON, "THREADS": 1}):
            single = self.sweep("--grid", "0.03,0.05")
        with override_settings(RECON={**settings.RECON, "THREADS": 8}):
            pooled = self.sweep("--grid", "0.03,0.05")
        self.assertEqual(single, pooled)

    def test_rerun_with_same_seed_is_identical(self):
        first = self.sweep("--grid", "0.03,0.05")
        self.assertEqual(self.sweep("--grid", "0.03,0.05"), first)

    def test_empty_grid_writes_header_only(self):
        self.assertEqual(self.sweep(), HEADER)

    def test_infeasible_point_is_reported(self):
        self.sweep("--grid", "0.02,0.3")
        rows = read_csv(self.tmp / "sweep.csv")
        self.assertEqual(rows[1]["status"], "infeasible")
        self.assertEqual(rows[1]["s"], "")
        self.assertEqual(rows[1]["fer"], "")

    def test_record_and_serve(self):
        self.sweep("--grid", "0.02,0.04", "--record")
        run = ExperimentRun.objects.get()
        self.assertEqual(run.kind, "sweep")
        self.assertEqual(run.points.count(), 2)
        self.assertEqual(run.master_seed, "7")

        client = APIClient()
        listing = client.get("/api/runs/").json()["data"]
        self.assertEqual(listing[0]["point_count"], 2)
        detail = client.get(f"/api/runs/{run.pk}/").json()["data"]
        self.assertEqual([point["position"] for point in detail["points"]], [0, 1])
        self.assertEqual(client.get("/api/runs/?kind=cascade").json()["data"], [])

        missing = client.get("/api/runs/999999/")
        self.assertEqual(missing.status_code, 404)
        self.assertEqual(missing.json()["status_code"], 404)

    def test_bad_config_is_a_command_error(self):
        with self.assertRaises(CommandError):
            call_command("sweep", "--grid", "0.02", "--f-eff", "1.2", stdout=StringIO())
        with self.assertRaises(CommandError):
            call_command("sweep", "--code", CODE, "--grid", "0.7", "--f-eff", "1.2", stdout=StringIO())


class CascadeCommandTests(TempDirMixin, SimpleTestCase):
    def test_curve(self):
        out = self.tmp / "cascade.csv"
        call_command(
            "cascade", "--grid", "0.05,0.07", "--length", "2000", "--frames", "4",
            "--seed", "5", "--out", str(out), stdout=StringIO(),
        )
        rows = read_csv(out)
        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertEqual((row["k"], row["s"], row["R"], row["f_code"]), ("", "", "", ""))
            self.assertEqual(row["n"], "2000")
            self.assertGreater(float(row["f_orig"]), 1.0)


class CalibrateCommandTests(TempDirMixin, SimpleTestCase):
    def test_table_marks_unreachable_points(self):
        out = self.tmp / "f.table"
        call_command(
            "calibrate", "--code", CODE, "--delta", "0.25", "--grid", "0.04,0.2",
            "--frames", "10", "--fer-target", "0.2", "--out", str(out),
            stdout=StringIO(), stderr=StringIO(),
        )
        lines = out.read_text().splitlines()
        self.assertTrue(lines[0].startswith("0.04 "))
        self.assertEqual(lines[1], "0.2 inf")
        self.assertEqual(len(parse_table(out.read_text())), 2)


class CompareCommandTests(TempDirMixin, SimpleTestCase):
    def test_joins_curves_on_p_err(self):
        sweep, cascade = self.tmp / "sweep.csv", self.tmp / "cascade.csv"
        call_command(
            "sweep", "--code", CODE, "--delta", "0.25", "--grid", "0.06", "--f-eff", "1.2",
            "--frames", "5", "--out", str(sweep), stdout=StringIO(), stderr=StringIO(),
        )
        call_command(
            "cascade", "--grid", "0.06", "--length", "1000", "--frames", "2",
            "--out", str(cascade), stdout=StringIO(),
        )
        out = StringIO()
        call_command("compare", str(sweep), str(cascade), stdout=out)
        header, row = out.getvalue().splitlines()
        self.assertEqual(header, "p_err,f_code,f_fixed,f_cascade")
        cells = row.split(",")
        self.assertEqual(cells[0], "0.060000")
        self.assertTrue(all(cells))

    def test_rejects_foreign_csv(self):
        bogus = self.tmp / "bogus.csv"
        bogus.write_text("a,b\n1,2\n")
        with self.assertRaises(CommandError):
            call_command("compare", str(bogus), str(bogus), stdout=StringIO())


class HealthTests(SimpleTestCase):
    def test_health(self):
        response = APIClient().get("/api/health/")
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["status"], "ok")
