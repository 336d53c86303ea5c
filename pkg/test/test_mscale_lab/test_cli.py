#################################################################################
#   Copyright Amazon.com, Inc. or its affiliates. All Rights Reserved.          #
#                                                                               #
#   Licensed under the Apache License, Version 2.0 (the "License").             #
#   You may not use this file except in compliance with the License.            #
#   You may obtain a copy of the License at                                     #
#                                                                               #
#       http://www.apache.org/licenses/LICENSE-2.0                              #
#                                                                               #
#   Unless required by applicable law or agreed to in writing, software         #
#   distributed under the License is distributed on an "AS IS" BASIS,           #
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.    #
#   See the License for the specific language governing permissions and         #
#   limitations under the License.                                              #
#################################################################################
from typing import Any, Callable
from unittest import TestCase
from unittest.mock import patch
import argparse
import csv
import inspect
import io
import json
import os
import tempfile

import pytest

from mscale_lab.cli import build_parser, load_config, main, parse_float_list, read_signal_csv, write_atomic
from mscale_lab.configs.experiment import DenoiseConfig, RunConfig, VerifyConfig
from mscale_lab.constants import PARTIAL_SUM_TOL, ExitCode

myself: Callable[[], Any] = lambda: inspect.stack()[1][3]


def read_text(path: str) -> str:
    with open(path, newline="", encoding="utf-8") as text_file:
        return text_file.read()


def read_rows(path: str) -> list:
    with open(path, newline="", encoding="utf-8") as csv_file:
        return list(csv.reader(csv_file))


class CliHelperTest(TestCase):
    def setUp(self) -> None:
        self.temp_dir = tempfile.TemporaryDirectory()
        self.dir = self.temp_dir.name

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def test_parse_float_list(self):
        assert parse_float_list("6,8,16") == [6.0, 8.0, 16.0]
        assert parse_float_list("5.828427") == [5.828427]
        with self.assertRaises(argparse.ArgumentTypeError):
            parse_float_list("6,x")
        with self.assertRaises(argparse.ArgumentTypeError):
            parse_float_list(",")

    def test_write_atomic(self):
        path = os.path.join(self.dir, "nested", "out.csv")
        write_atomic(path, "a,b\r\n1,2\r\n")
        assert read_text(path) == "a,b\r\n1,2\r\n"
        write_atomic(path, "replaced")
        assert read_text(path) == "replaced"
        assert os.listdir(os.path.join(self.dir, "nested")) == ["out.csv"]

    def test_read_signal_csv(self):
        path = os.path.join(self.dir, "signal.csv")
        write_atomic(path, "1.0\r\n2.5\r\n\r\n-3\r\n")
        assert read_signal_csv(path).to_json() == [1.0, 2.5, -3.0]
        for content in ("", "1.0,2.0\n", "abc\n", "1.0\nnan\n"):
            write_atomic(path, content)
            with self.assertRaises(ValueError):
                read_signal_csv(path)

    def test_load_config_layers(self):
        path = os.path.join(self.dir, "config.json")
        write_atomic(path, json.dumps({"M": 8.0, "dim": 32, "steps": 5, "tol": 1e-9}))
        args = build_parser().parse_args(["run", "--config", path, "--N", "3"])
        config = load_config(args)
        assert isinstance(config, RunConfig)
        assert config.params.M == 8.0
        assert config.dim == 32
        assert config.multiscale.steps == 3
        assert config.multiscale.growth == 8.0
        assert config.multiscale.solver_opts.tol == 1e-9

    def test_load_config_defaults(self):
        config = load_config(build_parser().parse_args(["verify"]))
        assert config == VerifyConfig()
        config = load_config(build_parser().parse_args(["denoise", "signal.csv", "--N", "4"]))
        assert config == DenoiseConfig("signal.csv", steps=4)


class CliTest(TestCase):
    def setUp(self) -> None:
        self.temp_dir = tempfile.TemporaryDirectory()
        self.dir = self.temp_dir.name

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def out(self, name: str) -> str:
        return os.path.join(self.dir, name)

    def test_usage_errors(self):
        assert main([]) == ExitCode.USAGE_ERROR
        assert main(["explode"]) == ExitCode.USAGE_ERROR
        assert main(["verify", "--M", "0.5", "--out", self.out("v")]) == ExitCode.USAGE_ERROR
        assert main(["run", "--N", "0", "--out", self.out("r")]) == ExitCode.USAGE_ERROR
        assert main(["run", "--D", "8", "--out", self.out("r")]) == ExitCode.USAGE_ERROR
        assert main(["denoise", "--out", self.out("d")]) == ExitCode.USAGE_ERROR
        assert main(["report", self.out("missing.json"), "--out", self.out("p")]) == ExitCode.USAGE_ERROR
        assert main(["run", "--config", self.out("missing.json")]) == ExitCode.USAGE_ERROR

    def test_help(self):
        assert main(["--help"]) == ExitCode.SUCCESS

    @pytest.mark.timeout(120)
    def test_verify(self):
        out = self.out("verify")
        assert main(["verify", "--M", "6,8,16", "--n-max", "30", "--workers", "2", "--out", out]) == ExitCode.SUCCESS
        claims = json.loads(read_text(os.path.join(out, "claims.json")))
        assert len(claims) == 3 * 31
        assert all(claim["pass"] for claim in claims)
        rows = read_rows(os.path.join(out, "claims.csv"))
        assert rows[0] == ["M", "alpha0", "n", "n1", "lambda_n", "A_max_index", "A_n1n1", "target", "margin", "pass"]
        assert len(rows) == 1 + 3 * 31
        assert os.path.exists(os.path.join(out, "claims.timing.json"))
        assert json.loads(read_text(os.path.join(out, "config.json")))["M"] == [6.0, 8.0, 16.0]

    def test_verify_below_threshold(self):
        out = self.out("verify4")
        assert main(["verify", "--M", "4", "--n-max", "5", "--out", out]) == ExitCode.SUCCESS
        claims = json.loads(read_text(os.path.join(out, "claims.json")))
        assert len(claims) == 6
        assert not any(claim["pass"] for claim in claims)

    @pytest.mark.timeout(120)
    def test_run(self):
        out = self.out("run")
        assert main(["run", "--M", "6", "--D", "24", "--N", "4", "--dump-operator", "--trace",
                     "--out", out]) == ExitCode.SUCCESS
        for name in ("config.json", "run_report.json", "run_report.timing.json", "steps.csv",
                     "comparison.csv", "summary.json", "operator.csv", "trace_0.csv", "trace_4.csv"):
            assert os.path.exists(os.path.join(out, name)), name
        summary = json.loads(read_text(os.path.join(out, "summary.json")))
        assert summary["certified"] is True
        assert summary["monotone"] is True
        assert summary["max_sigma_l1_distance"] <= 1e-5
        comparison = read_rows(os.path.join(out, "comparison.csv"))
        assert len(comparison) == 1 + 5
        for row in comparison[1:]:
            assert abs(float(row[4]) - float(row[5])) <= 1e-6
        operator_rows = read_rows(os.path.join(out, "operator.csv"))
        assert len(operator_rows[-1]) == 24
        steps = read_rows(os.path.join(out, "steps.csv"))
        assert steps[1][-1] == ""
        report = json.loads(read_text(os.path.join(out, "run_report.json")))
        assert "wall_time_ms" not in read_text(os.path.join(out, "run_report.json"))
        assert len(report["steps"]) == 5

        assert main(["report", os.path.join(out, "run_report.json"), "--out", self.out("report")]) == ExitCode.SUCCESS

    @pytest.mark.timeout(120)
    def test_run_record_timing(self):
        out = self.out("timed")
        assert main(["run", "--D", "20", "--N", "2", "--record-timing", "--out", out]) == ExitCode.SUCCESS
        steps = read_rows(os.path.join(out, "steps.csv"))
        assert float(steps[1][-1]) >= 0.0

    @pytest.mark.timeout(300)
    def test_run_is_deterministic(self):
        first, second = self.out("first"), self.out("second")
        for out in (first, second):
            assert main(["run", "--D", "24", "--N", "3", "--out", out]) == ExitCode.SUCCESS
        for name in ("run_report.json", "steps.csv", "comparison.csv", "summary.json"):
            assert read_text(os.path.join(first, name)) == read_text(os.path.join(second, name)), name
        for out in (first, second):
            assert main(["verify", "--M", "6,4", "--n-max", "6", "--workers", "3", "--out", out]) == ExitCode.SUCCESS
        for name in ("claims.json", "claims.csv"):
            assert read_text(os.path.join(first, name)) == read_text(os.path.join(second, name)), name

    @pytest.mark.timeout(120)
    def test_denoise(self):
        signal = os.path.join(self.dir, "step.csv")
        write_atomic(signal, "".join("{}\n".format(1.0 if i < 32 else 0.0) for i in range(64)))
        out = self.out("denoise")
        assert main(["denoise", signal, "--lambda0", "1", "--N", "12", "--out", out]) == ExitCode.SUCCESS
        rows = read_rows(os.path.join(out, "reconstruction.csv"))
        assert rows[0] == ["index", "f"] + ["sigma_{}".format(n) for n in range(13)]
        assert len(rows) == 1 + 64
        assert abs(float(rows[1][-1]) - 1.0) < 1e-3
        assert main(["report", os.path.join(out, "run_report.json"), "--out", out]) == ExitCode.SUCCESS

    def test_denoise_bad_input(self):
        empty = os.path.join(self.dir, "empty.csv")
        write_atomic(empty, "")
        assert main(["denoise", empty, "--out", self.out("d")]) == ExitCode.USAGE_ERROR
        two_columns = os.path.join(self.dir, "two.csv")
        write_atomic(two_columns, "1,2\n")
        assert main(["denoise", two_columns, "--out", self.out("d")]) == ExitCode.USAGE_ERROR

    def test_report_detects_tampering(self):
        out = self.out("run")
        assert main(["run", "--D", "20", "--N", "2", "--out", out]) == ExitCode.SUCCESS
        path = os.path.join(out, "run_report.json")
        report = json.loads(read_text(path))
        report["steps"][0], report["steps"][1] = report["steps"][1], report["steps"][0]
        tampered = os.path.join(self.dir, "tampered.json")
        write_atomic(tampered, json.dumps(report))
        assert main(["report", tampered, "--out", self.out("report")]) == ExitCode.SCIENTIFIC_FAILURE

    def test_report_malformed_input(self):
        missing_fields = os.path.join(self.dir, "missing_fields.json")
        write_atomic(missing_fields, json.dumps({"steps": []}))
        assert main(["report", missing_fields, "--out", self.out("report")]) == ExitCode.USAGE_ERROR
        not_an_object = os.path.join(self.dir, "list.json")
        write_atomic(not_an_object, "[1, 2]")
        assert main(["report", not_an_object, "--out", self.out("report")]) == ExitCode.USAGE_ERROR
        not_json = os.path.join(self.dir, "garbage.json")
        write_atomic(not_json, "{steps")
        assert main(["report", not_json, "--out", self.out("report")]) == ExitCode.USAGE_ERROR

    def test_unwritable_out(self):
        blocker = os.path.join(self.dir, "blocker")
        write_atomic(blocker, "x\n")
        assert main(["verify", "--M", "6", "--n-max", "2", "--out", blocker]) == ExitCode.USAGE_ERROR
        assert main(["verify", "--M", "6", "--n-max", "2",
                     "--out", os.path.join(blocker, "nested")]) == ExitCode.USAGE_ERROR

    @pytest.mark.timeout(120)
    def test_report_detects_partial_sum_drift(self):
        out = self.out("run")
        assert main(["run", "--D", "20", "--N", "2", "--out", out]) == ExitCode.SUCCESS
        report = json.loads(read_text(os.path.join(out, "run_report.json")))
        drift = 1e3 * PARTIAL_SUM_TOL * max(1.0, sum(abs(x) for x in report["final_sigma"]))
        report["final_sigma"][0] += drift
        drifted = os.path.join(self.dir, "drifted.json")
        write_atomic(drifted, json.dumps(report))
        with patch("sys.stdout", new_callable=io.StringIO) as stdout:
            assert main(["report", drifted, "--out", self.out("report")]) == ExitCode.SCIENTIFIC_FAILURE
        assert "partial_sums=false" in stdout.getvalue()
        assert "monotone=true certified=true" in stdout.getvalue()
