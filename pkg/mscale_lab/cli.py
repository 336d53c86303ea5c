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
"""Command-line front end: verify | run | denoise | report."""
import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from typing import List, Optional

import numpy as np

from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.configs.experiment import (
    DenoiseConfig, ExperimentConfig, ReportConfig, RunConfig, VerifyConfig
)
from mscale_lab.constants import PARTIAL_SUM_TOL, CommandType, ExitCode, RegularizerKind
from mscale_lab.counterexample import (
    CLAIM_CSV_HEADER, analytic_sigma, residual_norm_squared_closed_form,
    sigma_norm_x_closed_form, verify_grid
)
from mscale_lab.multiscale import RunReport, check_monotonicity, run_multiscale, tnv_denoise_1d
from mscale_lab.operators import build_counterexample_operator
from mscale_lab.seqspace import SeqVector, norm_l1
from mscale_lab.varsolve import TRACE_HEADER

COMPARISON_CSV_HEADER = ["n", "sigma_l1_distance", "sigma_norm_X", "sigma_norm_X_closed_form",
                         "residual_H", "residual_H_closed_form"]


def write_atomic(path: str, text: str) -> None:
    """
    Writes text to path through a temporary file in the same directory.

    Args:
        path (str): destination path.
        text (str): file content.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as temp_file:
            temp_file.write(text)
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise


def _write_json(path: str, json_obj) -> None:
    write_atomic(path, json.dumps(json_obj, sort_keys=True, indent=2) + "\n")


def _csv_text(header: List[str], rows: List[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _write_outputs(out: str, stem: str, json_obj, wall_time: float, timing: Optional[dict] = None) -> None:
    timing_obj = dict(timing or {})
    timing_obj["total_wall_time_ms"] = wall_time * 1000.0
    _write_json(os.path.join(out, stem + ".json"), json_obj)
    _write_json(os.path.join(out, stem + ".timing.json"), timing_obj)


def parse_float_list(text: str) -> List[float]:
    """
    Parses a comma separated list of floats, "6,8,16".

    Args:
        text (str): the list.

    Returns:
        List[float]: the values.
    """
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma separated numbers, given {!r}".format(text))
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def read_signal_csv(path: str) -> SeqVector:
    """
    Reads a single-column CSV of finite reals.

    Args:
        path (str): the CSV path.

    Returns:
        SeqVector: the signal.
    """
    values = []
    with open(path, newline="", encoding="utf-8") as csv_file:
        for line_number, row in enumerate(csv.reader(csv_file), start=1):
            if not row:
                continue
            if len(row) != 1:
                raise ValueError("line {}: expected one column, given {}!".format(line_number, len(row)))
            try:
                value = float(row[0])
            except ValueError:
                raise ValueError("line {}: {!r} is not a number!".format(line_number, row[0]))
            if not math.isfinite(value):
                raise ValueError("line {}: {!r} is not finite!".format(line_number, row[0]))
            values.append(value)
    if not values:
        raise ValueError("{} contains no samples!".format(path))
    return SeqVector(values)


def cmd_verify(config: VerifyConfig) -> ExitCode:
    """
    Checks the claim on every (M, n) cell and writes claims.json and claims.csv.

    Cells whose M lies below the divergence threshold are expected to fail
    and do not affect the exit code.

    Args:
        config (VerifyConfig): the verify configuration.

    Returns:
        ExitCode: SUCCESS unless a cell above the threshold fails.
    """
    start = time.perf_counter()
    reports = verify_grid(config.ms, config.alpha0, config.n_max, config.j_max, config.workers)
    elapsed = time.perf_counter() - start

    _write_outputs(config.out, "claims", [report.to_json() for report in reports], elapsed)
    write_atomic(os.path.join(config.out, "claims.csv"),
                 _csv_text(CLAIM_CSV_HEADER, [report.csv_fields() for report in reports]))

    unexpected = [report for report in reports if report.params.divergence_guaranteed and not report.passed]
    expected = [report for report in reports if not report.params.divergence_guaranteed and not report.passed]
    logging.info("[Verify] {} cells, {} expected failures, {} unexpected failures.".format(
        len(reports), len(expected), len(unexpected)))
    for report in unexpected:
        logging.error("[Verify] unexpected failure {}: {}".format(report, report.reason))
    return ExitCode.SCIENTIFIC_FAILURE if unexpected else ExitCode.SUCCESS


def _comparison_rows(config: RunConfig, report: RunReport) -> Optional[List[list]]:
    p = config.params
    multiscale = config.multiscale
    if (config.regularizer != RegularizerKind.WEIGHTED_L1 or multiscale.growth != p.M
            or multiscale.lambda0 != p.alpha0):
        return None
    rows = []
    for step in report.steps:
        if step.n + 3 > config.dim:
            break
        analytic = analytic_sigma(step.n, p, config.dim)
        rows.append([step.n, repr(norm_l1(step.sigma - analytic)), repr(step.sigma_norm_X),
                     repr(sigma_norm_x_closed_form(step.n, p)), repr(step.residual_H),
                     repr(math.sqrt(residual_norm_squared_closed_form(step.n, p)))])
    return rows


def cmd_run(config: RunConfig) -> ExitCode:
    """
    Runs the multiscale iteration on the counterexample operator with data
    Lambda(e_1) and writes run_report.json, steps.csv, summary.json and, for
    the F-norm schedule lambda_n = alpha0 M^n, comparison.csv.

    Args:
        config (RunConfig): the run configuration.

    Returns:
        ExitCode: SUCCESS when every step is certified and the residuals never increase.
    """
    A = build_counterexample_operator(config.params, config.dim)
    if config.dump_operator:
        write_atomic(os.path.join(config.out, "operator.csv"), A.to_csv())

    start = time.perf_counter()
    report = run_multiscale(A, A.col(1), config.multiscale, known_inf=0.0)
    elapsed = time.perf_counter() - start

    _write_outputs(config.out, "run_report", report.to_json(), elapsed, report.timing_json())
    write_atomic(os.path.join(config.out, "steps.csv"), report.steps_csv(config.record_timing))
    if config.trace:
        for step in report.steps:
            write_atomic(os.path.join(config.out, "trace_{}.csv".format(step.n)),
                         _csv_text(TRACE_HEADER, [list(row) for row in step.trace]))

    monotone = check_monotonicity(report)
    summary = {"certified": report.certified,
               "monotone": monotone,
               "stop_reason": report.stop_reason,
               "max_sigma_norm_l2": max([step.sigma_norm_l2 for step in report.steps], default=0.0),
               "last_increment_l2": report.steps[-1].u_norm_l2 if report.steps else 0.0,
               "last_sigma_norm_X": report.steps[-1].sigma_norm_X if report.steps else 0.0}
    rows = _comparison_rows(config, report)
    if rows is not None:
        write_atomic(os.path.join(config.out, "comparison.csv"), _csv_text(COMPARISON_CSV_HEADER, rows))
        summary["max_sigma_l1_distance"] = max([float(row[1]) for row in rows], default=0.0)
    _write_json(os.path.join(config.out, "summary.json"), summary)

    logging.info("[Cli] run finished: certified={} monotone={} steps={}".format(report.certified, monotone,
                                                                               len(report.steps)))
    return ExitCode.SUCCESS if report.certified and monotone else ExitCode.SCIENTIFIC_FAILURE


def cmd_denoise(config: DenoiseConfig) -> ExitCode:
    """
    Decomposes the input signal into total variation scales and writes
    run_report.json, steps.csv and reconstruction.csv.

    Args:
        config (DenoiseConfig): the denoise configuration.

    Returns:
        ExitCode: SUCCESS when every step is certified.
    """
    f = read_signal_csv(config.input_path)
    start = time.perf_counter()
    report = tnv_denoise_1d(f, config.lambda0, config.steps, config.growth, config.solver_opts)
    elapsed = time.perf_counter() - start

    _write_outputs(config.out, "run_report", report.to_json(), elapsed, report.timing_json())
    write_atomic(os.path.join(config.out, "steps.csv"), report.steps_csv(config.record_timing))
    header = ["index", "f"] + ["sigma_{}".format(step.n) for step in report.steps]
    columns = np.column_stack([f.values] + [step.sigma.values for step in report.steps])
    rows = [[index] + [repr(float(x)) for x in row] for index, row in enumerate(columns, start=1)]
    write_atomic(os.path.join(config.out, "reconstruction.csv"), _csv_text(header, rows))

    logging.info("[Cli] denoise finished: certified={} steps={}".format(report.certified, len(report.steps)))
    return ExitCode.SUCCESS if report.certified else ExitCode.SCIENTIFIC_FAILURE


def cmd_report(config: ReportConfig) -> ExitCode:
    """
    Re-checks a stored run report: residual monotonicity, every certificate
    and the partial-sum identity; prints the step table.

    Args:
        config (ReportConfig): the report configuration.

    Returns:
        ExitCode: SUCCESS when every check holds.
    """
    with open(config.input_path, encoding="utf-8") as json_file:
        report = RunReport.from_json(json.load(json_file))

    monotone = check_monotonicity(report)
    certified = all(step.certificate.feasible for step in report.steps)
    identity_error = float(np.max(np.abs((report.sigma_at(len(report.steps)) - report.final_sigma).values)))
    partial_sums = identity_error <= PARTIAL_SUM_TOL * max(1.0, norm_l1(report.final_sigma))

    sys.stdout.write(report.steps_csv())
    sys.stdout.write("monotone={} certified={} partial_sums={} stop_reason={!r}\n".format(
        str(monotone).lower(), str(certified).lower(), str(partial_sums).lower(), report.stop_reason))
    return ExitCode.SUCCESS if monotone and certified and partial_sums else ExitCode.SCIENTIFIC_FAILURE


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON file of parameters; flags override it.")
    parser.add_argument("--out", default=None, help="Output directory (default: out).")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    parser.add_argument("--record-timing", action="store_true", default=None, dest="record_timing",
                        help="Fill the wall_time_ms CSV column.")


def build_parser() -> argparse.ArgumentParser:
    """
    Returns the argument parser of the mscale command.

    Returns:
        argparse.ArgumentParser: the parser.
    """
    parser = argparse.ArgumentParser(prog="mscale", description="Multiscale decomposition laboratory.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser(CommandType.VERIFY.value, help="Check the claim on an (M, n) grid.")
    _add_common(verify)
    verify.add_argument("--M", type=parse_float_list, default=None, help="Comma separated M values.")
    verify.add_argument("--alpha0", type=float, default=None)
    verify.add_argument("--n-max", type=int, default=None, dest="n_max")
    verify.add_argument("--j-max", type=int, default=None, dest="j_max")
    verify.add_argument("--workers", type=int, default=None)

    run = subparsers.add_parser(CommandType.RUN.value, help="Numeric multiscale run on the counterexample.")
    _add_common(run)
    run.add_argument("--M", type=float, default=None)
    run.add_argument("--alpha0", type=float, default=None)
    run.add_argument("--D", type=int, default=None, dest="dim")
    run.add_argument("--N", type=int, default=None, dest="steps")
    run.add_argument("--regularizer", choices=[kind.value for kind in RegularizerKind], default=None)
    run.add_argument("--growth", type=float, default=None)
    run.add_argument("--lambda0", type=float, default=None)
    run.add_argument("--tol", type=float, default=None)
    run.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    run.add_argument("--trace", action="store_true", default=None, help="Write solver traces.")
    run.add_argument("--dump-operator", action="store_true", default=None, dest="dump_operator",
                     help="Write the operator matrix to operator.csv.")

    denoise = subparsers.add_parser(CommandType.DENOISE.value, help="Total variation scales of a 1D signal.")
    _add_common(denoise)
    denoise.add_argument("input", nargs="?", default=None, help="Single-column CSV signal.")
    denoise.add_argument("--lambda0", type=float, default=None)
    denoise.add_argument("--N", type=int, default=None, dest="steps")
    denoise.add_argument("--growth", type=float, default=None)
    denoise.add_argument("--tol", type=float, default=None)
    denoise.add_argument("--max-iter", type=int, default=None, dest="max_iter")

    report = subparsers.add_parser(CommandType.REPORT.value, help="Re-check a run_report.json.")
    _add_common(report)
    report.add_argument("input", nargs="?", default=None, help="Path of run_report.json.")
    return parser


CONFIG_CLASSES = {CommandType.VERIFY: VerifyConfig,
                  CommandType.RUN: RunConfig,
                  CommandType.DENOISE: DenoiseConfig,
                  CommandType.REPORT: ReportConfig}


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Layers defaults < --config file < explicit flags into the subcommand's config.

    Args:
        args (argparse.Namespace): parsed arguments.

    Returns:
        ExperimentConfig: the configuration.
    """
    command = CommandType(args.command)
    json_obj = {}
    if args.config:
        with open(args.config, encoding="utf-8") as config_file:
            json_obj = ConfigInterface.load(config_file.read())
    for dest, value in vars(args).items():
        if dest in ("command", "config", "verbose") or value is None:
            continue
        json_obj[dest] = value
    return CONFIG_CLASSES[command].from_json(json_obj)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the mscale command.

    Args:
        argv (Optional[List[str]]): arguments, sys.argv[1:] when None.

    Returns:
        int: the exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ExitCode.SUCCESS if ex.code == 0 else ExitCode.USAGE_ERROR
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        config = load_config(args)
    except (ValueError, TypeError, KeyError, OSError) as ex:
        logging.error("[Cli] invalid configuration.", exc_info=ex)
        return ExitCode.USAGE_ERROR

    method = getattr(sys.modules[__name__], "cmd_{}".format(config.command.value))
    try:
        _write_json(os.path.join(config.out, "config.json"), config.to_json())
        return method(config)
    except (ValueError, TypeError, KeyError, OSError) as ex:
        logging.error("[Cli] {} failed on its input.".format(config.command.value), exc_info=ex)
        return ExitCode.USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
