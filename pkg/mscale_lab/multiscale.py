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
"""The multiscale iteration, its diagnostics and the 1D total variation instantiation."""
import csv
import io
import logging
import math
import time
from typing import List, Optional, Union

from mscale_lab.configs.cex_params import CexParams
from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.configs.multiscale_config import MultiscaleConfig
from mscale_lab.configs.solver_options import SolverOptions
from mscale_lab.constants import (
    DEFAULT_DENOISE_GROWTH, DEFAULT_STEPS, MAX_TAIL_ERROR, MONOTONICITY_SLACK
)
from mscale_lab.operators import LinearOp, build_counterexample_operator
from mscale_lab.seqspace import SeqVector, norm_F, norm_l1, norm_l2
from mscale_lab.varsolve import Certificate, HilbertNorm, TotalVariation1D, WeightedL1, solve_step

STEPS_CSV_HEADER = ["n", "lambda_n", "u_norm_F", "sigma_norm_X", "residual_H",
                    "dual_norm_value", "pairing_gap", "certified", "wall_time_ms"]


class StepRecord(ConfigInterface):
    """
    Diagnostics of one scale n of a multiscale run.
    """
    def __init__(self,
                 n: int,
                 lambda_n: float,
                 u: SeqVector,
                 sigma: SeqVector,
                 residual_H: float,
                 certificate: Certificate,
                 iterations: int = 0,
                 wall_time: float = 0.0,
                 trace: Optional[List[tuple]] = None) -> None:
        """
        Initialize StepRecord

        Args:
            n (int): scale index.
            lambda_n (float): fidelity weight of the scale.
            u (SeqVector): the increment u_n.
            sigma (SeqVector): the partial sum sigma_n.
            residual_H (float): ||data - A sigma_n||_2.
            certificate (Certificate): certificate of u_n.
            iterations (int): inner solver iterations.
            wall_time (float): inner solve time in seconds.
            trace (Optional[List[tuple]]): inner solver trace rows, not serialized.
        """
        super().__init__()
        self._n = int(n)
        self._lambda_n = float(lambda_n)
        self._u = u
        self._u_norm_F = norm_F(u)
        self._u_norm_l2 = norm_l2(u)
        self._sigma = sigma
        self._sigma_norm_X = norm_l1(sigma)
        self._sigma_norm_l2 = norm_l2(sigma)
        self._residual_H = float(residual_H)
        self._certificate = certificate
        self._iterations = int(iterations)
        self._wall_time = float(wall_time)
        self._trace = list(trace or [])

    @property
    def n(self) -> int:
        return self._n

    @property
    def lambda_n(self) -> float:
        return self._lambda_n

    @property
    def u(self) -> SeqVector:
        return self._u

    @property
    def u_norm_F(self) -> float:
        return self._u_norm_F

    @property
    def u_norm_l2(self) -> float:
        """
        Returns ||u_n||_2 = ||sigma_n - sigma_{n-1}||_2.

        Returns:
            float: the increment size.
        """
        return self._u_norm_l2

    @property
    def sigma(self) -> SeqVector:
        return self._sigma

    @property
    def sigma_norm_X(self) -> float:
        return self._sigma_norm_X

    @property
    def sigma_norm_l2(self) -> float:
        return self._sigma_norm_l2

    @property
    def residual_H(self) -> float:
        return self._residual_H

    @property
    def certificate(self) -> Certificate:
        return self._certificate

    @property
    def dual_equality(self) -> bool:
        return self._certificate.dual_equality

    @property
    def iterations(self) -> int:
        return self._iterations

    @property
    def wall_time(self) -> float:
        return self._wall_time

    @property
    def trace(self) -> List[tuple]:
        return list(self._trace)

    def to_json(self) -> dict:
        """
        Returns json object of the step record in dict format.
        The wall time is excluded so that reports are reproducible.

        Returns:
            dict: json object of the step record.
        """
        return {"n": self._n,
                "lambda_n": self._lambda_n,
                "u": self._u.to_json(),
                "sigma": self._sigma.to_json(),
                "u_norm_F": self._u_norm_F,
                "u_norm_l2": self._u_norm_l2,
                "sigma_norm_X": self._sigma_norm_X,
                "sigma_norm_l2": self._sigma_norm_l2,
                "residual_H": self._residual_H,
                "certificate": self._certificate.to_json(),
                "dual_equality": self.dual_equality,
                "iterations": self._iterations}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'StepRecord':
        """
        Returns StepRecord instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            StepRecord: step record created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return StepRecord(n=json_obj['n'],
                          lambda_n=json_obj['lambda_n'],
                          u=SeqVector.from_json(json_obj['u']),
                          sigma=SeqVector.from_json(json_obj['sigma']),
                          residual_H=json_obj['residual_H'],
                          certificate=Certificate.from_json(json_obj['certificate']),
                          iterations=json_obj.get('iterations', 0))

    def copy(self) -> 'StepRecord':
        return StepRecord.from_json(self.to_json())

    def csv_fields(self, record_timing: bool = False) -> list:
        """
        Returns the CSV fields in STEPS_CSV_HEADER order.

        Args:
            record_timing (bool): whether to fill the wall_time_ms column.

        Returns:
            list: the row values.
        """
        wall_time_ms = repr(self._wall_time * 1000.0) if record_timing else ""
        return [self._n, repr(self._lambda_n), repr(self._u_norm_F), repr(self._sigma_norm_X),
                repr(self._residual_H), repr(self._certificate.dual_norm_value), repr(self._certificate.gap),
                str(self._certificate.feasible).lower(), wall_time_ms]

    def __eq__(self, other: 'StepRecord') -> bool:
        return isinstance(other, StepRecord) and self.to_json() == other.to_json()

    def __ne__(self, other: 'StepRecord') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(n=%d, lambda_n=%g, residual_H=%g, certified=%s)" % (self._n, self._lambda_n, self._residual_H,
                                                                    self._certificate.feasible)

    def __repr__(self) -> str:
        return "StepRecord" + str(self)


class RunReport(ConfigInterface):
    """
    RunReport class
    """
    def __init__(self,
                 config: MultiscaleConfig,
                 steps: List[StepRecord],
                 final_sigma: SeqVector,
                 inf_estimate: float,
                 stop_reason: str = "") -> None:
        """
        Initialize RunReport

        Args:
            config (MultiscaleConfig): the run configuration.
            steps (List[StepRecord]): certified scales, in order.
            final_sigma (SeqVector): the last partial sum.
            inf_estimate (float): known infimum of the residual, else the best residual.
            stop_reason (str): why the run stopped early, empty when complete.
        """
        super().__init__()
        self._config = config
        self._steps = list(steps)
        self._final_sigma = final_sigma
        self._inf_estimate = float(inf_estimate)
        self._stop_reason = str(stop_reason)

    @property
    def config(self) -> MultiscaleConfig:
        return self._config

    @property
    def steps(self) -> List[StepRecord]:
        return list(self._steps)

    @property
    def final_sigma(self) -> SeqVector:
        return self._final_sigma

    @property
    def inf_estimate(self) -> float:
        return self._inf_estimate

    @property
    def stop_reason(self) -> str:
        return self._stop_reason

    @property
    def certified(self) -> bool:
        """
        Returns whether every scale 0..N was computed and certified.

        Returns:
            bool: True if the run completed with certified steps only.
        """
        return not self._stop_reason and all(step.certificate.feasible for step in self._steps)

    def sigma_at(self, n: int) -> SeqVector:
        """
        Returns sigma_n as the sum of the recorded increments u_0..u_n.

        Args:
            n (int): scale index.

        Returns:
            SeqVector: the partial sum.
        """
        sigma = SeqVector.zeros(self._config.dim)
        for step in self._steps[:int(n) + 1]:
            sigma = sigma + step.u
        return sigma

    def to_json(self) -> dict:
        """
        Returns json object of the run report in dict format

        Returns:
            dict: json object of the run report.
        """
        return {"config": self._config.to_json(),
                "steps": [step.to_json() for step in self._steps],
                "final_sigma": self._final_sigma.to_json(),
                "inf_estimate": self._inf_estimate,
                "stop_reason": self._stop_reason,
                "certified": self.certified}

    def timing_json(self) -> dict:
        """
        Returns the wall times of the run, kept out of the reproducible report.

        Returns:
            dict: wall time per scale in milliseconds.
        """
        return {"wall_time_ms": [step.wall_time * 1000.0 for step in self._steps]}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'RunReport':
        """
        Returns RunReport instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            RunReport: run report created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        config = MultiscaleConfig.from_json(json_obj['config'])
        return RunReport(config=config,
                         steps=[StepRecord.from_json(step) for step in json_obj['steps']],
                         final_sigma=SeqVector.from_json(json_obj['final_sigma']),
                         inf_estimate=json_obj['inf_estimate'],
                         stop_reason=json_obj.get('stop_reason', ""))

    def copy(self) -> 'RunReport':
        return RunReport.from_json(self.to_json())

    def steps_csv(self, record_timing: bool = False) -> str:
        """
        Returns the step records as RFC-4180 CSV text with header.

        Args:
            record_timing (bool): whether to fill the wall_time_ms column.

        Returns:
            str: the CSV text.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\r\n")
        writer.writerow(STEPS_CSV_HEADER)
        for step in self._steps:
            writer.writerow(step.csv_fields(record_timing))
        return buffer.getvalue()

    def __str__(self) -> str:
        return "(config=%s, steps=%d, certified=%s)" % (self._config, len(self._steps), self.certified)

    def __repr__(self) -> str:
        return "RunReport" + str(self)


def run_multiscale(A: LinearOp, data: SeqVector, cfg: MultiscaleConfig,
                   known_inf: Optional[float] = None) -> RunReport:
    """
    Runs sigma_n = sigma_{n-1} + u_n, u_n = argmin lambda_n ||data - A(sigma_{n-1}+u)||^2 + R(u),
    for n = 0..cfg.steps with sigma_{-1} = 0.

    A scale whose inner solve is not certified stops the run; its increment
    is not applied and the partial report carries the reason.

    Args:
        A (LinearOp): the operator, cfg.dim columns.
        data (SeqVector): the data, at most A.dim_out entries.
        cfg (MultiscaleConfig): schedule, regularizer and solver options.
        known_inf (Optional[float]): infimum of the residual when known.

    Returns:
        RunReport: the run report.
    """
    if not isinstance(A, LinearOp):
        raise ValueError("Expected LinearOp type but received {}.".format(type(A)))
    if not isinstance(cfg, MultiscaleConfig):
        raise ValueError("Expected MultiscaleConfig type but received {}.".format(type(cfg)))
    if A.dim_in != cfg.dim:
        raise ValueError("operator has {} columns, config dim is {}!".format(A.dim_in, cfg.dim))
    if data.dim > A.dim_out:
        raise ValueError("data has {} entries, operator has {} rows!".format(data.dim, A.dim_out))
    if A.tail_error >= MAX_TAIL_ERROR:
        raise ValueError("operator truncation error must be below {}, given {}!".format(MAX_TAIL_ERROR,
                                                                                        A.tail_error))

    data = data.padded(A.dim_out)
    sigma = SeqVector.zeros(cfg.dim)
    steps = []
    stop_reason = ""
    for n in range(cfg.steps + 1):
        lam = cfg.lambda_at(n)
        start = time.perf_counter()
        result = solve_step(A, data, sigma, lam, cfg.regularizer, cfg.solver_opts)
        elapsed = time.perf_counter() - start
        if not result.converged:
            stop_reason = "step {} not certified after {} iterations: {}".format(n, result.iterations,
                                                                               result.certificate)
            logging.warning("[Multiscale] {}; remaining scales skipped.".format(stop_reason))
            break
        sigma = sigma + result.u
        residual = norm_l2(data - A.apply(sigma))
        steps.append(StepRecord(n=n, lambda_n=lam, u=result.u, sigma=sigma, residual_H=residual,
                                certificate=result.certificate, iterations=result.iterations, wall_time=elapsed,
                                trace=result.trace))
        logging.info("[Multiscale] n={} lambda={:.6g} residual={:.6e} iterations={}".format(
            n, lam, residual, result.iterations))

    if known_inf is not None:
        inf_estimate = float(known_inf)
    else:
        inf_estimate = min([step.residual_H for step in steps], default=norm_l2(data))
    return RunReport(config=cfg, steps=steps, final_sigma=sigma, inf_estimate=inf_estimate, stop_reason=stop_reason)


def check_monotonicity(report: RunReport) -> bool:
    """
    Returns whether residual_H is non-increasing along the run, within
    MONOTONICITY_SLACK relative to the previous residual.

    Args:
        report (RunReport): the run report.

    Returns:
        bool: True if the residuals never increase.
    """
    residuals = [step.residual_H for step in report.steps]
    return all(later <= earlier + MONOTONICITY_SLACK * max(earlier, 1e-300)
               for earlier, later in zip(residuals, residuals[1:]))


def check_minimizing(report: RunReport, inf_value: Optional[float] = None) -> float:
    """
    Returns the last residual_H minus the infimum.

    Args:
        report (RunReport): the run report.
        inf_value (Optional[float]): the infimum, report.inf_estimate when None.

    Returns:
        float: the gap.
    """
    inf_value = report.inf_estimate if inf_value is None else float(inf_value)
    if not report.steps:
        raise ValueError("report has no steps!")
    return report.steps[-1].residual_H - inf_value


def tnv_denoise_1d(f: SeqVector,
                   lambda0: float,
                   N: int,
                   growth: float = DEFAULT_DENOISE_GROWTH,
                   opts: Optional[SolverOptions] = None) -> RunReport:
    """
    Hierarchical total variation decomposition f ~ sum_n u_n of a 1D signal,
    with lambda_n = lambda0 growth^n and the identity operator.

    Args:
        f (SeqVector): the signal.
        lambda0 (float): first fidelity weight.
        N (int): index of the last scale.
        growth (float): ratio of consecutive fidelity weights.
        opts (Optional[SolverOptions]): inner solver options.

    Returns:
        RunReport: the decomposition.
    """
    cfg = MultiscaleConfig(lambda0=lambda0, growth=growth, steps=N, regularizer=TotalVariation1D(), dim=f.dim,
                           solver_opts=opts)
    return run_multiscale(LinearOp.identity(f.dim), f, cfg, known_inf=0.0)


class ContrastReport(ConfigInterface):
    """
    Side by side runs of the F-norm and the Hilbert norm on the same data.
    """
    def __init__(self, l1_report: RunReport, hilbert_report: RunReport) -> None:
        """
        Initialize ContrastReport

        Args:
            l1_report (RunReport): run with the weighted l1 regularizer.
            hilbert_report (RunReport): run with the Hilbert norm regularizer.
        """
        super().__init__()
        self._l1_report = l1_report
        self._hilbert_report = hilbert_report

    @property
    def l1_report(self) -> RunReport:
        return self._l1_report

    @property
    def hilbert_report(self) -> RunReport:
        return self._hilbert_report

    @property
    def l1_norms(self) -> List[float]:
        return [step.sigma_norm_X for step in self._l1_report.steps]

    @property
    def l2_norms(self) -> List[float]:
        return [step.sigma_norm_l2 for step in self._hilbert_report.steps]

    @property
    def increments(self) -> List[float]:
        return [step.u_norm_l2 for step in self._hilbert_report.steps]

    @property
    def increment_tail_ratio(self) -> float:
        """
        Returns max_{n >= 1} ||u_n||_2 divided by ||u_0||_2.

        On a finite truncation the increments level off near the scale set
        by its smallest singular value instead of vanishing, so the tail is
        compared to the first step rather than to an absolute threshold.

        Returns:
            float: the ratio, inf when fewer than two steps ran or u_0 is 0.
        """
        increments = self.increments
        if len(increments) < 2 or increments[0] <= 0.0:
            return math.inf
        return max(increments[1:]) / increments[0]

    @property
    def l1_strictly_increasing(self) -> bool:
        norms = self.l1_norms
        return all(later > earlier for earlier, later in zip(norms, norms[1:]))

    @property
    def hilbert_bounded(self) -> bool:
        """
        Returns whether max_n ||sigma_n||_2 stays within 10 times ||sigma_3||_2.

        Returns:
            bool: True if the Hilbert partial sums stay bounded.
        """
        norms = self.l2_norms
        if len(norms) < 4:
            return False
        return max(norms) <= 10.0 * norms[3]

    def to_json(self) -> dict:
        """
        Returns json object of the contrast report in dict format

        Returns:
            dict: json object of the contrast report.
        """
        return {"l1_report": self._l1_report.to_json(),
                "hilbert_report": self._hilbert_report.to_json(),
                "l1_norms": self.l1_norms,
                "l2_norms": self.l2_norms,
                "increments": self.increments,
                "l1_strictly_increasing": self.l1_strictly_increasing,
                "hilbert_bounded": self.hilbert_bounded}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'ContrastReport':
        json_obj = ConfigInterface.load(json_obj)
        return ContrastReport(RunReport.from_json(json_obj['l1_report']),
                              RunReport.from_json(json_obj['hilbert_report']))

    def copy(self) -> 'ContrastReport':
        return ContrastReport.from_json(self.to_json())


def contrast_experiment(p: CexParams,
                        dim: int,
                        l1_steps: int = DEFAULT_STEPS,
                        hilbert_steps: int = 20,
                        hilbert_growth: float = 2.0,
                        opts: Optional[SolverOptions] = None) -> ContrastReport:
    """
    Runs the counterexample data Lambda(e_1) through the F-norm schedule
    lambda_n = alpha0 M^n and through the Hilbert norm schedule
    lambda_n = alpha0 hilbert_growth^n.

    Args:
        p (CexParams): constant pack.
        dim (int): truncation dimension.
        l1_steps (int): last scale of the F-norm run.
        hilbert_steps (int): last scale of the Hilbert norm run.
        hilbert_growth (float): schedule growth of the Hilbert norm run.
        opts (Optional[SolverOptions]): inner solver options.

    Returns:
        ContrastReport: both runs.
    """
    A = build_counterexample_operator(p, dim)
    data = A.col(1)
    l1_cfg = MultiscaleConfig(lambda0=p.alpha0, growth=p.M, steps=l1_steps, regularizer=WeightedL1(), dim=dim,
                              solver_opts=opts)
    hilbert_cfg = MultiscaleConfig(lambda0=p.alpha0, growth=hilbert_growth, steps=hilbert_steps,
                                   regularizer=HilbertNorm(), dim=dim, solver_opts=opts)
    return ContrastReport(run_multiscale(A, data, l1_cfg, known_inf=0.0),
                          run_multiscale(A, data, hilbert_cfg, known_inf=0.0))
