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
"""Classes for command-line experiment configuration."""
from typing import Iterable, Optional, Union

from mscale_lab.configs.cex_params import CexParams
from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.configs.multiscale_config import MultiscaleConfig
from mscale_lab.configs.solver_options import SolverOptions
from mscale_lab.constants import (
    CommandType, RegularizerKind,
    DEFAULT_ALPHA0, DEFAULT_DENOISE_GROWTH, DEFAULT_DENOISE_LAMBDA0, DEFAULT_DENOISE_STEPS,
    DEFAULT_DIM, DEFAULT_J_MAX, DEFAULT_M, DEFAULT_MAX_ITER, DEFAULT_N_MAX, DEFAULT_STEPS, DEFAULT_TOL,
    MAX_TAIL_ERROR
)
from mscale_lab.operators import derive_constants
from mscale_lab.varsolve import make_regularizer

DEFAULT_OUT = "out"


class ExperimentConfig(ConfigInterface):
    """
    Fields shared by every subcommand: output directory and timing flag.
    """
    def __init__(self, out: str = DEFAULT_OUT, record_timing: bool = False) -> None:
        """
        Initialize ExperimentConfig

        Args:
            out (str): output directory.
            record_timing (bool): whether wall times go into the CSV outputs.
        """
        super().__init__()
        self._out = str(out)
        if not self._out:
            raise ValueError("out must be a non-empty path!")
        self._record_timing = bool(record_timing)

    @property
    def command(self) -> CommandType:
        raise NotImplementedError('The subclass of ExperimentConfig must implement this method')

    @property
    def out(self) -> str:
        return self._out

    @property
    def record_timing(self) -> bool:
        return self._record_timing

    def to_json(self) -> dict:
        """
        Returns json object of the experiment config in dict format

        Returns:
            dict: json object of the experiment config.
        """
        return {"command": self.command.value,
                "out": self._out,
                "record_timing": self._record_timing}

    def copy(self) -> 'ExperimentConfig':
        return self.from_json(self.to_json())

    def __eq__(self, other: 'ExperimentConfig') -> bool:
        return isinstance(other, type(self)) and self.to_json() == other.to_json()

    def __ne__(self, other: 'ExperimentConfig') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return str(self.to_json())

    def __repr__(self) -> str:
        return type(self).__name__ + str(self)


class VerifyConfig(ExperimentConfig):
    """
    Grid of (M, n) cells checked by the claim verifier.
    """
    def __init__(self,
                 ms: Iterable[float] = (DEFAULT_M,),
                 alpha0: float = DEFAULT_ALPHA0,
                 n_max: int = DEFAULT_N_MAX,
                 j_max: int = DEFAULT_J_MAX,
                 workers: int = 1,
                 out: str = DEFAULT_OUT,
                 record_timing: bool = False) -> None:
        """
        Initialize VerifyConfig

        Args:
            ms (Iterable[float]): scale growth factors, each > 1.
            alpha0 (float): lambda_0, > 0.
            n_max (int): last step, >= 0.
            j_max (int): last explicitly evaluated index, >= n_max + 4.
            workers (int): worker threads.
            out (str): output directory.
            record_timing (bool): whether wall times go into the outputs.
        """
        super().__init__(out=out, record_timing=record_timing)
        self._ms = [float(M) for M in ms]
        if not self._ms:
            raise ValueError("ms must contain at least one value!")
        for M in self._ms:
            if not M > 1.0:
                raise ValueError("M must be greater than 1, given {}!".format(M))
        self._alpha0 = float(alpha0)
        if not self._alpha0 > 0.0:
            raise ValueError("alpha0 must be a positive float value, given {}!".format(self._alpha0))
        self._n_max = int(n_max)
        if self._n_max < 0:
            raise ValueError("n_max must be a non-negative integer, given {}!".format(self._n_max))
        self._j_max = int(j_max)
        if self._j_max < self._n_max + 4:
            raise ValueError("j_max must be at least n_max+4={}, given {}!".format(self._n_max + 4, self._j_max))
        self._workers = int(workers)
        if self._workers < 1:
            raise ValueError("workers must be greater than 0, given {}!".format(self._workers))

    @property
    def command(self) -> CommandType:
        return CommandType.VERIFY

    @property
    def ms(self) -> list:
        return list(self._ms)

    @property
    def alpha0(self) -> float:
        return self._alpha0

    @property
    def n_max(self) -> int:
        return self._n_max

    @property
    def j_max(self) -> int:
        return self._j_max

    @property
    def workers(self) -> int:
        return self._workers

    def to_json(self) -> dict:
        json_obj = super().to_json()
        json_obj.update({"M": self._ms,
                         "alpha0": self._alpha0,
                         "n_max": self._n_max,
                         "j_max": self._j_max,
                         "workers": self._workers})
        return json_obj

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'VerifyConfig':
        """
        Returns VerifyConfig instantiation from json object; missing keys take defaults.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            VerifyConfig: verify config created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        ms = json_obj.get('M', [DEFAULT_M])
        return VerifyConfig(ms=ms if isinstance(ms, list) else [ms],
                            alpha0=json_obj.get('alpha0', DEFAULT_ALPHA0),
                            n_max=json_obj.get('n_max', DEFAULT_N_MAX),
                            j_max=json_obj.get('j_max', DEFAULT_J_MAX),
                            workers=json_obj.get('workers', 1),
                            out=json_obj.get('out', DEFAULT_OUT),
                            record_timing=json_obj.get('record_timing', False))


class RunConfig(ExperimentConfig):
    """
    Numeric multiscale reproduction on the counterexample operator.

    growth defaults to M for the weighted-l1 regularizer and to
    DEFAULT_DENOISE_GROWTH otherwise; lambda0 defaults to alpha0.
    """
    def __init__(self,
                 M: float = DEFAULT_M,
                 alpha0: float = DEFAULT_ALPHA0,
                 dim: int = DEFAULT_DIM,
                 steps: int = DEFAULT_STEPS,
                 regularizer: Union[str, RegularizerKind] = RegularizerKind.WEIGHTED_L1,
                 growth: Optional[float] = None,
                 lambda0: Optional[float] = None,
                 tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER,
                 trace: bool = False,
                 dump_operator: bool = False,
                 out: str = DEFAULT_OUT,
                 record_timing: bool = False) -> None:
        """
        Initialize RunConfig

        Args:
            M (float): scale growth factor of the operator, > 1.
            alpha0 (float): lambda_0 of the operator, > 0.
            dim (int): truncation dimension, large enough for the tail bound.
            steps (int): last scale N, >= 1.
            regularizer (Union[str, RegularizerKind]): regularizer kind.
            growth (Optional[float]): schedule growth.
            lambda0 (Optional[float]): first fidelity weight.
            tol (float): certificate tolerance.
            max_iter (int): inner iteration budget.
            trace (bool): whether to write the solver traces.
            dump_operator (bool): whether to write the operator matrix.
            out (str): output directory.
            record_timing (bool): whether wall times go into the outputs.
        """
        super().__init__(out=out, record_timing=record_timing)
        self._params = derive_constants(M, alpha0)
        self._dim = int(dim)
        min_dim = self._params.min_dim(MAX_TAIL_ERROR)
        if self._dim < min_dim:
            raise ValueError("dim must be at least {} for M={}, given {}!".format(min_dim, self._params.M,
                                                                                  self._dim))
        self._regularizer = RegularizerKind(regularizer)
        default_growth = self._params.M if self._regularizer == RegularizerKind.WEIGHTED_L1 \
            else DEFAULT_DENOISE_GROWTH
        self._growth = float(growth) if growth is not None else default_growth
        self._lambda0 = float(lambda0) if lambda0 is not None else self._params.alpha0
        self._solver_opts = SolverOptions(tol=tol, max_iter=max_iter, record_trace=trace)
        self._trace = bool(trace)
        self._dump_operator = bool(dump_operator)
        self._multiscale = MultiscaleConfig(lambda0=self._lambda0, growth=self._growth, steps=steps,
                                            regularizer=make_regularizer(self._regularizer), dim=self._dim,
                                            solver_opts=self._solver_opts)

    @property
    def command(self) -> CommandType:
        return CommandType.RUN

    @property
    def params(self) -> CexParams:
        return self._params

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def regularizer(self) -> RegularizerKind:
        return self._regularizer

    @property
    def trace(self) -> bool:
        return self._trace

    @property
    def dump_operator(self) -> bool:
        return self._dump_operator

    @property
    def multiscale(self) -> MultiscaleConfig:
        """
        Returns the multiscale configuration of the run.

        Returns:
            MultiscaleConfig: a copy of the run's multiscale configuration.
        """
        return self._multiscale.copy()

    def to_json(self) -> dict:
        json_obj = super().to_json()
        json_obj.update({"M": self._params.M,
                         "alpha0": self._params.alpha0,
                         "dim": self._dim,
                         "steps": self._multiscale.steps,
                         "regularizer": self._regularizer.value,
                         "growth": self._growth,
                         "lambda0": self._lambda0,
                         "tol": self._solver_opts.tol,
                         "max_iter": self._solver_opts.max_iter,
                         "trace": self._trace,
                         "dump_operator": self._dump_operator})
        return json_obj

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'RunConfig':
        """
        Returns RunConfig instantiation from json object; missing keys take defaults.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            RunConfig: run config created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return RunConfig(M=json_obj.get('M', DEFAULT_M),
                         alpha0=json_obj.get('alpha0', DEFAULT_ALPHA0),
                         dim=json_obj.get('dim', DEFAULT_DIM),
                         steps=json_obj.get('steps', DEFAULT_STEPS),
                         regularizer=json_obj.get('regularizer', RegularizerKind.WEIGHTED_L1.value),
                         growth=json_obj.get('growth'),
                         lambda0=json_obj.get('lambda0'),
                         tol=json_obj.get('tol', DEFAULT_TOL),
                         max_iter=json_obj.get('max_iter', DEFAULT_MAX_ITER),
                         trace=json_obj.get('trace', False),
                         dump_operator=json_obj.get('dump_operator', False),
                         out=json_obj.get('out', DEFAULT_OUT),
                         record_timing=json_obj.get('record_timing', False))


class DenoiseConfig(ExperimentConfig):
    """
    Hierarchical total variation decomposition of a single-column CSV signal.
    """
    def __init__(self,
                 input_path: str,
                 lambda0: float = DEFAULT_DENOISE_LAMBDA0,
                 steps: int = DEFAULT_DENOISE_STEPS,
                 growth: float = DEFAULT_DENOISE_GROWTH,
                 tol: float = DEFAULT_TOL,
                 max_iter: int = DEFAULT_MAX_ITER,
                 out: str = DEFAULT_OUT,
                 record_timing: bool = False) -> None:
        """
        Initialize DenoiseConfig

        Args:
            input_path (str): single-column CSV of the signal.
            lambda0 (float): first fidelity weight, > 0.
            steps (int): last scale N, >= 1.
            growth (float): schedule growth, > 1.
            tol (float): certificate tolerance.
            max_iter (int): inner iteration budget.
            out (str): output directory.
            record_timing (bool): whether wall times go into the outputs.
        """
        super().__init__(out=out, record_timing=record_timing)
        self._input_path = str(input_path or "")
        if not self._input_path:
            raise ValueError("input must be a non-empty path!")
        self._lambda0 = float(lambda0)
        if not self._lambda0 > 0.0:
            raise ValueError("lambda0 must be a positive float value, given {}!".format(self._lambda0))
        self._steps = int(steps)
        if self._steps < 1:
            raise ValueError("steps must be greater than 0, given {}!".format(self._steps))
        self._growth = float(growth)
        if not self._growth > 1.0:
            raise ValueError("growth must be greater than 1, given {}!".format(self._growth))
        self._solver_opts = SolverOptions(tol=tol, max_iter=max_iter)

    @property
    def command(self) -> CommandType:
        return CommandType.DENOISE

    @property
    def input_path(self) -> str:
        return self._input_path

    @property
    def lambda0(self) -> float:
        return self._lambda0

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def growth(self) -> float:
        return self._growth

    @property
    def solver_opts(self) -> SolverOptions:
        return self._solver_opts.copy()

    def to_json(self) -> dict:
        json_obj = super().to_json()
        json_obj.update({"input": self._input_path,
                         "lambda0": self._lambda0,
                         "steps": self._steps,
                         "growth": self._growth,
                         "tol": self._solver_opts.tol,
                         "max_iter": self._solver_opts.max_iter})
        return json_obj

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'DenoiseConfig':
        """
        Returns DenoiseConfig instantiation from json object; missing keys take defaults.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            DenoiseConfig: denoise config created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        return DenoiseConfig(input_path=json_obj.get('input', ""),
                             lambda0=json_obj.get('lambda0', DEFAULT_DENOISE_LAMBDA0),
                             steps=json_obj.get('steps', DEFAULT_DENOISE_STEPS),
                             growth=json_obj.get('growth', DEFAULT_DENOISE_GROWTH),
                             tol=json_obj.get('tol', DEFAULT_TOL),
                             max_iter=json_obj.get('max_iter', DEFAULT_MAX_ITER),
                             out=json_obj.get('out', DEFAULT_OUT),
                             record_timing=json_obj.get('record_timing', False))


class ReportConfig(ExperimentConfig):
    """
    Re-check of a stored run report.
    """
    def __init__(self, input_path: str, out: str = DEFAULT_OUT, record_timing: bool = False) -> None:
        """
        Initialize ReportConfig

        Args:
            input_path (str): path of a run_report.json.
            out (str): output directory.
            record_timing (bool): unused, kept for a uniform record.
        """
        super().__init__(out=out, record_timing=record_timing)
        self._input_path = str(input_path or "")
        if not self._input_path:
            raise ValueError("input must be a non-empty path!")

    @property
    def command(self) -> CommandType:
        return CommandType.REPORT

    @property
    def input_path(self) -> str:
        return self._input_path

    def to_json(self) -> dict:
        json_obj = super().to_json()
        json_obj["input"] = self._input_path
        return json_obj

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'ReportConfig':
        json_obj = ConfigInterface.load(json_obj)
        return ReportConfig(input_path=json_obj.get('input', ""),
                            out=json_obj.get('out', DEFAULT_OUT),
                            record_timing=json_obj.get('record_timing', False))
