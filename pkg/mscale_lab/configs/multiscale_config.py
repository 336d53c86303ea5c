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
"""A class for multiscale run configuration."""
from typing import Optional, Union

from mscale_lab.configs.config_interface import ConfigInterface
from mscale_lab.configs.solver_options import SolverOptions
from mscale_lab.constants import DEFAULT_ALPHA0, DEFAULT_DIM, DEFAULT_M, DEFAULT_STEPS
from mscale_lab.varsolve import Regularizer, WeightedL1, regularizer_from_json


class MultiscaleConfig(ConfigInterface):
    """
    Schedule lambda_n = lambda0 growth^n, n = 0..steps, of a multiscale run.
    """
    def __init__(self,
                 lambda0: float = DEFAULT_ALPHA0,
                 growth: float = DEFAULT_M,
                 steps: int = DEFAULT_STEPS,
                 regularizer: Optional[Regularizer] = None,
                 dim: int = DEFAULT_DIM,
                 solver_opts: Optional[SolverOptions] = None) -> None:
        """
        Initialize MultiscaleConfig

        Args:
            lambda0 (float): first fidelity weight.
            growth (float): ratio of consecutive fidelity weights, > 1.
            steps (int): index N of the last scale, at least 1.
            regularizer (Optional[Regularizer]): penalty, the F-norm when None.
            dim (int): number of unknowns D.
            solver_opts (Optional[SolverOptions]): inner solver options.
        """
        super().__init__()
        self._lambda0 = float(lambda0)
        if not self._lambda0 > 0.0:
            raise ValueError("lambda0 must be a positive float value, given {}!".format(self._lambda0))
        self._growth = float(growth)
        if not self._growth > 1.0:
            raise ValueError("growth must be greater than 1, given {}!".format(self._growth))
        self._steps = int(steps)
        if self._steps < 1:
            raise ValueError("steps must be greater than 0, given {}!".format(self._steps))
        self._dim = int(dim)
        if self._dim < 1:
            raise ValueError("dim must be greater than 0, given {}!".format(self._dim))
        self._regularizer = regularizer or WeightedL1()
        if not isinstance(self._regularizer, Regularizer):
            raise ValueError("Expected Regularizer type but received {}.".format(type(self._regularizer)))
        self._solver_opts = solver_opts or SolverOptions()

    @property
    def lambda0(self) -> float:
        """
        Returns the first fidelity weight.

        Returns:
            float: lambda0.
        """
        return self._lambda0

    @property
    def growth(self) -> float:
        """
        Returns the growth factor of the schedule.

        Returns:
            float: growth.
        """
        return self._growth

    @property
    def steps(self) -> int:
        """
        Returns the index of the last scale.

        Returns:
            int: N.
        """
        return self._steps

    @steps.setter
    def steps(self, value: int) -> None:
        """
        Sets the index of the last scale.

        Args:
            value (int): new N.
        """
        value = int(value)
        if value < 1:
            raise ValueError("steps must be greater than 0, given {}!".format(value))
        self._steps = value

    @property
    def regularizer(self) -> Regularizer:
        return self._regularizer

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def solver_opts(self) -> SolverOptions:
        return self._solver_opts

    def lambda_at(self, n: int) -> float:
        """
        Returns lambda_n = lambda0 growth^n.

        Args:
            n (int): scale index.

        Returns:
            float: the fidelity weight of scale n.
        """
        return self._lambda0 * self._growth ** int(n)

    def to_json(self) -> dict:
        """
        Returns json object of the multiscale config in dict format

        Returns:
            dict: json object of the multiscale config.
        """
        return {"lambda0": self._lambda0,
                "growth": self._growth,
                "steps": self._steps,
                "regularizer": self._regularizer.to_json(),
                "dim": self._dim,
                "solver_opts": self._solver_opts.to_json()}

    @staticmethod
    def from_json(json_obj: Union[dict, str]) -> 'MultiscaleConfig':
        """
        Returns MultiscaleConfig instantiation from json object.

        Args:
            json_obj (Union[dict, str]): json object in dict format

        Returns:
            MultiscaleConfig: multiscale config created from given json object
        """
        json_obj = ConfigInterface.load(json_obj)
        regularizer = json_obj.get('regularizer')
        solver_opts = json_obj.get('solver_opts')
        return MultiscaleConfig(lambda0=json_obj['lambda0'],
                                growth=json_obj['growth'],
                                steps=json_obj['steps'],
                                regularizer=None if regularizer is None else regularizer_from_json(regularizer),
                                dim=json_obj['dim'],
                                solver_opts=None if solver_opts is None else SolverOptions.from_json(solver_opts))

    def copy(self) -> 'MultiscaleConfig':
        """
        Returns a copy of self.

        Returns:
            MultiscaleConfig: a copy of self.
        """
        return MultiscaleConfig.from_json(self.to_json())

    def __eq__(self, other: 'MultiscaleConfig') -> bool:
        return isinstance(other, MultiscaleConfig) and self.to_json() == other.to_json()

    def __ne__(self, other: 'MultiscaleConfig') -> bool:
        return not self.__eq__(other)

    def __str__(self) -> str:
        return "(lambda0=%g, growth=%g, steps=%d, regularizer=%s, dim=%d)" % (
            self._lambda0, self._growth, self._steps, self._regularizer.kind.value, self._dim)

    def __repr__(self) -> str:
        return "MultiscaleConfig" + str(self)
