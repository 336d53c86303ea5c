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
import inspect
import json

from mscale_lab.configs.cex_params import CexParams
from mscale_lab.operators import derive_constants

myself: Callable[[], Any] = lambda: inspect.stack()[1][3]


class CexParamsTest(TestCase):
    def setUp(self) -> None:
        self.params = derive_constants(6.0, 1.0)

    def test_initialize(self):
        params = CexParams(M=6.0, alpha0=2.0, delta=0.5, b=0.1, c0=45.0)
        assert params.M == 6.0
        assert params.alpha0 == 2.0
        assert params.delta == 0.5
        assert params.b == 0.1
        assert params.c0 == 45.0

    def test_invalid(self):
        for kwargs in ({"M": 1.0}, {"alpha0": 0.0}, {"delta": 1.0}, {"delta": 0.0}, {"b": -1.0}, {"c0": 0.0}):
            values = {"M": 6.0, "alpha0": 1.0, "delta": 0.5, "b": 0.1, "c0": 45.0}
            values.update(kwargs)
            with self.assertRaises(ValueError):
                CexParams(**values)

    def test_quadratic_condition(self):
        assert abs(self.params.quadratic_condition + 1.0 / 288.0) < 1e-15
        assert derive_constants(4.0, 1.0).quadratic_condition > 0.0

    def test_divergence_guaranteed(self):
        assert self.params.divergence_guaranteed
        assert derive_constants(5.83, 1.0).divergence_guaranteed
        assert not derive_constants(5.8, 1.0).divergence_guaranteed
        assert not derive_constants(4.0, 1.0).divergence_guaranteed

    def test_tail_error(self):
        assert abs(self.params.tail_error(0) - 9.0) < 1e-12
        assert self.params.tail_error(16) >= 1e-12
        assert self.params.tail_error(17) < 1e-12
        assert self.params.min_dim() == 17
        assert self.params.min_dim(1.0) == 3

    def test_to_json(self):
        expected_json = {"M": 6.0,
                         "alpha0": 1.0,
                         "delta": self.params.delta,
                         "b": self.params.b,
                         "c0": self.params.c0,
                         "divergence_guaranteed": True}
        self.assertDictEqual(expected_json, self.params.to_json())

    def test_from_json(self):
        assert CexParams.from_json(self.params.to_json()) == self.params
        assert CexParams.from_json(self.params.canonical()) == self.params
        assert CexParams.from_json(json.dumps(self.params.to_json())) == self.params

    def test_copy(self):
        copied = self.params.copy()
        assert copied == self.params
        assert copied is not self.params
        assert hash(copied) == hash(self.params)
        assert copied != derive_constants(8.0, 1.0)

    def test_str(self):
        assert repr(CexParams(M=6.0, alpha0=1.0, delta=0.5, b=0.25, c0=45.0)) == \
            "CexParams(M=6, alpha0=1, delta=0.5, b=0.25, c0=45)"
