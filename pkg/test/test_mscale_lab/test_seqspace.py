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

import numpy as np

from mscale_lab.seqspace import (
    SeqVector, dual_norm_G, f_weights, inner, norm_F, norm_l1, norm_l2
)

myself: Callable[[], Any] = lambda: inspect.stack()[1][3]


class SeqVectorTest(TestCase):
    def setUp(self) -> None:
        pass

    def test_initialize(self):
        v = SeqVector([1.0, -2.0, 0.0])
        assert v.dim == 3
        assert len(v) == 3
        assert v.at(1) == 1.0
        assert v.at(2) == -2.0
        assert v.at(10) == 0.0
        assert list(v) == [1.0, -2.0, 0.0]

    def test_initialize_rejects_empty_and_non_finite(self):
        with self.assertRaises(ValueError):
            SeqVector([])
        with self.assertRaises(ValueError):
            SeqVector([1.0, float("nan")])
        with self.assertRaises(ValueError):
            SeqVector([float("inf")])

    def test_values_read_only(self):
        v = SeqVector([1.0, 2.0])
        with self.assertRaises(ValueError):
            v.values[0] = 3.0

    def test_at_rejects_zero_index(self):
        with self.assertRaises(ValueError):
            SeqVector([1.0]).at(0)

    def test_zeros_and_basis(self):
        assert SeqVector.zeros(4) == SeqVector([0.0, 0.0, 0.0, 0.0])
        e2 = SeqVector.basis(2, 4)
        assert e2.support() == [2]
        assert e2.at(2) == 1.0
        with self.assertRaises(ValueError):
            SeqVector.basis(5, 4)
        with self.assertRaises(ValueError):
            SeqVector.zeros(0)

    def test_padding_and_equality(self):
        short = SeqVector([1.0, 2.0])
        long = SeqVector([1.0, 2.0, 0.0, 0.0])
        assert short == long
        assert hash(short) == hash(long)
        assert short != SeqVector([1.0, 2.0, 1e-300])
        assert short.padded(4).dim == 4
        assert short.padded(1) is short

    def test_arithmetic(self):
        u = SeqVector([1.0, 2.0])
        v = SeqVector([0.5, 0.5, 3.0])
        assert u + v == SeqVector([1.5, 2.5, 3.0])
        assert v - u == SeqVector([-0.5, -1.5, 3.0])
        assert 2.0 * u == SeqVector([2.0, 4.0])
        assert u * 2.0 == SeqVector([2.0, 4.0])
        assert -u == SeqVector([-1.0, -2.0])

    def test_support(self):
        v = SeqVector([0.0, 1e-12, 0.5, 0.0])
        assert v.support() == [2, 3]
        assert v.support(atol=1e-9) == [3]

    def test_to_json(self):
        v = SeqVector([0.1, -2.0])
        assert v.to_json() == [0.1, -2.0]
        assert SeqVector.from_json("[0.1, -2.0]") == v

    def test_csv_row(self):
        v = SeqVector([0.1, 1e-17, -3.0])
        assert v.to_csv_row() == "0.1,1e-17,-3.0"
        assert SeqVector.from_csv_row(v.to_csv_row()) == v
        with self.assertRaises(ValueError):
            SeqVector.from_csv_row("1.0,abc")
        with self.assertRaises(ValueError):
            SeqVector.from_csv_row("")


class NormTest(TestCase):
    def test_weights(self):
        assert np.array_equal(f_weights(3), np.array([1.0, 2.0, 3.0]))

    def test_norms(self):
        v = SeqVector([3.0, -4.0])
        assert norm_l1(v) == 7.0
        assert norm_l2(v) == 5.0
        # 1*3 + 2*4
        assert norm_F(v) == 11.0
        assert dual_norm_G(v) == 3.0
        assert dual_norm_G(SeqVector([1.0, -6.0, 3.0])) == 3.0

    def test_norm_F_of_scaled_basis(self):
        for j in range(1, 20):
            assert norm_F(SeqVector.basis(j, 20) * (1.0 / j)) == 1.0

    def test_duality_bound(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            u = SeqVector(rng.standard_normal(7))
            kappa = SeqVector(rng.standard_normal(7))
            assert abs(inner(u, kappa)) <= norm_F(u) * dual_norm_G(kappa) + 1e-12

    def test_inner_pads(self):
        assert inner(SeqVector([1.0, 2.0]), SeqVector([3.0, 4.0, 5.0])) == 11.0
