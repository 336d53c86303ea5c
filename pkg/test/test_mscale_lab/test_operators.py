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
import inspect
import os

import numpy as np

from mscale_lab.constants import SEED_ENV_VAR
from mscale_lab.exceptions import ConvergenceError
from mscale_lab.operators import (
    LinearOp, adjoint_apply, build_counterexample_operator, derive_constants, eta,
    injectivity_bound, kernel_recursion_check, min_singular_estimate, mu,
    operator_norm_upper, resolve_seed
)
from mscale_lab.seqspace import SeqVector, inner

myself: Callable[[], Any] = lambda: inspect.stack()[1][3]


class DeriveConstantsTest(TestCase):
    def test_default_pack(self):
        p = derive_constants(6.0, 1.0)
        assert abs(p.delta - 17.0 / 24.0) < 1e-15
        assert abs(p.b - 595.0 / 6912.0) < 1e-15
        assert abs(p.c0 - 45.0) < 1e-12
        assert abs(p.c0 - (p.M - 1.0) * p.M ** 2 / (4.0 * p.alpha0)) < 1e-12
        assert p.divergence_guaranteed

    def test_alpha0_scaling(self):
        assert abs(derive_constants(6.0, 2.0).c0 - 22.5) < 1e-12

    def test_rejects_invalid(self):
        with self.assertRaises(ValueError):
            derive_constants(0.5, 1.0)
        with self.assertRaises(ValueError):
            derive_constants(1.0, 1.0)
        with self.assertRaises(ValueError):
            derive_constants(6.0, 0.0)

    def test_warns_below_two(self):
        with self.assertLogs(level="WARNING"):
            derive_constants(1.5, 1.0)

    def test_eta_mu(self):
        p = derive_constants(6.0, 1.0)
        assert abs(eta(2, p) ** 2 - 45.0 / 36.0) < 1e-14
        assert abs(mu(3, p) + p.delta * eta(3, p)) < 1e-16
        assert eta(2000, p) >= 0.0
        with self.assertRaises(ValueError):
            eta(0, p)


class LinearOpTest(TestCase):
    def setUp(self) -> None:
        self.p = derive_constants(6.0, 1.0)

    def test_initialize(self):
        A = LinearOp(np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]), name="small")
        assert A.dim_in == 2
        assert A.dim_out == 3
        assert A.name == "small"
        assert A.col(2) == SeqVector([2.0, 4.0, 6.0])
        with self.assertRaises(ValueError):
            A.col(3)
        with self.assertRaises(ValueError):
            A.matrix[0, 0] = 1.0

    def test_rejects_bad_matrix(self):
        with self.assertRaises(ValueError):
            LinearOp(np.array([1.0, 2.0]))
        with self.assertRaises(ValueError):
            LinearOp(np.array([[np.nan]]))

    def test_from_columns(self):
        A = LinearOp.from_columns([SeqVector([1.0]), SeqVector([0.0, 2.0])])
        assert np.array_equal(A.matrix, np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_apply_pads_and_rejects_overflow(self):
        A = LinearOp.identity(3)
        assert A.apply(SeqVector([1.0, 2.0])) == SeqVector([1.0, 2.0, 0.0])
        assert A.apply(SeqVector([1.0, 2.0, 3.0, 0.0])) == SeqVector([1.0, 2.0, 3.0])
        with self.assertRaises(ValueError):
            A.apply(SeqVector([1.0, 2.0, 3.0, 4.0]))

    def test_apply_is_linear(self):
        A = build_counterexample_operator(self.p, 32)
        rng = np.random.default_rng(0)
        for _ in range(10):
            u = SeqVector(rng.standard_normal(32))
            v = SeqVector(rng.standard_normal(32))
            a, b = rng.standard_normal(2)
            lhs = A.apply(a * u + b * v)
            rhs = a * A.apply(u) + b * A.apply(v)
            assert np.max(np.abs((lhs - rhs).values)) <= 1e-12 * max(1.0, np.max(np.abs(lhs.values)))

    def test_adjoint(self):
        A = build_counterexample_operator(self.p, 16)
        rng = np.random.default_rng(1)
        u = SeqVector(rng.standard_normal(16))
        w = SeqVector(rng.standard_normal(16))
        assert abs(inner(A.apply(u), w) - inner(u, adjoint_apply(A, w))) < 1e-10
        with self.assertRaises(ValueError):
            adjoint_apply(np.eye(2), w)

    def test_to_csv(self):
        A = LinearOp(np.array([[1.0, 0.5], [0.0, -2.0]]))
        assert A.to_csv() == "1.0,0.5\r\n0.0,-2.0\r\n"

    def test_str(self):
        assert str(LinearOp.identity(2)) == "(name=identity, dim_in=2, dim_out=2)"
        assert repr(LinearOp.identity(2)).startswith("LinearOp(")


class CounterexampleOperatorTest(TestCase):
    def setUp(self) -> None:
        self.p = derive_constants(6.0, 1.0)

    def test_columns(self):
        p = self.p
        A = build_counterexample_operator(p, 8)
        col1 = A.col(1)
        assert col1.at(1) == 0.0
        assert abs(col1.at(2) - (1.0 - p.delta) * eta(2, p)) < 1e-15
        for m in range(3, 9):
            assert abs(col1.at(m) - eta(m, p)) < 1e-15
        col3 = A.col(3)
        assert col3.support() == [3, 4]
        assert abs(col3.at(3) - 3.0 / p.b * (1.0 - p.delta) * eta(3, p)) < 1e-12
        assert abs(col3.at(4) - 3.0 / p.b * p.delta * eta(4, p)) < 1e-12
        assert A.col(8).support() == [8]

    def test_row_extended(self):
        A = build_counterexample_operator(self.p, 8, dim_out=9)
        assert A.dim_out == 9
        assert A.col(8).support() == [8, 9]
        with self.assertRaises(ValueError):
            build_counterexample_operator(self.p, 8, dim_out=7)
        with self.assertRaises(ValueError):
            build_counterexample_operator(self.p, 2)

    def test_tail_error(self):
        p = self.p
        for dim in (17, 32, 64):
            A = build_counterexample_operator(p, dim)
            expected = sum(eta(m, p) ** 2 for m in range(dim + 1, dim + 400))
            assert abs(A.tail_error - expected) <= 1e-6 * expected
            assert A.tail_error < 1e-12
        assert p.min_dim() == 17

    def test_kernel_recursion(self):
        gamma, defect = kernel_recursion_check(self.p, 1.0, 64)
        assert gamma.at(1) == 1.0
        assert abs(gamma.at(5) + self.p.b / 5.0) < 1e-16
        assert defect < 1e-12

    def test_square_truncation_is_singular(self):
        A = build_counterexample_operator(self.p, 16)
        assert min_singular_estimate(A) <= 1e-12 * operator_norm_upper(A)

    def test_large_truncations_are_numerically_singular(self):
        for dim in (32, 64, 128):
            A = build_counterexample_operator(self.p, dim)
            assert min_singular_estimate(A) <= 1e-12 * operator_norm_upper(A)

    def test_row_extended_truncation_is_injective(self):
        for dim in (8, 16):
            A = build_counterexample_operator(self.p, dim, dim_out=dim + 1)
            sigma_min = min_singular_estimate(A)
            assert 0.0 < sigma_min <= injectivity_bound(self.p, dim) * (1.0 + 1e-6)

    def test_min_singular_methods_agree(self):
        A = LinearOp(np.diag([3.0, 2.0, 0.5]))
        assert abs(min_singular_estimate(A, method="svd") - 0.5) < 1e-12
        assert abs(min_singular_estimate(A, method="inverse") - 0.5) < 1e-9
        with self.assertRaises(ValueError):
            min_singular_estimate(A, method="qr")
        with self.assertRaises(ValueError):
            min_singular_estimate(LinearOp(np.ones((1, 2))))

    def test_min_singular_budget(self):
        A = LinearOp(np.diag([1.0, 1.0 + 1e-9, 2.0]))
        with self.assertRaises(ConvergenceError):
            min_singular_estimate(A, method="inverse", max_iter=1, tol=0.0)

    def test_min_singular_singular_normal_matrix(self):
        assert min_singular_estimate(LinearOp(np.zeros((3, 2))), method="inverse") == 0.0


class OperatorNormTest(TestCase):
    def test_upper_bound(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            A = LinearOp(rng.standard_normal((6, 4)))
            exact = np.linalg.norm(A.matrix, 2)
            bound = operator_norm_upper(A, seed=7)
            assert exact <= bound * (1.0 + 1e-12)
            assert bound <= 1.01 * exact + 1e-12

    def test_counterexample_upper_bound(self):
        A = build_counterexample_operator(derive_constants(6.0, 1.0), 64)
        assert np.linalg.norm(A.matrix, 2) <= operator_norm_upper(A) * (1.0 + 1e-12)

    def test_zero_operator(self):
        assert operator_norm_upper(LinearOp(np.zeros((2, 2)))) == 0.0

    def test_rejects_iters(self):
        with self.assertRaises(ValueError):
            operator_norm_upper(LinearOp.identity(2), iters=0)

    def test_cached(self):
        A = LinearOp(np.diag([2.0, 1.0]))
        first = operator_norm_upper(A, seed=1)
        with patch.object(LinearOp, "matvec", side_effect=AssertionError(myself())):
            assert operator_norm_upper(A, seed=1) == first

    def test_cache_accessors(self):
        A = LinearOp(np.diag([2.0, 1.0]))
        assert A.cached_norm((100, 1)) is None
        bound = operator_norm_upper(A, iters=100, seed=1)
        assert A.cached_norm((100, 1)) == bound
        assert A.cached_norm((100, 2)) is None
        A.store_norm((5, 9), 3)
        assert A.cached_norm((5, 9)) == 3.0
        assert operator_norm_upper(A, iters=5, seed=9) == 3.0

    def test_resolve_seed(self):
        with patch.dict(os.environ, {SEED_ENV_VAR: "42"}):
            assert resolve_seed() == 42
            assert resolve_seed(3) == 3
        with patch.dict(os.environ, {SEED_ENV_VAR: "x"}):
            with self.assertRaises(ValueError):
                resolve_seed()
        with patch.dict(os.environ, {}, clear=True):
            assert resolve_seed() == 0
