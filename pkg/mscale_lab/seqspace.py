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
"""Finite truncations of the sequence spaces l1, l2, the weighted space F and its dual G."""
import csv
import io
import json
from typing import Iterable, Iterator, List, Tuple, Union

import numpy as np


class SeqVector(object):
    """
    Immutable finite truncation of a real sequence.

    Logical indexing starts at 1: ``v.at(1)`` is the first coefficient. The
    underlying numpy array is exposed read-only through ``values``.
    """
    def __init__(self, coeffs: Iterable[float]) -> None:
        """
        Initialize SeqVector

        Args:
            coeffs (Iterable[float]): coefficients, index 1 first.
        """
        values = np.array(coeffs, dtype=np.float64).ravel()
        if values.size < 1:
            raise ValueError("SeqVector requires at least one coefficient, given 0!")
        if not np.all(np.isfinite(values)):
            raise ValueError("SeqVector coefficients must be finite!")
        values.setflags(write=False)
        self._values = values

    @staticmethod
    def zeros(dim: int) -> 'SeqVector':
        """
        Returns the zero vector of dimension dim.

        Args:
            dim (int): truncation dimension.

        Returns:
            SeqVector: the zero vector.
        """
        dim = int(dim)
        if dim < 1:
            raise ValueError("dim must be greater than 0, given {}!".format(dim))
        return SeqVector(np.zeros(dim))

    @staticmethod
    def basis(j: int, dim: int) -> 'SeqVector':
        """
        Returns the basis vector e_j (1 at logical index j).

        Args:
            j (int): logical index, 1 <= j <= dim.
            dim (int): truncation dimension.

        Returns:
            SeqVector: the basis vector e_j.
        """
        j, dim = int(j), int(dim)
        if not 1 <= j <= dim:
            raise ValueError("basis index must be in [1, {}], given {}!".format(dim, j))
        values = np.zeros(dim)
        values[j - 1] = 1.0
        return SeqVector(values)

    @property
    def dim(self) -> int:
        """
        Returns the truncation dimension D.

        Returns:
            int: the truncation dimension.
        """
        return int(self._values.size)

    @property
    def values(self) -> np.ndarray:
        """
        Returns the read-only coefficient array (position 0 holds index 1).

        Returns:
            np.ndarray: the coefficients.
        """
        return self._values

    def at(self, n: int) -> float:
        """
        Returns the coefficient at logical index n, 0 beyond the truncation.

        Args:
            n (int): logical index starting at 1.

        Returns:
            float: the coefficient.
        """
        n = int(n)
        if n < 1:
            raise ValueError("logical index must be greater than 0, given {}!".format(n))
        return float(self._values[n - 1]) if n <= self.dim else 0.0

    def padded(self, dim: int) -> 'SeqVector':
        """
        Returns the vector zero-padded (never truncated) to dim entries.

        Args:
            dim (int): target dimension.

        Returns:
            SeqVector: the padded vector (self if no padding is needed).
        """
        if int(dim) <= self.dim:
            return self
        return SeqVector(np.concatenate([self._values, np.zeros(int(dim) - self.dim)]))

    def support(self, atol: float = 0.0) -> List[int]:
        """
        Returns the logical indices whose magnitude exceeds atol.

        Args:
            atol (float): magnitude threshold.

        Returns:
            List[int]: sorted logical indices.
        """
        return [int(i) + 1 for i in np.flatnonzero(np.abs(self._values) > atol)]

    def to_json(self) -> list:
        """
        Returns json list of the coefficients, index 1 first.

        Returns:
            list: the coefficients.
        """
        return [float(x) for x in self._values]

    @staticmethod
    def from_json(json_obj: Union[list, str]) -> 'SeqVector':
        """
        Returns SeqVector instantiation from a json list.

        Args:
            json_obj (Union[list, str]): json list or its text.

        Returns:
            SeqVector: vector created from the given json.
        """
        if isinstance(json_obj, str):
            json_obj = json.loads(json_obj)
        return SeqVector(json_obj)

    def to_csv_row(self) -> str:
        """
        Returns the coefficients as one RFC-4180 CSV row without line terminator.

        Returns:
            str: the CSV row.
        """
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="").writerow([repr(float(x)) for x in self._values])
        return buffer.getvalue()

    @staticmethod
    def from_csv_row(row: str) -> 'SeqVector':
        """
        Returns SeqVector parsed from a single CSV row.

        Args:
            row (str): the CSV row, index 1 first.

        Returns:
            SeqVector: the parsed vector.
        """
        fields = next(csv.reader([row.strip()]), [])
        try:
            return SeqVector([float(field) for field in fields])
        except ValueError as ex:
            raise ValueError("Malformed SeqVector CSV row: {}".format(row)) from ex

    def __len__(self) -> int:
        return self.dim

    def __iter__(self) -> Iterator[float]:
        return iter(float(x) for x in self._values)

    def __add__(self, other: 'SeqVector') -> 'SeqVector':
        a, b = _aligned(self, other)
        return SeqVector(a + b)

    def __sub__(self, other: 'SeqVector') -> 'SeqVector':
        a, b = _aligned(self, other)
        return SeqVector(a - b)

    def __mul__(self, scalar: float) -> 'SeqVector':
        return SeqVector(float(scalar) * self._values)

    __rmul__ = __mul__

    def __neg__(self) -> 'SeqVector':
        return SeqVector(-self._values)

    def __eq__(self, other: 'SeqVector') -> bool:
        """
        Check equality after zero-padding.

        Args:
            other (SeqVector): other to compare

        Returns:
            bool: True if all coefficients match exactly, otherwise False.
        """
        if not isinstance(other, SeqVector):
            return NotImplemented
        a, b = _aligned(self, other)
        return bool(np.array_equal(a, b))

    def __ne__(self, other: 'SeqVector') -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self) -> int:
        return hash(tuple(np.trim_zeros(self._values, "b") + 0.0))

    def __str__(self) -> str:
        return "(dim=%d, l1=%g)" % (self.dim, norm_l1(self))

    def __repr__(self) -> str:
        return "SeqVector" + str(self)


def _aligned(u: SeqVector, v: SeqVector) -> Tuple[np.ndarray, np.ndarray]:
    """
    Returns both coefficient arrays zero-padded to the larger dimension.

    Args:
        u (SeqVector): first vector.
        v (SeqVector): second vector.

    Returns:
        Tuple[np.ndarray, np.ndarray]: aligned arrays.
    """
    dim = max(u.dim, v.dim)
    return u.padded(dim).values, v.padded(dim).values


def f_weights(dim: int) -> np.ndarray:
    """
    Returns the F-norm weights (1, 2, ..., dim).

    Args:
        dim (int): truncation dimension.

    Returns:
        np.ndarray: the weights.
    """
    return np.arange(1, int(dim) + 1, dtype=np.float64)


def norm_l1(v: SeqVector) -> float:
    """Norm of X = l1."""
    return float(np.sum(np.abs(v.values)))


def norm_l2(v: SeqVector) -> float:
    """Norm of H = l2."""
    return float(np.linalg.norm(v.values))


def norm_F(v: SeqVector) -> float:
    """
    Weighted l1 norm sum_n n|v_n| over the stored indices.

    Args:
        v (SeqVector): the vector.

    Returns:
        float: the F-norm.
    """
    return float(np.dot(f_weights(v.dim), np.abs(v.values)))


def dual_norm_G(kappa: SeqVector) -> float:
    """
    Norm of the dual space G: max_n |kappa_n| / n over the stored indices.

    Args:
        kappa (SeqVector): the functional.

    Returns:
        float: the G-norm.
    """
    return float(np.max(np.abs(kappa.values) / f_weights(kappa.dim)))


def inner(u: SeqVector, v: SeqVector) -> float:
    """
    Euclidean pairing, zero-padding the shorter vector.

    Args:
        u (SeqVector): first vector.
        v (SeqVector): second vector.

    Returns:
        float: sum_n u_n v_n.
    """
    a, b = _aligned(u, v)
    return float(np.dot(a, b))
