"""Truncated harmonic-oscillator operators on one and two modes.

Conventions: hbar = 1 throughout.  A single mode truncated at n levels
uses the number basis |0>, ..., |n-1>.  Two-mode operators act on the
Kronecker-product basis |n1>|n2> with mode 1 as the left (slow) factor,
so the flat index of |n1>|n2> is n1 * dim2 + n2.

Truncation makes the canonical commutator exact only away from the cut:
for a single mode cut at n, [X, P] = i(1 - n |n-1><n-1|).  Identities
that rely on canonical algebra are therefore checked on a low-lying
block of the spectrum, not on the full truncated space.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "DimensionMismatchError",
    "TruncatedOperator",
    "identity_op",
    "commutator",
    "ladder",
    "position_op",
    "momentum_op",
    "embed_mode1",
    "embed_mode2",
    "two_mode_xp",
    "state_labels",
    "total_quanta",
]


class DimensionError(ValueError):
    """An operator dimension is invalid (non-square matrix, dim < 2, ...)."""


class DimensionMismatchError(ValueError):
    """Two operators that should act on the same space do not."""


@dataclass(frozen=True)
class TruncatedOperator:
    """A square matrix together with the mode dimensions it acts on.

    Parameters
    ----------
    matrix : ndarray
        Square matrix of shape (N, N) with N = prod(dims).  Stored as a
        read-only copy; the wrapper is immutable after construction.
    dims : tuple of int
        Levels kept per mode, e.g. (24,) for one mode or (24, 24) for
        two.  Every entry must be at least 2.

    Binary operations require identical ``dims`` on both operands and
    raise :class:`DimensionMismatchError` otherwise.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {mat.shape}")
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise DimensionError(f"every mode needs at least 2 levels, got dims {dims}")
        if mat.shape[0] != math.prod(dims):
            raise DimensionError(
                f"matrix side {mat.shape[0]} does not match prod(dims) = {math.prod(dims)}"
            )
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def size(self) -> int:
        """Total Hilbert-space dimension prod(dims)."""
        return self.matrix.shape[0]

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    def _same_space(self, other: "TruncatedOperator") -> None:
        if self.dims != other.dims:
            raise DimensionMismatchError(f"dims {self.dims} vs {other.dims}")

    def __add__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        self._same_space(other)
        return TruncatedOperator(self.matrix + other.matrix, self.dims)

    def __sub__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        self._same_space(other)
        return TruncatedOperator(self.matrix - other.matrix, self.dims)

    def __neg__(self):
        return TruncatedOperator(-self.matrix, self.dims)

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return TruncatedOperator(self.matrix * scalar, self.dims)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        self._same_space(other)
        return TruncatedOperator(self.matrix @ other.matrix, self.dims)

    def transpose(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.T, self.dims)

    def conj(self) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.conj(), self.dims)

    def dag(self) -> "TruncatedOperator":
        """Hermitian adjoint (conjugate transpose)."""
        return TruncatedOperator(self.matrix.conj().T, self.dims)

    def norm(self) -> float:
        """Frobenius norm of the matrix."""
        return float(np.linalg.norm(self.matrix))


def identity_op(dims) -> TruncatedOperator:
    """Identity operator on the space with the given mode dimensions."""
    dims = tuple(int(d) for d in dims)
    return TruncatedOperator(np.eye(math.prod(dims)), dims)


def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """[a, b] = a b - b a."""
    return a @ b - b @ a


def ladder(n: int) -> TruncatedOperator:
    """Lowering operator on an n-level mode.

    Matrix elements <m-1| a |m> = sqrt(m), everything else zero.  The
    raising operator is the transpose.

    Parameters
    ----------
    n : int
        Number of levels kept, n >= 2.
    """
    if n < 2:
        raise DimensionError(f"need at least 2 levels, got {n}")
    return TruncatedOperator(np.diag(np.sqrt(np.arange(1.0, n)), k=1), (n,))


def position_op(n: int) -> TruncatedOperator:
    """Position quadrature X = (a + a^dag) / sqrt(2).  Real symmetric."""
    a = ladder(n).matrix
    return TruncatedOperator((a + a.T) / np.sqrt(2.0), (n,))


def momentum_op(n: int) -> TruncatedOperator:
    """Momentum quadrature P = i (a^dag - a) / sqrt(2).

    Purely imaginary and Hermitian, so P.T == -P and conj(P) == -P hold
    entrywise, not just up to roundoff.
    """
    a = ladder(n).matrix
    return TruncatedOperator(1j * (a.T - a) / np.sqrt(2.0), (n,))


def embed_mode1(op: TruncatedOperator, dim2: int) -> TruncatedOperator:
    """Embed a single-mode operator as the left Kronecker factor: op x I."""
    if op.n_modes != 1:
        raise DimensionMismatchError(f"expected a single-mode operator, got dims {op.dims}")
    dim2 = int(dim2)
    if dim2 < 2:
        raise DimensionError(f"need at least 2 levels for mode 2, got {dim2}")
    return TruncatedOperator(np.kron(op.matrix, np.eye(dim2)), (op.dims[0], dim2))


def embed_mode2(dim1: int, op: TruncatedOperator) -> TruncatedOperator:
    """Embed a single-mode operator as the right Kronecker factor: I x op."""
    if op.n_modes != 1:
        raise DimensionMismatchError(f"expected a single-mode operator, got dims {op.dims}")
    dim1 = int(dim1)
    if dim1 < 2:
        raise DimensionError(f"need at least 2 levels for mode 1, got {dim1}")
    return TruncatedOperator(np.kron(np.eye(dim1), op.matrix), (dim1, op.dims[0]))


def two_mode_xp(dims):
    """Quadratures (x1, x2, p1, p2) on the two-mode space.

    Parameters
    ----------
    dims : (int, int)
        Levels kept per mode.

    Returns
    -------
    tuple of TruncatedOperator
        (x1, x2, p1, p2), each acting on the full product space.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 2:
        raise DimensionError(f"expected two modes, got dims {dims}")
    n1, n2 = dims
    x1 = embed_mode1(position_op(n1), n2)
    x2 = embed_mode2(n1, position_op(n2))
    p1 = embed_mode1(momentum_op(n1), n2)
    p2 = embed_mode2(n1, momentum_op(n2))
    return x1, x2, p1, p2


def state_labels(dims):
    """Occupation numbers of each flat basis index.

    Returns one integer array per mode, each of length prod(dims); entry
    j of array i is the occupation of mode i in basis state j.  Ordering
    matches the Kronecker convention (mode 1 is the slow index).
    """
    dims = tuple(int(d) for d in dims)
    grids = np.indices(dims).reshape(len(dims), -1)
    return tuple(grids[i].copy() for i in range(len(dims)))


def total_quanta(dims) -> np.ndarray:
    """Total occupation n1 + n2 + ... of each flat basis index."""
    labels = state_labels(dims)
    return np.sum(labels, axis=0)
