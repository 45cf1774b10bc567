"""Discrete symmetries, the similarity metric, and the antilinear symmetry it generates.

The linear ingredients are the parity operator (diagonal, (-1)^(n1+n2))
and a two-mode boost generator A = P2 X1 - P1 X2.  A is Hermitian and
purely imaginary, and it conserves total occupation, so the metric
exp(theta A) is block diagonal over shells of fixed n1 + n2.  Low shells
fit inside the truncated space in full, which is why metric identities
hold to roundoff on a low-lying block at any truncation.

Antilinear maps are represented as a linear operator plus a flag saying
whether the map conjugates its argument first: v -> L conj(v).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .fock import TruncatedOperator, identity_op, total_quanta, two_mode_xp

__all__ = [
    "MetricDecompositionError",
    "DegenerateEigenbasisError",
    "AntilinearMap",
    "MetricPair",
    "parity",
    "time_reversal",
    "pt_map",
    "pt_conjugate",
    "boost_generator",
    "metric",
    "eta_tilde",
    "charge_from_eigenbasis",
]


class MetricDecompositionError(RuntimeError):
    """Eigendecomposition of the boost generator failed."""


class DegenerateEigenbasisError(ValueError):
    """Eigenvectors too close to linear dependence to build a charge operator."""


@dataclass(frozen=True)
class AntilinearMap:
    """Map v -> linear @ v, or v -> linear @ conj(v) when ``conjugates``.

    Composition follows function order: ``f.compose(g)`` applies g first.
    The conjugation flags add mod 2, and the inner linear part picks up a
    conjugation when the outer map conjugates.
    """

    linear: TruncatedOperator
    conjugates: bool

    def __call__(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec)
        if self.conjugates:
            vec = np.conj(vec)
        return self.linear.matrix @ vec

    def compose(self, other: "AntilinearMap") -> "AntilinearMap":
        inner = other.linear.conj() if self.conjugates else other.linear
        return AntilinearMap(self.linear @ inner, self.conjugates ^ other.conjugates)

    def is_identity(self, tol: float = 1e-12) -> bool:
        if self.conjugates:
            return False
        eye = identity_op(self.linear.dims)
        return (self.linear - eye).norm() <= tol * max(1.0, self.linear.norm())


def parity(dims) -> TruncatedOperator:
    """Parity operator, diagonal with entries (-1)^(n1 + n2 + ...)."""
    signs = np.where(total_quanta(dims) % 2 == 0, 1.0, -1.0)
    return TruncatedOperator(np.diag(signs), tuple(int(d) for d in dims))


def time_reversal(dims) -> AntilinearMap:
    """Entrywise complex conjugation in the number basis."""
    return AntilinearMap(identity_op(dims), True)


def pt_map(dims) -> AntilinearMap:
    """Combined parity and conjugation, v -> parity @ conj(v)."""
    return AntilinearMap(parity(dims), True)


def pt_conjugate(op: TruncatedOperator) -> TruncatedOperator:
    """Similarity transform of an operator under the parity-conjugation map.

    Returns parity @ conj(op) @ parity, which is how an operator
    transforms under an antilinear symmetry whose linear part is parity.
    """
    pi = parity(op.dims)
    return pi @ op.conj() @ pi


def boost_generator(dims) -> TruncatedOperator:
    """Two-mode mixing generator A = P2 X1 - P1 X2.

    Hermitian and purely imaginary (conj(A) = -A entrywise), and it
    commutes with total occupation, so exp(theta A) never mixes shells
    of different n1 + n2.
    """
    x1, x2, p1, p2 = two_mode_xp(dims)
    return p2 @ x1 - p1 @ x2


@dataclass(frozen=True)
class MetricPair:
    """exp(theta A) together with its inverse and both square roots.

    eta = exp(theta A) is Hermitian positive definite; rho = exp(theta A / 2)
    is the positive square root used to map to the equivalent Hermitian
    problem.  All four matrices come from one eigendecomposition of A, so
    eta @ eta_inv and rho @ rho_inv are identity to roundoff by
    construction.
    """

    theta: float
    eta: TruncatedOperator
    eta_inv: TruncatedOperator
    rho: TruncatedOperator
    rho_inv: TruncatedOperator


def metric(theta: float, dims) -> MetricPair:
    """Build exp(theta A) and friends from the eigendecomposition of A.

    The boost generator is Hermitian, so the exponential is formed by
    exponentiating eigenvalues rather than by scaling and squaring; this
    keeps eta exactly Hermitian up to roundoff and gives the inverse and
    square roots for free.

    Raises
    ------
    MetricDecompositionError
        If the eigendecomposition of the generator does not converge.
    """
    theta = float(theta)
    gen = boost_generator(dims)
    try:
        w, u = sla.eigh(gen.matrix)
    except np.linalg.LinAlgError as exc:
        raise MetricDecompositionError(
            f"eigh failed on the boost generator for dims {tuple(dims)}: {exc}"
        ) from exc
    uh = u.conj().T

    def _exp(scale: float) -> TruncatedOperator:
        return TruncatedOperator((u * np.exp(scale * w)) @ uh, gen.dims)

    return MetricPair(
        theta=theta,
        eta=_exp(theta),
        eta_inv=_exp(-theta),
        rho=_exp(theta / 2.0),
        rho_inv=_exp(-theta / 2.0),
    )


def eta_tilde(mp: MetricPair) -> AntilinearMap:
    """Antilinear symmetry candidate: parity-conjugation composed with eta.

    Acts as v -> parity @ conj(eta) @ conj(v).  Squares to the identity
    on the low-lying block because parity commutes with eta and
    conj(eta) = eta_inv there.
    """
    dims = mp.eta.dims
    return pt_map(dims).compose(AntilinearMap(mp.eta, False))


def charge_from_eigenbasis(
    vectors: np.ndarray,
    signs,
    et: AntilinearMap,
    cond_threshold: float = 1e8,
) -> TruncatedOperator:
    """Operator with the given eigenvectors and signs, symmetric under ``et``.

    Given k eigenvectors (columns of ``vectors``) with bilinear signs
    s_n = +-1, builds C = V diag(s) B^-1 W with W rows (et v_m)^T and
    B = W V the bilinear Gram matrix.  Then C v_n = s_n v_n and C^2 acts
    as the identity on the span of the vectors.

    Raises
    ------
    DegenerateEigenbasisError
        If the Gram matrix condition number exceeds ``cond_threshold``,
        which happens when eigenvectors are nearly dependent or the
        spectrum is close to degenerate.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != et.linear.size:
        raise ValueError(
            f"vectors must be columns of length {et.linear.size}, got shape {v.shape}"
        )
    w = et(v).T
    gram = w @ v
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > cond_threshold:
        raise DegenerateEigenbasisError(
            f"bilinear Gram matrix has condition number {cond:.3e} "
            f"(threshold {cond_threshold:.1e}); eigenbasis too close to degenerate"
        )
    s = np.asarray(signs, dtype=float)
    if s.shape != (v.shape[1],):
        raise ValueError(f"expected {v.shape[1]} signs, got shape {s.shape}")
    core = np.diag(s) @ np.linalg.solve(gram, w)
    return TruncatedOperator(v @ core, et.linear.dims)
