"""Two coupled oscillators with an imaginary bilinear coupling.

H = 1/2 (P1^2 + P2^2 + c1^2 X1^2 + c2^2 X2^2) + (i/2) c3 X1 X2

is not Hermitian, but for (c2^2 - c1^2)^2 > c3^2 a real mixing angle
theta = atanh(c3 / (c2^2 - c1^2)) exists for which the similarity map
rho = exp(theta A / 2) built on the boost generator A takes H to a real
symmetric pair of independent oscillators.  In that regime the spectrum
is E = omega1 (n1 + 1/2) + omega2 (n2 + 1/2) with both frequencies real;
outside it the frequencies form a complex-conjugate pair and non-real
eigenvalues appear.  This module owns the parameter bookkeeping, the
analytic frequencies, and the eigensystem construction; the numerical
symmetry checks live in :mod:`etapt.verify`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .fock import TruncatedOperator, two_mode_xp
from .symm import AntilinearMap, metric, pt_map

__all__ = [
    "BrokenPhaseError",
    "DegenerateFrequenciesError",
    "TruncationLimitError",
    "OscillatorParams",
    "DecoupledSpec",
    "EigenState",
    "theta_of",
    "decoupled_frequencies",
    "mode_frequencies",
    "analytic_energy",
    "lowest_levels",
    "hamiltonian",
    "decoupled_hamiltonian",
    "model_eigensystem",
]


class BrokenPhaseError(ValueError):
    """Parameters lie outside the regime where a real mixing angle exists.

    When raised by :func:`decoupled_frequencies` the ``omega_sq``
    attribute carries the complex frequency-squared pair for diagnostics.
    """

    def __init__(self, message: str, omega_sq=None):
        super().__init__(message)
        self.omega_sq = omega_sq


class DegenerateFrequenciesError(BrokenPhaseError):
    """c1^2 = c2^2: the mixing-angle formula has a vanishing denominator."""

    def __init__(self, message: str):
        super().__init__(message)


class TruncationLimitError(ValueError):
    """Requested more eigenpairs than the truncated basis supports reliably."""


@dataclass(frozen=True)
class OscillatorParams:
    """Model parameters: squared stiffnesses of both modes plus the coupling.

    c1_sq and c2_sq must be positive; c3 is the real coefficient of the
    imaginary coupling and may take either sign.
    """

    c1_sq: float
    c2_sq: float
    c3: float

    def __post_init__(self) -> None:
        for name in ("c1_sq", "c2_sq", "c3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.c1_sq <= 0 or self.c2_sq <= 0:
            raise ValueError(
                f"squared stiffnesses must be positive, got {self.c1_sq}, {self.c2_sq}"
            )

    @property
    def discriminant(self) -> float:
        """(c1^2 - c2^2)^2 - c3^2; positive in the unbroken regime."""
        return (self.c1_sq - self.c2_sq) ** 2 - self.c3**2

    @property
    def is_unbroken(self) -> bool:
        """True iff (c2^2 - c1^2)^2 > c3^2 strictly."""
        return self.discriminant > 0.0


@dataclass(frozen=True)
class DecoupledSpec:
    """Mixing angle and the two decoupled frequencies.

    :func:`decoupled_frequencies` orders the fields omega1 >= omega2
    (plus branch first).  The ordering is a convention of that
    constructor, not a structural constraint, so a mode-matched variant
    with the fields swapped can still be represented.
    """

    theta: float
    omega1: float
    omega2: float


@dataclass(frozen=True)
class EigenState:
    """One labelled eigenpair of the coupled Hamiltonian.

    ``energy`` is the analytic value omega1 (n1 + 1/2) + omega2 (n2 + 1/2);
    ``h_value`` is the numerically computed eigenvalue of the decoupled
    Hermitian problem it was matched against; ``vector`` is the
    (unnormalized) eigenvector of the coupled H.
    """

    n1: int
    n2: int
    energy: float
    h_value: float
    vector: np.ndarray


def theta_of(params: OscillatorParams) -> float:
    """Real mixing angle atanh(c3 / (c2^2 - c1^2)).

    Raises
    ------
    DegenerateFrequenciesError
        If c1^2 = c2^2 (the formula's denominator vanishes).
    BrokenPhaseError
        If |c3| >= |c2^2 - c1^2|, where no real angle exists.
    """
    denom = params.c2_sq - params.c1_sq
    if denom == 0.0:
        raise DegenerateFrequenciesError(
            f"c1_sq = c2_sq = {params.c1_sq}: mixing angle undefined for equal stiffnesses"
        )
    ratio = params.c3 / denom
    if abs(ratio) >= 1.0:
        raise BrokenPhaseError(
            f"|c3| = {abs(params.c3)} >= |c2_sq - c1_sq| = {abs(denom)}: "
            "no real mixing angle exists for these parameters"
        )
    return math.atanh(ratio)


def decoupled_frequencies(params: OscillatorParams) -> DecoupledSpec:
    """Both normal-mode frequencies, larger first.

    omega_{1,2}^2 = (c1^2 + c2^2)/2 +- (1/2) sqrt((c1^2 - c2^2)^2 - c3^2).
    A zero discriminant (the exceptional point) is allowed and gives
    omega1 = omega2.

    Raises
    ------
    BrokenPhaseError
        If the discriminant is negative; the error carries the complex
        frequency-squared pair in ``omega_sq``.
    """
    mean = 0.5 * (params.c1_sq + params.c2_sq)
    disc = params.discriminant
    if disc < 0.0:
        half = 0.5 * math.sqrt(-disc)
        raise BrokenPhaseError(
            f"discriminant {disc} < 0: frequencies form a complex pair "
            f"{mean} +- {half}i (squared)",
            omega_sq=(complex(mean, half), complex(mean, -half)),
        )
    half = 0.5 * math.sqrt(disc)
    if params.c3 == 0.0:
        theta = 0.0
    elif disc == 0.0:
        # exceptional point: the angle diverges; record the signed infinity
        theta = math.copysign(math.inf, params.c3 / (params.c2_sq - params.c1_sq))
    else:
        theta = theta_of(params)
    return DecoupledSpec(theta=theta, omega1=math.sqrt(mean + half), omega2=math.sqrt(mean - half))


def mode_frequencies(params: OscillatorParams) -> DecoupledSpec:
    """Frequencies paired with the mode that actually carries them.

    The similarity transform sends mode 1 to the frequency on the plus
    branch exactly when c1^2 > c2^2.  For every fixture in this package
    (c1^2 > c2^2) this coincides with :func:`decoupled_frequencies`; for
    the opposite stiffness ordering the two fields swap, which is what
    the decoupling identity h = rho H rho^-1 requires mode by mode.
    """
    spec = decoupled_frequencies(params)
    if params.c1_sq >= params.c2_sq:
        return spec
    return DecoupledSpec(theta=spec.theta, omega1=spec.omega2, omega2=spec.omega1)


def analytic_energy(spec: DecoupledSpec, n1: int, n2: int) -> float:
    """E = omega1 (n1 + 1/2) + omega2 (n2 + 1/2)."""
    n1, n2 = int(n1), int(n2)
    if n1 < 0 or n2 < 0:
        raise ValueError(f"occupation numbers must be nonnegative, got ({n1}, {n2})")
    return spec.omega1 * (n1 + 0.5) + spec.omega2 * (n2 + 0.5)


def lowest_levels(spec: DecoupledSpec, k: int):
    """The k lowest analytic levels as (energy, n1, n2), sorted ascending.

    Ties (commensurate frequencies) break by (n1, n2) lexicographic
    order; degenerate spectra are otherwise out of scope.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    grid = [
        (analytic_energy(spec, n1, n2), n1, n2)
        for n1 in range(k + 1)
        for n2 in range(k + 1)
    ]
    grid.sort()
    return grid[:k]


def hamiltonian(params: OscillatorParams, dims) -> TruncatedOperator:
    """Coupled Hamiltonian on the truncated two-mode space.

    The Hermitian quadratic part and the anti-Hermitian coupling are
    assembled separately, so H - H^dag equals i c3 X1 X2 exactly (not
    just to roundoff).
    """
    x1, x2, p1, p2 = two_mode_xp(dims)
    quad = 0.5 * (p1 @ p1 + p2 @ p2 + params.c1_sq * (x1 @ x1) + params.c2_sq * (x2 @ x2))
    return quad + (0.5j * params.c3) * (x1 @ x2)


def decoupled_hamiltonian(spec: DecoupledSpec, dims) -> TruncatedOperator:
    """Independent-oscillator Hamiltonian with the given frequencies.

    Returned with a real dtype: the kinetic part is assembled from
    purely imaginary momentum matrices whose products have exactly zero
    imaginary part, so dropping it loses nothing and lets symmetric
    eigensolvers engage.
    """
    x1, x2, p1, p2 = two_mode_xp(dims)
    kin = (p1 @ p1 + p2 @ p2).matrix.real
    pot = spec.omega1**2 * (x1 @ x1).matrix + spec.omega2**2 * (x2 @ x2).matrix
    return TruncatedOperator(0.5 * (kin + pot), (x1.dims[0], x1.dims[1]))


def model_eigensystem(params: OscillatorParams, dims, k: int, k_fraction: float = 0.25):
    """Lowest k labelled eigenpairs of the coupled Hamiltonian.

    Solves the real symmetric decoupled problem for its lowest
    eigenvectors phi_n, labels them against the analytic ladder, and
    maps each one through the antilinear parity-conjugation map composed
    with rho = exp(theta A / 2).  The images are eigenvectors of the
    coupled H with the analytic energies, up to truncation error that
    dies away for low-lying states.

    Parameters
    ----------
    params : OscillatorParams
        Must lie in the unbroken regime.
    dims : (int, int)
        Levels kept per mode.
    k : int
        Number of eigenpairs, ordered by analytic energy.
    k_fraction : float
        Reliability guard: k may not exceed this fraction of the total
        truncated dimension.

    Raises
    ------
    BrokenPhaseError
        Outside the unbroken regime (via the frequency computation).
    TruncationLimitError
        If k exceeds the configured fraction of the space, or a computed
        eigenvalue drifts too far from its analytic label to trust.
    """
    spec = decoupled_frequencies(params)
    if not params.is_unbroken:
        raise BrokenPhaseError(
            f"discriminant {params.discriminant} <= 0: eigensystem needs the unbroken regime"
        )
    k = int(k)
    n1, n2 = (int(d) for d in dims)
    limit = max(1, int(k_fraction * n1 * n2))
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if k > limit:
        raise TruncationLimitError(
            f"k = {k} exceeds the reliable limit {limit} "
            f"({k_fraction:g} of dimension {n1 * n2}); increase dims"
        )

    h = decoupled_hamiltonian(spec, (n1, n2))
    values, vectors = sla.eigh(h.matrix, subset_by_index=(0, k - 1))
    # fix each eigenvector's overall sign (first appreciable coefficient
    # positive) so downstream sign patterns do not depend on the backend
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        lead = np.flatnonzero(np.abs(col) > 1e-10 * np.abs(col).max())[0]
        if col[lead] < 0:
            vectors[:, j] = -col

    levels = lowest_levels(spec, k + 1)
    energies = [lvl[0] for lvl in levels]
    gaps = np.diff(energies)
    window = 0.5 * float(gaps.min()) if len(gaps) else np.inf
    carrier = pt_map((n1, n2)).compose(
        AntilinearMap(metric(spec.theta, (n1, n2)).rho, False)
    )

    states = []
    for j in range(k):
        energy, m1, m2 = levels[j]
        if abs(values[j] - energy) > window:
            raise TruncationLimitError(
                f"eigenvalue {values[j]:.6f} is {abs(values[j] - energy):.2e} away from "
                f"its analytic label {energy:.6f} (n1={m1}, n2={m2}); truncation too coarse"
            )
        states.append(
            EigenState(
                n1=m1,
                n2=m2,
                energy=energy,
                h_value=float(values[j]),
                vector=carrier(vectors[:, j]),
            )
        )
    return states
