"""Quantitative checks of every identity the metric construction promises.

Each check returns a small report dataclass instead of printing or
asserting, so the same machinery serves the test suite, the command-line
front end, and interactive use.  All residuals are relative Frobenius
norms restricted to a bulk projector Q that keeps total occupation
n1 + n2 <= bulk_fraction * min(dims): identities that are algebraically
exact shell by shell hold there to roundoff, while the truncation edge
is excluded.  Full-space assertions are reserved for the relations that
survive truncation exactly (the adjoint-parity identity, parity
algebra).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .fock import TruncatedOperator, total_quanta, two_mode_xp
from .model import (
    BrokenPhaseError,
    OscillatorParams,
    TruncationLimitError,
    decoupled_frequencies,
    decoupled_hamiltonian,
    hamiltonian,
    lowest_levels,
    mode_frequencies,
    theta_of,
)
from .symm import AntilinearMap, MetricPair, eta_tilde, metric

__all__ = [
    "IllConditionedNormalizationError",
    "ResidualReport",
    "LevelMatch",
    "SpectrumReport",
    "GramReport",
    "SweepPoint",
    "SweepReport",
    "bulk_projector",
    "pseudo_hermiticity_residual",
    "pseudo_pt_residual",
    "eta_tilde_commutator",
    "eta_tilde_involution",
    "metric_conjugation_residual",
    "transform_rules_check",
    "dyson_decoupling_residual",
    "identity_suite",
    "bilinear_eta_tilde",
    "normalize_bilinear",
    "gram",
    "matched_eigenpairs",
    "spectrum_report",
    "phase_sweep",
]

REALITY_TOL = 1e-8
CONVERGENCE_TOL = 1e-6
MACHINE_TOL = 1e-13
BOUNDARY_TOL = 1e-4


class IllConditionedNormalizationError(ValueError):
    """A self-pairing is too small in magnitude to normalize against."""


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity check.

    ``residual`` is the relative, bulk-projected Frobenius residual;
    ``passed`` is simply residual < tolerance, recorded so that reports
    stay meaningful after serialization.
    """

    name: str
    residual: float
    bulk_fraction: float
    dims: tuple[int, ...]
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class LevelMatch:
    """One analytic level paired with its nearest numeric eigenvalue."""

    n1: int
    n2: int
    energy: float
    value: complex
    abs_error: float


@dataclass(frozen=True)
class SpectrumReport:
    """Numeric spectrum against the analytic ladder, or the pairing audit.

    In the unbroken phase ``matched`` holds one entry per requested
    analytic level and ``unmatched`` any level whose nearest eigenvalue
    fell outside the exclusion window (half the minimal analytic gap).
    In the broken phase matching is meaningless; instead ``pair_defect``
    records how far the non-real eigenvalues are from closing into
    conjugate pairs.
    """

    dims: tuple[int, int]
    k: int
    phase: str
    numeric: tuple
    matched: tuple
    unmatched: tuple
    max_imag: float
    n_nonreal: int
    pair_defect: float
    tol_convergence: float
    tol_reality: float
    passed: bool


@dataclass(frozen=True)
class GramReport:
    """Pairing table of eigenvectors under the chosen bilinear form."""

    form: str
    matrix: np.ndarray
    target: str
    signs: tuple
    labels: tuple
    max_deviation: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class SweepPoint:
    c3: float
    max_imag: float
    unbroken_analytic: bool
    unbroken_numeric: bool


@dataclass(frozen=True)
class SweepReport:
    """Phase-boundary scan over the coupling strength."""

    c1_sq: float
    c2_sq: float
    dims: tuple[int, int]
    k: int
    points: tuple
    analytic_boundary: float
    detected_boundary: float | None
    boundary_tol: float
    reality_tol: float
    within_one_step: bool | None
    warning: str | None
    passed: bool


def bulk_projector(dims, bulk_fraction: float) -> np.ndarray:
    """Boolean mask of basis states with n1 + n2 <= bulk_fraction * min(dims)."""
    bulk_fraction = float(bulk_fraction)
    if not 0.0 < bulk_fraction <= 1.0:
        raise ValueError(f"bulk_fraction must lie in (0, 1], got {bulk_fraction}")
    dims = tuple(int(d) for d in dims)
    return total_quanta(dims) <= bulk_fraction * min(dims)


def _bulk_norm(matrix: np.ndarray, mask: np.ndarray) -> float:
    idx = np.flatnonzero(mask)
    return float(np.linalg.norm(matrix[np.ix_(idx, idx)]))


def _report(name, num, den, bulk_fraction, dims, tolerance) -> ResidualReport:
    residual = num / den
    return ResidualReport(
        name=name,
        residual=float(residual),
        bulk_fraction=float(bulk_fraction),
        dims=tuple(int(d) for d in dims),
        tolerance=float(tolerance),
        passed=bool(residual < tolerance),
    )


def pseudo_hermiticity_residual(
    H: TruncatedOperator, mp: MetricPair, bulk: float, tolerance: float = REALITY_TOL
) -> ResidualReport:
    """How well H^dag = eta H eta^-1 holds on the bulk."""
    if H.dims != mp.eta.dims:
        raise ValueError(f"operator dims {H.dims} do not match metric dims {mp.eta.dims}")
    mask = bulk_projector(H.dims, bulk)
    delta = H.dag().matrix - mp.eta.matrix @ H.matrix @ mp.eta_inv.matrix
    return _report("pseudo_hermiticity", _bulk_norm(delta, mask), H.norm(), bulk, H.dims, tolerance)


def pseudo_pt_residual(
    H: TruncatedOperator, bulk: float = 1.0, tolerance: float = MACHINE_TOL
) -> ResidualReport:
    """How well H^dag equals parity @ conj(H) @ parity.

    For the coupled-oscillator Hamiltonian this is a structural identity
    of the construction (every term is parity even, and conjugation
    flips exactly the coupling), so it holds at machine precision on the
    whole truncated space, not only on the bulk.
    """
    mask = bulk_projector(H.dims, bulk)
    signs = np.where(total_quanta(H.dims) % 2 == 0, 1.0, -1.0)
    delta = H.dag().matrix - signs[:, None] * H.conj().matrix * signs[None, :]
    return _report("pseudo_pt", _bulk_norm(delta, mask), H.norm(), bulk, H.dims, tolerance)


def eta_tilde_commutator(
    H: TruncatedOperator, et: AntilinearMap, bulk: float, tolerance: float = REALITY_TOL
) -> ResidualReport:
    """Commutation of H with the antilinear map: H L = L conj(H) on the bulk.

    This is the apply-to-every-vector statement of H et = et H for an
    antilinear et with linear part L.
    """
    if H.dims != et.linear.dims:
        raise ValueError(f"operator dims {H.dims} do not match map dims {et.linear.dims}")
    if not et.conjugates:
        raise ValueError("expected an antilinear map (conjugates=True)")
    mask = bulk_projector(H.dims, bulk)
    L = et.linear.matrix
    delta = H.matrix @ L - L @ H.conj().matrix
    return _report("eta_tilde_commutator", _bulk_norm(delta, mask), H.norm(), bulk, H.dims, tolerance)


def eta_tilde_involution(
    et: AntilinearMap, bulk: float, tolerance: float = REALITY_TOL
) -> ResidualReport:
    """Squared antilinear map against the identity on the bulk.

    The square of (L, conj) is the linear map L conj(L); its bulk block
    should be the identity.  The residual is normalized by sqrt(bulk
    dimension), the Frobenius norm of the identity target.
    """
    mask = bulk_projector(et.linear.dims, bulk)
    square = et.compose(et)
    if square.conjugates:
        raise ValueError("square of an antilinear map should be linear")
    delta = square.linear.matrix - np.eye(square.linear.size)
    denom = np.sqrt(float(np.count_nonzero(mask)))
    return _report(
        "eta_tilde_involution", _bulk_norm(delta, mask), denom, bulk, et.linear.dims, tolerance
    )


def metric_conjugation_residual(
    mp: MetricPair, bulk: float, tolerance: float = REALITY_TOL
) -> ResidualReport:
    """Parity-conjugation sends the metric to its inverse on the bulk.

    Checks parity @ conj(eta) @ parity = eta_inv, the relation that makes
    the antilinear map square to the identity.
    """
    dims = mp.eta.dims
    mask = bulk_projector(dims, bulk)
    signs = np.where(total_quanta(dims) % 2 == 0, 1.0, -1.0)
    delta = signs[:, None] * mp.eta.conj().matrix * signs[None, :] - mp.eta_inv.matrix
    return _report(
        "metric_conjugation", _bulk_norm(delta, mask), mp.eta_inv.norm(), bulk, dims, tolerance
    )


def transform_rules_check(theta: float, dims, bulk: float, tolerance: float = REALITY_TOL):
    """Residuals of the four quadrature transformation rules.

    eta X1 eta^-1 = X1 cosh(theta) + i X2 sinh(theta)
    eta X2 eta^-1 = X2 cosh(theta) - i X1 sinh(theta)
    eta P1 eta^-1 = P1 cosh(theta) + i P2 sinh(theta)
    eta P2 eta^-1 = P2 cosh(theta) - i P1 sinh(theta)

    Returns four ResidualReports in the order (p1, p2, x1, x2).
    """
    mp = metric(theta, dims)
    x1, x2, p1, p2 = two_mode_xp(dims)
    mask = bulk_projector(dims, bulk)
    ch, sh = np.cosh(theta), np.sinh(theta)
    rules = [
        ("transform_p1", p1, p1 * ch + (1j * sh) * p2),
        ("transform_p2", p2, p2 * ch - (1j * sh) * p1),
        ("transform_x1", x1, x1 * ch + (1j * sh) * x2),
        ("transform_x2", x2, x2 * ch - (1j * sh) * x1),
    ]
    reports = []
    for name, op, rhs in rules:
        delta = mp.eta.matrix @ op.matrix @ mp.eta_inv.matrix - rhs.matrix
        reports.append(_report(name, _bulk_norm(delta, mask), rhs.norm(), bulk, dims, tolerance))
    return reports


def dyson_decoupling_residual(
    params: OscillatorParams,
    dims,
    bulk: float,
    tolerance: float = REALITY_TOL,
    mp: MetricPair | None = None,
) -> ResidualReport:
    """Similarity-transformed H against the analytic independent-oscillator form.

    Builds rho H rho^-1 and compares with the decoupled Hamiltonian whose
    frequencies are paired mode by mode (the stiffer mode carries the
    larger frequency).  An explicit ``mp`` overrides the metric, which is
    how the wrong-angle negative control is driven.
    """
    spec = mode_frequencies(params)
    if mp is None:
        mp = metric(spec.theta, dims)
    H = hamiltonian(params, dims)
    h = decoupled_hamiltonian(spec, dims)
    mask = bulk_projector(h.dims, bulk)
    delta = mp.rho.matrix @ H.matrix @ mp.rho_inv.matrix - h.matrix
    return _report("dyson_decoupling", _bulk_norm(delta, mask), h.norm(), bulk, h.dims, tolerance)


def identity_suite(
    params: OscillatorParams,
    dims,
    bulk: float = 0.5,
    tolerance: float = REALITY_TOL,
    machine_tolerance: float = MACHINE_TOL,
    theta_override: float | None = None,
):
    """Run the full set of ten identity checks with one shared metric.

    The checks, in order: pseudo-Hermiticity, the exact adjoint-parity
    identity, the antilinear commutator, the antilinear involution, the
    metric-conjugation relation, the four transformation rules, and the
    similarity decoupling.  ``theta_override`` substitutes a deliberately
    wrong mixing angle everywhere the metric enters, which should break
    the angle-sensitive checks while leaving the structural one intact.
    """
    theta = theta_of(params) if theta_override is None else float(theta_override)
    H = hamiltonian(params, dims)
    mp = metric(theta, dims)
    et = eta_tilde(mp)
    reports = [
        pseudo_hermiticity_residual(H, mp, bulk, tolerance),
        pseudo_pt_residual(H, 1.0, machine_tolerance),
        eta_tilde_commutator(H, et, bulk, tolerance),
        eta_tilde_involution(et, bulk, tolerance),
        metric_conjugation_residual(mp, bulk, tolerance),
    ]
    reports.extend(transform_rules_check(theta, dims, bulk, tolerance))
    reports.append(dyson_decoupling_residual(params, dims, bulk, tolerance, mp=mp))
    return reports


def bilinear_eta_tilde(u: np.ndarray, v: np.ndarray, et: AntilinearMap) -> complex:
    """Conjugation-free pairing transpose(et(u)) . v.

    Bilinear in v; the only conjugation is the one inside the antilinear
    map itself.  For eigenvectors of the coupled Hamiltonian the
    diagonal is real with sign (-1)^(n1+n2) and off-diagonal entries
    vanish as the truncation converges.
    """
    return complex(np.dot(et(np.asarray(u)), np.asarray(v)))


def normalize_bilinear(
    vectors: np.ndarray, et: AntilinearMap, degeneracy_threshold: float = REALITY_TOL
) -> np.ndarray:
    """Scale columns so each self-pairing has magnitude one.

    Only the magnitude is normalizable; the sign of the self-pairing is
    an invariant of the state and is left untouched (the scale factor is
    real positive).

    Raises
    ------
    IllConditionedNormalizationError
        If a self-pairing magnitude falls below ``degeneracy_threshold``
        relative to the vector's Euclidean norm squared, which signals a
        state too close to self-orthogonality to normalize stably.
    """
    v = np.array(vectors, dtype=complex, copy=True)
    if v.ndim == 1:
        v = v[:, None]
    for j in range(v.shape[1]):
        g = bilinear_eta_tilde(v[:, j], v[:, j], et)
        scale = float(np.vdot(v[:, j], v[:, j]).real)
        if abs(g) < degeneracy_threshold * scale:
            raise IllConditionedNormalizationError(
                f"self-pairing magnitude {abs(g):.3e} below threshold "
                f"{degeneracy_threshold:.1e} * {scale:.3e} for column {j}"
            )
        v[:, j] /= np.sqrt(abs(g))
    return v


def gram(
    vectors: np.ndarray,
    et: AntilinearMap,
    form: str = "eta-tilde",
    labels=None,
    tolerance: float = CONVERGENCE_TOL,
    degeneracy_threshold: float = REALITY_TOL,
) -> GramReport:
    """Pairwise bilinear table of eigenvectors, in either form.

    form="eta-tilde": the plain pairing; target is a signed diagonal.
    When (n1, n2) labels are supplied the target signs are
    (-1)^(n1 + n2), otherwise the measured signs are used and only
    diagonality is checked.

    form="c-eta-tilde": each row is premultiplied by the measured sign
    of its state's self-pairing; target is the identity.

    Vectors are normalized internally (idempotent when already
    normalized), so only the sign structure and the off-diagonal decay
    are being tested.
    """
    if form not in ("eta-tilde", "c-eta-tilde"):
        raise ValueError(f"unknown form {form!r}")
    v = normalize_bilinear(vectors, et, degeneracy_threshold)
    w = et(v).T
    g = w @ v
    k = g.shape[0]
    signs = tuple(1.0 if g[j, j].real >= 0 else -1.0 for j in range(k))
    if labels is not None:
        labels = tuple((int(a), int(b)) for a, b in labels)
        if len(labels) != k:
            raise ValueError(f"expected {k} labels, got {len(labels)}")
    if form == "eta-tilde":
        if labels is not None:
            target_signs = np.array([(-1.0) ** (a + b) for a, b in labels])
            target = "signed-diagonal"
        else:
            target_signs = np.array(signs)
            target = "measured-diagonal"
        deviation = float(np.abs(g - np.diag(target_signs)).max())
        matrix = g
    else:
        matrix = np.array(signs)[:, None] * g
        target = "identity"
        deviation = float(np.abs(matrix - np.eye(k)).max())
    return GramReport(
        form=form,
        matrix=matrix,
        target=target,
        signs=signs,
        labels=labels if labels is not None else (),
        max_deviation=deviation,
        tolerance=float(tolerance),
        passed=bool(deviation < tolerance),
    )


def _sorted_eigvals(matrix: np.ndarray) -> np.ndarray:
    values = sla.eigvals(matrix)
    return values[np.lexsort((values.imag, values.real))]


def matched_eigenpairs(params: OscillatorParams, dims, k: int):
    """Lowest-k labelled eigenpairs of the coupled H by direct eigensolve.

    Unlike :func:`etapt.model.model_eigensystem`, nothing here touches
    the similarity construction, so the returned vectors are an
    independent input for pairing and orthogonality tests.

    Returns
    -------
    (vectors, labels, values)
        ``vectors`` holds k matched eigenvector columns, ``labels`` the
        (n1, n2) assignments, ``values`` the matched eigenvalues.

    Raises
    ------
    BrokenPhaseError
        Outside the strictly unbroken regime, where analytic labels do
        not exist.
    TruncationLimitError
        If a level's nearest eigenvalue falls outside the matching
        window (half the minimal analytic gap).
    """
    dims = tuple(int(d) for d in dims)
    k = int(k)
    spec = decoupled_frequencies(params)
    if not params.is_unbroken:
        raise BrokenPhaseError(
            f"discriminant {params.discriminant} <= 0: analytic labels need the unbroken regime"
        )
    H = hamiltonian(params, dims)
    values, vectors = sla.eig(H.matrix)
    levels = lowest_levels(spec, k + 1)
    window = 0.5 * float(np.diff([lvl[0] for lvl in levels]).min())
    picked, labels = [], []
    taken = np.zeros(len(values), dtype=bool)
    for energy, m1, m2 in levels[:k]:
        dist = np.abs(values - energy)
        dist[taken] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > window:
            raise TruncationLimitError(
                f"no eigenvalue within {window:.3e} of analytic level "
                f"{energy:.6f} (n1={m1}, n2={m2}); nearest is {dist[j]:.3e} away"
            )
        taken[j] = True
        picked.append(j)
        labels.append((m1, m2))
    return vectors[:, picked], labels, values[picked]


def spectrum_report(
    params: OscillatorParams,
    dims,
    k: int,
    tol_convergence: float = CONVERGENCE_TOL,
    tol_reality: float = REALITY_TOL,
) -> SpectrumReport:
    """Dense eigensolve of the coupled H, audited against the analytic ladder.

    Unbroken phase: the k lowest analytic levels are each assigned their
    nearest numeric eigenvalue, injectively, with an exclusion window of
    half the minimal analytic gap; levels whose nearest eigenvalue falls
    outside the window are reported as unmatched rather than silently
    matched to something far away.

    Broken phase: no matching is attempted; instead every eigenvalue
    with |Im| above the reality tolerance must have a conjugate partner
    in the spectrum, and the worst partner distance is reported.
    """
    dims = tuple(int(d) for d in dims)
    k = int(k)
    n_total = dims[0] * dims[1]
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if k > n_total // 4:
        raise TruncationLimitError(
            f"k = {k} exceeds a quarter of the truncated dimension {n_total}; "
            "matched levels that high cannot be trusted"
        )
    H = hamiltonian(params, dims)
    values = _sorted_eigvals(H.matrix)

    if params.is_unbroken:
        spec = decoupled_frequencies(params)
        levels = lowest_levels(spec, k + 1)
        energies = np.array([lvl[0] for lvl in levels])
        window = 0.5 * float(np.diff(energies).min())
        matched, unmatched = [], []
        taken = np.zeros(len(values), dtype=bool)
        for energy, m1, m2 in levels[:k]:
            dist = np.abs(values - energy)
            dist[taken] = np.inf
            j = int(np.argmin(dist))
            entry = LevelMatch(
                n1=m1, n2=m2, energy=energy, value=complex(values[j]), abs_error=float(dist[j])
            )
            if dist[j] <= window:
                taken[j] = True
                matched.append(entry)
            else:
                unmatched.append(entry)
        max_imag = max((abs(m.value.imag) for m in matched), default=np.inf)
        passed = (
            not unmatched
            and all(m.abs_error < tol_convergence for m in matched)
            and max_imag < tol_reality
        )
        return SpectrumReport(
            dims=dims,
            k=k,
            phase="unbroken",
            numeric=tuple(complex(val) for val in values[:k]),
            matched=tuple(matched),
            unmatched=tuple(unmatched),
            max_imag=float(max_imag),
            n_nonreal=int(np.count_nonzero(np.abs(values.imag) > tol_reality)),
            pair_defect=0.0,
            tol_convergence=tol_convergence,
            tol_reality=tol_reality,
            passed=bool(passed),
        )

    nonreal = values[np.abs(values.imag) > tol_reality]
    pair_defect = 0.0
    for val in nonreal:
        pair_defect = max(pair_defect, float(np.abs(values - val.conjugate()).min()))
    lowest = values[:k]
    return SpectrumReport(
        dims=dims,
        k=k,
        phase="broken",
        numeric=tuple(complex(val) for val in lowest),
        matched=(),
        unmatched=(),
        max_imag=float(np.abs(lowest.imag).max()),
        n_nonreal=int(len(nonreal)),
        pair_defect=pair_defect,
        tol_convergence=tol_convergence,
        tol_reality=tol_reality,
        passed=bool(pair_defect < tol_reality),
    )


def _sweep_point(c1_sq, c2_sq, c3, dims, k, reality_tol):
    params = OscillatorParams(c1_sq, c2_sq, c3)
    values = _sorted_eigvals(hamiltonian(params, dims).matrix)
    max_imag = float(np.abs(values[:k].imag).max())
    return SweepPoint(
        c3=float(c3),
        max_imag=max_imag,
        unbroken_analytic=bool(params.is_unbroken),
        unbroken_numeric=bool(max_imag <= reality_tol),
    )


def phase_sweep(
    c1_sq: float,
    c2_sq: float,
    c3_grid,
    dims,
    k: int,
    reality_tol: float = REALITY_TOL,
    boundary_tol: float = BOUNDARY_TOL,
    jobs: int = 1,
) -> SweepReport:
    """Scan the coupling strength and locate the loss-of-reality boundary.

    For each grid value the k lowest eigenvalues by real part contribute
    a max |Im|; sorting by real part (rather than analytic matching)
    stays well defined through the exceptional point, where the analytic
    gap closes and matching windows collapse.  The detected boundary is
    the first grid point whose max |Im| exceeds ``boundary_tol``; when
    the grid straddles the analytic boundary |c2^2 - c1^2| the two must
    agree within one grid step, otherwise the report carries a warning
    (typically a sign that dims is too small).

    Grid points are independent; ``jobs`` > 1 evaluates them in a thread
    pool (the eigensolver releases the interpreter lock).  Results are
    assembled in grid order either way.
    """
    grid = [float(c3) for c3 in c3_grid]
    if not grid:
        raise ValueError("empty coupling grid")
    dims = tuple(int(d) for d in dims)
    k = int(k)
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            points = list(
                pool.map(
                    lambda c3: _sweep_point(c1_sq, c2_sq, c3, dims, k, reality_tol), grid
                )
            )
    else:
        points = [_sweep_point(c1_sq, c2_sq, c3, dims, k, reality_tol) for c3 in grid]

    analytic_boundary = abs(float(c2_sq) - float(c1_sq))
    detected = next((p.c3 for p in points if p.max_imag > boundary_tol), None)
    straddles = min(grid) <= analytic_boundary <= max(grid)
    step = float(np.max(np.abs(np.diff(sorted(grid))))) if len(grid) > 1 else 0.0

    within = None
    warning = None
    if straddles and len(grid) > 1:
        if detected is None:
            within = False
            warning = (
                "grid straddles the analytic boundary but no point exceeded "
                f"boundary_tol={boundary_tol:g}; dims may be too small"
            )
        else:
            within = bool(abs(detected - analytic_boundary) <= step * (1 + 1e-9))
            if not within:
                warning = (
                    f"detected boundary {detected:g} is more than one grid step from "
                    f"the analytic value {analytic_boundary:g}; dims may be too small"
                )
    return SweepReport(
        c1_sq=float(c1_sq),
        c2_sq=float(c2_sq),
        dims=dims,
        k=k,
        points=tuple(points),
        analytic_boundary=analytic_boundary,
        detected_boundary=detected,
        boundary_tol=float(boundary_tol),
        reality_tol=float(reality_tol),
        within_one_step=within,
        warning=warning,
        passed=bool(warning is None),
    )
