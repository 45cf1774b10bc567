import numpy as np
import pytest

from etapt.fock import TruncatedOperator, identity_op, total_quanta, two_mode_xp
from etapt.model import OscillatorParams, theta_of
from etapt.symm import (
    AntilinearMap,
    DegenerateEigenbasisError,
    MetricPair,
    boost_generator,
    charge_from_eigenbasis,
    eta_tilde,
    metric,
    parity,
    pt_conjugate,
    pt_map,
    time_reversal,
)
from etapt.verify import matched_eigenpairs


def test_parity_two_by_two():
    assert np.array_equal(parity((2, 2)).matrix, np.diag([1.0, -1.0, -1.0, 1.0]))


def test_parity_squares_to_identity():
    pi = parity((3, 4))
    assert (pi @ pi - identity_op((3, 4))).norm() == 0.0


def test_parity_anticommutes_with_quadratures():
    x1, x2, p1, p2 = two_mode_xp((5, 5))
    pi = parity((5, 5))
    for op in (x1, x2, p1, p2):
        assert (pi @ op @ pi + op).norm() == 0.0


def test_time_reversal_squares_to_identity():
    t = time_reversal((3, 3))
    assert t.conjugates
    assert t.compose(t).is_identity()


def test_pt_map_squares_to_identity():
    pt = pt_map((4, 4))
    assert pt.compose(pt).is_identity()


@pytest.mark.parametrize("flag1", [False, True])
@pytest.mark.parametrize("flag2", [False, True])
def test_antilinear_composition_matches_function_composition(flag1, flag2):
    rng = np.random.default_rng(7)
    dims = (3, 2)
    size = 6
    l1 = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    l2 = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    f = AntilinearMap(TruncatedOperator(l1, dims), flag1)
    g = AntilinearMap(TruncatedOperator(l2, dims), flag2)
    v = rng.normal(size=size) + 1j * rng.normal(size=size)
    assert f.compose(g).conjugates == (flag1 ^ flag2)
    assert f.compose(g)(v) == pytest.approx(f(g(v)))


def test_pt_conjugate_matches_map_action():
    rng = np.random.default_rng(3)
    dims = (3, 3)
    op_mat = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    op = TruncatedOperator(op_mat, dims)
    pt = pt_map(dims)
    v = rng.normal(size=9) + 1j * rng.normal(size=9)
    # K op K applied to v, with K the parity-conjugation map
    assert pt_conjugate(op).matrix @ v == pytest.approx(pt(op.matrix @ pt(v)))


def test_boost_generator_structure():
    dims = (6, 5)
    gen = boost_generator(dims).matrix
    # purely imaginary, antisymmetric, Hermitian: all bitwise by construction
    assert np.array_equal(gen.real, np.zeros_like(gen.real))
    assert np.array_equal(gen.T, -gen)
    assert np.array_equal(gen.conj().T, gen)


def test_boost_generator_ladder_form():
    from etapt.fock import ladder, embed_mode1, embed_mode2

    n1, n2 = 5, 4
    a1 = embed_mode1(ladder(n1), n2).matrix
    a2 = embed_mode2(n1, ladder(n2)).matrix
    expected = 1j * (a1 @ a2.conj().T - a1.conj().T @ a2)
    assert np.allclose(boost_generator((n1, n2)).matrix, expected, atol=1e-14)


def test_boost_generator_conserves_total_occupation():
    dims = (5, 5)
    gen = boost_generator(dims).matrix
    tot = total_quanta(dims)
    off_shell = gen[tot[:, None] != tot[None, :]]
    assert np.abs(off_shell).max() == 0.0


def test_metric_returns_consistent_family():
    mp = metric(0.3, (8, 8))
    assert isinstance(mp, MetricPair)
    assert mp.theta == 0.3
    eye = np.eye(64)
    assert np.linalg.norm(mp.eta.matrix @ mp.eta_inv.matrix - eye) < 1e-11
    assert np.linalg.norm(mp.rho.matrix @ mp.rho.matrix - mp.eta.matrix) < 1e-11
    assert np.linalg.norm(mp.rho.matrix @ mp.rho_inv.matrix - eye) < 1e-12


def test_metric_is_hermitian_positive():
    mp = metric(-0.55, (8, 8))
    h = mp.eta.matrix
    assert np.linalg.norm(h - h.conj().T) < 1e-10 * np.linalg.norm(h)
    assert np.linalg.eigvalsh(h).min() > 0.0


def test_metric_at_zero_angle_is_identity():
    mp = metric(0.0, (6, 6))
    assert np.linalg.norm(mp.eta.matrix - np.eye(36)) < 1e-13


def test_metric_commutes_with_parity():
    dims = (8, 8)
    mp = metric(0.4, dims)
    pi = parity(dims).matrix
    comm = pi @ mp.eta.matrix - mp.eta.matrix @ pi
    assert np.linalg.norm(comm) < 1e-12 * mp.eta.norm()


def test_eta_tilde_is_parity_times_conjugated_metric():
    dims = (6, 6)
    mp = metric(-0.5, dims)
    et = eta_tilde(mp)
    assert et.conjugates
    expected = parity(dims).matrix @ mp.eta.conj().matrix
    assert np.allclose(et.linear.matrix, expected, atol=1e-14)


def test_eta_tilde_at_zero_angle_reduces_to_pt():
    dims = (5, 5)
    et = eta_tilde(metric(0.0, dims))
    assert np.linalg.norm(et.linear.matrix - parity(dims).matrix) < 1e-13


def test_charge_reproduces_signs_and_squares_to_projector():
    params = OscillatorParams(2.0, 1.0, 0.5)
    dims = (16, 16)
    vectors, labels, _values = matched_eigenpairs(params, dims, 4)
    et = eta_tilde(metric(theta_of(params), dims))
    signs = [(-1.0) ** (a + b) for a, b in labels]
    charge = charge_from_eigenbasis(vectors, signs, et)
    for j, sign in enumerate(signs):
        v = vectors[:, j]
        assert np.linalg.norm(charge.matrix @ v - sign * v) < 1e-8 * np.linalg.norm(v)
        # squaring acts as the identity on the eigenvector span
        assert np.linalg.norm(charge.matrix @ (charge.matrix @ v) - v) < 1e-8 * np.linalg.norm(v)


def test_charge_rejects_degenerate_eigenbasis():
    params = OscillatorParams(2.0, 1.0, 0.5)
    dims = (12, 12)
    vectors, labels, _values = matched_eigenpairs(params, dims, 3)
    doubled = np.column_stack([vectors, vectors[:, 0] * (1 + 1e-12)])
    et = eta_tilde(metric(theta_of(params), dims))
    with pytest.raises(DegenerateEigenbasisError):
        charge_from_eigenbasis(doubled, [1.0, -1.0, -1.0, 1.0], et)


def test_charge_validates_shapes():
    params = OscillatorParams(2.0, 1.0, 0.5)
    dims = (8, 8)
    vectors, labels, _values = matched_eigenpairs(params, dims, 2)
    et = eta_tilde(metric(theta_of(params), dims))
    with pytest.raises(ValueError):
        charge_from_eigenbasis(vectors, [1.0], et)
    with pytest.raises(ValueError):
        charge_from_eigenbasis(vectors[:5], [1.0, -1.0], et)
