import numpy as np
import pytest

from etapt.fock import (
    DimensionError,
    DimensionMismatchError,
    TruncatedOperator,
    commutator,
    embed_mode1,
    embed_mode2,
    identity_op,
    ladder,
    momentum_op,
    position_op,
    state_labels,
    total_quanta,
    two_mode_xp,
)


def test_ladder_matrix_elements():
    a = ladder(4).matrix
    expected = np.zeros((4, 4))
    for m in range(1, 4):
        expected[m - 1, m] = np.sqrt(m)
    assert np.array_equal(a, expected)


def test_ladder_rejects_tiny_dim():
    with pytest.raises(DimensionError):
        ladder(1)


def test_position_is_real_symmetric():
    x = position_op(6).matrix
    assert x.dtype.kind == "f"
    assert np.array_equal(x, x.T)


def test_position_squared_ground_entry():
    x = position_op(3)
    assert (x @ x).matrix[0, 0] == pytest.approx(0.5, rel=1e-14)


def test_momentum_is_imaginary_hermitian():
    p = momentum_op(6).matrix
    # entries are purely imaginary, so conjugation and transposition both
    # negate the matrix entrywise, with no roundoff involved
    assert np.array_equal(p.real, np.zeros_like(p.real))
    assert np.array_equal(p.conj(), -p)
    assert np.array_equal(p.T, -p)


def test_single_mode_truncation_defect():
    n = 5
    defect = commutator(position_op(n), momentum_op(n)).matrix
    expected = 1j * np.eye(n)
    expected[n - 1, n - 1] = 1j * (1 - n)
    assert np.allclose(defect, expected, atol=1e-14)


def test_two_mode_defect_is_kronecker_of_single_mode():
    n1, n2 = 4, 3
    x1, x2, p1, p2 = two_mode_xp((n1, n2))
    single = commutator(position_op(n1), momentum_op(n1)).matrix
    assert np.allclose(
        commutator(x1, p1).matrix, np.kron(single, np.eye(n2)), atol=1e-14
    )


def test_cross_mode_operators_commute_exactly():
    x1, x2, p1, p2 = two_mode_xp((4, 4))
    assert commutator(x1, p2).norm() == 0.0
    assert commutator(x1, x2).norm() == 0.0
    assert commutator(p1, x2).norm() == 0.0


def test_embed_shapes_and_dims():
    op = embed_mode1(position_op(3), 5)
    assert op.dims == (3, 5)
    assert op.matrix.shape == (15, 15)
    op = embed_mode2(5, position_op(3))
    assert op.dims == (5, 3)


def test_embed_rejects_multi_mode_input():
    two_mode = embed_mode1(position_op(3), 3)
    with pytest.raises(DimensionMismatchError):
        embed_mode1(two_mode, 3)
    with pytest.raises(DimensionMismatchError):
        embed_mode2(3, two_mode)


def test_embed_is_linear():
    a = position_op(4)
    b = momentum_op(4)
    lhs = embed_mode1(a + 2.0 * b, 3)
    rhs = embed_mode1(a, 3) + 2.0 * embed_mode1(b, 3)
    assert (lhs - rhs).norm() == 0.0


def test_operator_requires_square_matrix():
    with pytest.raises(DimensionError):
        TruncatedOperator(np.zeros((3, 4)), (3,))


def test_operator_requires_consistent_dims():
    with pytest.raises(DimensionError):
        TruncatedOperator(np.eye(6), (2, 2))
    with pytest.raises(DimensionError):
        TruncatedOperator(np.eye(2), (2, 1))


def test_binary_ops_reject_mismatched_dims():
    a = identity_op((2, 3))
    b = identity_op((3, 2))
    with pytest.raises(DimensionMismatchError):
        a + b
    with pytest.raises(DimensionMismatchError):
        a @ b


def test_operator_algebra():
    x = position_op(4)
    p = momentum_op(4)
    assert ((x + p) - p - x).norm() == 0.0
    assert ((2.0 * x) - (x * 2.0)).norm() == 0.0
    assert (-x + x).norm() == 0.0
    assert (x @ identity_op((4,)) - x).norm() == 0.0
    assert x.dag().matrix == pytest.approx(x.matrix)
    assert p.dag().matrix == pytest.approx(p.matrix)


def test_matrix_is_read_only():
    x = position_op(3)
    with pytest.raises(ValueError):
        x.matrix[0, 0] = 7.0


def test_scalar_multiplication_rejects_operators():
    x = position_op(3)
    with pytest.raises(TypeError):
        x * x  # matmul is the operator product, * is scalar only


def test_state_labels_row_major_mode1_slow():
    n1, n2 = state_labels((2, 3))
    assert n1.tolist() == [0, 0, 0, 1, 1, 1]
    assert n2.tolist() == [0, 1, 2, 0, 1, 2]


def test_total_quanta():
    assert total_quanta((2, 2)).tolist() == [0, 1, 1, 2]
    assert total_quanta((3,)).tolist() == [0, 1, 2]


def test_two_mode_xp_requires_two_dims():
    with pytest.raises(DimensionError):
        two_mode_xp((4,))
    with pytest.raises(DimensionError):
        two_mode_xp((4, 4, 4))
