import random
from fractions import Fraction

import pytest

from maninalg.fields import QQ, ratfunc_field
from maninalg.linalg import (
    Matrix,
    ShapeError,
    Subspace,
    annihilator,
    kernel,
    kron,
    permute_subspace,
    rref,
    shuffle_23,
    shuffle_perm,
    subspace_ops,
    tensor_subspace,
)

QQq = ratfunc_field("q")


def mat(rows, field=QQ):
    return Matrix.from_rows(field, rows)


def random_matrix(field, rows, cols, rng, density=0.7):
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if rng.random() < density:
                row.append(field.random_element(rng, max_degree=1, span=3))
            else:
                row.append(field.zero())
        entries.append(row)
    return Matrix(field, entries)


def test_rref_rank_one():
    red, pivots, rank = rref(mat([[2, 4], [1, 2]]))
    assert rank == 1 and pivots == (0,)
    assert red.entries[0] == (QQ.one(), QQ.from_int(2))


def test_rref_identity_fixed_point():
    eye = Matrix.identity(QQ, 3)
    red, pivots, rank = rref(eye)
    assert red == eye and rank == 3 and pivots == (0, 1, 2)


def test_rref_ratfunc_dependent_rows():
    q = QQq.gen()
    m = Matrix(QQq, [[q, QQq.one()], [q * q, q]])
    _, _, rank = rref(m)
    assert rank == 1


def test_kernel_identity_is_zero():
    assert kernel(Matrix.identity(QQ, 4)).dim == 0


def test_kernel_of_difference_row():
    ker = kernel(mat([[1, -1]]))
    assert ker.dim == 1
    assert ker.basis.entries[0] == (QQ.one(), QQ.one())


def test_kernel_grassmann_relations_dim3():
    # annihilator of the commutator row: spans e11, e12+e21, e22
    ker = kernel(mat([[0, 1, -1, 0]]))
    assert ker.dim == 3
    expected = Subspace.from_rows(QQ, 4, [
        [QQ.one(), QQ.zero(), QQ.zero(), QQ.zero()],
        [QQ.zero(), QQ.one(), QQ.one(), QQ.zero()],
        [QQ.zero(), QQ.zero(), QQ.zero(), QQ.one()],
    ])
    assert ker == expected


def test_subspace_lattice_basics():
    e1 = Subspace.from_rows(QQ, 2, [[QQ.one(), QQ.zero()]])
    e2 = Subspace.from_rows(QQ, 2, [[QQ.zero(), QQ.one()]])
    assert subspace_ops(e1, e1, "contains")
    assert subspace_ops(e1, e2, "sum") == Subspace.full(QQ, 2)
    assert not subspace_ops(e1, e2, "equals")


def test_subspace_intersection_oracle():
    one, zero = QQ.one(), QQ.zero()
    sa = Subspace.from_rows(QQ, 4, [[one, one, zero, zero], [zero, zero, one, zero]])
    sb = Subspace.from_rows(QQ, 4, [[one, one, zero, zero], [zero, zero, zero, one]])
    meet = subspace_ops(sa, sb, "intersect")
    assert meet == Subspace.from_rows(QQ, 4, [[one, one, zero, zero]])


def test_subspace_ambient_mismatch():
    with pytest.raises(ShapeError):
        subspace_ops(Subspace.full(QQ, 2), Subspace.full(QQ, 3), "sum")


def antisymmetrizer2():
    h = Fraction(1, 2)
    return mat([[0, 0, 0, 0], [0, h, -h, 0], [0, -h, h, 0], [0, 0, 0, 0]])


def test_kron_identities():
    assert kron(Matrix.identity(QQ, 2), Matrix.identity(QQ, 2)) == Matrix.identity(QQ, 4)
    nil = mat([[0, 1], [0, 0]])
    assert kron(nil, Matrix.identity(QQ, 1)) == nil


def test_kron_rank_multiplicativity():
    a2 = antisymmetrizer2()
    _, _, r = rref(kron(a2, a2))
    assert r == 1


def test_shuffle_trivial_and_index_map():
    assert shuffle_23((1, 1), QQ) == Matrix.identity(QQ, 1)
    perm = shuffle_perm(2, 2)
    # basis vector (1,2,1,2) maps to (1,1,2,2); 0-based tuples (0,1,0,1) -> (0,0,1,1)
    src = ((0 * 2 + 1) * 2 + 0) * 2 + 1
    dst = ((0 * 2 + 0) * 2 + 1) * 2 + 1
    assert perm[src] == dst


def test_shuffle_is_involution_when_dims_agree():
    s = shuffle_23((2, 2), QQ)
    assert s @ s == Matrix.identity(QQ, 16)


def test_matrix_inverse():
    m = mat([[1, 2], [3, 5]])
    assert m @ m.inverse() == Matrix.identity(QQ, 2)
    with pytest.raises(ShapeError):
        mat([[1, 2], [2, 4]]).inverse()


@pytest.mark.parametrize("field", [QQ, QQq])
def test_rank_transpose_randomized(field):
    rng = random.Random(4242)
    for _ in range(500):
        m = random_matrix(field, rng.randint(1, 4), rng.randint(1, 4), rng)
        assert rref(m)[2] == rref(m.transpose())[2]


@pytest.mark.parametrize("field", [QQ, QQq])
def test_modular_law_randomized(field):
    rng = random.Random(777)
    for _ in range(60):
        ambient = rng.randint(2, 5)
        sa = Subspace.from_rows(
            field, ambient, random_matrix(field, rng.randint(1, 3), ambient, rng).entries)
        sb = Subspace.from_rows(
            field, ambient, random_matrix(field, rng.randint(1, 3), ambient, rng).entries)
        assert sa.dim + sb.dim == sa.sum(sb).dim + sa.intersect(sb).dim


def test_annihilator_duality_randomized():
    rng = random.Random(31337)
    for _ in range(100):
        m = random_matrix(QQ, rng.randint(1, 4), rng.randint(1, 5), rng)
        assert annihilator(Subspace.from_matrix(m)) == kernel(m)


def test_tensor_subspace_dims():
    rng = random.Random(5)
    sa = Subspace.from_matrix(random_matrix(QQ, 2, 3, rng))
    sb = Subspace.from_matrix(random_matrix(QQ, 2, 4, rng))
    assert tensor_subspace(sa, sb).dim == sa.dim * sb.dim


def test_permute_subspace_roundtrip():
    rng = random.Random(6)
    s = Subspace.from_matrix(random_matrix(QQ, 2, 4, rng))
    perm = [2, 0, 3, 1]
    inv = [perm.index(i) for i in range(4)]
    assert permute_subspace(permute_subspace(s, perm), inv) == s
