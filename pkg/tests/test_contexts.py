import random

import pytest

from maninalg.fields import QQ, ratfunc_field
from maninalg.contexts import (
    AlgebraStructureConstants,
    ContextError,
    ContextTooShallow,
    JacobiError,
    basis_vec,
    gl_bracket,
    group_algebra_constants,
    group_function_context,
    matrix_algebra_constants,
    pbw_context,
    qa_context,
    s_embedding_context,
    scalar_context,
    straighten_word,
    t_embedding_context,
    table_context,
    vec_is_zero,
)
from maninalg.quadratic import algebra_X, algebra_Xi, antisymmetrizer, tensor_algebra

QQq = ratfunc_field("q")

Z2 = (("e", "g"), {("e", "e"): "e", ("e", "g"): "g",
                   ("g", "e"): "g", ("g", "g"): "e"}, "e")


def ev(ctx, i):
    return basis_vec(ctx.field, ctx.dim_entry, i)


# -- qa contexts -----------------------------------------------------------------

def test_qa_context_polynomial_plane():
    ctx = qa_context(algebra_X(antisymmetrizer(QQ, 2)), 2)
    assert ctx.dim_entry == 2 and ctx.dim(2) == 3
    assert ctx.mul(ev(ctx, 1), ev(ctx, 0)) == ctx.mul(ev(ctx, 0), ev(ctx, 1))


def test_qa_context_grassmann_squares_vanish():
    ctx = qa_context(algebra_Xi(antisymmetrizer(QQ, 2)), 2)
    assert vec_is_zero(ctx.mul(ev(ctx, 0), ev(ctx, 0)))


def test_qa_context_tensor_algebra_free():
    ctx = qa_context(tensor_algebra(QQ, 2), 2)
    assert ctx.dim(2) == 4
    seen = set()
    for i in range(2):
        for j in range(2):
            v = ctx.mul(ev(ctx, i), ev(ctx, j))
            assert not vec_is_zero(v)
            seen.add(v)
    assert len(seen) == 4


def test_qa_context_shallow_errors():
    ctx = qa_context(algebra_X(antisymmetrizer(QQ, 2)), 2)
    with pytest.raises(ContextTooShallow):
        ctx.dim(3)
    with pytest.raises(ContextTooShallow):
        ctx.mul_basis(1, 0, 2, 0)


@pytest.mark.parametrize("alg", [
    algebra_X(antisymmetrizer(QQ, 2)),
    algebra_Xi(antisymmetrizer(QQ, 2)),
    tensor_algebra(QQ, 2),
])
def test_qa_context_associative_through_degree3(alg):
    ctx = qa_context(alg, 3)
    n = ctx.dim_entry
    for i in range(n):
        for j in range(n):
            for k in range(n):
                x, y, z = ev(ctx, i), ev(ctx, j), ev(ctx, k)
                left = ctx.mul(ctx.mul(x, y), z, da=2, db=1)
                right = ctx.mul(x, ctx.mul(y, z), da=1, db=2)
                assert left == right


# -- pbw contexts -----------------------------------------------------------------

def abelian_gamma(d):
    return {}


def test_pbw_abelian_is_commutative():
    ctx = pbw_context(QQ, ("a", "b"), abelian_gamma(2), 2)
    assert ctx.is_commutative()
    assert ctx.dim_entry == 3  # 1, a, b


def test_pbw_gl2_commutator():
    labels, gamma = gl_bracket(QQ, 2)
    ctx = pbw_context(QQ, labels, gamma, 2)
    # entries: 1, e11, e12, e21, e22 -> e12 at 2, e21 at 3
    e12, e21 = ev(ctx, 2), ev(ctx, 3)
    diff = tuple(a - b for a, b in zip(ctx.mul(e12, e21), ctx.mul(e21, e12)))
    # [E12, E21] = E11 - E22 included into P2
    expected = tuple(a - b for a, b in
                     zip(ctx.include_entry(ev(ctx, 1)), ctx.include_entry(ev(ctx, 4))))
    assert diff == expected


def test_pbw_rejects_jacobi_violation():
    one = QQ.one()
    # [x,y] = z, [y,z] = x, [z,x] = x: Jacobi sum is [x,y] = z, nonzero
    bad = {(0, 1): {2: one}, (1, 0): {2: -one},
           (1, 2): {0: one}, (2, 1): {0: -one},
           (2, 0): {0: one}, (0, 2): {0: -one}}
    with pytest.raises(JacobiError) as err:
        pbw_context(QQ, ("x", "y", "z"), bad, 2)
    assert err.value.triple == (0, 1, 2)


def test_pbw_rejects_asymmetric_table():
    one = QQ.one()
    with pytest.raises(ContextError):
        pbw_context(QQ, ("x", "y"), {(0, 1): {0: one}, (1, 0): {0: one}}, 2)


def test_pbw_unit_behaves():
    labels, gamma = gl_bracket(QQ, 2)
    ctx = pbw_context(QQ, labels, gamma, 2)
    for i in range(ctx.dim_entry):
        assert ctx.mul(ctx.unit, ev(ctx, i)) == ctx.include2[i]
        assert ctx.mul(ev(ctx, i), ctx.unit) == ctx.include2[i]


def test_pbw_straightening_confluent_under_random_strategies():
    labels, gamma = gl_bracket(QQ, 3)
    from maninalg.contexts import _bracket_table
    table = _bracket_table(QQ, 9, gamma)
    rng = random.Random(123)
    for _ in range(40):
        word = tuple(rng.randrange(9) for _ in range(rng.randint(2, 4)))
        reference = straighten_word(QQ, table, word)
        for trial in range(3):
            picker = random.Random(trial * 7 + 1)
            result = straighten_word(
                QQ, table, word,
                strategy=lambda w, inv: picker.choice(inv))
            assert result == reference


def test_pbw_associative_on_basis_triples():
    labels, gamma = gl_bracket(QQ, 2)
    ctx = pbw_context(QQ, labels, gamma, 3)
    rng = random.Random(9)
    for _ in range(30):
        i, j, k = (rng.randrange(ctx.dim_entry) for _ in range(3))
        x, y, z = ev(ctx, i), ev(ctx, j), ev(ctx, k)
        assert (ctx.mul(ctx.mul(x, y), z, da=2, db=1)
                == ctx.mul(x, ctx.mul(y, z), da=1, db=2))


# -- embedding contexts -------------------------------------------------------------

def test_s_embedding_scalar_algebra():
    one = QQ.one()
    alg = AlgebraStructureConstants(QQ, ["v"], [[[one]]], [one])
    ctx = s_embedding_context(alg, 2)
    assert ctx.dim_entry == 1
    assert ctx.delta[0] == (one,)
    assert ctx.counit[0] == one


def test_s_embedding_matrix_coalgebra():
    m = 2
    ctx = s_embedding_context(matrix_algebra_constants(QQ, m), 2)
    n = m * m
    for i in range(m):
        for j in range(m):
            row = ctx.delta[i * m + j]
            for a in range(n):
                for b in range(n):
                    ai, aj = divmod(a, m)
                    bi, bj = divmod(b, m)
                    want = QQ.one() if (ai == i and bj == j and aj == bi) else QQ.zero()
                    assert row[a * n + b] == want
            assert ctx.counit[i * m + j] == (QQ.one() if i == j else QQ.zero())


def test_s_embedding_z2_group_algebra():
    elements, mult, identity = Z2
    ctx = s_embedding_context(group_algebra_constants(QQ, elements, mult, identity), 2)
    one, zero = QQ.one(), QQ.zero()
    assert ctx.delta[0] == (one, zero, zero, one)   # Delta(v^e) = e@e + g@g
    assert ctx.delta[1] == (zero, one, one, zero)   # Delta(v^g) = e@g + g@e
    assert ctx.counit == (one, zero)


def test_s_embedding_delta_is_algebra_map_on_slices():
    ctx = s_embedding_context(matrix_algebra_constants(QQ, 2), 2)
    n = ctx.dim_entry
    dim2 = ctx.dim(2)
    for i in range(n):
        for j in range(n):
            prod = ctx.mul(ev(ctx, i), ev(ctx, j))
            lhs = [QQ.zero()] * (dim2 * dim2)
            for p, c in enumerate(prod):
                if not c.is_zero():
                    lhs = [x + c * y for x, y in zip(lhs, ctx.delta2[p])]
            rhs = [QQ.zero()] * (dim2 * dim2)
            for a in range(n):
                for b in range(n):
                    cab = ctx.delta[i][a * n + b]
                    if cab.is_zero():
                        continue
                    for c in range(n):
                        for d in range(n):
                            ccd = ctx.delta[j][c * n + d]
                            if ccd.is_zero():
                                continue
                            left = ctx.mul(ev(ctx, a), ev(ctx, c))
                            right = ctx.mul(ev(ctx, b), ev(ctx, d))
                            for p, cp in enumerate(left):
                                if cp.is_zero():
                                    continue
                                for q, cq in enumerate(right):
                                    if cq.is_zero():
                                        continue
                                    rhs[p * dim2 + q] = (rhs[p * dim2 + q]
                                                         + cab * ccd * cp * cq)
            assert lhs == rhs


def test_t_embedding_is_free():
    ctx = t_embedding_context(matrix_algebra_constants(QQ, 2), 2)
    assert ctx.dim(2) == 16
    assert not ctx.is_commutative()
    s_ctx = s_embedding_context(matrix_algebra_constants(QQ, 2), 2)
    assert s_ctx.is_commutative() and s_ctx.dim(2) == 10


def test_structure_constants_validation():
    one, zero = QQ.one(), QQ.zero()
    with pytest.raises(ContextError):
        AlgebraStructureConstants(QQ, ["a", "b"],
                                  [[[one, zero], [zero, zero]],
                                   [[zero, one], [one, zero]]],
                                  [one, zero])


# -- table contexts -----------------------------------------------------------------

def test_scalar_context_is_commutative_slice():
    ctx = scalar_context(QQ)
    assert ctx.is_commutative()
    assert ctx.validate() == []
    lifted = ctx.lift()
    assert lifted.dim_entry == 1


def test_scalar_context_over_ratfunc():
    ctx = scalar_context(QQq)
    assert ctx.validate() == []


def test_group_function_context_z2():
    elements, mult, identity = Z2
    ctx = group_function_context(QQ, elements, mult, identity)
    assert ctx.validate() == []
    assert ctx.is_commutative()
    # pointwise: f_e * f_g = 0
    assert vec_is_zero(ctx.mul(ev(ctx, 0), ev(ctx, 1)))


def test_table_context_coassociativity_witness():
    one, zero = QQ.one(), QQ.zero()
    # Delta(a) = a@b, Delta(b) = a@a: (Delta@id)Delta(a) = a@b@b differs
    # from (id@Delta)Delta(a) = a@a@a
    grid = [[(one, zero), (zero, zero)], [(zero, zero), (zero, one)]]
    delta = [(zero, one, zero, zero), (one, zero, zero, zero)]
    counit = [one, one]
    with pytest.raises(ContextError) as err:
        table_context(QQ, ("a", "b"), ("a", "b"), grid, delta=delta, counit=counit)
    assert "coassociativity" in str(err.value)


def test_table_context_shape_errors():
    one = QQ.one()
    with pytest.raises(ContextError):
        table_context(QQ, ("a",), ("p",), [[(one, one)]])


def test_opposite_context_reverses_products():
    labels, gamma = gl_bracket(QQ, 2)
    ctx = pbw_context(QQ, labels, gamma, 2)
    op = ctx.opposite()
    x, y = ev(ctx, 1), ev(ctx, 2)
    assert op.mul(x, y) == ctx.mul(y, x)


def test_lift_requires_depth():
    ctx = qa_context(algebra_X(antisymmetrizer(QQ, 2)), 2)
    with pytest.raises(ContextTooShallow):
        ctx.lift()
    deep = qa_context(algebra_X(antisymmetrizer(QQ, 2)), 4)
    lifted = deep.lift()
    assert lifted.dim_entry == deep.dim(2)
    assert lifted.dim(2) == deep.dim(4)
