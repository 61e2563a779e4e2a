"""First-order matrices over contexts and the Manin-pair condition.

The primitive is the two-matrix check

    (A X(1) Y(2) (1-B))^{ij}_{kl}
        = sum_{a,b,c,d} A^{ij}_{ab} mul(X^a_c, Y^b_d) (1-B)^{cd}_{kl},

an element of the context's P2 space, required to vanish for every
(i,j,k,l).  X = Y recovers the single-matrix Manin condition.  Failure
reports always carry the first offending component in lexicographic order
together with its P2 expansion, so results are deterministic regardless of
evaluation order.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .contexts import MulContext, Vec, basis_vec, scalar_context, vec_is_zero, zero_vec
from .fields import FieldElement
from .linalg import Matrix, ShapeError, kron
from .quadratic import Idempotent, QuadraticAlgebra, cohom_algebra, extends_to_hom


class Report:
    """Outcome of a check: verdict plus an optional witness and expansion."""

    __slots__ = ("check", "passed", "witness", "expansion", "flags")

    def __init__(self, check: str, passed: bool, witness=None, expansion=None,
                 flags: Optional[dict] = None):
        self.check = check
        self.passed = passed
        self.witness = witness
        self.expansion = expansion
        self.flags = flags or {}

    def __bool__(self):
        return self.passed

    def as_dict(self) -> dict:
        out = {"check": self.check, "pass": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.expansion is not None:
            out["expansion"] = self.expansion
        if self.flags:
            out["flags"] = dict(self.flags)
        return out

    def __repr__(self):
        state = "pass" if self.passed else f"FAIL at {self.witness}"
        return f"Report({self.check}: {state})"


class FirstOrderMatrix:
    """Rectangular matrix whose entries are vectors in a context's entry space."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: MulContext, entries: Sequence[Sequence[Vec]]):
        entries = tuple(tuple(tuple(v) for v in row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        dim = ctx.dim_entry
        for row in entries:
            if len(row) != cols:
                raise ShapeError("ragged rows")
            for v in row:
                if len(v) != dim:
                    raise ShapeError("entry vector dimension mismatch")
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def zero(cls, ctx: MulContext, rows: int, cols: int) -> "FirstOrderMatrix":
        z = zero_vec(ctx.field, ctx.dim_entry)
        return cls(ctx, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ctx: MulContext, n: int) -> "FirstOrderMatrix":
        if ctx.unit is None:
            raise ShapeError("context has no designated unit")
        z = zero_vec(ctx.field, ctx.dim_entry)
        return cls(ctx, [[ctx.unit if i == j else z for j in range(n)]
                         for i in range(n)])

    @classmethod
    def from_generators(cls, ctx: MulContext, rows: int, cols: int,
                        position=None) -> "FirstOrderMatrix":
        """Matrix whose (i,j) entry is the basis vector at position(i,j)."""
        pos = position or (lambda i, j: i * cols + j)
        dim = ctx.dim_entry
        return cls(ctx, [[basis_vec(ctx.field, dim, pos(i, j))
                          for j in range(cols)] for i in range(rows)])

    def __getitem__(self, ij) -> Vec:
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        return (isinstance(other, FirstOrderMatrix)
                and self.ctx.compatible(other.ctx)
                and self.entries == other.entries)

    def __hash__(self):
        return hash(self.entries)

    def transpose(self) -> "FirstOrderMatrix":
        return FirstOrderMatrix(self.ctx, list(zip(*self.entries)))

    def __repr__(self):
        return f"FirstOrderMatrix({self.rows}x{self.cols} over {self.ctx.kind})"


def as_first_order(matrix: Matrix, ctx: Optional[MulContext] = None) -> FirstOrderMatrix:
    """Interpret a scalar matrix over the field context E = span{1}."""
    ctx = ctx or scalar_context(matrix.field)
    if ctx.dim_entry != 1:
        raise ShapeError("scalar interpretation needs a 1-dimensional entry space")
    return FirstOrderMatrix(ctx, [[(e,) for e in row] for row in matrix.entries])


def _require_shared_ctx(*matrices: FirstOrderMatrix) -> MulContext:
    ctx = matrices[0].ctx
    for m in matrices[1:]:
        if not ctx.compatible(m.ctx):
            raise ShapeError("context mismatch between first-order matrices")
    return ctx


def _p2_expansion(ctx: MulContext, vec: Vec) -> list[str]:
    labels = ctx.product_labels[2]
    return [f"{c} * {labels[p]}" for p, c in enumerate(vec) if not c.is_zero()]


def check_manin(a: Idempotent, b: Idempotent, x: FirstOrderMatrix,
                y: FirstOrderMatrix, ctx: Optional[MulContext] = None) -> Report:
    """Evaluate A X(1) Y(2) (1-B) in P2; pass iff every component vanishes."""
    if ctx is None:
        ctx = _require_shared_ctx(x, y)
    else:
        _require_shared_ctx(x, y)
        if not ctx.compatible(x.ctx):
            raise ShapeError("matrices do not live over the supplied context")
    n, m = a.n, b.n
    if (x.rows, x.cols) != (n, m) or (y.rows, y.cols) != (n, m):
        raise ShapeError(f"matrices must be {n}x{m} for this idempotent pair")
    if a.field != ctx.field or b.field != ctx.field:
        raise ShapeError("idempotent field mismatch")
    field = ctx.field
    dim2 = ctx.dim(2)
    one_minus_b = Matrix.identity(field, m * m) - b.matrix

    # column combinations first: W[(ab)][(kl)] = sum_cd mul(X^a_c, Y^b_d) (1-B)^{cd}_{kl}
    w: list[list[Optional[Vec]]] = [[None] * (m * m) for _ in range(n * n)]
    for aa in range(n):
        for bb in range(n):
            row_idx = aa * n + bb
            for kl in range(m * m):
                acc = zero_vec(field, dim2)
                touched = False
                for cd in range(m * m):
                    coeff = one_minus_b.entries[cd][kl]
                    if coeff.is_zero():
                        continue
                    c, d = divmod(cd, m)
                    prod = ctx.mul(x.entries[aa][c], y.entries[bb][d])
                    acc = tuple(o + coeff * p for o, p in zip(acc, prod))
                    touched = True
                w[row_idx][kl] = acc if touched else acc

    for ij in range(n * n):
        arow = a.matrix.entries[ij]
        for kl in range(m * m):
            acc = zero_vec(field, dim2)
            for ab in range(n * n):
                coeff = arow[ab]
                if coeff.is_zero():
                    continue
                acc = tuple(o + coeff * p for o, p in zip(acc, w[ab][kl]))
            if not vec_is_zero(acc):
                i, j = divmod(ij, n)
                k, l = divmod(kl, m)
                witness = (i + 1, j + 1, k + 1, l + 1)
                return Report("manin", False, witness=witness,
                              expansion=_p2_expansion(ctx, acc))
    return Report("manin", True)


def commute_entrywise(m: FirstOrderMatrix, n: FirstOrderMatrix) -> bool:
    """True iff every entry of M commutes with every entry of N in P2."""
    ctx = _require_shared_ctx(m, n)
    for row_m in m.entries:
        for x in row_m:
            for row_n in n.entries:
                for y in row_n:
                    if ctx.mul(x, y) != ctx.mul(y, x):
                        return False
    return True


def commute_witness(m: FirstOrderMatrix, n: FirstOrderMatrix):
    ctx = _require_shared_ctx(m, n)
    for i, row_m in enumerate(m.entries):
        for j, x in enumerate(row_m):
            for k, row_n in enumerate(n.entries):
                for l, y in enumerate(row_n):
                    if ctx.mul(x, y) != ctx.mul(y, x):
                        return (i + 1, j + 1, k + 1, l + 1)
    return None


def direct_sum(m: FirstOrderMatrix, n: FirstOrderMatrix) -> FirstOrderMatrix:
    """Block-diagonal sum with zero entry vectors off the blocks."""
    ctx = _require_shared_ctx(m, n)
    z = zero_vec(ctx.field, ctx.dim_entry)
    out = []
    for row in m.entries:
        out.append(list(row) + [z] * n.cols)
    for row in n.entries:
        out.append([z] * m.cols + list(row))
    return FirstOrderMatrix(ctx, out)


def dot_tensor(m: FirstOrderMatrix, n: FirstOrderMatrix) -> FirstOrderMatrix:
    """Entrywise product matrix P^{ia}_{jb} = M^i_j N^a_b over the lifted context."""
    ctx = _require_shared_ctx(m, n)
    lifted = ctx.lift()
    out = []
    for i in range(m.rows):
        for a in range(n.rows):
            row = []
            for j in range(m.cols):
                for b in range(n.cols):
                    row.append(ctx.mul(m.entries[i][j], n.entries[a][b]))
            out.append(row)
    return FirstOrderMatrix(lifted, out)


def multiplicative_check(m: FirstOrderMatrix) -> bool:
    """Delta(M^i_j) = sum_k M^i_k @ M^k_j and eps(M^i_j) = delta^i_j."""
    ctx = m.ctx
    if not ctx.has_coalgebra():
        raise ShapeError("context has no coalgebra tables")
    if m.rows != m.cols:
        raise ShapeError("multiplicative matrices must be square")
    field = ctx.field
    dim = ctx.dim_entry
    size = m.rows
    for i in range(size):
        for j in range(size):
            lhs = [field.zero()] * (dim * dim)
            for p, c in enumerate(m.entries[i][j]):
                if not c.is_zero():
                    lhs = [u + c * v for u, v in zip(lhs, ctx.delta[p])]
            rhs = [field.zero()] * (dim * dim)
            for k in range(size):
                left = m.entries[i][k]
                right = m.entries[k][j]
                for p, cp in enumerate(left):
                    if cp.is_zero():
                        continue
                    base = p * dim
                    for q, cq in enumerate(right):
                        if not cq.is_zero():
                            rhs[base + q] = rhs[base + q] + cp * cq
            if lhs != rhs:
                return False
            eps = sum((c * ctx.counit[p] for p, c in enumerate(m.entries[i][j])),
                      field.zero())
            want = field.one() if i == j else field.zero()
            if eps != want:
                return False
    return True


# ---------------------------------------------------------------------------
# scalar Manin matrices and functoriality of the internal cohom
# ---------------------------------------------------------------------------

def is_scalar_manin(a: Idempotent, b: Idempotent, k: Matrix) -> bool:
    """A (K@K) (1-B) = 0 for a scalar matrix K, exactly."""
    if k.field != a.field or k.field != b.field:
        raise ShapeError("field mismatch")
    if (k.rows, k.cols) != (a.n, b.n):
        raise ShapeError(f"scalar matrix must be {a.n}x{b.n}")
    eye = Matrix.identity(k.field, b.n * b.n)
    return (a.matrix @ kron(k, k) @ (eye - b.matrix)).is_zero()


class ManinPreconditionError(ValueError):
    pass


def cohom_map(k: Matrix, m: Matrix,
              a: Idempotent, a2: Idempotent,
              b: Idempotent, b2: Idempotent) -> tuple[Matrix, bool]:
    """Generator map of cohom functoriality: M[i,j] -> sum M^i_a K^b_j N[a,b].

    K must be a (B2,B)-Manin scalar matrix and M an (A,A2)-Manin scalar
    matrix; the returned flag is the extends_to_hom verdict from
    cohom(B,A) to cohom(B2,A2).
    """
    if not is_scalar_manin(b2, b, k):
        raise ManinPreconditionError("K is not a (B',B)-Manin matrix")
    if not is_scalar_manin(a, a2, m):
        raise ManinPreconditionError("M is not an (A,A')-Manin matrix")
    n, n2 = a.n, a2.n
    mm, m2 = b.n, b2.n
    field = k.field
    rows = []
    for i in range(n):
        for j in range(mm):
            row = []
            for aa in range(n2):
                for bb in range(m2):
                    row.append(m.entries[i][aa] * k.entries[bb][j])
            rows.append(row)
    f1 = Matrix(field, rows)
    src = cohom_algebra(b, a)
    dst = cohom_algebra(b2, a2)
    return f1, extends_to_hom(f1, src, dst)


def universal_matrix(b: Idempotent, a: Idempotent, ctx: MulContext) -> FirstOrderMatrix:
    """The generator matrix of cohom(B,A) over a context whose entries are
    the cohom generators in row-major order."""
    if ctx.dim_entry != a.n * b.n:
        raise ShapeError("context entry space does not match the generator count")
    return FirstOrderMatrix.from_generators(ctx, a.n, b.n)
