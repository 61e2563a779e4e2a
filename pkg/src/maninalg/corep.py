"""Comonoid presentations and quantum representations.

Two comonoid kinds are supported, mirroring the split between connected
quadratic comonoids (a quadratic algebra with a coalgebra structure on its
generators, subject to the extension conditions into the white product)
and bialgebra slices (a MulContext with coproduct and counit tables, all
graded pieces of one bialgebra).  Tensor and duality operations are gated
to the slice kind: products of entries leave the degree-1 component in the
connected case.

A corepresentation is a multiplicative first-order B-Manin matrix over the
comonoid's entry space; inverse matrices (antipode data) are always
supplied by the caller and verified, never synthesized.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .contexts import (
    AlgebraStructureConstants,
    ContextTooShallow,
    MulContext,
    Vec,
    _coalgebra_violations,
    basis_vec,
    qa_context,
    s_embedding_context,
    t_embedding_context,
    vec_is_zero,
)
from .fields import FieldElement
from .linalg import Matrix, ShapeError
from .manin import (
    FirstOrderMatrix,
    Report,
    check_manin,
    commute_entrywise,
    commute_witness,
    direct_sum,
    dot_tensor,
    is_scalar_manin,
    multiplicative_check,
)
from .quadratic import (
    Idempotent,
    QuadraticAlgebra,
    algebra_X,
    antisymmetrizer,
    black_tep,
    cohom_algebra,
    conj21,
    cop,
    dis,
    make_idempotent,
    product,
    tep,
    zero_idempotent,
)


class NonCommutingEntries(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"matrices do not entry-wise commute; witness {witness}")


class NonExistence(ValueError):
    def __init__(self, report: Report):
        self.report = report
        super().__init__(f"product does not exist; witness {report.witness}")


class InverseFailure(ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"matrix inverse verification failed at {witness}")


class ComonoidPresentation:
    """Either a connected quadratic comonoid or a bialgebra slice."""

    def __init__(self, kind: str,
                 algebra: Optional[QuadraticAlgebra] = None,
                 delta1: Optional[Sequence[Vec]] = None,
                 eps1: Optional[Sequence[FieldElement]] = None,
                 slice_ctx: Optional[MulContext] = None,
                 max_degree: int = 2):
        if kind == "connected_qa":
            if algebra is None or delta1 is None or eps1 is None:
                raise ValueError("connected_qa needs algebra, delta1 and eps1")
        elif kind == "bialgebra_slice":
            if slice_ctx is None:
                raise ValueError("bialgebra_slice needs a context")
            if not slice_ctx.has_coalgebra():
                raise ValueError("slice context lacks coproduct/counit tables")
        else:
            raise ValueError(f"unknown comonoid kind {kind!r}")
        self.kind = kind
        self.algebra = algebra
        self.delta1 = tuple(delta1) if delta1 is not None else None
        self.eps1 = tuple(eps1) if eps1 is not None else None
        self.max_degree = max_degree
        self._ctx = slice_ctx

    @property
    def field(self):
        return self.algebra.field if self.kind == "connected_qa" else self._ctx.field

    def context(self) -> MulContext:
        if self._ctx is None:
            self._ctx = qa_context(self.algebra, self.max_degree,
                                   delta1=self.delta1, eps1=self.eps1)
        return self._ctx

    def coopposite(self) -> "ComonoidPresentation":
        """Same algebra with the flipped coproduct."""
        if self.kind == "connected_qa":
            n = self.algebra.ngens
            flipped = [tuple(row[j * n + i] for i in range(n) for j in range(n))
                       for row in self.delta1]
            return ComonoidPresentation("connected_qa", algebra=self.algebra,
                                        delta1=flipped, eps1=self.eps1,
                                        max_degree=self.max_degree)
        ctx = self.context()
        n = ctx.dim_entry
        flipped = [tuple(row[j * n + i] for i in range(n) for j in range(n))
                   for row in ctx.delta]
        delta2 = counit2 = None
        if ctx.delta2 is not None:
            n2 = ctx.dim(2)
            delta2 = [tuple(row[j * n2 + i] for i in range(n2) for j in range(n2))
                      for row in ctx.delta2]
            counit2 = ctx.counit2
        flipped_ctx = MulContext(
            ctx.field, ctx.kind, ctx.entry_labels, dict(ctx.product_labels),
            mul11=ctx._mul[(1, 1)], mul12=ctx._mul[(1, 2)], mul13=ctx._mul[(1, 3)],
            mul22=ctx._mul[(2, 2)], mul21=ctx._mul[(2, 1)], mul31=ctx._mul[(3, 1)],
            unit=ctx.unit, include2=ctx.include2,
            delta=flipped, counit=ctx.counit, delta2=delta2, counit2=counit2,
            source={"coopposite_of": ctx.source} if ctx.source else {})
        return ComonoidPresentation("bialgebra_slice", slice_ctx=flipped_ctx)

    def __repr__(self):
        return f"ComonoidPresentation(kind={self.kind!r})"


def validate_comonoid(c: ComonoidPresentation) -> Report:
    """Coassociativity, counit laws, and the connected extension conditions."""
    field = c.field
    if c.kind == "bialgebra_slice":
        ctx = c.context()
        problems = _coalgebra_violations(field, ctx.delta, ctx.counit)
        if problems:
            return Report("comonoid", False, witness=problems[0])
        return Report("comonoid", True)

    problems = _coalgebra_violations(field, c.delta1, c.eps1)
    if problems:
        return Report("comonoid", False, witness=problems[0])
    alg = c.algebra
    n = alg.ngens
    white = product(alg, alg, "white")
    for idx, rel in enumerate(alg.relations.basis.entries):
        image: dict[int, FieldElement] = {}
        eps_val = field.zero()
        for ccol, coeff in enumerate(rel):
            if coeff.is_zero():
                continue
            i, j = divmod(ccol, n)
            eps_val = eps_val + coeff * c.eps1[i] * c.eps1[j]
            for ab, left in enumerate(c.delta1[i]):
                if left.is_zero():
                    continue
                for cd, right in enumerate(c.delta1[j]):
                    if right.is_zero():
                        continue
                    pos = ab * n * n + cd
                    cur = image.get(pos, field.zero()) + coeff * left * right
                    if cur.is_zero():
                        image.pop(pos, None)
                    else:
                        image[pos] = cur
        if not eps_val.is_zero():
            return Report("comonoid", False,
                          witness=f"counit extension fails on relation {idx}")
        if not white.relations.contains_vector(image):
            return Report("comonoid", False,
                          witness=f"coproduct extension fails on relation {idx}")
    return Report("comonoid", True)


def matrix_coproduct_tables(field, m: int):
    """Delta(M^i_j) = sum_k M^i_k @ M^k_j and eps(M^i_j) = d^i_j on m^2 labels."""
    size = m * m
    zero, one = field.zero(), field.one()
    delta = []
    for i in range(m):
        for j in range(m):
            row = [zero] * (size * size)
            for k in range(m):
                row[(i * m + k) * size + (k * m + j)] = one
            delta.append(tuple(row))
    counit = [one if i == j else zero for i in range(m) for j in range(m)]
    return delta, counit


def coend_comonoid(b: Idempotent, max_degree: int = 2) -> ComonoidPresentation:
    """The universal comonoid on cohom(B,B) with the matrix coproduct."""
    alg = cohom_algebra(b, b)
    delta, counit = matrix_coproduct_tables(b.field, b.n)
    pres = ComonoidPresentation("connected_qa", algebra=alg,
                                delta1=delta, eps1=counit, max_degree=max_degree)
    verdict = validate_comonoid(pres)
    if not verdict.passed:
        raise AssertionError(f"coend comonoid failed validation: {verdict.witness}")
    return pres


class Corepresentation:
    """A comonoid reference, a representation idempotent and a matrix."""

    __slots__ = ("comonoid", "idempotent", "matrix")

    def __init__(self, comonoid: ComonoidPresentation, idempotent: Idempotent,
                 matrix: FirstOrderMatrix):
        self.comonoid = comonoid
        self.idempotent = idempotent
        self.matrix = matrix

    def __repr__(self):
        return (f"Corepresentation(dim={self.idempotent.n}, "
                f"comonoid={self.comonoid.kind})")


def corep_check(c: ComonoidPresentation, b: Idempotent,
                m: FirstOrderMatrix) -> Report:
    """Pass iff M is multiplicative and a B-Manin matrix over the comonoid."""
    if m.rows != m.cols or m.rows != b.n:
        raise ShapeError("matrix shape must match the representation idempotent")
    ctx = c.context()
    if not ctx.compatible(m.ctx):
        raise ShapeError("matrix does not live over the comonoid's entry space")
    if not multiplicative_check(m):
        return Report("corep", False, witness="multiplicative clause fails",
                      flags={"clause": "multiplicative"})
    manin = check_manin(b, b, m, m, ctx)
    if not manin.passed:
        return Report("corep", False, witness=manin.witness,
                      expansion=manin.expansion, flags={"clause": "manin"})
    return Report("corep", True)


def make_corep(comonoid: ComonoidPresentation, b: Idempotent,
               m: FirstOrderMatrix, validate: bool = True) -> Corepresentation:
    rep = Corepresentation(comonoid, b, m)
    if validate:
        verdict = corep_check(comonoid, b, m)
        if not verdict.passed:
            raise ValueError(f"not a corepresentation: {verdict.witness}")
    return rep


def identity_corep(b: Idempotent, max_degree: int = 2) -> Corepresentation:
    """The universal matrix as a corepresentation of coend(B) on X_B."""
    comonoid = coend_comonoid(b, max_degree)
    ctx = comonoid.context()
    mm = FirstOrderMatrix.from_generators(ctx, b.n, b.n)
    return make_corep(comonoid, b, mm)


def corep_morphism_check(k: Matrix, src: Corepresentation,
                         dst: Corepresentation) -> bool:
    """K is a scalar (B,B')-Manin matrix intertwining the two matrices."""
    if src.comonoid is not dst.comonoid and not (
            src.comonoid.context().compatible(dst.comonoid.context())):
        raise ShapeError("corepresentations live over different comonoids")
    if (k.rows, k.cols) != (src.idempotent.n, dst.idempotent.n):
        raise ShapeError("intertwiner has wrong shape")
    if not is_scalar_manin(src.idempotent, dst.idempotent, k):
        return False
    ctx = src.comonoid.context()
    dim = ctx.dim_entry
    m, m2 = src.matrix, dst.matrix
    zero = ctx.field.zero()
    for i in range(k.rows):
        for j in range(k.cols):
            lhs = [zero] * dim
            for b in range(k.cols):
                coeff = k.entries[i][b]
                if not coeff.is_zero():
                    lhs = [u + coeff * v for u, v in zip(lhs, m2.entries[b][j])]
            rhs = [zero] * dim
            for a in range(k.rows):
                coeff = k.entries[a][j]
                if not coeff.is_zero():
                    rhs = [u + coeff * v for u, v in zip(rhs, m.entries[i][a])]
            if lhs != rhs:
                return False
    return True


def corep_direct_sum(a: Corepresentation, b: Corepresentation) -> Corepresentation:
    """Exists iff the matrices entry-wise commute; lands on DiS(B,C)."""
    witness = commute_witness(a.matrix, b.matrix)
    if witness is not None:
        raise NonCommutingEntries(witness)
    return make_corep(a.comonoid, dis(a.idempotent, b.idempotent),
                      direct_sum(a.matrix, b.matrix))


def corep_coproduct(a: Corepresentation, b: Corepresentation) -> Corepresentation:
    """Always defined; same block matrix on CoP(B,C)."""
    return make_corep(a.comonoid, cop(a.idempotent, b.idempotent),
                      direct_sum(a.matrix, b.matrix))


def _lifted_comonoid(c: ComonoidPresentation) -> ComonoidPresentation:
    ctx = c.context()
    lifted = ctx.lift()
    if lifted.delta is None or lifted.counit is None:
        raise ContextTooShallow(
            "slice context lacks degree-2 coalgebra tables for products")
    return ComonoidPresentation("bialgebra_slice", slice_ctx=lifted)


def corep_tensor(a: Corepresentation, b: Corepresentation,
                 kind: str = "white") -> Corepresentation:
    """Tensor (white) or black tensor of corepresentations on a slice comonoid."""
    if kind not in ("white", "black"):
        raise ValueError("kind must be 'white' or 'black'")
    if a.comonoid.kind != "bialgebra_slice":
        raise ValueError(
            "tensor products of corepresentations are defined for bialgebra "
            "slices only: products of entries leave the degree-1 component "
            "of a connected quadratic comonoid")
    lifted = _lifted_comonoid(a.comonoid)
    build = tep if kind == "white" else black_tep
    f = build(a.idempotent, b.idempotent)
    p = dot_tensor(a.matrix, b.matrix)
    p = FirstOrderMatrix(lifted.context(), p.entries)
    existence = check_manin(f, f, p, p, lifted.context())
    if not existence.passed:
        raise NonExistence(existence)
    return make_corep(lifted, f, p)


def _verify_inverse(ctx: MulContext, m: FirstOrderMatrix, minv: FirstOrderMatrix):
    if ctx.unit is None:
        raise InverseFailure("context has no unit, inverses are meaningless")
    unit2 = ctx.unit_p2()
    zero2 = tuple(x - x for x in unit2)
    size = m.rows
    for i in range(size):
        for j in range(size):
            want = unit2 if i == j else zero2
            acc = zero2
            for k in range(size):
                term = ctx.mul(m.entries[i][k], minv.entries[k][j])
                acc = tuple(u + v for u, v in zip(acc, term))
            if acc != want:
                raise InverseFailure(("left", i + 1, j + 1))
            acc = zero2
            for k in range(size):
                term = ctx.mul(minv.entries[i][k], m.entries[k][j])
                acc = tuple(u + v for u, v in zip(acc, term))
            if acc != want:
                raise InverseFailure(("right", i + 1, j + 1))


def corep_dual(a: Corepresentation, minv: FirstOrderMatrix,
               flavor: str = "dual") -> Corepresentation:
    """Dual or Koszul-dual corepresentation, built from the supplied inverse.

    dual: (Minv)^T on the opposite Koszul side, the idempotent (1-B21)^T;
    koszul_dual: (Minv)^T on the idempotent (1-B^T), checked against the
    opposite-multiplication context.
    """
    if flavor not in ("dual", "koszul_dual"):
        raise ValueError("flavor must be 'dual' or 'koszul_dual'")
    if a.comonoid.kind != "bialgebra_slice":
        raise ValueError("duals need a bialgebra slice with a unit")
    ctx = a.comonoid.context()
    _verify_inverse(ctx, a.matrix, minv)
    b = a.idempotent
    eye = Matrix.identity(b.field, b.n * b.n)
    transposed = minv.transpose()
    if flavor == "dual":
        idem = make_idempotent((eye - conj21(b).matrix).transpose())
        return make_corep(a.comonoid, idem,
                          FirstOrderMatrix(ctx, transposed.entries))
    idem = make_idempotent((eye - b.matrix).transpose())
    op_ctx = ctx.opposite()
    op_comonoid = ComonoidPresentation("bialgebra_slice", slice_ctx=op_ctx)
    return make_corep(op_comonoid, idem,
                      FirstOrderMatrix(op_ctx, transposed.entries))


def hom_corep(a: Corepresentation, b: Corepresentation,
              minv: FirstOrderMatrix) -> Corepresentation:
    """Internal-hom corepresentation ((Minv)^T)(1) N(2) over a commutative slice."""
    if a.comonoid.kind != "bialgebra_slice":
        raise ValueError("hom corepresentations need a bialgebra slice")
    ctx = a.comonoid.context()
    if not ctx.is_commutative():
        raise ValueError("hom corepresentations need a commutative slice")
    _verify_inverse(ctx, a.matrix, minv)
    eye = Matrix.identity(a.idempotent.field, a.idempotent.n ** 2)
    left_idem = make_idempotent((eye - a.idempotent.matrix).transpose())
    f = black_tep(left_idem, b.idempotent)
    lifted = _lifted_comonoid(a.comonoid)
    p = dot_tensor(minv.transpose(), b.matrix)
    p = FirstOrderMatrix(lifted.context(), p.entries)
    return make_corep(lifted, f, p)


class DequantisedRepresentation:
    """Classical data recovered from a corepresentation: the dual algebra of
    the degree-1 coalgebra, and one scalar matrix per dual basis functional."""

    __slots__ = ("constants", "matrices")

    def __init__(self, constants: AlgebraStructureConstants,
                 matrices: Sequence[Matrix]):
        self.constants = constants
        self.matrices = tuple(matrices)


def dequantise(a: Corepresentation) -> DequantisedRepresentation:
    """Evaluate each dual-basis functional of A1 on the matrix entries."""
    if a.comonoid.kind != "connected_qa":
        raise ValueError("dequantisation applies to connected quadratic comonoids")
    c = a.comonoid
    field = c.field
    n = len(c.delta1)
    constants = [[[c.delta1[w][u * n + v] for w in range(n)]
                  for v in range(n)] for u in range(n)]
    asc = AlgebraStructureConstants(field, c.algebra.labels, constants,
                                    list(c.eps1))
    size = a.matrix.rows
    mats = []
    for s in range(n):
        mats.append(Matrix(field, [[a.matrix.entries[i][j][s]
                                    for j in range(size)] for i in range(size)]))
    return DequantisedRepresentation(asc, mats)


# ---------------------------------------------------------------------------
# classical embeddings
# ---------------------------------------------------------------------------

def s_embedded_comonoid(asc: AlgebraStructureConstants, max_degree: int = 2,
                        presentation: str = "slice") -> ComonoidPresentation:
    """The symmetric-algebra comonoid of a finite-dimensional algebra.

    presentation 'slice' yields the bialgebra-slice form (tensor and dual
    operations available); 'qa' yields the connected quadratic presentation
    on the polynomial algebra (dequantisation available).
    """
    if presentation == "slice":
        return ComonoidPresentation(
            "bialgebra_slice",
            slice_ctx=s_embedding_context(asc, max_degree))
    if presentation == "qa":
        n = asc.dim
        poly = algebra_X(antisymmetrizer(asc.field, n), labels=asc.labels)
        delta = [tuple(asc.c[i][j][k] for i in range(n) for j in range(n))
                 for k in range(n)]
        return ComonoidPresentation("connected_qa", algebra=poly,
                                    delta1=delta, eps1=list(asc.unit),
                                    max_degree=max_degree)
    raise ValueError("presentation must be 'slice' or 'qa'")


def t_embedded_comonoid(asc: AlgebraStructureConstants,
                        max_degree: int = 2) -> ComonoidPresentation:
    """Tensor-algebra slice comonoid of a finite-dimensional algebra."""
    return ComonoidPresentation(
        "bialgebra_slice", slice_ctx=t_embedding_context(asc, max_degree))


def embed_representation(comonoid: ComonoidPresentation,
                         rep_matrices: Sequence[Matrix],
                         style: str = "s") -> Corepresentation:
    """Classical representation matrices rho(v_s) -> corepresentation.

    The entry M^i_j is the functional with coordinates rho(v_s)^i_j in the
    dual basis; the representation idempotent is the antisymmetrizer for
    the S-embedding and the zero idempotent for the T-embedding.
    """
    ctx = comonoid.context()
    field = ctx.field
    m = rep_matrices[0].rows
    dim = ctx.dim_entry
    if len(rep_matrices) != dim:
        raise ShapeError("need one representation matrix per algebra basis element")
    entries = [[tuple(rep_matrices[s].entries[i][j] for s in range(dim))
                for j in range(m)] for i in range(m)]
    fom = FirstOrderMatrix(ctx, entries)
    if style == "s":
        b = antisymmetrizer(field, m)
    elif style == "t":
        b = zero_idempotent(field, m)
    else:
        raise ValueError("style must be 's' or 't'")
    return make_corep(comonoid, b, fom)
