"""Finite-dimensional coefficient contexts for Manin and multiplicativity checks.

A MulContext packages an entry space E with product spaces P2 (mandatory)
and optionally P3, P4, plus the bilinear product tables ExE -> P2,
ExP2 -> P3, ExP3 -> P4 and P2xP2 -> P4.  Vectors over a space are dense
tuples of FieldElement indexed by its basis.  Basis products are computed
lazily through a reducer closure and memoized, so large slices only pay
for the entries a check actually touches.

Contexts are immutable after construction; the caches are hidden state.
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional, Sequence

from .fields import Field, FieldElement
from .quadratic import QuadraticAlgebra, degree_relation_rows
from .linalg import rref_sparse

Vec = tuple[FieldElement, ...]


class ContextError(ValueError):
    pass


class ContextTooShallow(ContextError):
    pass


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(c: FieldElement, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def vec_is_zero(a: Vec) -> bool:
    return all(x.is_zero() for x in a)


def zero_vec(field: Field, dim: int) -> Vec:
    return tuple([field.zero()] * dim)


def basis_vec(field: Field, dim: int, index: int) -> Vec:
    z, o = field.zero(), field.one()
    return tuple(o if i == index else z for i in range(dim))


class MulContext:
    """Coefficient context; see module docstring for the shape of the data."""

    def __init__(self, field: Field, kind: str,
                 entry_labels: Sequence[str],
                 product_labels: dict[int, Sequence[str]],
                 mul11: Callable[[int, int], Vec],
                 mul12: Optional[Callable[[int, int], Vec]] = None,
                 mul13: Optional[Callable[[int, int], Vec]] = None,
                 mul22: Optional[Callable[[int, int], Vec]] = None,
                 mul21: Optional[Callable[[int, int], Vec]] = None,
                 mul31: Optional[Callable[[int, int], Vec]] = None,
                 unit: Optional[Vec] = None,
                 include2: Optional[Sequence[Vec]] = None,
                 delta: Optional[Sequence[Vec]] = None,
                 counit: Optional[Sequence[FieldElement]] = None,
                 delta2: Optional[Sequence[Vec]] = None,
                 counit2: Optional[Sequence[FieldElement]] = None,
                 source: Optional[dict] = None):
        if 2 not in product_labels:
            raise ContextError("P2 is mandatory")
        self.field = field
        self.kind = kind
        self.entry_labels = tuple(entry_labels)
        self.product_labels = {k: tuple(v) for k, v in product_labels.items()}
        self._mul = {(1, 1): mul11, (1, 2): mul12, (1, 3): mul13, (2, 2): mul22,
                     (2, 1): mul21, (3, 1): mul31}
        self._cache: dict = {}
        self.unit = unit
        self.include2 = tuple(include2) if include2 is not None else None
        self.delta = tuple(delta) if delta is not None else None
        self.counit = tuple(counit) if counit is not None else None
        self.delta2 = tuple(delta2) if delta2 is not None else None
        self.counit2 = tuple(counit2) if counit2 is not None else None
        self.source = source or {}

    # -- dimensions -----------------------------------------------------------

    @property
    def dim_entry(self) -> int:
        return len(self.entry_labels)

    def dim(self, k: int) -> int:
        if k == 1:
            return self.dim_entry
        if k not in self.product_labels:
            raise ContextTooShallow(f"context has no degree-{k} product space")
        return len(self.product_labels[k])

    def has(self, k: int) -> bool:
        return k == 1 or k in self.product_labels

    def has_mul(self, da: int, db: int) -> bool:
        return self._mul.get((da, db)) is not None

    def has_coalgebra(self) -> bool:
        return self.delta is not None and self.counit is not None

    def compatible(self, other: "MulContext") -> bool:
        return (self is other or
                (self.field == other.field and self.kind == other.kind
                 and self.entry_labels == other.entry_labels
                 and self.product_labels == other.product_labels))

    # -- products -------------------------------------------------------------

    def mul_basis(self, da: int, ia: int, db: int, ib: int) -> Vec:
        fn = self._mul.get((da, db))
        if fn is None:
            raise ContextTooShallow(
                f"context too shallow: no product table for degrees {da}x{db}")
        key = (da, ia, db, ib)
        out = self._cache.get(key)
        if out is None:
            out = fn(ia, ib)
            self._cache[key] = out
        return out

    def mul(self, x: Vec, y: Vec, da: int = 1, db: int = 1) -> Vec:
        """Bilinear extension of the basis product tables."""
        if len(x) != self.dim(da) or len(y) != self.dim(db):
            raise ContextError("vector dimension mismatch")
        out = zero_vec(self.field, self.dim(da + db))
        for ia, cx in enumerate(x):
            if cx.is_zero():
                continue
            for ib, cy in enumerate(y):
                if cy.is_zero():
                    continue
                term = self.mul_basis(da, ia, db, ib)
                c = cx * cy
                out = tuple(o + c * t for o, t in zip(out, term))
        return out

    def include_entry(self, x: Vec) -> Vec:
        """Canonical inclusion E -> P2 (unit contexts only)."""
        if self.include2 is None:
            raise ContextError("context has no designated unit / inclusion")
        out = zero_vec(self.field, self.dim(2))
        for i, c in enumerate(x):
            if not c.is_zero():
                out = vec_add(out, vec_scale(c, self.include2[i]))
        return out

    def unit_p2(self) -> Vec:
        if self.unit is None:
            raise ContextError("context has no designated unit")
        return self.include_entry(self.unit)

    # -- derived contexts -------------------------------------------------------

    def lift(self) -> "MulContext":
        """Degree-shifted context: entries in P2, products in P4."""
        if not self.has(4) or self._mul.get((2, 2)) is None:
            raise ContextTooShallow("context too shallow for a degree-2 lift "
                                    "(needs P4 and the P2xP2 table)")
        unit = include2 = None
        if self.unit is not None:
            unit = self.unit_p2()
            dim2 = self.dim(2)
            include2 = [self.mul(basis_vec(self.field, dim2, i), unit, 2, 2)
                        for i in range(dim2)]
        return MulContext(
            self.field, self.kind,
            entry_labels=self.product_labels[2],
            product_labels={2: self.product_labels[4]},
            mul11=self._mul[(2, 2)],
            unit=unit, include2=include2,
            delta=self.delta2, counit=self.counit2,
            source={"lift_of": self.source} if self.source else {})

    def opposite(self) -> "MulContext":
        """Same spaces with reversed multiplication."""
        def flipped(key):
            fn = self._mul.get(key)
            return None if fn is None else (lambda i, j: fn(j, i))

        return MulContext(
            self.field, self.kind, self.entry_labels, dict(self.product_labels),
            mul11=flipped((1, 1)), mul22=flipped((2, 2)),
            mul12=flipped((2, 1)), mul21=flipped((1, 2)),
            mul13=flipped((3, 1)), mul31=flipped((1, 3)),
            unit=self.unit, include2=self.include2,
            delta=self.delta, counit=self.counit,
            delta2=self.delta2, counit2=self.counit2,
            source={"opposite_of": self.source} if self.source else {})

    def is_commutative(self) -> bool:
        n = self.dim_entry
        for i in range(n):
            for j in range(i, n):
                if self.mul_basis(1, i, 1, j) != self.mul_basis(1, j, 1, i):
                    return False
        return True

    # -- validation ---------------------------------------------------------------

    def validate(self) -> list[str]:
        """Structural checks; returns a list of violation descriptions."""
        problems = []
        n = self.dim_entry
        if self.unit is not None:
            if self.include2 is None:
                problems.append("unit designated but no inclusion map")
            else:
                for i in range(n):
                    e = basis_vec(self.field, n, i)
                    if self.mul(self.unit, e) != self.include2[i]:
                        problems.append(f"left unit law fails on entry {i}")
                    if self.mul(e, self.unit) != self.include2[i]:
                        problems.append(f"right unit law fails on entry {i}")
        if (self.delta is None) != (self.counit is None):
            problems.append("delta and counit must come together")
        if self.delta is not None:
            problems.extend(_coalgebra_violations(
                self.field, self.delta, self.counit))
        return problems

    def export_tables(self) -> dict:
        """Materialize the product tables as nested scalar-string grids."""
        out: dict = {}
        dims = {1: self.dim_entry}
        dims.update({k: self.dim(k) for k in self.product_labels})
        for (da, db), fn in self._mul.items():
            if fn is None or da not in dims or db not in dims or da + db not in dims:
                continue
            grid = [[[str(c) for c in self.mul_basis(da, ia, db, ib)]
                     for ib in range(dims[db])] for ia in range(dims[da])]
            out[f"{da}{db}"] = grid
        return out

    def __repr__(self):
        return (f"MulContext(kind={self.kind!r}, dimE={self.dim_entry}, "
                f"degrees={sorted(self.product_labels)})")


def _coalgebra_violations(field, delta, counit) -> list[str]:
    problems = []
    n = len(delta)
    for i in range(n):
        if len(delta[i]) != n * n:
            return [f"delta row {i} has wrong dimension"]
    for i in range(n):
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    lhs = field.zero()
                    rhs = field.zero()
                    for j in range(n):
                        lhs = lhs + delta[i][j * n + c] * delta[j][a * n + b]
                        rhs = rhs + delta[i][a * n + j] * delta[j][b * n + c]
                    if lhs != rhs:
                        problems.append(
                            f"coassociativity fails at entry {i}, component "
                            f"({a},{b},{c})")
                        return problems
    for i in range(n):
        for k in range(n):
            left = sum((delta[i][j * n + k] * counit[j] for j in range(n)),
                       field.zero())
            right = sum((delta[i][k * n + j] * counit[j] for j in range(n)),
                        field.zero())
            want = field.one() if i == k else field.zero()
            if left != want:
                problems.append(f"left counit law fails at entry {i}, component {k}")
                return problems
            if right != want:
                problems.append(f"right counit law fails at entry {i}, component {k}")
                return problems
    return problems


# ---------------------------------------------------------------------------
# raw table contexts
# ---------------------------------------------------------------------------

def table_context(field: Field, entry_labels, p2_labels, mul11,
                  p3_labels=None, mul12=None, p4_labels=None, mul13=None,
                  mul22=None, mul21=None, mul31=None,
                  unit=None, include2=None, delta=None, counit=None,
                  delta2=None, counit2=None,
                  kind: str = "table", source=None, check: bool = True) -> MulContext:
    """Context from explicit tables; grids are basis-indexed nested lists."""
    n = len(entry_labels)
    product_labels = {2: tuple(p2_labels)}
    if p3_labels is not None:
        product_labels[3] = tuple(p3_labels)
    if p4_labels is not None:
        product_labels[4] = tuple(p4_labels)

    def wrap(grid, rows, cols, out_dim, name):
        if grid is None:
            return None
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ContextError(f"table {name} has wrong shape")
        data = [[tuple(cell) for cell in row] for row in grid]
        for row in data:
            for cell in row:
                if len(cell) != out_dim:
                    raise ContextError(f"table {name} has wrong value dimension")
        return lambda i, j: data[i][j]

    dim2 = len(product_labels[2])
    dim3 = len(product_labels.get(3, ()))
    dim4 = len(product_labels.get(4, ()))
    fns = {
        "11": wrap(mul11, n, n, dim2, "ExE"),
        "12": wrap(mul12, n, dim2, dim3, "ExP2"),
        "21": wrap(mul21, dim2, n, dim3, "P2xE"),
        "13": wrap(mul13, n, dim3, dim4, "ExP3"),
        "31": wrap(mul31, dim3, n, dim4, "P3xE"),
        "22": wrap(mul22, dim2, dim2, dim4, "P2xP2"),
    }
    if fns["11"] is None:
        raise ContextError("ExE table is mandatory")

    def build(incl):
        return MulContext(field, kind, entry_labels, product_labels,
                          mul11=fns["11"], mul12=fns["12"], mul13=fns["13"],
                          mul22=fns["22"], mul21=fns["21"], mul31=fns["31"],
                          unit=tuple(unit) if unit is not None else None,
                          include2=incl, delta=delta, counit=counit,
                          delta2=delta2, counit2=counit2, source=source)

    ctx = build(include2)
    if unit is not None and include2 is None:
        derived = [ctx.mul(basis_vec(field, n, i), tuple(unit)) for i in range(n)]
        ctx = build(derived)
    if check:
        problems = ctx.validate()
        if problems:
            raise ContextError("; ".join(problems))
    return ctx


def scalar_context(field: Field) -> MulContext:
    """The field itself as a context: E = P2 = span{1}."""
    one = field.one()
    unit = (one,)
    grid = [[(one,)]]
    return table_context(field, ("1",), ("1",), grid,
                         p3_labels=("1",), mul12=grid, mul21=grid,
                         p4_labels=("1",), mul13=grid, mul31=grid, mul22=grid,
                         unit=unit, delta=[(one,)], counit=[one],
                         delta2=[(one,)], counit2=[one],
                         kind="table", source={"builder": "scalar"})


def flat_slice_context(field: Field, labels, mul_grid, unit, delta, counit,
                       source=None, check: bool = True) -> MulContext:
    """Slice context with all graded pieces equal to one algebra.

    This is the shape of a bialgebra embedded with trivial grading: every
    component is the same space, so one multiplication grid serves every
    degree pair.
    """
    return table_context(field, labels, labels, mul_grid,
                         p3_labels=labels, mul12=mul_grid, mul21=mul_grid,
                         p4_labels=labels, mul13=mul_grid, mul31=mul_grid,
                         mul22=mul_grid,
                         unit=unit, delta=delta, counit=counit,
                         delta2=delta, counit2=counit,
                         kind="slice", source=source, check=check)


def group_function_context(field: Field, elements: Sequence[str],
                           mult: dict, identity: str) -> MulContext:
    """Function algebra of a finite group as a flat bialgebra slice.

    E has the indicator basis (f_x); products are pointwise, the coproduct
    is dual to the group multiplication and the counit evaluates at the
    identity.
    """
    n = len(elements)
    pos = {g: i for i, g in enumerate(elements)}
    zero, one = field.zero(), field.one()
    grid = [[tuple(one if (i == j == k) else zero for k in range(n))
             for j in range(n)] for i in range(n)]
    delta = []
    for x in elements:
        row = [zero] * (n * n)
        for y in elements:
            for z in elements:
                if mult[(y, z)] == x:
                    row[pos[y] * n + pos[z]] = one
        delta.append(tuple(row))
    counit = [one if g == identity else zero for g in elements]
    unit = tuple([one] * n)
    return flat_slice_context(field, tuple(f"f[{g}]" for g in elements),
                              grid, unit, delta, counit,
                              source={"builder": "group_function",
                                      "elements": list(elements)})


# ---------------------------------------------------------------------------
# stock structure constants
# ---------------------------------------------------------------------------

def matrix_algebra_constants(field: Field, m: int) -> AlgebraStructureConstants:
    """Mat_m with basis e[i,j] (row-major): e_ij e_kl = d_jk e_il."""
    n = m * m
    zero, one = field.zero(), field.one()
    labels = [f"a[{i},{j}]" for i in range(1, m + 1) for j in range(1, m + 1)]
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    if j == k:
                        c[i * m + j][k * m + l][i * m + l] = one
    unit = [one if i == j else zero for i in range(m) for j in range(m)]
    return AlgebraStructureConstants(field, labels, c, unit)


def group_algebra_constants(field: Field, elements: Sequence[str], mult: dict,
                            identity: str) -> AlgebraStructureConstants:
    """Group algebra K[G] for a finite group given by its multiplication table."""
    n = len(elements)
    pos = {g: i for i, g in enumerate(elements)}
    zero, one = field.zero(), field.one()
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for x in elements:
        for y in elements:
            c[pos[x]][pos[y]][pos[mult[(x, y)]]] = one
    unit = [one if g == identity else zero for g in elements]
    return AlgebraStructureConstants(field, list(elements), c, unit)


def gl_bracket(field: Field, m: int) -> tuple[tuple[str, ...], dict]:
    """Basis labels and bracket table of gl_m: [E_ij, E_kl] = d_jk E_il - d_li E_kj."""
    labels = tuple(f"e[{i},{j}]" for i in range(1, m + 1) for j in range(1, m + 1))

    def idx(i, j):
        return i * m + j

    one = field.one()
    gamma: dict = {}
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    row: dict[int, FieldElement] = {}
                    if j == k:
                        row[idx(i, l)] = row.get(idx(i, l), field.zero()) + one
                    if l == i:
                        row[idx(k, j)] = row.get(idx(k, j), field.zero()) - one
                    row = {c: v for c, v in row.items() if not v.is_zero()}
                    if row:
                        gamma[(idx(i, j), idx(k, l))] = row
    return labels, gamma


# ---------------------------------------------------------------------------
# quadratic-quotient contexts
# ---------------------------------------------------------------------------

class _QuotientReducer:
    """Reduces degree-k tensor words modulo the degree-k relation span."""

    def __init__(self, algebra: QuadraticAlgebra, k: int):
        self.n = algebra.ngens
        self.field = algebra.field
        self.k = k
        rows = degree_relation_rows(algebra, k) if k >= 2 else []
        dense, pivots, _ = rref_sparse(rows, self.n ** k, self.field)
        self.pivot_rows = dict(zip(pivots, dense))
        pivot_set = set(pivots)
        self.rep_cols = [c for c in range(self.n ** k) if c not in pivot_set]
        self.rep_pos = {c: t for t, c in enumerate(self.rep_cols)}

    def word_label(self, col: int, labels) -> str:
        letters = []
        c = col
        for _ in range(self.k):
            c, r = divmod(c, self.n)
            letters.append(labels[r])
        return "*".join(reversed(letters))

    def reduce_sparse(self, vec: dict[int, FieldElement]) -> Vec:
        vec = dict(vec)
        for c in sorted(vec):
            if c not in self.pivot_rows:
                continue
            coeff = vec.pop(c)
            if coeff.is_zero():
                continue
            row = self.pivot_rows[c]
            for cc, e in enumerate(row):
                if cc == c or e.is_zero():
                    continue
                acc = vec.get(cc)
                acc = -coeff * e if acc is None else acc - coeff * e
                if acc.is_zero():
                    vec.pop(cc, None)
                else:
                    vec[cc] = acc
        out = [self.field.zero()] * len(self.rep_cols)
        for c, e in vec.items():
            if not e.is_zero():
                out[self.rep_pos[c]] = e
        return tuple(out)


def qa_context(algebra: QuadraticAlgebra, max_degree: int = 2,
               delta1=None, eps1=None) -> MulContext:
    """Entries in A1, products in the graded components A2..A_max_degree.

    Component bases are the RREF pivot complements of the degree-k relation
    spans, so they are deterministic coset-representative monomials.
    """
    if max_degree not in (2, 3, 4):
        raise ContextError("max_degree must be 2, 3 or 4")
    n = algebra.ngens
    reducers = {k: _QuotientReducer(algebra, k) for k in range(2, max_degree + 1)}
    product_labels = {
        k: tuple(reducers[k].word_label(c, algebra.labels)
                 for c in reducers[k].rep_cols)
        for k in reducers
    }

    def word_of(reducer, pos):
        col = reducer.rep_cols[pos]
        letters = []
        c = col
        for _ in range(reducer.k):
            c, r = divmod(c, reducer.n)
            letters.append(r)
        return tuple(reversed(letters))

    def flat(word):
        c = 0
        for r in word:
            c = c * n + r
        return c

    one = algebra.field.one()

    def mul11(i, j):
        return reducers[2].reduce_sparse({flat((i, j)): one})

    mul12 = mul13 = mul22 = mul21 = mul31 = None
    if max_degree >= 3:
        def mul12(i, w):
            word = (i,) + word_of(reducers[2], w)
            return reducers[3].reduce_sparse({flat(word): one})

        def mul21(w, i):
            word = word_of(reducers[2], w) + (i,)
            return reducers[3].reduce_sparse({flat(word): one})
    if max_degree >= 4:
        def mul13(i, w):
            word = (i,) + word_of(reducers[3], w)
            return reducers[4].reduce_sparse({flat(word): one})

        def mul31(w, i):
            word = word_of(reducers[3], w) + (i,)
            return reducers[4].reduce_sparse({flat(word): one})

        def mul22(wa, wb):
            word = word_of(reducers[2], wa) + word_of(reducers[2], wb)
            return reducers[4].reduce_sparse({flat(word): one})

    return MulContext(algebra.field, "qa", algebra.labels, product_labels,
                      mul11=mul11, mul12=mul12, mul13=mul13, mul22=mul22,
                      mul21=mul21, mul31=mul31,
                      delta=delta1, counit=eps1,
                      source={"builder": "qa", "max_degree": max_degree})


# ---------------------------------------------------------------------------
# PBW contexts
# ---------------------------------------------------------------------------

class JacobiError(ContextError):
    def __init__(self, triple, message):
        self.triple = triple
        super().__init__(message)


def _bracket_table(field: Field, d: int, gamma) -> dict:
    """Normalize gamma to {(a,b): {c: coeff}} and check antisymmetry."""
    table: dict = {}
    for (a, b), row in gamma.items():
        clean = {c: v for c, v in row.items() if not v.is_zero()}
        if clean:
            table[(a, b)] = clean
    for a in range(d):
        for b in range(d):
            fwd = table.get((a, b), {})
            bwd = table.get((b, a), {})
            for c in set(fwd) | set(bwd):
                lhs = fwd.get(c, field.zero())
                rhs = bwd.get(c, field.zero())
                if lhs != -rhs:
                    raise ContextError(
                        f"bracket table is not antisymmetric at ({a},{b})")
        if table.get((a, a)):
            raise ContextError(f"bracket table is not antisymmetric at ({a},{a})")
    return table


def _check_jacobi(field: Field, d: int, table):
    def ad(a, b):
        return table.get((a, b), {})

    for a in range(d):
        for b in range(a + 1, d):
            for c in range(b + 1, d):
                acc: dict[int, FieldElement] = {}
                for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                    for g, coeff in ad(x, y).items():
                        for h, coeff2 in ad(g, z).items():
                            cur = acc.get(h, field.zero()) + coeff * coeff2
                            if cur.is_zero():
                                acc.pop(h, None)
                            else:
                                acc[h] = cur
                if acc:
                    raise JacobiError((a, b, c),
                                      f"Jacobi identity fails on triple ({a},{b},{c})")


def straighten_word(field: Field, table, word, strategy=None) -> dict:
    """Normal form of a word in U(g): x_a x_b -> x_b x_a + [x_a, x_b], a > b.

    Each rewrite lowers (degree, inversion count) lexicographically, so the
    loop terminates; strategy picks which inversion to rewrite first.
    """
    out: dict[tuple, FieldElement] = {}
    stack: list[tuple[tuple, FieldElement]] = [(tuple(word), field.one())]
    while stack:
        w, coeff = stack.pop()
        inversions = [i for i in range(len(w) - 1) if w[i] > w[i + 1]]
        if not inversions:
            cur = out.get(w, field.zero()) + coeff
            if cur.is_zero():
                out.pop(w, None)
            else:
                out[w] = cur
            continue
        i = inversions[0] if strategy is None else strategy(w, inversions)
        swapped = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
        stack.append((swapped, coeff))
        for g, c in table.get((w[i], w[i + 1]), {}).items():
            stack.append((w[:i] + (g,) + w[i + 2:], coeff * c))
    return out


def pbw_context(field: Field, labels: Sequence[str], gamma,
                max_degree: int = 2, strategy=None) -> MulContext:
    """Degree <= max_degree slice of U(g) in the PBW monomial basis.

    gamma maps (a, b) generator index pairs to {c: coefficient} rows of the
    bracket [x_a, x_b] = sum_c gamma_ab^c x_c; antisymmetry and the Jacobi
    identity are checked up front.
    """
    if max_degree not in (2, 3, 4):
        raise ContextError("max_degree must be 2, 3 or 4")
    d = len(labels)
    table = _bracket_table(field, d, gamma)
    _check_jacobi(field, d, table)

    def monomials(limit):
        words = [()]
        for k in range(1, limit + 1):
            words.extend(itertools.combinations_with_replacement(range(d), k))
        return words

    def label_of(word):
        if not word:
            return "1"
        return "*".join(labels[i] for i in word)

    spaces = {k: monomials(k) for k in range(2, max_degree + 1)}
    positions = {k: {w: i for i, w in enumerate(ws)} for k, ws in spaces.items()}
    entry_words = monomials(1)
    entry_pos = {w: i for i, w in enumerate(entry_words)}
    entry_labels = tuple(label_of(w) for w in entry_words)
    product_labels = {k: tuple(label_of(w) for w in spaces[k]) for k in spaces}

    def product_fn(deg_out, words_a, words_b):
        pos = positions[deg_out]
        dim = len(spaces[deg_out])

        def mul(ia, ib):
            word = words_a[ia] + words_b[ib]
            normal = straighten_word(field, table, word, strategy)
            out = [field.zero()] * dim
            for w, c in normal.items():
                out[pos[tuple(sorted(w))]] = out[pos[tuple(sorted(w))]] + c
            return tuple(out)
        return mul

    mul11 = product_fn(2, entry_words, entry_words)
    mul12 = product_fn(3, entry_words, spaces[2]) if max_degree >= 3 else None
    mul21 = product_fn(3, spaces[2], entry_words) if max_degree >= 3 else None
    mul13 = product_fn(4, entry_words, spaces[3]) if max_degree >= 4 else None
    mul31 = product_fn(4, spaces[3], entry_words) if max_degree >= 4 else None
    mul22 = product_fn(4, spaces[2], spaces[2]) if max_degree >= 4 else None

    unit = basis_vec(field, len(entry_words), entry_pos[()])
    include2 = [basis_vec(field, len(spaces[2]), positions[2][w])
                for w in entry_words]
    return MulContext(field, "pbw", entry_labels, product_labels,
                      mul11=mul11, mul12=mul12, mul13=mul13, mul22=mul22,
                      mul21=mul21, mul31=mul31,
                      unit=unit, include2=include2,
                      source={"builder": "pbw", "max_degree": max_degree})


# ---------------------------------------------------------------------------
# structure constants and embedding contexts
# ---------------------------------------------------------------------------

class AlgebraStructureConstants:
    """A finite-dimensional unital algebra: v_i v_j = sum_k c[i][j][k] v_k."""

    __slots__ = ("field", "dim", "labels", "c", "unit")

    def __init__(self, field: Field, labels: Sequence[str], c, unit,
                 check: bool = True):
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.c = tuple(tuple(tuple(row) for row in plane) for plane in c)
        self.unit = tuple(unit)
        if check:
            self._validate()

    def _validate(self):
        n, c, d = self.dim, self.c, self.unit
        zero = self.field.zero()
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for q in range(n):
                        lhs = sum((c[i][j][p] * c[p][k][q] for p in range(n)), zero)
                        rhs = sum((c[j][k][p] * c[i][p][q] for p in range(n)), zero)
                        if lhs != rhs:
                            raise ContextError(
                                f"associativity fails at ({i},{j},{k} -> {q})")
        for i in range(n):
            for j in range(n):
                left = sum((d[k] * c[k][i][j] for k in range(n)), zero)
                right = sum((d[k] * c[i][k][j] for k in range(n)), zero)
                want = self.field.one() if i == j else zero
                if left != want or right != want:
                    raise ContextError(f"unit law fails at ({i} -> {j})")


def _embedding_context(alg: AlgebraStructureConstants, max_degree: int,
                       symmetric: bool, kind_tag: str) -> MulContext:
    if max_degree not in (2, 3, 4):
        raise ContextError("max_degree must be 2, 3 or 4")
    field = alg.field
    n = alg.dim

    def words(k):
        if symmetric:
            return list(itertools.combinations_with_replacement(range(n), k))
        return list(itertools.product(range(n), repeat=k))

    spaces = {k: words(k) for k in range(2, max_degree + 1)}
    positions = {k: {w: i for i, w in enumerate(ws)} for k, ws in spaces.items()}

    def label_of(word):
        return "*".join(alg.labels[i] for i in word)

    product_labels = {k: tuple(label_of(w) for w in spaces[k]) for k in spaces}

    def normal(word):
        return tuple(sorted(word)) if symmetric else tuple(word)

    def product_fn(deg_out, words_a, words_b):
        pos = positions[deg_out]
        dim = len(spaces[deg_out])

        def mul(ia, ib):
            word = normal(words_a[ia] + words_b[ib])
            return basis_vec(field, dim, pos[word])
        return mul

    singles = [(i,) for i in range(n)]
    mul11 = product_fn(2, singles, singles)
    mul12 = product_fn(3, singles, spaces[2]) if max_degree >= 3 else None
    mul21 = product_fn(3, spaces[2], singles) if max_degree >= 3 else None
    mul13 = product_fn(4, singles, spaces[3]) if max_degree >= 4 else None
    mul31 = product_fn(4, spaces[3], singles) if max_degree >= 4 else None
    mul22 = product_fn(4, spaces[2], spaces[2]) if max_degree >= 4 else None

    # dual coalgebra on E: Delta(v^k) = sum c_ij^k v^i @ v^j, eps(v^k) = d^k
    delta = [tuple(alg.c[i][j][k] for i in range(n) for j in range(n))
             for k in range(n)]
    counit = list(alg.unit)

    # multiplicative extension to P2
    dim2 = len(spaces[2])
    delta2 = []
    counit2 = []
    for w in spaces[2]:
        u, v = w
        row = [field.zero()] * (dim2 * dim2)
        for i in range(n):
            for j in range(n):
                cu = alg.c[i][j][u]
                if cu.is_zero():
                    continue
                for k in range(n):
                    for l in range(n):
                        cv = alg.c[k][l][v]
                        if cv.is_zero():
                            continue
                        left = positions[2][normal((i, k))]
                        right = positions[2][normal((j, l))]
                        row[left * dim2 + right] = (
                            row[left * dim2 + right] + cu * cv)
        delta2.append(tuple(row))
        counit2.append(alg.unit[u] * alg.unit[v])

    return MulContext(field, "slice", alg.labels, product_labels,
                      mul11=mul11, mul12=mul12, mul13=mul13, mul22=mul22,
                      mul21=mul21, mul31=mul31,
                      delta=delta, counit=counit,
                      delta2=delta2, counit2=counit2,
                      source={"builder": kind_tag, "max_degree": max_degree})


def s_embedding_context(alg: AlgebraStructureConstants,
                        max_degree: int = 2) -> MulContext:
    """Symmetric-algebra slices of the dual: commutative products."""
    return _embedding_context(alg, max_degree, symmetric=True,
                              kind_tag="s_embedding")


def t_embedding_context(alg: AlgebraStructureConstants,
                        max_degree: int = 2) -> MulContext:
    """Tensor-algebra slices of the dual: free products."""
    return _embedding_context(alg, max_degree, symmetric=False,
                              kind_tag="t_embedding")
