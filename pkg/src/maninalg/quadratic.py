"""Quadratic algebras as canonical relation subspaces, and matrix idempotents.

A quadratic algebra is presented by its generator count and the canonical
(RREF) basis of its relation subspace R inside V@V, flattened row-major:
the pair (i,j), 1 <= i,j <= n, sits at coordinate (i-1)*n + (j-1).

An idempotent E on V@V determines two presentations:

  * X(E)  has relations the row space of E;
  * Xi(E) has relations the row space of (1-E)^T.

All equality of algebras is span equality of relation subspaces.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .fields import Field, FieldElement
from .linalg import (
    Matrix,
    ShapeError,
    Subspace,
    kernel,
    kron,
    permute_matrix,
    permute_subspace,
    rank_sparse,
    shuffle_perm,
    tensor_subspace,
)

DEFAULT_DEGREE_CAP = 6
_AMBIENT_GUARD = 2_000_000


class NotIdempotent(ValueError):
    def __init__(self, witness, value):
        self.witness = witness
        self.value = value
        super().__init__(f"matrix is not idempotent: (E^2 - E)[{witness[0]},{witness[1]}] "
                         f"= {value}")


class BadShape(ValueError):
    pass


class DegreeCapExceeded(ValueError):
    pass


class Idempotent:
    """Validated idempotent operator on V@V, V = K^n."""

    __slots__ = ("field", "n", "matrix")

    def __init__(self, field: Field, n: int, matrix: Matrix, _validated=False):
        self.field = field
        self.n = n
        self.matrix = matrix
        if not _validated:
            _validate_idempotent(matrix, n)

    def __eq__(self, other):
        return isinstance(other, Idempotent) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Idempotent(n={self.n})"

    def complement(self) -> "Idempotent":
        eye = Matrix.identity(self.field, self.n * self.n)
        return Idempotent(self.field, self.n, eye - self.matrix, _validated=True)


def _validate_idempotent(matrix: Matrix, n: int):
    if matrix.rows != matrix.cols:
        raise BadShape(f"idempotent matrix must be square, got "
                       f"{matrix.rows}x{matrix.cols}")
    if matrix.rows != n * n:
        raise BadShape(f"matrix side {matrix.rows} is not the square of a dimension")
    square = matrix @ matrix
    for i in range(matrix.rows):
        for j in range(matrix.cols):
            d = square.entries[i][j] - matrix.entries[i][j]
            if not d.is_zero():
                raise NotIdempotent((i, j), d)


def make_idempotent(matrix: Matrix) -> Idempotent:
    """Validate and wrap an n^2 x n^2 matrix as an idempotent on V@V."""
    side = matrix.rows
    n = int(round(side ** 0.5))
    if n * n != side:
        raise BadShape(f"matrix side {side} is not a perfect square")
    return Idempotent(matrix.field, n, matrix)


# ---------------------------------------------------------------------------
# standard operators and idempotents
# ---------------------------------------------------------------------------

def permutation_matrix(field: Field, m: int) -> Matrix:
    """P_m, the tensor-factor swap: P(v_k @ v_l) = v_l @ v_k."""
    zero, one = field.zero(), field.one()
    size = m * m
    entries = [[zero] * size for _ in range(size)]
    for k in range(m):
        for l in range(m):
            entries[l * m + k][k * m + l] = one
    return Matrix(field, entries)


def _resolve_q_params(field: Field, m: int, q_params) -> dict:
    """Full q_{ij} table with q_{ii} = 1 and q_{ij} q_{ji} = 1 (checked)."""
    one = field.one()
    table = {}
    if q_params is None:
        if field.kind != "ratfunc":
            raise ValueError("q_antisym needs ratfunc field or explicit parameters")
        q = field.gen()
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                table[(i, j)] = one if i == j else (q if i < j else q.inv())
        return table
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                table[(i, j)] = one
            elif (i, j) in q_params:
                table[(i, j)] = q_params[(i, j)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if (i, j) not in table:
                ji = table.get((j, i))
                if ji is None:
                    raise ValueError(f"missing deformation parameter q[{i},{j}]")
                table[(i, j)] = ji.inv()
    for (i, j), value in q_params.items():
        if i == j and not value.is_one():
            raise ValueError("q[i,i] must be 1")
        other = table[(j, i)]
        if not (value * other).is_one():
            raise ValueError(f"q[{i},{j}]*q[{j},{i}] must be 1")
    return table


def q_permutation_matrix(field: Field, m: int, q_params=None) -> Matrix:
    """P^q_m with entries (P^q)^{ij}_{kl} = q_{ji} d^i_l d^j_k; an involution."""
    table = _resolve_q_params(field, m, q_params)
    zero = field.zero()
    size = m * m
    entries = [[zero] * size for _ in range(size)]
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            entries[(i - 1) * m + (j - 1)][(j - 1) * m + (i - 1)] = table[(j, i)]
    return Matrix(field, entries)


def quadric_matrix(field: Field, m: int) -> Matrix:
    """Q_m with entries d^{i+j}_{m+1} d^{m+1}_{k+l}; satisfies Q^2 = m Q."""
    zero, one = field.zero(), field.one()
    size = m * m
    entries = [[zero] * size for _ in range(size)]
    for i in range(1, m + 1):
        for k in range(1, m + 1):
            entries[(i - 1) * m + (m - i)][(k - 1) * m + (m - k)] = one
    return Matrix(field, entries)


def antisymmetrizer(field: Field, m: int) -> Idempotent:
    half = field.from_fraction(Fraction(1, 2))
    eye = Matrix.identity(field, m * m)
    mat = (eye - permutation_matrix(field, m)).scale(half)
    return Idempotent(field, m, mat)


def q_antisymmetrizer(field: Field, m: int, q_params=None) -> Idempotent:
    half = field.from_fraction(Fraction(1, 2))
    eye = Matrix.identity(field, m * m)
    mat = (eye - q_permutation_matrix(field, m, q_params)).scale(half)
    return Idempotent(field, m, mat)


def orthogonal_idempotent(field: Field, m: int) -> Idempotent:
    """B_m = A_m + Q_m / m."""
    inv_m = field.from_fraction(Fraction(1, m))
    mat = antisymmetrizer(field, m).matrix + quadric_matrix(field, m).scale(inv_m)
    return Idempotent(field, m, mat)


def zero_idempotent(field: Field, m: int) -> Idempotent:
    return Idempotent(field, m, Matrix.zeros(field, m * m, m * m), _validated=True)


def one_idempotent(field: Field, m: int) -> Idempotent:
    return Idempotent(field, m, Matrix.identity(field, m * m), _validated=True)


def std_idempotent(name: str, m: int, field: Field, q_params=None):
    """Named constructors; perm and Q are returned as plain operators."""
    if m < 1:
        raise ValueError("dimension must be >= 1")
    if name == "antisym":
        return antisymmetrizer(field, m)
    if name == "q_antisym":
        return q_antisymmetrizer(field, m, q_params)
    if name == "so_b":
        return orthogonal_idempotent(field, m)
    if name == "zero":
        return zero_idempotent(field, m)
    if name == "one":
        return one_idempotent(field, m)
    if name == "perm":
        return permutation_matrix(field, m)
    if name == "q_perm":
        return q_permutation_matrix(field, m, q_params)
    if name == "quadric":
        return quadric_matrix(field, m)
    raise ValueError(f"unknown constructor {name!r}")


# ---------------------------------------------------------------------------
# quadratic algebras
# ---------------------------------------------------------------------------

def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


class QuadraticAlgebra:
    """TV/(R) with R a canonical subspace of V@V."""

    __slots__ = ("field", "ngens", "labels", "relations")

    def __init__(self, field: Field, ngens: int, relations: Subspace,
                 labels: Optional[Sequence[str]] = None):
        if relations.ambient != ngens * ngens:
            raise ShapeError("relation ambient must be ngens^2")
        if relations.field != field:
            raise ShapeError("relation field mismatch")
        self.field = field
        self.ngens = ngens
        self.relations = relations
        self.labels = tuple(labels) if labels is not None else _default_labels("x", ngens)
        if len(self.labels) != ngens:
            raise ShapeError("label count mismatch")

    def __eq__(self, other):
        """Span equality: labels are presentation sugar."""
        return (isinstance(other, QuadraticAlgebra) and self.field == other.field
                and self.ngens == other.ngens and self.relations == other.relations)

    def __hash__(self):
        return hash((self.field, self.ngens, self.relations))

    def __repr__(self):
        return (f"QuadraticAlgebra(ngens={self.ngens}, "
                f"relations_dim={self.relations.dim})")

    def relation_strings(self) -> list[str]:
        """Human-readable relation list, one string per basis row."""
        out = []
        n = self.ngens
        for row in self.relations.basis.entries:
            terms = []
            for c, e in enumerate(row):
                if e.is_zero():
                    continue
                i, j = divmod(c, n)
                mon = f"{self.labels[i]}*{self.labels[j]}"
                s = str(e)
                if s == "1":
                    term = mon
                elif s == "-1":
                    term = f"-{mon}"
                else:
                    if ("+" in s[1:] or "-" in s[1:] or " " in s) and not s.startswith("("):
                        s = f"({s})"
                    term = f"{s}*{mon}"
                terms.append(term)
            text = terms[0]
            for t in terms[1:]:
                text += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
            out.append(f"{text} = 0")
        return out


def tensor_algebra(field: Field, n: int, labels=None) -> QuadraticAlgebra:
    return QuadraticAlgebra(field, n, Subspace.zero(field, n * n), labels)


def algebra_X(e: Idempotent, labels=None) -> QuadraticAlgebra:
    """Generators x^i with relations spanned by the rows of E."""
    rel = Subspace.from_matrix(e.matrix)
    return QuadraticAlgebra(e.field, e.n, rel, labels)


def algebra_Xi(e: Idempotent, labels=None) -> QuadraticAlgebra:
    """Generators v_i with relations spanned by the columns of 1-E."""
    eye = Matrix.identity(e.field, e.n * e.n)
    rel = Subspace.from_matrix((eye - e.matrix).transpose())
    return QuadraticAlgebra(e.field, e.n, rel,
                            labels if labels is not None else _default_labels("v", e.n))


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith("!") else label + "!"


def koszul_dual(a: QuadraticAlgebra) -> QuadraticAlgebra:
    """Dual generators, relations the annihilator of R under <e_I, e_J> = d_IJ."""
    if a.relations.dim == 0:
        rel = Subspace.full(a.field, a.ngens * a.ngens)
    else:
        rel = kernel(a.relations.basis)
    return QuadraticAlgebra(a.field, a.ngens, rel,
                            tuple(_dual_label(l) for l in a.labels))


def opposite(a: QuadraticAlgebra) -> QuadraticAlgebra:
    """Opposite algebra: relations get the tensor-factor swap."""
    n = a.ngens
    perm = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            perm[i * n + j] = j * n + i
    return QuadraticAlgebra(a.field, n, permute_subspace(a.relations, perm), a.labels)


def _merge_labels(la, lb):
    if set(la) & set(lb):
        la = tuple(f"l.{x}" for x in la)
        lb = tuple(f"r.{x}" for x in lb)
    return la + lb


def _pair_labels(la, lb):
    return tuple(f"{x}.{y}" for x in la for y in lb)


def product(aa: QuadraticAlgebra, ab: QuadraticAlgebra, kind: str) -> QuadraticAlgebra:
    """Binary operations on quadratic algebras.

    white / black mix relation spaces through the middle-factor shuffle on
    V@W generator pairs (row-major); even/odd tensor and amalg live on the
    direct sum of the generator spaces, V generators listed first.
    """
    if aa.field != ab.field:
        raise ShapeError("field mismatch")
    field = aa.field
    n, m = aa.ngens, ab.ngens
    if kind in ("white", "black"):
        perm = shuffle_perm(n, m)
        full_b = Subspace.full(field, m * m)
        full_a = Subspace.full(field, n * n)
        if kind == "white":
            span = tensor_subspace(aa.relations, full_b).sum(
                tensor_subspace(full_a, ab.relations))
        else:
            span = tensor_subspace(aa.relations, ab.relations)
        rel = permute_subspace(span, perm)
        return QuadraticAlgebra(field, n * m, rel, _pair_labels(aa.labels, ab.labels))
    if kind in ("even_tensor", "odd_tensor", "amalg"):
        total = n + m
        rows = []
        for r in aa.relations.basis.entries:
            vec = {}
            for c, e in enumerate(r):
                if not e.is_zero():
                    i, j = divmod(c, n)
                    vec[i * total + j] = e
            rows.append(vec)
        for r in ab.relations.basis.entries:
            vec = {}
            for c, e in enumerate(r):
                if not e.is_zero():
                    i, j = divmod(c, m)
                    vec[(n + i) * total + (n + j)] = e
            rows.append(vec)
        if kind != "amalg":
            sign = field.one() if kind == "odd_tensor" else -field.one()
            for i in range(n):
                for j in range(m):
                    rows.append({i * total + (n + j): field.one(),
                                 (n + j) * total + i: sign})
        rel = Subspace.from_rows(field, total * total, rows)
        return QuadraticAlgebra(field, total, rel, _merge_labels(aa.labels, ab.labels))
    raise ValueError(f"unknown product kind {kind!r}")


# ---------------------------------------------------------------------------
# idempotent constructions mirroring the binary operations
# ---------------------------------------------------------------------------

def conj21(e: Idempotent) -> Idempotent:
    """sigma E sigma: entries (E21)^{ij}_{kl} = E^{ji}_{lk}."""
    n = e.n
    perm = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            perm[i * n + j] = j * n + i
    return Idempotent(e.field, n, permute_matrix(e.matrix, perm), _validated=True)


def _mixed_shuffle(mat: Matrix, m: int, n: int) -> Matrix:
    return permute_matrix(mat, shuffle_perm(m, n))


def tep(b: Idempotent, c: Idempotent) -> Idempotent:
    """shuffle (B@1 + 1@C - B@C) shuffle, on (K^m @ K^n)^{@2}."""
    if b.field != c.field:
        raise ShapeError("field mismatch")
    eye_b = Matrix.identity(b.field, b.n * b.n)
    eye_c = Matrix.identity(b.field, c.n * c.n)
    flat = kron(b.matrix, eye_c) + kron(eye_b, c.matrix) - kron(b.matrix, c.matrix)
    return Idempotent(b.field, b.n * c.n, _mixed_shuffle(flat, b.n, c.n))


def black_tep(b: Idempotent, c: Idempotent) -> Idempotent:
    """shuffle (B@C) shuffle."""
    if b.field != c.field:
        raise ShapeError("field mismatch")
    flat = kron(b.matrix, c.matrix)
    return Idempotent(b.field, b.n * c.n, _mixed_shuffle(flat, b.n, c.n))


def dis(b: Idempotent, c: Idempotent) -> Idempotent:
    """Direct-sum idempotent: B and C blocks plus the antisymmetrizer on
    mixed pairs, so that X(DiS(B,C)) presents the even tensor product."""
    if b.field != c.field:
        raise ShapeError("field mismatch")
    field = b.field
    m, n = b.n, c.n
    total = m + n
    zero = field.zero()
    half = field.from_fraction(Fraction(1, 2))
    size = total * total
    entries = [[zero] * size for _ in range(size)]

    def at(i, j):
        return i * total + j

    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    e = b.matrix.entries[i * m + j][k * m + l]
                    if not e.is_zero():
                        entries[at(i, j)][at(k, l)] = e
    for a in range(n):
        for bb in range(n):
            for cc in range(n):
                for d in range(n):
                    e = c.matrix.entries[a * n + bb][cc * n + d]
                    if not e.is_zero():
                        entries[at(m + a, m + bb)][at(m + cc, m + d)] = e
    for i in range(m):
        for a in range(n):
            u, v = at(i, m + a), at(m + a, i)
            entries[u][u] = half
            entries[v][v] = half
            entries[u][v] = -half
            entries[v][u] = -half
    return Idempotent(field, total, Matrix(field, entries))


def cop(b: Idempotent, c: Idempotent) -> Idempotent:
    """Coproduct idempotent: B and C blocks only, mixed entries zero."""
    if b.field != c.field:
        raise ShapeError("field mismatch")
    field = b.field
    m, n = b.n, c.n
    total = m + n
    zero = field.zero()
    size = total * total
    entries = [[zero] * size for _ in range(size)]

    def at(i, j):
        return i * total + j

    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    e = b.matrix.entries[i * m + j][k * m + l]
                    if not e.is_zero():
                        entries[at(i, j)][at(k, l)] = e
    for a in range(n):
        for bb in range(n):
            for cc in range(n):
                for d in range(n):
                    e = c.matrix.entries[a * n + bb][cc * n + d]
                    if not e.is_zero():
                        entries[at(m + a, m + bb)][at(m + cc, m + d)] = e
    return Idempotent(field, total, Matrix(field, entries))


# ---------------------------------------------------------------------------
# internal cohom
# ---------------------------------------------------------------------------

def cohom_labels(n: int, m: int, symbol: str = "M") -> tuple[str, ...]:
    return tuple(f"{symbol}[{i},{j}]" for i in range(1, n + 1) for j in range(1, m + 1))


def cohom_algebra(b: Idempotent, a: Idempotent, symbol: str = "M") -> QuadraticAlgebra:
    """Universal algebra of the (A,B)-Manin condition.

    Generators M[i,j], i on the A side (1..n), j on the B side (1..m),
    row-major; relations are spanned, over all (p,q) and (i,j), by
    sum A^{pq}_{st} (1-B)^{kl}_{ij} M[s,k] @ M[t,l].
    """
    if b.field != a.field:
        raise ShapeError("field mismatch")
    field = a.field
    n, m = a.n, b.n
    rel_a = Subspace.from_matrix(a.matrix)
    eye = Matrix.identity(field, m * m)
    rel_bt = Subspace.from_matrix((eye - b.matrix).transpose())
    span = tensor_subspace(rel_a, rel_bt)
    rel = permute_subspace(span, shuffle_perm(n, m))
    return QuadraticAlgebra(field, n * m, rel, cohom_labels(n, m, symbol))


# ---------------------------------------------------------------------------
# graded dimensions
# ---------------------------------------------------------------------------

def degree_relation_rows(a: QuadraticAlgebra, k: int):
    """Sparse rows spanning sum_i V^i @ R @ V^(k-2-i) inside V^k."""
    n = a.ngens
    rows = []
    for pos in range(k - 1):
        suffix_len = k - 2 - pos
        n_prefix = n ** pos
        n_suffix = n ** suffix_len
        for rel in a.relations.basis.entries:
            support = [(c, e) for c, e in enumerate(rel) if not e.is_zero()]
            for left in range(n_prefix):
                base = left * n * n
                for right in range(n_suffix):
                    rows.append({(base + c) * n_suffix + right: e
                                 for c, e in support})
    return rows


def graded_dim(a: QuadraticAlgebra, k: int, cap: int = DEFAULT_DEGREE_CAP) -> int:
    """dim of the degree-k component of TV/(R)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    if k > cap:
        raise DegreeCapExceeded(f"degree {k} exceeds cap {cap}")
    if k == 0:
        return 1
    if k == 1:
        return a.ngens
    ambient = a.ngens ** k
    if ambient > _AMBIENT_GUARD:
        raise DegreeCapExceeded(f"degree-{k} ambient dimension {ambient} too large")
    if a.relations.dim == 0:
        return ambient
    return ambient - rank_sparse(degree_relation_rows(a, k))


# ---------------------------------------------------------------------------
# graded homomorphisms
# ---------------------------------------------------------------------------

def extends_to_hom(f1: Matrix, src: QuadraticAlgebra, dst: QuadraticAlgebra) -> bool:
    """True iff (f1 @ f1) maps src relations into dst relations.

    f1 rows are indexed by src generators: row i holds the coordinates of
    the image of generator i in the dst generators.
    """
    if f1.rows != src.ngens or f1.cols != dst.ngens:
        raise ShapeError("f1 shape must be src_gens x dst_gens")
    if f1.field != src.field or src.field != dst.field:
        raise ShapeError("field mismatch")
    ff = kron(f1, f1)
    for rel in src.relations.basis.entries:
        image: dict[int, FieldElement] = {}
        for c, e in enumerate(rel):
            if e.is_zero():
                continue
            for jc, f in enumerate(ff.entries[c]):
                if f.is_zero():
                    continue
                acc = image.get(jc)
                acc = e * f if acc is None else acc + e * f
                if acc.is_zero():
                    image.pop(jc, None)
                else:
                    image[jc] = acc
        if not dst.relations.contains_vector(image):
            return False
    return True


# ---------------------------------------------------------------------------
# randomized generators for the property suites
# ---------------------------------------------------------------------------

def _shear_conjugate(m: Matrix, u: int, v: int, c: FieldElement) -> Matrix:
    """(1 - c E_uv) M (1 + c E_uv); exact inverse pair, no elimination."""
    entries = [list(row) for row in m.entries]
    size = m.rows
    for i in range(size):
        entries[i][v] = entries[i][v] + c * entries[i][u]
    for j in range(size):
        entries[u][j] = entries[u][j] - c * entries[v][j]
    return Matrix(m.field, entries)


def random_idempotent(field: Field, n: int, rng, max_rank: Optional[int] = None) -> Idempotent:
    """Random projection: image a random subspace, then random shear conjugations.

    Division-free by construction, which keeps ratfunc entries small.
    """
    size = n * n
    rank = rng.randint(0, size if max_rank is None else max_rank)
    rows = [[field.from_int(rng.randint(-2, 2)) for _ in range(size)]
            for _ in range(rank)]
    image = Subspace.from_rows(field, size, rows)
    zero = field.zero()
    entries = [[zero] * size for _ in range(size)]
    for k, p in enumerate(image.pivots):
        basis_row = image.basis.entries[k]
        for i in range(size):
            if not basis_row[i].is_zero():
                entries[i][p] = basis_row[i]
    m = Matrix(field, entries)
    for _ in range(3):
        u, v = rng.randrange(size), rng.randrange(size)
        if u == v:
            continue
        if field.kind == "ratfunc":
            c = field.element([rng.randint(-2, 2), rng.randint(-2, 2)])
        else:
            c = field.from_int(rng.randint(-2, 2))
        if c.is_zero():
            continue
        m = _shear_conjugate(m, u, v, c)
    return Idempotent(field, n, m, _validated=True)
