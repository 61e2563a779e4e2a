"""Exact dense linear algebra and tensor-index bookkeeping.

Matrices are immutable grids of FieldElement over a shared field.  Subspaces
are canonical row spaces: the stored basis is the reduced row echelon form,
so two subspaces are equal iff their bases are structurally identical and
every derived object is reproducible byte for byte.

Elimination runs on sparse dict rows internally (column -> entry); for the
highly structured relation spans handled here rows stay sparse throughout,
which keeps degree-5 rank computations at desk scale fast.  The public
results are ordinary dense matrices.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .fields import Field, FieldElement

SparseRow = dict[int, FieldElement]


class ShapeError(ValueError):
    """Raised on dimension or field mismatches."""


class Matrix:
    """Immutable exact matrix."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries: Sequence[Sequence[FieldElement]]):
        entries = tuple(tuple(row) for row in entries)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        for row in entries:
            if len(row) != cols:
                raise ShapeError("ragged rows")
            for e in row:
                if e.field != field:
                    raise ShapeError("entry field mismatch")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], parse=None) -> "Matrix":
        conv = parse or (lambda v: v if isinstance(v, FieldElement)
                         else field.from_fraction(v))
        return cls(field, [[conv(v) for v in row] for row in rows])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    # -- basics ---------------------------------------------------------------

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.field, self.entries))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix) or other.field != self.field:
            raise ShapeError("matrix field mismatch")

    def __add__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        return Matrix(self.field, [[a + b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in subtraction")
        return Matrix(self.field, [[a - b for a, b in zip(ra, rb)]
                                   for ra, rb in zip(self.entries, other.entries)])

    def scale(self, c: FieldElement) -> "Matrix":
        return Matrix(self.field, [[c * e for e in row] for row in self.entries])

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError("shape mismatch in product")
        zero = self.field.zero()
        cols_of_other = list(zip(*other.entries)) if other.rows else []
        out = []
        for row in self.entries:
            new_row = []
            for col in cols_of_other:
                acc = zero
                for a, b in zip(row, col):
                    if not (a.is_zero() or b.is_zero()):
                        acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return Matrix(self.field, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.entries)) if self.rows else [])

    def row(self, i: int) -> tuple[FieldElement, ...]:
        return self.entries[i]

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("only square matrices invert")
        aug = [list(self.entries[i]) + list(Matrix.identity(self.field, self.rows).entries[i])
               for i in range(self.rows)]
        red, pivots, rank = rref(Matrix(self.field, aug))
        if rank < self.rows or pivots != tuple(range(self.rows)):
            raise ShapeError("matrix is singular")
        return Matrix(self.field, [row[self.rows:] for row in red.entries])

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in row) for row in self.entries)
        return f"Matrix[{self.rows}x{self.cols}: {body}]"


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product in the global row-major flattening."""
    if a.field != b.field:
        raise ShapeError("field mismatch in Kronecker product")
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                row.extend(aij * bkl for bkl in b.entries[k])
            out.append(row)
    return Matrix(a.field, out)


# ---------------------------------------------------------------------------
# sparse elimination core
# ---------------------------------------------------------------------------

def _sparse_rows(m: Matrix) -> list[SparseRow]:
    return [{j: e for j, e in enumerate(row) if not e.is_zero()}
            for row in m.entries]


def _eliminate(rows: Iterable[SparseRow]) -> dict[int, SparseRow]:
    """Reduce rows to canonical RREF; returns pivot column -> unit row."""
    pivot_rows: dict[int, SparseRow] = {}
    for incoming in rows:
        row = dict(incoming)
        while row:
            lead = min(row)
            pivot = pivot_rows.get(lead)
            if pivot is None:
                inv = row[lead].inv()
                pivot_rows[lead] = {c: v * inv for c, v in row.items()}
                break
            coeff = row.pop(lead)
            for c, v in pivot.items():
                if c == lead:
                    continue
                acc = row.get(c)
                acc = -coeff * v if acc is None else acc - coeff * v
                if acc.is_zero():
                    row.pop(c, None)
                else:
                    row[c] = acc
    # back substitution: clear pivot columns from earlier rows
    for lead in sorted(pivot_rows, reverse=True):
        row = pivot_rows[lead]
        for c in [c for c in row if c != lead and c in pivot_rows]:
            coeff = row.pop(c)
            for cc, v in pivot_rows[c].items():
                if cc == c:
                    continue
                acc = row.get(cc)
                acc = -coeff * v if acc is None else acc - coeff * v
                if acc.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = acc
    return pivot_rows


def rref_sparse(rows: Iterable[SparseRow], ncols: int, field: Field):
    """RREF of sparse rows; returns (dense basis rows, pivots, rank)."""
    pivot_rows = _eliminate(rows)
    pivots = tuple(sorted(pivot_rows))
    zero = field.zero()
    dense = []
    for lead in pivots:
        row = pivot_rows[lead]
        dense.append(tuple(row.get(j, zero) for j in range(ncols)))
    return dense, pivots, len(pivots)


def rank_sparse(rows: Iterable[SparseRow]) -> int:
    return len(_eliminate(rows))


def rref(m: Matrix):
    """Reduced row echelon form; returns (Matrix, pivots, rank).

    Deterministic: RREF is the canonical form of the row space, padded with
    zero rows back to the input height.
    """
    dense, pivots, rank = rref_sparse(_sparse_rows(m), m.cols, m.field)
    zero_row = tuple([m.field.zero()] * m.cols)
    padded = list(dense) + [zero_row] * (m.rows - rank)
    return Matrix(m.field, padded), pivots, rank


class Subspace:
    """Canonical subspace of F^ambient: basis rows in RREF, pivots recorded."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, basis: Matrix, pivots: tuple):
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_rows(cls, field: Field, ambient: int, rows) -> "Subspace":
        sparse = []
        for row in rows:
            if isinstance(row, dict):
                sparse.append({c: v for c, v in row.items() if not v.is_zero()})
            else:
                sparse.append({j: v for j, v in enumerate(row) if not v.is_zero()})
        dense, pivots, _ = rref_sparse(sparse, ambient, field)
        return cls(field, ambient, Matrix(field, dense) if dense
                   else Matrix.zeros(field, 0, ambient), pivots)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "Subspace":
        return cls.from_rows(m.field, m.cols, m.entries)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls.from_rows(field, ambient, [])

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls.from_matrix(Matrix.identity(field, ambient))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient or self.field != other.field:
            raise ShapeError("subspace ambient mismatch")

    def contains_vector(self, row) -> bool:
        if isinstance(row, dict):
            v = dict(row)
        else:
            v = {j: e for j, e in enumerate(row) if not e.is_zero()}
        for i, p in enumerate(self.pivots):
            if p in v:
                coeff = v.pop(p)
                for c, e in enumerate(self.basis.entries[i]):
                    if c == p or e.is_zero():
                        continue
                    acc = v.get(c)
                    acc = -coeff * e if acc is None else acc - coeff * e
                    if acc.is_zero():
                        v.pop(c, None)
                    else:
                        v[c] = acc
        return not v

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains_vector(r) for r in other.basis.entries)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_rows(self.field, self.ambient,
                                  list(self.basis.entries) + list(other.basis.entries))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus-style: kernel of the stacked bases gives the coefficients."""
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient)
        stacked = Matrix(self.field, [list(r) for r in self.basis.entries]
                         + [list(r) for r in other.basis.entries]).transpose()
        ker = kernel(stacked)
        rows = []
        for coeffs in ker.basis.entries:
            vec: SparseRow = {}
            for i in range(self.dim):
                c = coeffs[i]
                if c.is_zero():
                    continue
                for j, e in enumerate(self.basis.entries[i]):
                    if e.is_zero():
                        continue
                    acc = vec.get(j)
                    acc = c * e if acc is None else acc + c * e
                    if acc.is_zero():
                        vec.pop(j, None)
                    else:
                        vec[j] = acc
            rows.append(vec)
        return Subspace.from_rows(self.field, self.ambient, rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def subspace_ops(sa: Subspace, sb: Subspace, op: str):
    """Lattice operations with standard semantics."""
    if op == "sum":
        return sa.sum(sb)
    if op == "intersect":
        return sa.intersect(sb)
    if op == "contains":
        sa._check(sb)
        return sa.contains(sb)
    if op == "equals":
        sa._check(sb)
        return sa == sb
    raise ValueError(f"unknown subspace operation {op!r}")


def kernel(m: Matrix) -> Subspace:
    """Basis of the right null space {x : Mx = 0}."""
    dense, pivots, rank = rref_sparse(_sparse_rows(m), m.cols, m.field)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    zero = m.field.zero()
    one = m.field.one()
    rows = []
    for f in free:
        vec = {f: one}
        for i, p in enumerate(pivots):
            e = dense[i][f]
            if not e.is_zero():
                vec[p] = -e
        rows.append(vec)
    ker = Subspace.from_rows(m.field, m.cols, rows)
    assert ker.dim == m.cols - rank
    return ker


def annihilator(s: Subspace) -> Subspace:
    """Annihilator under the standard dual pairing <e_i, e_j> = delta_ij."""
    if s.dim == 0:
        return Subspace.full(s.field, s.ambient)
    return kernel(s.basis)


def tensor_subspace(sa: Subspace, sb: Subspace) -> Subspace:
    """Row-major tensor product of subspaces inside F^(ambient_a * ambient_b)."""
    if sa.field != sb.field:
        raise ShapeError("field mismatch")
    ambient = sa.ambient * sb.ambient
    rows = []
    for ra in sa.basis.entries:
        for rb in sb.basis.entries:
            vec = {}
            for i, a in enumerate(ra):
                if a.is_zero():
                    continue
                base = i * sb.ambient
                for j, b in enumerate(rb):
                    if not b.is_zero():
                        vec[base + j] = a * b
            rows.append(vec)
    return Subspace.from_rows(sa.field, ambient, rows)


# ---------------------------------------------------------------------------
# tensor index bookkeeping
# ---------------------------------------------------------------------------

def flatten_pair(i: int, j: int, n: int) -> int:
    """Row-major flattening of a 1-based index pair on an n-dim space."""
    return (i - 1) * n + (j - 1)


def shuffle_perm(n: int, m: int) -> list[int]:
    """Image indices of the middle-factor swap V@V@W@W -> V@W@V@W.

    perm[flat(a,b,c,d)] = flat'(a,c,b,d); source dims (n,n,m,m), image dims
    (n,m,n,m), both row-major and 0-based.
    """
    perm = [0] * (n * n * m * m)
    for a in range(n):
        for b in range(n):
            for c in range(m):
                for d in range(m):
                    src = ((a * n + b) * m + c) * m + d
                    dst = ((a * m + c) * n + b) * m + d
                    perm[src] = dst
    return perm


def shuffle_23(dims: tuple[int, int], field: Field) -> Matrix:
    """Permutation matrix of the basis map (a,b,c,d) -> (a,c,b,d)."""
    n, m = dims
    perm = shuffle_perm(n, m)
    size = n * n * m * m
    zero, one = field.zero(), field.one()
    entries = [[zero] * size for _ in range(size)]
    for src, dst in enumerate(perm):
        entries[dst][src] = one
    return Matrix(field, entries)


def permute_subspace(s: Subspace, perm: Sequence[int]) -> Subspace:
    """Apply a coordinate permutation (new[perm[j]] = old[j]) to a subspace."""
    rows = []
    for r in s.basis.entries:
        rows.append({perm[j]: e for j, e in enumerate(r) if not e.is_zero()})
    return Subspace.from_rows(s.field, s.ambient, rows)


def permute_matrix(m: Matrix, perm: Sequence[int]) -> Matrix:
    """Conjugate a square matrix by the permutation (basis e_j -> e_perm[j])."""
    if m.rows != m.cols or m.rows != len(perm):
        raise ShapeError("permutation size mismatch")
    zero = m.field.zero()
    out = [[zero] * m.cols for _ in range(m.rows)]
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.entries[i][j]
            if not e.is_zero():
                out[perm[i]][perm[j]] = e
    return Matrix(m.field, out)
