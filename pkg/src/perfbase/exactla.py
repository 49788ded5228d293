"""Exact dense linear algebra over a Field.

Matrices store entries by canonical integer encoding; all arithmetic is exact
(no pivot-magnitude concerns can exist).  Matrix spaces always keep a
canonical RREF-reduced basis of their vectorized members, so equality of
spaces is equality of canonical bases.

Everything here is immutable after construction and safe for concurrent use.
"""

from __future__ import annotations

from .errors import FieldMismatch, ShapeMismatch, Singular
from .gf import Field, FieldElement


def _enc(field, value) -> int:
    if isinstance(value, FieldElement):
        if value.field != field:
            raise FieldMismatch("entry from a different field")
        return value.enc
    return int(value) % field.q if field.deg > 1 else int(value) % field.p


class FqMatrix:
    """Dense n x m matrix over a Field; rows stored as tuples of encodings."""

    __slots__ = ("field", "n", "m", "rows")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = tuple(tuple(_enc(field, v) for v in row) for row in rows)
        self.n = len(self.rows)
        if self.n == 0:
            raise ShapeMismatch("matrix needs at least one row")
        self.m = len(self.rows[0])
        if self.m == 0 or any(len(r) != self.m for r in self.rows):
            raise ShapeMismatch("ragged or empty rows")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zeros(cls, field, n, m):
        return cls(field, [[0] * m for _ in range(n)])

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field, n, m, i, j):
        """E_{i,j} with one 1 entry, indices 0-based."""
        rows = [[0] * m for _ in range(n)]
        rows[i][j] = 1
        return cls(field, rows)

    @classmethod
    def from_vector(cls, field, vec, n, m):
        vec = tuple(vec)
        if len(vec) != n * m:
            raise ShapeMismatch("vector length does not match shape")
        return cls(field, [vec[i * m:(i + 1) * m] for i in range(n)])

    @classmethod
    def row_stack(cls, field, matrices):
        rows = []
        for M in matrices:
            rows.extend(M.rows)
        return cls(field, rows)

    # -- basics ------------------------------------------------------------------

    @property
    def shape(self):
        return (self.n, self.m)

    def __eq__(self, other):
        return (isinstance(other, FqMatrix) and self.field == other.field
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        body = "; ".join(",".join(str(v) for v in row) for row in self.rows)
        return f"FqMatrix({self.n}x{self.m})[{body}]"

    def entry(self, i, j) -> FieldElement:
        return FieldElement(self.field, self.rows[i][j])

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def vectorize(self):
        """Row-major flattening (a_11, ..., a_1m, a_21, ..., a_nm)."""
        return tuple(v for row in self.rows for v in row)

    def transpose(self):
        return FqMatrix(self.field,
                        [[self.rows[i][j] for i in range(self.n)]
                         for j in range(self.m)])

    def __add__(self, other):
        self._check_same(other)
        F = self.field
        return FqMatrix(F, [[F.add(a, b) for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check_same(other)
        F = self.field
        return FqMatrix(F, [[F.sub(a, b) for a, b in zip(ra, rb)]
                            for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self):
        F = self.field
        return FqMatrix(F, [[F.neg(a) for a in row] for row in self.rows])

    def scale(self, c):
        F = self.field
        ce = _enc(F, c)
        return FqMatrix(F, [[F.mul(ce, a) for a in row] for row in self.rows])

    def __matmul__(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrix product across fields")
        if self.m != other.n:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        F = self.field
        bt = other.transpose().rows
        out = []
        for row in self.rows:
            new = []
            for col in bt:
                acc = 0
                for a, b in zip(row, col):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                new.append(acc)
            out.append(new)
        return FqMatrix(F, out)

    def power(self, e: int):
        if self.n != self.m:
            raise ShapeMismatch("powers need a square matrix")
        if e < 0:
            return self.inverse().power(-e)
        result = FqMatrix.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def trace(self) -> FieldElement:
        if self.n != self.m:
            raise ShapeMismatch("trace needs a square matrix")
        F = self.field
        acc = 0
        for i in range(self.n):
            acc = F.add(acc, self.rows[i][i])
        return FieldElement(F, acc)

    def _check_same(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    # -- elimination ----------------------------------------------------------

    def rref(self):
        """Reduced row echelon form: (matrix, rank, pivot columns).

        Deterministic: leftmost pivot column, first nonzero row in order.
        """
        F = self.field
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.m):
            pivot = None
            for i in range(r, self.n):
                if rows[i][c]:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = F.inv(rows[r][c])
            rows[r] = [F.mul(inv, v) for v in rows[r]]
            for i in range(self.n):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [F.sub(a, F.mul(f, b))
                               for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == self.n:
                break
        return FqMatrix(F, rows), r, tuple(pivots)

    def rank(self) -> int:
        return self.rref()[1]

    def is_rank_one(self) -> bool:
        return self.rank() == 1

    def inverse(self):
        if self.n != self.m:
            raise Singular("only square matrices invert")
        F = self.field
        n = self.n
        aug = FqMatrix(F, [list(self.rows[i]) + [1 if j == i else 0 for j in range(n)]
                           for i in range(n)])
        red, rank, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise Singular("matrix is singular")
        return FqMatrix(F, [row[n:] for row in red.rows])

    def is_invertible(self) -> bool:
        return self.n == self.m and self.rank() == self.n


def vectorize(A: FqMatrix):
    return A.vectorize()


def trace_pair(A: FqMatrix, B: FqMatrix) -> FieldElement:
    """Trace bilinear form Tr(A B^t) = dot of the vectorizations."""
    A._check_same(B)
    F = A.field
    acc = 0
    for ra, rb in zip(A.rows, B.rows):
        for a, b in zip(ra, rb):
            if a and b:
                acc = F.add(acc, F.mul(a, b))
    return FieldElement(F, acc)


def _row_reduce_vectors(field, vectors, width):
    """RREF of a list of coordinate vectors; returns (rows, pivots)."""
    M = FqMatrix(field, list(vectors) or [[0] * width])
    red, rank, pivots = M.rref()
    return [red.rows[i] for i in range(rank)], pivots


def _nullspace(field, rows, width):
    """Null space basis of the row list, free-column index ascending."""
    if rows:
        red, rank, pivots = FqMatrix(field, rows).rref()
        red_rows = red.rows[:rank]
    else:
        red_rows, rank, pivots = [], 0, ()
    pivot_set = set(pivots)
    free_cols = [c for c in range(width) if c not in pivot_set]
    F = field
    basis = []
    for fc in free_cols:
        vec = [0] * width
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = F.neg(red_rows[r][fc])
        basis.append(tuple(vec))
    return basis


class MatrixSpace:
    """An F_q-subspace of n x m matrices with a canonical RREF basis."""

    __slots__ = ("field", "n", "m", "basis", "_rrows", "_pivots")

    def __init__(self, field: Field, shape, matrices):
        self.field = field
        self.n, self.m = shape
        vecs = []
        for M in matrices:
            if M.field != field:
                raise FieldMismatch("basis matrix over a different field")
            if M.shape != (self.n, self.m):
                raise ShapeMismatch("basis matrix with a different shape")
            vecs.append(M.vectorize())
        rows, pivots = _row_reduce_vectors(field, vecs, self.n * self.m)
        self._rrows = tuple(tuple(r) for r in rows)
        self._pivots = tuple(pivots)
        self.basis = tuple(FqMatrix.from_vector(field, r, self.n, self.m)
                           for r in self._rrows)

    @classmethod
    def from_matrices(cls, matrices):
        mats = list(matrices)
        if not mats:
            raise ShapeMismatch("need at least one matrix to infer the shape")
        return cls(mats[0].field, mats[0].shape, mats)

    @classmethod
    def zero(cls, field, shape):
        return cls(field, shape, [])

    @classmethod
    def full(cls, field, shape):
        n, m = shape
        return cls(field, shape,
                   [FqMatrix.unit(field, n, m, i, j)
                    for i in range(n) for j in range(m)])

    @property
    def dim(self) -> int:
        return len(self._rrows)

    @property
    def shape(self):
        return (self.n, self.m)

    def __eq__(self, other):
        return (isinstance(other, MatrixSpace) and self.field == other.field
                and self.shape == other.shape and self._rrows == other._rrows)

    def __hash__(self):
        return hash((self.field, self.shape, self._rrows))

    def __repr__(self):
        return f"MatrixSpace({self.n}x{self.m}, dim={self.dim})"

    def reduce_vector(self, vec):
        """Residue of a coordinate vector modulo the space."""
        F = self.field
        vec = list(vec)
        for row, pc in zip(self._rrows, self._pivots):
            c = vec[pc]
            if c:
                vec = [F.sub(a, F.mul(c, b)) for a, b in zip(vec, row)]
        return tuple(vec)

    def contains(self, A: FqMatrix) -> bool:
        if A.shape != self.shape:
            raise ShapeMismatch("containment across shapes")
        return all(v == 0 for v in self.reduce_vector(A.vectorize()))

    def coordinates(self, A: FqMatrix):
        """Coefficients of A in the canonical basis; None if not contained."""
        F = self.field
        vec = list(A.vectorize())
        coords = []
        for row, pc in zip(self._rrows, self._pivots):
            c = vec[pc]
            coords.append(c)
            if c:
                vec = [F.sub(a, F.mul(c, b)) for a, b in zip(vec, row)]
        if any(vec):
            return None
        return tuple(coords)

    def dual_complement(self) -> "MatrixSpace":
        """Orthogonal complement under the trace bilinear form."""
        basis = _nullspace(self.field, [list(r) for r in self._rrows],
                           self.n * self.m)
        return MatrixSpace(self.field, self.shape,
                           [FqMatrix.from_vector(self.field, v, self.n, self.m)
                            for v in basis])

    def transform(self, L: FqMatrix, N: FqMatrix) -> "MatrixSpace":
        """The space {L B N : B in basis}; L and N must be invertible."""
        if not L.is_invertible() or not N.is_invertible():
            raise Singular("equivalence transforms need invertible factors")
        return MatrixSpace(self.field, (L.n, N.m),
                           [L @ B @ N for B in self.basis])

    def sum_with(self, other: "MatrixSpace") -> "MatrixSpace":
        if self.shape != other.shape or self.field != other.field:
            raise ShapeMismatch("sum of spaces with different ambient")
        return MatrixSpace(self.field, self.shape,
                           list(self.basis) + list(other.basis))

    def intersect(self, other: "MatrixSpace") -> "MatrixSpace":
        """Intersection via the kernel of the stacked coefficient relation."""
        if self.shape != other.shape or self.field != other.field:
            raise ShapeMismatch("intersection across ambients")
        k1, k2 = self.dim, other.dim
        if k1 == 0 or k2 == 0:
            return MatrixSpace.zero(self.field, self.shape)
        F = self.field
        # columns: coefficients (lambda, mu); rows: one per ambient coordinate
        # of lambda*B1 - mu*B2 = 0.
        width = k1 + k2
        rows = []
        for coord in range(self.n * self.m):
            row = [self._rrows[i][coord] for i in range(k1)]
            row += [F.neg(other._rrows[j][coord]) for j in range(k2)]
            rows.append(row)
        members = []
        for vec in _nullspace(F, rows, width):
            lam = vec[:k1]
            acc = [0] * (self.n * self.m)
            for c, brow in zip(lam, self._rrows):
                if c:
                    acc = [F.add(a, F.mul(c, b)) for a, b in zip(acc, brow)]
            members.append(FqMatrix.from_vector(F, acc, self.n, self.m))
        return MatrixSpace(self.field, self.shape, members)

    def iter_elements(self, nonzero_only=False, projective=False):
        """All members as coefficient combinations of the canonical basis.

        With projective=True, one representative per scalar class (first
        nonzero coefficient normalized to 1).
        """
        F = self.field
        k = self.dim
        size = self.n * self.m

        def combine(coeffs):
            acc = [0] * size
            for c, row in zip(coeffs, self._rrows):
                if c:
                    acc = [F.add(a, F.mul(c, b)) for a, b in zip(acc, row)]
            return FqMatrix.from_vector(F, acc, self.n, self.m)

        if projective:
            for lead in range(k):
                zeros = (0,) * lead
                for rest in _tuples(F.q, k - lead - 1):
                    yield combine(zeros + (1,) + rest)
            if not nonzero_only:
                yield FqMatrix.zeros(F, self.n, self.m)
            return
        for coeffs in _tuples(F.q, k):
            if nonzero_only and not any(coeffs):
                continue
            yield combine(coeffs)


def _tuples(q, length):
    if length == 0:
        yield ()
        return
    for head in range(q):
        for rest in _tuples(q, length - 1):
            yield (head,) + rest


# --- spec-level operation wrappers ----------------------------------------------

def rref(M: FqMatrix):
    return M.rref()


def dual_complement(V: MatrixSpace) -> MatrixSpace:
    return V.dual_complement()


def space_contains(V: MatrixSpace, A: FqMatrix) -> bool:
    return V.contains(A)


def equivalence_transform(V: MatrixSpace, L: FqMatrix, N: FqMatrix) -> MatrixSpace:
    return V.transform(L, N)
