"""Canonical subspace values and the subspace metric.

A subspace is stored as its unique reduced-row-echelon generator matrix,
so equality, hashing, and file ordering are all structural.
"""

from __future__ import annotations

from .gf import FieldSpec
from .linalg import (DimensionError, MatrixGF, PivotVector, pack_row, rank_rows,
                     rref, rref_bits, unpack_row)


class EmptySubspaceError(ValueError):
    pass


class Subspace:
    __slots__ = ("field", "n", "k", "gen", "_pivots")

    def __init__(self, field: FieldSpec, n: int, gen_rows, pivots=None):
        """Internal constructor; gen_rows must already be canonical RREF."""
        self.field = field
        self.n = n
        self.gen = MatrixGF(field, gen_rows, ncols=n)
        self.k = self.gen.nrows
        self._pivots = pivots

    @staticmethod
    def from_matrix(M: MatrixGF) -> "Subspace":
        res = rref(M)
        if res.rank == 0:
            raise EmptySubspaceError("zero matrix spans no subspace")
        sub = Subspace(M.field, M.ncols, res.matrix.rows)
        sub._pivots = res.pivots
        return sub

    @staticmethod
    def from_rows(field: FieldSpec, rows, n: int) -> "Subspace":
        return Subspace.from_matrix(MatrixGF(field, rows, ncols=n))

    @staticmethod
    def from_packed(field: FieldSpec, packed_rows, n: int) -> "Subspace":
        """q = 2 only: rows already in canonical RREF, bit-packed."""
        return Subspace(field, n, [unpack_row(r, n) for r in packed_rows])

    # -- identity ------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.n == other.n
                and self.field == other.field and self.gen.rows == other.gen.rows)

    def __hash__(self):
        return hash((self.n, self.gen.rows))

    def __repr__(self):
        return f"Subspace(dim {self.k} of GF({self.field.q})^{self.n})"

    @property
    def pivots(self) -> PivotVector:
        if self._pivots is None:
            self._pivots = rref(self.gen).pivots
        return self._pivots

    def packed_rows(self):
        return [pack_row(r) for r in self.gen.rows]

    def key(self) -> int:
        """Canonical integer key: generator entries in row-major base-q order."""
        q = self.field.q
        x = self.k
        for row in self.gen.rows:
            for v in row:
                x = x * q + v
        return x

    # -- serialization -------------------------------------------------

    def serialize(self) -> str:
        q = self.field.q
        if q <= 10:
            return "|".join("".join(str(v) for v in row) for row in self.gen.rows)
        return "|".join(",".join(str(v) for v in row) for row in self.gen.rows)

    @staticmethod
    def parse(field: FieldSpec, n: int, text: str) -> "Subspace":
        rows = []
        for part in text.strip().split("|"):
            if field.q <= 10:
                row = tuple(int(c) for c in part)
            else:
                row = tuple(int(c) for c in part.split(","))
            if len(row) != n or any(v < 0 or v >= field.q for v in row):
                raise ValueError(f"bad codeword row {part!r} for n={n}, q={field.q}")
            rows.append(row)
        return Subspace.from_rows(field, rows, n)

    # -- geometry ------------------------------------------------------

    def _check_ambient(self, other: "Subspace"):
        if self.n != other.n or self.field != other.field:
            raise DimensionError("subspaces live in different ambient spaces")

    def vectors(self):
        """All vectors of the subspace as coordinate tuples (q^k of them)."""
        f = self.field
        span = [(0,) * self.n]
        for row in self.gen.rows:
            new = []
            for c in range(1, f.q):
                scaled = tuple(f.mul(c, v) for v in row)
                for vec in span:
                    new.append(tuple(f.add(a, b) for a, b in zip(vec, scaled)))
            span.extend(new)
        return span


def distance(U: Subspace, W: Subspace) -> int:
    """Subspace distance 2*rank(stack) - dim U - dim W."""
    U._check_ambient(W)
    r = rank_rows(U.field, U.gen.rows + W.gen.rows, U.n)
    return 2 * r - U.k - W.k


def pivot_distance_bound(U: Subspace, W: Subspace) -> int:
    """Hamming distance of pivot vectors; a lower bound on distance()."""
    U._check_ambient(W)
    return U.pivots.hamming(W.pivots)


def intersection_dim(U: Subspace, W: Subspace) -> int:
    U._check_ambient(W)
    r = rank_rows(U.field, U.gen.rows + W.gen.rows, U.n)
    return U.k + W.k - r


def span(U: Subspace, W: Subspace) -> Subspace:
    U._check_ambient(W)
    return Subspace.from_rows(U.field, U.gen.rows + W.gen.rows, U.n)


def orthogonal_complement(U: Subspace) -> Subspace:
    """Complement under the standard bilinear form sum(u_i v_i)."""
    f = U.field
    n = U.n
    if f.q == 2:
        # nullspace of gen: solve x . row = 0 for all rows
        rows = [pack_row(r) for r in U.gen.rows]
        red, pivots = rref_bits(rows, n)
        free = [j for j in range(n) if j not in pivots]
        basis = []
        for j in free:
            vec = [0] * n
            vec[j] = 1
            for r, p in zip(red, pivots):
                if (r >> (n - 1 - j)) & 1:
                    vec[p] = 1
            basis.append(tuple(vec))
        if not basis:
            return Subspace(f, n, [])
        return Subspace.from_rows(f, basis, n)
    from .linalg import _rref_rows
    red, pivots = _rref_rows(f, U.gen.rows, n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        vec = [0] * n
        vec[j] = 1
        for r, p in zip(red, pivots):
            vec[p] = f.neg(r[j])
        basis.append(tuple(vec))
    if not basis:
        return Subspace(f, n, [])
    return Subspace.from_rows(f, basis, n)
