"""MRD rank-metric codes in the Gabidulin realization.

Codes are exposed as immutable handles with deterministic, restartable
enumeration: index i maps to the tuple of linearized-polynomial
coefficients (c_0, ..., c_{t-1}) over GF(q^max(m,n)), c_0 in the most
significant digit.  Nested subcodes truncate the coefficient range, coset
partitions translate a nested subcode by the complementary coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import ExtFieldSpec, FieldSpec, ext_field, field_new
from .linalg import MatrixGF, gaussian_binomial, rank_rows


class RankCodeError(ValueError):
    pass


def _factor_prime_power(q: int):
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            x = q
            while x % p == 0:
                x //= p
                e += 1
            if x != 1:
                raise RankCodeError(f"q={q} is not a prime power")
            return p, e
    raise RankCodeError(f"q={q} is not a prime power")


def base_field(q: int) -> FieldSpec:
    p, e = _factor_prime_power(q)
    return field_new(p, e)


def mrd_size(q: int, m: int, n: int, d_r: int) -> int:
    """Maximum size of an (m x n, d_r)_q rank-metric code."""
    if not 1 <= d_r <= min(m, n):
        raise RankCodeError(f"need 1 <= d_r <= min(m,n), got d_r={d_r}")
    return q ** (max(m, n) * (min(m, n) - d_r + 1))


def rank_distribution(q: int, m: int, n: int, d_r: int, r: int) -> int:
    """Number of rank-r codewords in an additive (m x n, d_r)_q MRD code."""
    lo, hi = min(m, n), max(m, n)
    if r == 0:
        return 1
    if 0 < r < d_r:
        return 0
    if not d_r <= r <= lo:
        raise RankCodeError(f"rank r={r} out of range [{d_r}, {lo}]")
    total = 0
    for s in range(r - d_r + 1):
        term = (q ** (s * (s - 1) // 2)) * gaussian_binomial(r, s, q) \
            * (q ** (hi * (r - d_r - s + 1)) - 1)
        total += -term if s % 2 else term
    return gaussian_binomial(lo, r, q) * total


@dataclass(frozen=True)
class LinearizedPoly:
    """Coefficients attached to x^(q^0), ..., x^(q^(t-1)) over GF(q^M)."""
    ext: ExtFieldSpec
    coefficients: tuple

    def evaluate(self, x: int) -> int:
        ext = self.ext
        q = ext.base.q
        acc = 0
        xp = x
        for c in self.coefficients:
            if c:
                acc = ext.add(acc, ext.mul(c, xp))
            xp = ext.pow(xp, q)
        return acc


def _transpose_packed(rows, ncols):
    out = []
    nr = len(rows)
    for j in range(ncols):
        bit = 1 << (ncols - 1 - j)
        x = 0
        for r in rows:
            x = (x << 1) | (1 if r & bit else 0)
        out.append(x)
    return out


class RankCodeHandle:
    """Deterministic enumerable rank-metric code of m x n matrices."""

    def __init__(self, q, m, n, d_r, kind, size):
        self.q = q
        self.m = m
        self.n = n
        self.d_r = d_r
        self.kind = kind
        self.size = size

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"RankCodeHandle({self.kind}, {self.m}x{self.n}, d_r={self.d_r}, q={self.q}, size={self.size})"

    # subclass API
    def packed_at(self, i):  # pragma: no cover - abstract
        raise NotImplementedError

    def rows_at(self, i):  # pragma: no cover - abstract
        raise NotImplementedError

    def at(self, i) -> MatrixGF:
        return MatrixGF(base_field(self.q), self.rows_at(i), ncols=self.n)

    def iter_packed(self):
        for i in range(self.size):
            yield self.packed_at(i)

    def iter_rows(self):
        for i in range(self.size):
            yield self.rows_at(i)

    def __iter__(self):
        for i in range(self.size):
            yield self.at(i)

    def rank_of(self, i) -> int:
        field = base_field(self.q)
        if field.q == 2:
            from .linalg import rank_bits
            return rank_bits(self.packed_at(i), self.n)
        return rank_rows(field, self.rows_at(i), self.n)


class GabidulinHandle(RankCodeHandle):
    """(m x n, d_r)_q MRD code from linearized-polynomial evaluation."""

    def __init__(self, q, m, n, d_r, t_override=None, parent=None):
        a, b = min(m, n), max(m, n)
        t = a - d_r + 1 if t_override is None else t_override
        size = (q ** b) ** t
        super().__init__(q, m, n, d_r, "mrd", size)
        self.field = base_field(q)
        self.ext = ext_field(self.field, b)
        self.a = a
        self.b = b
        self.t = t
        self.transposed = m > n
        self.parent = parent
        self.Q = q ** b
        # g_j = alpha^j, j = 0..a-1, and their q-power Frobenius iterates
        self.gpow = []
        for j in range(a):
            g = self.ext.basis[j]
            powers = []
            x = g
            for _ in range(t):
                powers.append(x)
                x = self.ext.pow(x, q)
            self.gpow.append(powers)
        self._bit_basis = None
        if q == 2:
            self._bit_basis = self._build_bit_basis()

    def _build_bit_basis(self):
        # GF(2)-basis matrices: one per bit of the enumeration index
        basis = []
        for u in range(self.t * self.b):
            coeffs = [0] * self.t
            s = self.t - 1 - (u // self.b)  # digit position, c_0 most significant
            coeffs[s] = 1 << (u % self.b)
            basis.append(self._internal_packed(tuple(coeffs)))
        return basis

    def coefficients_at(self, i):
        if not 0 <= i < self.size:
            raise IndexError(i)
        digits = []
        for _ in range(self.t):
            i, r = divmod(i, self.Q)
            digits.append(r)
        return tuple(reversed(digits))  # c_0 first

    def index_of_coefficients(self, coeffs) -> int:
        i = 0
        for c in coeffs:
            i = i * self.Q + c
        return i

    def _internal_rows(self, coeffs):
        ext = self.ext
        rows = []
        for j in range(self.a):
            acc = 0
            for c, gp in zip(coeffs, self.gpow[j]):
                if c:
                    acc = ext.add(acc, ext.mul(c, gp))
            rows.append(ext.element_to_vector(acc))
        return rows

    def _internal_packed(self, coeffs):
        # q = 2: one int per internal row, column 0 in the MSB
        rows = self._internal_rows(coeffs)
        b = self.b
        return [sum(v << (b - 1 - j) for j, v in enumerate(r)) for r in rows]

    def internal_packed_at(self, i):
        if self._bit_basis is not None:
            rows = [0] * self.a
            u = 0
            while i:
                if i & 1:
                    mat = self._bit_basis[u]
                    for r in range(self.a):
                        rows[r] ^= mat[r]
                i >>= 1
                u += 1
            return rows
        raise RankCodeError("packed access requires q = 2")

    def packed_at(self, i):
        rows = self.internal_packed_at(i)
        if self.transposed:
            rows = _transpose_packed(rows, self.b)
        return rows

    def rows_at(self, i):
        rows = self._internal_rows(self.coefficients_at(i))
        if self.transposed:
            rows = [tuple(col) for col in zip(*rows)]
        return [tuple(r) for r in rows]

    def iter_internal_packed(self):
        """Incremental enumeration in index order (q = 2 only)."""
        if self._bit_basis is None:
            raise RankCodeError("packed iteration requires q = 2")
        cur = [0] * self.a
        yield cur
        basis = self._bit_basis
        for i in range(1, self.size):
            delta = i ^ (i - 1)
            u = 0
            while delta:
                if delta & 1:
                    mat = basis[u]
                    for r in range(self.a):
                        cur[r] ^= mat[r]
                delta >>= 1
                u += 1
            yield cur

    def iter_packed(self):
        if self.transposed:
            for rows in self.iter_internal_packed():
                yield _transpose_packed(rows, self.b)
        else:
            for rows in self.iter_internal_packed():
                yield list(rows)

    def poly_at(self, i) -> LinearizedPoly:
        return LinearizedPoly(self.ext, self.coefficients_at(i))

    def index_of(self, M: MatrixGF):
        """Index of a codeword matrix, or None if not in the code."""
        rows = M.rows
        if self.transposed:
            rows = list(zip(*rows))
        ext = self.ext
        targets = [ext.vector_to_element(r) for r in rows]
        # solve gpow . c = targets for c (a equations, t unknowns over GF(Q))
        aug = [[self.gpow[j][s] for s in range(self.t)] + [targets[j]]
               for j in range(self.a)]
        ncols = self.t + 1
        pivots = []
        r = 0
        for col in range(self.t):
            piv = next((i2 for i2 in range(r, self.a) if aug[i2][col]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            scale = ext.inv(aug[r][col])
            aug[r] = [ext.mul(scale, v) for v in aug[r]]
            for i2 in range(self.a):
                if i2 != r and aug[i2][col]:
                    c = aug[i2][col]
                    aug[i2] = [ext.sub(v, ext.mul(c, w)) for v, w in zip(aug[i2], aug[r])]
            pivots.append(col)
            r += 1
        # consistency of the remaining equations
        for i2 in range(r, self.a):
            if aug[i2][self.t]:
                return None
        if len(pivots) < self.t:
            return None
        coeffs = [0] * self.t
        for row_idx, col in enumerate(pivots):
            coeffs[col] = aug[row_idx][self.t]
        if self.rows_at(self.index_of_coefficients(coeffs)) != [tuple(r) for r in M.rows]:
            return None
        return self.index_of_coefficients(coeffs)


class NestedSubcodeHandle(GabidulinHandle):
    """MRD subcode obtained by truncating the coefficient range."""

    def __init__(self, parent: GabidulinHandle, d2: int):
        if d2 <= parent.d_r:
            raise RankCodeError(f"nested subcode needs d2 > {parent.d_r}, got {d2}")
        if d2 > parent.a:
            raise RankCodeError(f"d2={d2} exceeds min(m,n)={parent.a}")
        t2 = parent.a - d2 + 1
        super().__init__(parent.q, parent.m, parent.n, d2, t_override=t2, parent=parent)
        self.kind = "nested_subcode"

    def parent_index(self, i) -> int:
        return i * self.parent.Q ** (self.parent.t - self.t)


class CosetHandle(RankCodeHandle):
    """Translate rep + sub of a nested MRD subcode."""

    def __init__(self, sub: NestedSubcodeHandle, rep_index: int):
        super().__init__(sub.q, sub.m, sub.n, sub.d_r, "coset", sub.size)
        self.sub = sub
        self.rep_index = rep_index  # index into the parent enumeration
        parent = sub.parent
        self.field = sub.field
        self._rep_rows = parent.rows_at(rep_index)
        self._rep_packed = parent.packed_at(rep_index) if sub.q == 2 else None

    def packed_at(self, i):
        base = self.sub.packed_at(i)
        return [a ^ b for a, b in zip(base, self._rep_packed)]

    def rows_at(self, i):
        f = self.field
        base = self.sub.rows_at(i)
        return [tuple(f.add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(base, self._rep_rows)]

    def iter_packed(self):
        rep = self._rep_packed
        for rows in self.sub.iter_packed():
            yield [a ^ b for a, b in zip(rows, rep)]


class RankFilteredHandle(RankCodeHandle):
    """Codewords of a handle with rank <= cap, lazily enumerated."""

    def __init__(self, parent: RankCodeHandle, cap: int):
        if not 0 <= cap <= min(parent.m, parent.n):
            raise RankCodeError(f"rank cap {cap} out of range")
        if isinstance(parent, GabidulinHandle) and parent.kind in ("mrd", "nested_subcode"):
            size = 1
            for r in range(parent.d_r, cap + 1):
                size += rank_distribution(parent.q, parent.m, parent.n, parent.d_r, r)
        else:
            size = sum(1 for _ in self._scan_indices(parent, cap))
        super().__init__(parent.q, parent.m, parent.n, parent.d_r, "rank_filtered", size)
        self.parent = parent
        self.cap = cap
        self._indices = None

    @staticmethod
    def _scan_indices(parent, cap):
        field = base_field(parent.q)
        if field.q == 2:
            from .linalg import rank_bits
            for i, rows in enumerate(parent.iter_packed()):
                if rank_bits(rows, parent.n) <= cap:
                    yield i
        else:
            for i, rows in enumerate(parent.iter_rows()):
                if rank_rows(field, rows, parent.n) <= cap:
                    yield i

    def indices(self):
        if self._indices is None:
            self._indices = list(self._scan_indices(self.parent, self.cap))
            if len(self._indices) != self.size:
                raise RankCodeError(
                    f"rank filter count {len(self._indices)} != formula size {self.size}")
        return self._indices

    def packed_at(self, i):
        return self.parent.packed_at(self.indices()[i])

    def rows_at(self, i):
        return self.parent.rows_at(self.indices()[i])

    def iter_packed(self):
        from .linalg import rank_bits
        for rows in self.parent.iter_packed():
            if rank_bits(rows, self.n) <= self.cap:
                yield rows

    def iter_rows(self):
        field = base_field(self.q)
        for rows in self.parent.iter_rows():
            if rank_rows(field, rows, self.n) <= self.cap:
                yield rows


def gabidulin_mrd(q: int, m: int, n: int, d_r: int) -> GabidulinHandle:
    """Explicit (m x n, d_r)_q MRD code; enumeration is deterministic."""
    if not 1 <= d_r <= min(m, n):
        raise RankCodeError(f"need 1 <= d_r <= min(m,n)={min(m, n)}, got {d_r}")
    return GabidulinHandle(q, m, n, d_r)


def nested_subcode(h: GabidulinHandle, d2: int) -> NestedSubcodeHandle:
    if not isinstance(h, GabidulinHandle) or h.kind != "mrd":
        raise RankCodeError("nested subcodes are defined for Gabidulin MRD handles")
    return NestedSubcodeHandle(h, d2)


def coset_partition(h: GabidulinHandle, sub: NestedSubcodeHandle):
    """The size(h)/size(sub) translates of sub inside h."""
    if not isinstance(sub, NestedSubcodeHandle) or sub.parent is not h:
        raise RankCodeError("sub must be a nested subcode of h")
    alpha = h.size // sub.size
    # representatives: coefficients supported on the truncated range only
    return [CosetHandle(sub, j) for j in range(alpha)]


def rank_filtered(h: RankCodeHandle, cap: int) -> RankFilteredHandle:
    return RankFilteredHandle(h, cap)
