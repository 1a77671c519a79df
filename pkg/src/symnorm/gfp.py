"""Exact linear algebra over prime fields F_p.

Vectors and matrices hold canonical residues 0..p-1 and every operation
reduces eagerly, so results are bit-for-bit reproducible.  Matrices are
immutable; operations return fresh values.  Besides plain row reduction
this module provides the code-theoretic primitives the normaliser search
is built on: standard-form generator matrices, dual codes, row-space
membership, column equivalence, minimum-weight codewords, weight
enumerators and the reversed-column ordering used for canonical forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class BudgetExceeded(Exception):
    """An enumeration would exceed its configured budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of F_p."""
    if p == 2:
        return 1
    # prime factors of p-1
    m = p - 1
    factors = []
    d, rest = 2, m
    while d * d <= rest:
        if rest % d == 0:
            factors.append(d)
            while rest % d == 0:
                rest //= d
        d += 1
    if rest > 1:
        factors.append(rest)
    for t in range(2, p):
        if all(pow(t, m // q, p) != 1 for q in factors):
            return t
    raise ArithmeticError(f"no primitive root mod {p}")  # unreachable for prime p


@dataclass(frozen=True)
class PrimeField:
    """The field F_p together with a fixed primitive element t."""

    p: int
    t: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.t == 0:
            object.__setattr__(self, "t", primitive_root(self.p))
        if pow(self.t, self.p - 1, self.p) != 1 or self.order_of(self.t) != self.p - 1:
            raise ValueError(f"{self.t} is not primitive mod {self.p}")

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def order_of(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        x, n = a, 1
        while x != 1:
            x = x * a % self.p
            n += 1
        return n

    def log_t(self, a: int) -> int:
        """Discrete log base the primitive element (p is small)."""
        a %= self.p
        x, e = 1, 0
        while e < self.p:
            if x == a:
                return e
            x = x * self.t % self.p
            e += 1
        raise ValueError(f"{a} is not a unit mod {self.p}")


@dataclass(frozen=True)
class FpMatrix:
    """An s x k matrix over F_p; rows may be empty (the zero code)."""

    p: int
    k: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("matrix needs at least one column")
        for r in self.rows:
            if len(r) != self.k:
                raise ValueError("ragged rows")
            if any(not (0 <= x < self.p) for x in r):
                raise ValueError("entries must be canonical residues")

    @classmethod
    def from_rows(cls, p: int, rows, k: int | None = None) -> "FpMatrix":
        rows = tuple(tuple(x % p for x in r) for r in rows)
        if k is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            k = len(rows[0])
        return cls(p, k, rows)

    @property
    def s(self) -> int:
        return len(self.rows)

    def col(self, j: int) -> tuple[int, ...]:
        """Column j, 1-based."""
        return tuple(r[j - 1] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(1, self.k + 1)]

    def is_standard(self) -> bool:
        """First s columns form the identity."""
        if self.s > self.k:
            return False
        return all(
            self.rows[i][j] == (1 if i == j else 0)
            for i in range(self.s)
            for j in range(self.s)
        )

    def permute_columns(self, new_order: tuple[int, ...]) -> "FpMatrix":
        """Column j of the result is column new_order[j-1] of self (1-based)."""
        rows = tuple(tuple(r[j - 1] for j in new_order) for r in self.rows)
        return FpMatrix(self.p, self.k, rows)

    def scale_column(self, j: int, a: int) -> "FpMatrix":
        a %= self.p
        rows = tuple(
            tuple(x * a % self.p if i == j - 1 else x for i, x in enumerate(r))
            for r in self.rows
        )
        return FpMatrix(self.p, self.k, rows)

    def __str__(self) -> str:
        return format_matrix(self)


def identity_matrix(p: int, s: int) -> FpMatrix:
    rows = tuple(tuple(1 if i == j else 0 for j in range(s)) for i in range(s))
    return FpMatrix(p, s, rows)


def mat_mul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    if a.p != b.p or a.k != b.s:
        raise ValueError("dimension mismatch")
    p = a.p
    rows = tuple(
        tuple(sum(ra[i] * b.rows[i][j] for i in range(a.k)) % p for j in range(b.k))
        for ra in a.rows
    )
    return FpMatrix(p, b.k, rows)


def row_combination(coeffs, m: FpMatrix) -> tuple[int, ...]:
    """coeffs . m as a row vector."""
    if len(coeffs) != m.s:
        raise ValueError("coefficient length mismatch")
    p = m.p
    return tuple(
        sum(c * m.rows[i][j] for i, c in enumerate(coeffs)) % p for j in range(m.k)
    )


def mat_inverse(a: FpMatrix) -> FpMatrix:
    """Inverse of a square matrix, by row reduction of [a | I]."""
    if a.s != a.k:
        raise ValueError("not square")
    p, n = a.p, a.s
    work = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = pow(work[col][col], p - 2, p)
        work[col] = [x * inv % p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[col])]
    return FpMatrix.from_rows(p, [r[n:] for r in work], n)


# ---------------------------------------------------------------------------
# row reduction and standard form


@dataclass(frozen=True)
class RrefResult:
    mstd: FpMatrix
    pivots: tuple[int, ...]  # 1-based column indices
    row_transform: FpMatrix  # row_transform . input == mstd

    @property
    def is_standard(self) -> bool:
        return self.pivots == tuple(range(1, len(self.pivots) + 1))


def rref_standard(m: FpMatrix) -> RrefResult:
    """Reduced row echelon form with the transform that produces it.

    The input rows must form a basis of their span: rank-deficient input is
    rejected so callers cannot silently lose track of the code dimension.
    """
    p, k, s = m.p, m.k, m.s
    if s == 0 or all(all(x == 0 for x in r) for r in m.rows):
        raise ValueError("zero matrix: the trivial code has no generator matrix")
    work = [list(r) for r in m.rows]
    trans = [[1 if i == j else 0 for j in range(s)] for i in range(s)]
    pivots = []
    r = 0
    for col in range(k):
        if r == s:
            break
        piv = next((i for i in range(r, s) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        inv = pow(work[r][col], p - 2, p)
        work[r] = [x * inv % p for x in work[r]]
        trans[r] = [x * inv % p for x in trans[r]]
        for i in range(s):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[r])]
                trans[i] = [(x - f * y) % p for x, y in zip(trans[i], trans[r])]
        pivots.append(col + 1)
        r += 1
    if r < s:
        raise ValueError("rank-deficient input: rows are not a basis")
    return RrefResult(
        FpMatrix.from_rows(p, work, k),
        tuple(pivots),
        FpMatrix.from_rows(p, trans, s),
    )


def independent_rows(p: int, vectors) -> list[tuple[int, ...]]:
    """Subset of the given vectors forming a basis of their span (greedy)."""
    basis: list[list[int]] = []  # echelonized copies
    picked: list[tuple[int, ...]] = []
    for v in vectors:
        w = [x % p for x in v]
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x)
            if w[lead]:
                f = w[lead]
                w = [(x - f * y) % p for x, y in zip(w, b)]
        if any(w):
            lead = next(i for i, x in enumerate(w) if x)
            inv = pow(w[lead], p - 2, p)
            basis.append([x * inv % p for x in w])
            picked.append(tuple(x % p for x in v))
    return picked


def matrix_rank(m: FpMatrix) -> int:
    return len(independent_rows(m.p, m.rows))


def in_row_space(v, m: FpMatrix) -> bool:
    """Membership in the row space of an arbitrary (not nec. standard) matrix."""
    if len(v) != m.k:
        raise ValueError("length mismatch")
    vv = tuple(x % m.p for x in v)
    if not any(vv):
        return True
    rows = list(m.rows) + [vv]
    return len(independent_rows(m.p, rows)) == matrix_rank(m)


class VectorSpan:
    """Incremental span of vectors over F_p with membership tests."""

    def __init__(self, p: int, vectors=()):
        self.p = p
        self.rows: list[list[int]] = []
        for v in vectors:
            self.add(v)

    def _reduce(self, v):
        w = [x % self.p for x in v]
        for b in self.rows:
            lead = next(i for i, x in enumerate(b) if x)
            if w[lead]:
                f = w[lead]
                w = [(x - f * y) % self.p for x, y in zip(w, b)]
        return w

    def add(self, v) -> bool:
        w = self._reduce(v)
        if not any(w):
            return False
        lead = next(i for i, x in enumerate(w) if x)
        inv = pow(w[lead], self.p - 2, self.p)
        self.rows.append([x * inv % self.p for x in w])
        return True

    def contains(self, v) -> bool:
        return not any(self._reduce(v))


def dual_matrix(mstd: FpMatrix) -> FpMatrix:
    """Generator matrix of the dual code, for mstd = (I_s | M0).

    Returns (-M0^T | I_{k-s}); the sign makes every row orthogonal to every
    row of mstd for odd p as well.  s == k yields the empty 0 x k matrix.
    """
    if not mstd.is_standard():
        raise ValueError("matrix is not in standard form")
    p, s, k = mstd.p, mstd.s, mstd.k
    if s == k:
        return FpMatrix(p, k, ())
    rows = []
    for j in range(k - s):
        row = [(-mstd.rows[i][s + j]) % p for i in range(s)]
        row += [1 if jj == j else 0 for jj in range(k - s)]
        rows.append(tuple(row))
    return FpMatrix(p, k, tuple(rows))


def member_row_space(v, mstd: FpMatrix) -> tuple[int, ...] | None:
    """Coefficients c with c . mstd == v, or None if v is outside the code.

    Standard form means codewords are determined by their first s
    coordinates, so c is just the leading slice of v.
    """
    if len(v) != mstd.k:
        raise ValueError("length mismatch")
    if not mstd.is_standard():
        raise ValueError("matrix is not in standard form")
    p = mstd.p
    c = tuple(x % p for x in v[: mstd.s])
    if row_combination(c, mstd) == tuple(x % p for x in v):
        return c
    return None


# ---------------------------------------------------------------------------
# partitions of {1..m}


@dataclass(frozen=True)
class Partition:
    """A partition of {1..size} with canonical cell ordering."""

    size: int
    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def from_cells(cls, size: int, cells) -> "Partition":
        norm = tuple(sorted(tuple(sorted(c)) for c in cells if c))
        seen = [x for c in norm for x in c]
        if sorted(seen) != list(range(1, size + 1)):
            raise ValueError("cells do not partition {1..size}")
        return cls(size, norm)

    @classmethod
    def from_keys(cls, keys) -> "Partition":
        """Group positions 1..len(keys) by equal key."""
        buckets: dict = {}
        for i, key in enumerate(keys, start=1):
            buckets.setdefault(key, []).append(i)
        return cls.from_cells(len(keys), buckets.values())

    @classmethod
    def singletons(cls, size: int) -> "Partition":
        return cls.from_cells(size, [[i] for i in range(1, size + 1)])

    def cell_map(self) -> dict[int, tuple[int, ...]]:
        return {x: c for c in self.cells for x in c}

    def cell_of(self, i: int) -> tuple[int, ...]:
        return self.cell_map()[i]

    def meet(self, *others: "Partition") -> "Partition":
        """Common refinement."""
        maps = [self.cell_map()] + [o.cell_map() for o in others]
        keys = [tuple(mp[i] for mp in maps) for i in range(1, self.size + 1)]
        return Partition.from_keys(keys)


def normalized_column(col, p: int) -> tuple[int, ...]:
    """Scale so the first nonzero entry is 1; the zero column stays zero."""
    lead = next((x for x in col if x), 0)
    if lead == 0:
        return tuple(col)
    inv = pow(lead, p - 2, p)
    return tuple(x * inv % p for x in col)


def column_equiv_classes(m: FpMatrix, allow_zero: bool = False) -> Partition:
    """Columns grouped by equality up to nonzero scaling.

    Zero columns are rejected by default (a zero column means one orbit
    carries no action, which the callers treat as a structural error); with
    allow_zero they form a single shared cell, as needed for stabiliser and
    dual codes.
    """
    keys = []
    for j in range(1, m.k + 1):
        col = m.col(j)
        if not any(col):
            if not allow_zero:
                raise ValueError(f"column {j} is zero")
            keys.append(("zero",))
        else:
            keys.append(normalized_column(col, m.p))
    return Partition.from_keys(keys)


# ---------------------------------------------------------------------------
# codeword enumeration


@dataclass(frozen=True)
class WeightEnumerator:
    """counts[i-1] = number of codewords of weight i, for i = 1..k."""

    counts: tuple[int, ...]

    def total_nonzero(self) -> int:
        return sum(self.counts)


def _coefficient_grid(p: int, r: int, nonzero: bool) -> np.ndarray:
    """All coefficient tuples of length r, entries in F_p (or F_p^*)."""
    vals = np.arange(1, p) if nonzero else np.arange(p)
    grids = np.meshgrid(*([vals] * r), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def min_weight_vectors(mstd: FpMatrix) -> tuple[int, set[tuple[int, ...]]]:
    """All nonzero codewords of minimum weight, with that weight.

    Standard form lets us bound the search: a combination of r rows with all
    coefficients nonzero has weight at least r, so only combinations of at
    most the current minimum need be enumerated, shrinking as lighter words
    are found.
    """
    if not mstd.is_standard():
        raise ValueError("matrix is not in standard form")
    if mstd.s < 1:
        raise ValueError("empty code")
    p, s = mstd.p, mstd.s
    rows = np.array(mstd.rows, dtype=np.int64)
    best: int | None = None
    found: set[tuple[int, ...]] = set()
    for r in range(1, s + 1):
        if best is not None and r > best:
            break
        for combo in itertools.combinations(range(s), r):
            sub = rows[list(combo)]
            coeffs = _coefficient_grid(p, r, nonzero=True)
            for start in range(0, coeffs.shape[0], 1 << 16):
                block = coeffs[start : start + (1 << 16)]
                words = block @ sub % p
                weights = np.count_nonzero(words, axis=1)
                wmin = int(weights.min())
                if best is None or wmin < best:
                    best = wmin
                    found.clear()
                if wmin <= best:
                    for w in words[weights == best]:
                        found.add(tuple(int(x) for x in w))
    assert best is not None
    return best, found


def weight_enumerator(mstd: FpMatrix, budget: int = 1 << 20) -> WeightEnumerator | None:
    """Weight distribution by full enumeration of the p^s codewords.

    Returns None when p^s exceeds the budget; callers treat that as a
    refusal and skip whatever test needed the enumerator.
    """
    p, s, k = mstd.p, mstd.s, mstd.k
    if s == 0:
        return WeightEnumerator(tuple([0] * k))
    if p**s > budget:
        return None
    rows = np.array(mstd.rows, dtype=np.int64)
    lo = min(s, max(1, s // 2))
    head = _coefficient_grid(p, lo, nonzero=False) @ rows[:lo] % p
    hist = np.zeros(k + 1, dtype=np.int64)
    if lo == s:
        hist += np.bincount(np.count_nonzero(head, axis=1), minlength=k + 1)
    else:
        tail_coeffs = _coefficient_grid(p, s - lo, nonzero=False)
        for tc in tail_coeffs:
            word = tc @ rows[lo:] % p
            block = (head + word) % p
            hist += np.bincount(np.count_nonzero(block, axis=1), minlength=k + 1)
    return WeightEnumerator(tuple(int(x) for x in hist[1 : k + 1]))


# ---------------------------------------------------------------------------
# the column ordering used for canonical representatives


def prec_key(m: FpMatrix) -> tuple:
    """Sort key realising the matrix ordering: columns compared left to
    right, each column read bottom row first."""
    return tuple(tuple(reversed(m.col(j))) for j in range(1, m.k + 1))


def prec_compare(a: FpMatrix, a2: FpMatrix) -> int:
    """-1, 0 or 1 as a precedes, equals or follows a2."""
    if a.p != a2.p or a.k != a2.k or a.s != a2.s:
        raise ValueError("dimension mismatch")
    ka, kb = prec_key(a), prec_key(a2)
    return -1 if ka < kb else (1 if ka > kb else 0)


# ---------------------------------------------------------------------------
# text exchange format


def format_matrix(m: FpMatrix) -> str:
    lines = [f"{m.p} {m.s} {m.k}"]
    lines += [" ".join(str(x) for x in r) for r in m.rows]
    return "\n".join(lines)


def parse_matrix(text: str) -> FpMatrix:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        p, s, k = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad matrix header {lines[0]!r}") from exc
    if len(lines) != s + 1:
        raise ValueError(f"expected {s} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = tuple(int(x) for x in ln.split())
        if len(row) != k:
            raise ValueError(f"row {ln!r} does not have {k} entries")
        rows.append(row)
    return FpMatrix.from_rows(p, rows, k)
