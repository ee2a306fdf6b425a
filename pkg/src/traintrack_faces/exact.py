"""Exact rational linear algebra and linear feasibility.

Everything here works over :class:`fractions.Fraction`; there is no floating
point anywhere.  Feasibility is decided by a phase-one simplex with Bland's
rule, and every answer comes with something that can be checked by
substitution: a witness point when the system is feasible and a Farkas
certificate when it is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch

__all__ = [
    "RationalMatrix",
    "FarkasCertificate",
    "FeasibilityResult",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "rank",
    "rref",
    "kernel_basis",
    "solve",
    "in_row_span",
    "feasible",
    "cone_span_dim",
    "extreme_rays",
]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'num/den'")
    return Fraction(value)


def format_rational(q) -> str:
    """Serialize a rational as ``"num/den"``; the denominator is always present."""
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of reduced fractions."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix shape")
        if len(self.entries) != self.rows:
            raise DimensionMismatch(f"expected {self.rows} rows, got {len(self.entries)}")
        for r in self.entries:
            if len(r) != self.cols:
                raise DimensionMismatch(f"row of length {len(r)} in a {self.cols}-column matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "RationalMatrix":
        entries = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if cols is None:
            if not entries:
                raise DimensionMismatch("column count required for an empty matrix")
            cols = len(entries[0])
        return cls(len(entries), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def restrict_columns(self, cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(self.rows, len(cols), tuple(tuple(r[j] for j in cols) for r in self.entries))

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.cols != self.cols:
            raise DimensionMismatch("vstack of matrices with different column counts")
        return RationalMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def apply(self, x: Sequence) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise DimensionMismatch(f"vector of length {len(x)} against {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(r, x)), Fraction(0)) for r in self.entries)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self.entries]


def _matrix(m) -> RationalMatrix:
    return m if isinstance(m, RationalMatrix) else RationalMatrix.from_rows(m)


def rref(m: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    a = [list(r) for r in m.entries]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == len(a):
            break
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m) -> int:
    return len(rref(_matrix(m))[1])


def kernel_basis(m) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    m = _matrix(m)
    rows, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in zip(rows, pivots):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def solve(m, b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``m x = b``, or None if the system is inconsistent."""
    m = _matrix(m)
    if len(b) != m.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {m.rows} rows")
    aug = RationalMatrix(m.rows, m.cols + 1, tuple(r + (as_fraction(x),) for r, x in zip(m.entries, b)))
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in zip(rows, pivots):
        x[p] = r[-1]
    return tuple(x)


def in_row_span(m, v: Sequence) -> bool:
    m = _matrix(m)
    if len(v) != m.cols:
        raise DimensionMismatch("vector length differs from column count")
    if m.rows == 0:
        return all(as_fraction(x) == 0 for x in v)
    return rank(m.vstack(RationalMatrix.from_rows([v], m.cols))) == rank(m)


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers proving that ``eq x = 0, ineq x >= 0, x >= lower`` is empty.

    With ``r = eq_multipliers . eq + ineq_multipliers . ineq`` we require
    ``ineq_multipliers >= 0``, ``r <= 0`` componentwise and ``r . lower < 0``.
    Any feasible x would give ``0 <= r . x <= r . lower < 0``.
    """

    eq_multipliers: tuple[Fraction, ...]
    ineq_multipliers: tuple[Fraction, ...]

    def combined_row(self, eq: RationalMatrix, ineq: RationalMatrix) -> tuple[Fraction, ...]:
        n = eq.cols
        r = [Fraction(0)] * n
        for mult, row in zip(self.eq_multipliers, eq.entries):
            for j in range(n):
                r[j] += mult * row[j]
        for mult, row in zip(self.ineq_multipliers, ineq.entries):
            for j in range(n):
                r[j] += mult * row[j]
        return tuple(r)

    def verify(self, eq: RationalMatrix | None, ineq: RationalMatrix | None, lower: Sequence) -> bool:
        eq, ineq = _system(eq, ineq, len(lower))
        if len(self.eq_multipliers) != eq.rows or len(self.ineq_multipliers) != ineq.rows:
            return False
        if any(m < 0 for m in self.ineq_multipliers):
            return False
        r = self.combined_row(eq, ineq)
        if any(x > 0 for x in r):
            return False
        return sum((a * as_fraction(b) for a, b in zip(r, lower)), Fraction(0)) < 0


def _system(eq, ineq, n: int) -> tuple[RationalMatrix, RationalMatrix]:
    """Replace missing constraint blocks by empty matrices of width ``n``."""
    return (
        RationalMatrix.zeros(0, n) if eq is None else eq,
        RationalMatrix.zeros(0, n) if ineq is None else ineq,
    )


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "feasible" | "infeasible"
    witness: tuple[Fraction, ...] | None = None
    certificate: FarkasCertificate | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def __bool__(self) -> bool:
        return self.feasible

    def verify(self, eq: RationalMatrix | None, ineq: RationalMatrix | None, lower: Sequence) -> bool:
        """Re-check the witness or certificate exactly against the system."""
        eq, ineq = _system(eq, ineq, len(lower))
        if self.feasible:
            x = self.witness
            if x is None or len(x) != eq.cols:
                return False
            return (
                all(v == 0 for v in eq.apply(x))
                and all(v >= 0 for v in ineq.apply(x))
                and all(a >= as_fraction(b) for a, b in zip(x, lower))
            )
        return self.certificate is not None and self.certificate.verify(eq, ineq, lower)

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.witness is not None:
            out["witness"] = [format_rational(x) for x in self.witness]
        if self.certificate is not None:
            out["certificate"] = {
                "eq": [format_rational(x) for x in self.certificate.eq_multipliers],
                "ineq": [format_rational(x) for x in self.certificate.ineq_multipliers],
            }
        return out


def _empty(cols: int) -> RationalMatrix:
    return RationalMatrix(0, cols, ())


def feasible(eq: RationalMatrix | None, ineq: RationalMatrix | None, lower: Sequence) -> FeasibilityResult:
    """Decide ``eq x = 0, ineq x >= 0, x >= lower`` exactly.

    Strict positivity questions are posed with ``lower = (1, ..., 1)``; every
    cone handled by the package is invariant under positive scaling.
    """
    n = len(lower)
    eq = _empty(n) if eq is None else eq
    ineq = _empty(n) if ineq is None else ineq
    if eq.cols != n or ineq.cols != n:
        raise DimensionMismatch(f"systems with {eq.cols}/{ineq.cols} columns and a lower bound of length {n}")
    lower = tuple(as_fraction(x) for x in lower)

    m_eq, m_in = eq.rows, ineq.rows
    m = m_eq + m_in
    if m == 0:
        return FeasibilityResult("feasible", witness=lower)

    # substitute x = lower + y and add a surplus s >= 0 per inequality row
    ncols = n + m_in
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i, r in enumerate(eq.entries):
        rows.append(list(r) + [Fraction(0)] * m_in)
        rhs.append(-sum((a * b for a, b in zip(r, lower)), Fraction(0)))
    for i, r in enumerate(ineq.entries):
        surplus = [Fraction(0)] * m_in
        surplus[i] = Fraction(-1)
        rows.append(list(r) + surplus)
        rhs.append(-sum((a * b for a, b in zip(r, lower)), Fraction(0)))
    sign = [1 if b >= 0 else -1 for b in rhs]
    for i in range(m):
        if sign[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    # artificial columns ncols .. ncols+m-1 start as the identity basis
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows[i].extend(art)
    total = ncols + m
    basis = [ncols + i for i in range(m)]
    cost = [Fraction(0)] * ncols + [Fraction(1)] * m
    reduced = [cost[j] - sum((rows[i][j] for i in range(m)), Fraction(0)) for j in range(total)]

    while True:
        enter = next((j for j in range(ncols) if reduced[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rhs[i] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        # phase one is bounded below by zero, so a pivot row always exists
        assert best is not None
        leave = best[1]
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        rhs[leave] /= piv
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
                rhs[i] -= f * rhs[leave]
        f = reduced[enter]
        reduced = [x - f * y for x, y in zip(reduced, rows[leave])]
        basis[leave] = enter

    objective = sum((rhs[i] for i in range(m) if basis[i] >= ncols), Fraction(0))
    if objective == 0:
        y = [Fraction(0)] * ncols
        for i, b in enumerate(basis):
            if b < ncols:
                y[b] = rhs[i]
        return FeasibilityResult("feasible", witness=tuple(l + v for l, v in zip(lower, y[:n])))

    # duals u = c_B B^{-1}; B^{-1} sits in the artificial columns
    u = [Fraction(0)] * m
    for i, b in enumerate(basis):
        if b >= ncols:
            for k in range(m):
                u[k] += rows[i][ncols + k]
    z = [sign[k] * u[k] for k in range(m)]
    cert = FarkasCertificate(tuple(z[:m_eq]), tuple(z[m_eq:]))
    return FeasibilityResult("infeasible", certificate=cert)


def cone_span_dim(eq: RationalMatrix) -> int:
    """Dimension of the linear span of ``{x : eq x = 0, x >= 0}``.

    Grows the maximal support one coordinate at a time: a coordinate joins the
    support iff some point of the cone has it positive.
    """
    n = eq.cols
    support: set[int] = set()
    for i in range(n):
        if i in support:
            continue
        lower = [0] * n
        lower[i] = 1
        res = feasible(eq, None, lower)
        if res.feasible:
            support.update(j for j, x in enumerate(res.witness) if x != 0)
    cols = sorted(support)
    if not cols:
        return 0
    return len(cols) - rank(eq.restrict_columns(cols))


def _normalize(v: list[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def extreme_rays(eq: RationalMatrix) -> list[tuple[int, ...]]:
    """Primitive integer extreme rays of ``{x : eq x = 0, x >= 0}``.

    Double description: start from the coordinate rays of the orthant and cut
    by one hyperplane at a time, combining only adjacent ray pairs.  Output is
    sorted for reproducibility.
    """
    n = eq.cols
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for row in eq.entries:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        h = [int(x * den) for x in row]
        vals = [sum(a * b for a, b in zip(h, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        new = [rays[i] for i, v in enumerate(vals) if v == 0]
        zeros = [sum(1 << j for j, x in enumerate(r) if x == 0) for r in rays]
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if any(k != p and k != q and zeros[k] & common == common for k in range(len(rays))):
                    continue
                vp, vq = vals[p], -vals[q]
                comb = [vq * a + vp * b for a, b in zip(rays[p], rays[q])]
                new.append(_normalize(comb))
        rays = sorted(set(new))
    return rays
