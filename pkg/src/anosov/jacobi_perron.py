"""Jacobi-Perron multidimensional continued fractions.

One step extracts the digit vector b_i = floor(theta_i) and applies the
inverse of the elementary matrix B(b) (first row (0,...,0,1), row i+1
equal to e_i with b_i appended in the last column); the expansion of a
Perron eigendirection is detected as periodic by exact state repetition.
Non-negative unimodular matrices are factored into elementary matrices
by right-division, with a breadth-first fallback, and every returned
factorization is re-multiplied before being accepted.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import (
    InsufficientDigits,
    IntegerLeadingCoordinate,
    NotFactorable,
    NotNonNegative,
    NotUnimodular,
)
from .exact_core import FieldElement, RootInterval, floor_of
from .matrix_lab import IntMatrix, PerronData


@dataclass(frozen=True)
class ElementaryMatrix:
    """The n x n block matrix (0 1; I b) determined by its digit vector."""

    n: int
    b: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        if len(b) != self.n - 1:
            raise ValueError("digit vector must have length n-1")
        object.__setattr__(self, "b", b)

    def matrix(self) -> IntMatrix:
        n = self.n
        rows = [[0] * n for _ in range(n)]
        rows[0][n - 1] = 1
        for i in range(1, n):
            rows[i][i - 1] = 1
            rows[i][n - 1] = self.b[i - 1]
        return IntMatrix(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class JPState:
    """Expansion state theta = (theta_1, ..., theta_{n-1}) in K.

    States reached after the first step lie in the positive cone; the
    initial state may have negative coordinates when the input matrix
    does (the leading digits then absorb the signs).
    """

    thetas: tuple
    embedding: RootInterval

    @property
    def dimension(self) -> int:
        return len(self.thetas) + 1


def jp_step(state: JPState):
    """One digit extraction; returns (digits, next state).

    Applying B(digits) to (1, next) and rescaling the first coordinate
    to 1 recovers (1, state) exactly.
    """
    t = state.thetas
    lead = t[0]
    if lead.is_rational() and lead.rational_value().denominator == 1:
        raise IntegerLeadingCoordinate("leading coordinate is an integer")
    digits = tuple(floor_of(x, state.embedding) for x in t)
    frac = t[0] - digits[0]
    inv = frac.inverse()
    nxt = tuple((t[j + 1] - digits[j + 1]) * inv for j in range(len(t) - 1)) + (inv,)
    return digits, JPState(nxt, state.embedding)


@dataclass(frozen=True)
class JPExpansion:
    """Digit vectors of a Jacobi-Perron expansion with the period split
    found by exact state repetition; an empty period means the step
    budget ran out first."""

    preperiod: tuple
    period: tuple
    states_seen: int

    @property
    def exhausted(self) -> bool:
        return not self.period

    def digit_stream(self, k: int) -> tuple:
        if k <= len(self.preperiod):
            return self.preperiod[:k]
        if not self.period:
            raise InsufficientDigits(
                f"only {len(self.preperiod)} digits available, {k} requested"
            )
        out = list(self.preperiod)
        i = 0
        while len(out) < k:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)


def jp_expand_thetas(thetas, embedding: RootInterval, max_steps: int = 200) -> JPExpansion:
    """Expand an explicit direction vector; exact periodicity detection."""
    state = JPState(tuple(thetas), embedding)
    digits = []
    seen = {}
    for step in range(max_steps):
        key = tuple(t.coords for t in state.thetas)
        if key in seen:
            i = seen[key]
            return JPExpansion(tuple(digits[:i]), tuple(digits[i:]), step)
        seen[key] = step
        d, state = jp_step(state)
        digits.append(d)
    return JPExpansion(tuple(digits), (), max_steps)


def jp_expand(pd: PerronData, max_steps: int = 200) -> JPExpansion:
    """Expansion of theta_i = v^(i+1)/v^(1) for normalized eigendata."""
    thetas = pd.eigenvector[1:]
    return jp_expand_thetas(thetas, pd.embedding, max_steps)


# ---------------------------------------------------------------------------
# factorization of non-negative unimodular matrices
# ---------------------------------------------------------------------------

def _peel_choices(M: IntMatrix):
    """All digit vectors b with M * B(b)^{-1} still non-negative.

    Peeling replaces the columns by (last - sum b_i * col_i, col_0, ...,
    col_{n-2}); the constraint is that the new first column stays
    non-negative.
    """
    n = M.n
    cols = list(zip(*M.rows))
    choices = []

    def rec(i, remaining, acc):
        if i == n - 1:
            choices.append((tuple(acc), tuple(remaining)))
            return
        col = cols[i]
        top = min(
            (r // c for r, c in zip(remaining, col) if c > 0), default=None
        )
        assert top is not None, "unimodular matrices have no zero column"
        for b in range(top + 1):
            rec(i + 1, tuple(r - b * c for r, c in zip(remaining, col)), acc + [b])

    rec(0, cols[n - 1], [])
    return choices


def _peeled(M: IntMatrix, first_col) -> IntMatrix:
    n = M.n
    cols = list(zip(*M.rows))
    new_cols = [first_col] + cols[: n - 1]
    return IntMatrix(tuple(tuple(new_cols[j][i] for j in range(n)) for i in range(n)))


def _greedy_digits(M: IntMatrix):
    """Componentwise-maximal digit vector for one peel."""
    n = M.n
    cols = list(zip(*M.rows))
    remaining = list(cols[n - 1])
    b = []
    for i in range(n - 1):
        col = cols[i]
        top = min((r // c for r, c in zip(remaining, col) if c > 0))
        b.append(top)
        remaining = [r - top * c for r, c in zip(remaining, col)]
    return tuple(b), tuple(remaining)


def factor_nonneg(A: IntMatrix, max_depth: int = 12):
    """Factor a non-negative unimodular matrix into elementary matrices.

    Greedy right-division first, breadth-first search over peel choices
    as fallback; raises NotFactorable when the bounded search is
    exhausted. The returned product is verified against A exactly.
    """
    if not A.is_nonnegative():
        raise NotNonNegative("factorization needs non-negative entries")
    if A.det() not in (1, -1):
        raise NotUnimodular("factorization needs a unimodular matrix")
    n = A.n
    ident = IntMatrix.identity(n)

    digits = _greedy_factor(A, ident, max_depth)
    if digits is None:
        digits = _bfs_factor(A, ident, max_depth)
    if digits is None:
        raise NotFactorable(f"no elementary factorization within depth {max_depth}")
    factors = tuple(ElementaryMatrix(n, b) for b in digits)
    prod = ident
    for f in factors:
        prod = prod * f.matrix()
    assert prod == A, "factorization failed verification"
    return factors


def _greedy_factor(A, ident, max_depth):
    cur = A
    rev = []
    seen = set()
    while cur != ident:
        if len(rev) >= max_depth or cur.rows in seen:
            return None
        seen.add(cur.rows)
        b, first_col = _greedy_digits(cur)
        cur = _peeled(cur, first_col)
        rev.append(b)
    return tuple(reversed(rev))


def _bfs_factor(A, ident, max_depth):
    frontier = {A.rows: []}
    for _ in range(max_depth):
        nxt = {}
        for rows, path in frontier.items():
            M = IntMatrix(rows)
            for b, first_col in _peel_choices(M):
                P = _peeled(M, first_col)
                if P == ident:
                    return tuple(reversed(path + [b]))
                if P.rows not in nxt:
                    nxt[P.rows] = path + [b]
        frontier = nxt
        if not frontier:
            return None
    return None


def all_factorizations(A: IntMatrix, max_depth: int, limit: int = 16):
    """Every elementary factorization up to the depth bound (test hook for
    probing the uniqueness claim); stops after ``limit`` results."""
    if not A.is_nonnegative():
        raise NotNonNegative("factorization needs non-negative entries")
    n = A.n
    ident = IntMatrix.identity(n)
    out = []
    queue = deque([(A, [])])
    while queue and len(out) < limit:
        M, path = queue.popleft()
        if len(path) >= max_depth:
            continue
        for b, first_col in _peel_choices(M):
            P = _peeled(M, first_col)
            if P == ident:
                out.append(tuple(reversed(path + [b])))
            else:
                queue.append((P, path + [b]))
    return out


def convergents(e: JPExpansion, k: int) -> IntMatrix:
    """Product B(b_1) ... B(b_k); its last column, divided by its first
    entry, approaches (1, theta)."""
    stream = e.digit_stream(k)
    if not stream:
        raise InsufficientDigits("no digits available")
    n = len(stream[0]) + 1
    prod = IntMatrix.identity(n)
    for b in stream:
        prod = prod * ElementaryMatrix(n, b).matrix()
    return prod
