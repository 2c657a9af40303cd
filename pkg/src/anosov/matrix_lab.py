"""Integer-matrix algebra and exact Perron-Frobenius eigendata.

The eigenvalue acceptance test is fully exact: the dominant real root is
located by Sturm isolation, ties with a negated root are detected
algebraically, and dominance over complex roots is decided through the
composed-product polynomial whose roots are all pairwise products of
eigenvalues (evaluated resultants, no floating point anywhere).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotHyperbolic, NotUnimodular, ReduciblePolynomial, SearchExhausted
from .exact_core import (
    FieldElement,
    MinimalPolynomial,
    RootInterval,
    isolate_squarefree,
    poly_degree,
    poly_divmod,
    poly_eval,
    poly_str,
    poly_trim,
    squarefree_part,
)


@dataclass(frozen=True)
class IntMatrix:
    """Immutable square matrix with arbitrary-precision integer entries."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        """Parse the `a,b;c,d` wire format."""
        rows = []
        for chunk in text.strip().split(";"):
            rows.append(tuple(int(p.strip()) for p in chunk.split(",")))
        return cls(tuple(rows))

    # -- basics -----------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def text(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows)

    def to_lists(self) -> list:
        return [list(r) for r in self.rows]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r)

    def is_positive(self) -> bool:
        return all(x > 0 for r in self.rows for x in r)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-x for x in r) for r in self.rows))

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        n = self.n
        if other.n != n:
            raise ValueError("dimension mismatch")
        cols = tuple(zip(*other.rows))
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __pow__(self, k: int) -> "IntMatrix":
        if k < 0:
            return self.unimodular_inverse() ** (-k)
        acc = IntMatrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        n = self.n
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def unimodular_inverse(self) -> "IntMatrix":
        d = self.det()
        if d not in (1, -1):
            raise NotUnimodular(f"determinant is {d}, not +-1")
        n = self.n
        aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.rows)]
        for k in range(n):
            pivot = next(i for i in range(k, n) if aug[i][k] != 0)
            aug[k], aug[pivot] = aug[pivot], aug[k]
            inv = 1 / aug[k][k]
            aug[k] = [x * inv for x in aug[k]]
            for i in range(n):
                if i != k and aug[i][k]:
                    f = aug[i][k]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
        out = tuple(tuple(int(x) for x in row[n:]) for row in aug)
        return IntMatrix(out)

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def __str__(self) -> str:
        return self.text()


def charpoly(A: IntMatrix) -> tuple:
    """det(tI - A) as ascending integer coefficients (monic, degree n).

    Faddeev-LeVerrier recursion; all divisions are exact over Z.
    """
    n = A.n
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    M = IntMatrix.identity(n)
    for k in range(1, n + 1):
        M = A * M
        c = -M.trace()
        assert c % k == 0
        c //= k
        coeffs[n - k] = c
        if k < n:
            M = IntMatrix(
                tuple(
                    tuple(M.rows[i][j] + (c if i == j else 0) for j in range(n))
                    for i in range(n)
                )
            )
    return tuple(coeffs)


def charpoly_str(A: IntMatrix) -> str:
    return poly_str(charpoly(A))


def conjugate(A: IntMatrix, T: IntMatrix) -> IntMatrix:
    """T * A * T^{-1}; T must be unimodular."""
    return T * A * T.unimodular_inverse()


# ---------------------------------------------------------------------------
# exact dominance of the leading real root
# ---------------------------------------------------------------------------

def _sylvester_resultant(p: tuple, q: tuple) -> int:
    """Resultant of two integer polynomials via the Sylvester determinant."""
    m, n = poly_degree(p), poly_degree(q)
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return IntMatrix(tuple(tuple(r) for r in rows)).det() if size else 1


def _pairwise_product_poly(p: tuple) -> tuple:
    """Monic integer polynomial whose roots are all ordered products
    lambda_i * lambda_j of the roots of ``p`` (degree n^2).

    Computed by evaluating Res_x(p(x), x^n p(y/x)) at integer points and
    interpolating.
    """
    n = poly_degree(p)
    deg = n * n
    xs = []
    ys = []
    t = 0
    while len(xs) <= deg:
        # q_t(x) = x^n * p(t/x) = sum_k p_k t^k x^(n-k)
        q = tuple(p[n - i] * t ** (n - i) for i in range(n + 1))
        q = poly_trim(q)
        if poly_degree(q) == n:  # constant term of p is nonzero: always
            xs.append(t)
            ys.append(_sylvester_resultant(p, q))
        t = -t + (0 if t > 0 else 1)  # 0, 1, -1, 2, -2, ...
    # Lagrange interpolation over Q; result must be integral and monic
    coeffs = [Fraction(0)] * (deg + 1)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num = [Fraction(1)]
        den = Fraction(1)
        for j, xj in enumerate(xs):
            if i == j:
                continue
            new = [Fraction(0)] * (len(num) + 1)
            for k, c in enumerate(num):
                new[k] += c * (-xj)
                new[k + 1] += c
            num = new
            den *= xi - xj
        f = Fraction(yi) / den
        for k, c in enumerate(num):
            coeffs[k] += f * c
    assert all(c.denominator == 1 for c in coeffs)
    out = tuple(int(c) for c in coeffs)
    assert out[-1] in (1, -1)
    if out[-1] == -1:
        out = tuple(-c for c in out)
    return out


def _minpoly_of_element(a: FieldElement) -> tuple:
    """Monic integer minimal polynomial of an algebraic integer in K."""
    m = a.multiplication_matrix()
    assert all(x.denominator == 1 for row in m for x in row)
    M = IntMatrix(tuple(tuple(int(x) for x in row) for row in m))
    h = squarefree_part(charpoly(M))
    assert h[-1] == 1
    return h


def _dominant_embedding(field: MinimalPolynomial) -> RootInterval:
    """Interval of the real root > 1 strictly dominating all other roots
    in absolute value; raises NotHyperbolic when there is none."""
    roots = field.real_roots()
    if not roots:
        raise NotHyperbolic("no real eigenvalue")
    lam_iv = roots[-1]
    if lam_iv.compare_rational(Fraction(1)) <= 0:
        raise NotHyperbolic("leading real eigenvalue does not exceed 1")
    lam = FieldElement.generator(field)

    # a real root of equal magnitude can only be -lambda
    minus_lam_val = poly_eval(field.coeffs, -lam)
    if minus_lam_val.is_zero():
        raise NotHyperbolic("-lambda is also an eigenvalue")
    for other in roots[:-1]:
        iv = other
        if iv.compare_rational(Fraction(0)) >= 0:
            continue  # positive roots below lam_iv are strictly smaller
        while True:  # compare |root| against lambda by joint refinement
            if -iv.low < lam_iv.low:
                break
            if -iv.high > lam_iv.high:
                raise NotHyperbolic("a negative eigenvalue dominates")
            iv = iv.halved()
            lam_iv = lam_iv.halved()

    while lam_iv.low < 1:
        lam_iv = lam_iv.halved()
    n = field.degree
    if len(roots) < n:
        _check_complex_dominance(field, lam, lam_iv)
    return lam_iv


def _check_complex_dominance(field, lam, lam_iv) -> None:
    """Reject when some complex eigenvalue has modulus >= lambda.

    If z is complex with |z| >= lambda then z*conj(z) >= lambda^2 is a
    real root of the pairwise-product polynomial with the lambda^2
    factors removed.
    """
    p = field.coeffs
    n = field.degree
    prod_poly = _pairwise_product_poly(p)
    lam_sq = lam * lam
    h = _minpoly_of_element(lam_sq)
    d = poly_degree(h)
    assert n % d == 0
    rest = prod_poly
    for _ in range(n // d):
        rest, rem = poly_divmod(rest, h)
        assert not rem
    rest = poly_trim(rest)
    # an off-diagonal product equal to lambda^2 means no strict dominance
    if poly_eval(rest, lam_sq).is_zero():
        raise NotHyperbolic("another eigenvalue pair attains |lambda|^2")
    for iv in isolate_squarefree(squarefree_part(rest)):
        if iv.compare_rational(Fraction(0)) <= 0:
            continue
        liv = lam_iv  # lam_iv.low >= 1, so squaring the bounds is monotone
        while True:  # compare the product root against lambda^2
            if iv.high < liv.low * liv.low:
                break
            if iv.low > liv.high * liv.high:
                raise NotHyperbolic("a complex eigenvalue dominates")
            iv = iv.halved()
            liv = liv.halved()


@dataclass(frozen=True)
class PerronData:
    """Exact leading eigendata of a hyperbolic unimodular matrix.

    ``eigenvector`` is normalized so its first coordinate is 1; the
    defining relation A*v = lambda*v holds exactly in K.
    """

    matrix: IntMatrix
    field: MinimalPolynomial
    embedding: RootInterval
    eigenvalue: FieldElement
    eigenvector: tuple


def _solve_eigenvector(A: IntMatrix, field, lam) -> tuple:
    """Kernel vector of (A - lambda I) with first coordinate 1."""
    n = A.n
    one = FieldElement.rational(field, 1)
    zero = FieldElement.rational(field, 0)
    rows = []
    rhs = []
    for i in range(n):
        row = []
        for j in range(1, n):
            entry = FieldElement.rational(field, A.rows[i][j])
            if i == j:
                entry = entry - lam
            row.append(entry)
        diag = FieldElement.rational(field, A.rows[i][0])
        if i == 0:
            diag = diag - lam
        rows.append(row)
        rhs.append(-diag)
    # Gaussian elimination over K; the system has rank n-1
    m = n
    cols = n - 1
    pr = 0
    pivots = []
    for pc in range(cols):
        pivot = next((r for r in range(pr, m) if not rows[r][pc].is_zero()), None)
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        rhs[pr], rhs[pivot] = rhs[pivot], rhs[pr]
        inv = rows[pr][pc].inverse()
        rows[pr] = [x * inv for x in rows[pr]]
        rhs[pr] = rhs[pr] * inv
        for r in range(m):
            if r != pr and not rows[r][pc].is_zero():
                f = rows[r][pc]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[pr])]
                rhs[r] = rhs[r] - f * rhs[pr]
        pivots.append(pc)
        pr += 1
    if pr != cols:
        raise NotHyperbolic("eigenspace is not one-dimensional")
    for r in range(pr, m):
        if not rhs[r].is_zero():
            raise NotHyperbolic("inconsistent eigensystem")
    sol = [zero] * cols
    for r, pc in enumerate(pivots):
        sol[pc] = rhs[r]
    return (one, *sol)


def perron_data(A: IntMatrix) -> PerronData:
    """Exact eigendata for the dominant real eigenvalue > 1."""
    d = A.det()
    if d not in (1, -1):
        raise NotUnimodular(f"automorphism action must have determinant +-1, got {d}")
    if A.n == 2:
        t = A.trace()
        if d == 1 and abs(t) <= 2:
            raise NotHyperbolic(f"2x2 with det 1 needs |trace| > 2, got {t}")
        if d == -1 and t == 0:
            raise NotHyperbolic("2x2 with det -1 and trace 0 has eigenvalues +-1")
    field = MinimalPolynomial(charpoly(A))  # raises ReduciblePolynomial
    emb = _dominant_embedding(field)
    lam = FieldElement.generator(field)
    v = _solve_eigenvector(A, field, lam)
    # exact residual check: A v = lambda v
    for i in range(A.n):
        acc = FieldElement.rational(field, 0)
        for j in range(A.n):
            acc = acc + A.rows[i][j] * v[j]
        if not (acc - lam * v[i]).is_zero():
            raise AssertionError("eigenvector residual is not exactly zero")
    return PerronData(A, field, emb, lam, v)


def nonneg_representative(A: IntMatrix, bound: int = 10):
    """Search for (A+, T) with A+ = T A T^{-1} entrywise >= 0.

    Conjugators are enumerated by increasing max-entry up to ``bound``;
    raises SearchExhausted when none is found.
    """
    if A.is_nonnegative():
        return A, IntMatrix.identity(A.n)
    n = A.n
    for k in range(1, bound + 1):
        for flat in itertools.product(range(-k, k + 1), repeat=n * n):
            if max(abs(x) for x in flat) != k:
                continue
            T = IntMatrix(tuple(tuple(flat[i * n + j] for j in range(n)) for i in range(n)))
            if T.det() not in (1, -1):
                continue
            cand = conjugate(A, T)
            if cand.is_nonnegative():
                return cand, T
    raise SearchExhausted(f"no non-negative conjugate with conjugator entries <= {bound}")
