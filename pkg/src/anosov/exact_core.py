"""Exact arithmetic substrate.

Rationals are stdlib ``fractions.Fraction`` (always reduced, positive
denominator). On top of that this module provides integer/rational
polynomial helpers, monic irreducible integer polynomials
(:class:`MinimalPolynomial`), real-root isolation by Sturm sequences
(:class:`RootInterval`), and exact number-field elements on the power
basis of a root (:class:`FieldElement`), including trace and exact
floors under a chosen real embedding.

Polynomials are tuples of coefficients in ascending order; the zero
polynomial is the empty tuple.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatch, NotSquarefree, ReduciblePolynomial

Poly = tuple  # ascending coefficients, ints or Fractions


# ---------------------------------------------------------------------------
# polynomial helpers
# ---------------------------------------------------------------------------

def poly_trim(cs) -> Poly:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def poly_degree(cs) -> int:
    return len(cs) - 1  # zero polynomial -> -1


def poly_add(a, b) -> Poly:
    n = max(len(a), len(b))
    return poly_trim(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_neg(a) -> Poly:
    return tuple(-c for c in a)


def poly_sub(a, b) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_scale(a, s) -> Poly:
    if s == 0:
        return ()
    return tuple(c * s for c in a)


def poly_mul(a, b) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return poly_trim(out)


def poly_divmod(a, b):
    """Quotient and remainder over Q. ``b`` must be nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and any(c != 0 for c in a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) < len(b):
            break
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a.pop()
    return poly_trim(q), poly_trim(a)


def poly_eval(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def poly_derivative(cs) -> Poly:
    return poly_trim(i * c for i, c in enumerate(cs) if i > 0)


def poly_monic(cs) -> Poly:
    if not cs:
        return ()
    lead = Fraction(cs[-1])
    return tuple(Fraction(c) / lead for c in cs)


def poly_gcd(a, b) -> Poly:
    """Monic gcd over Q."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def poly_content(cs) -> int:
    g = 0
    for c in cs:
        g = math.gcd(g, abs(int(c)))
    return g or 1


def poly_primitive(cs) -> Poly:
    """Integer polynomial divided by its content, leading coefficient > 0."""
    cs = poly_trim(cs)
    if not cs:
        return ()
    g = poly_content(cs)
    if cs[-1] < 0:
        g = -g
    return tuple(int(c) // g for c in cs)


def poly_int_from_rational(cs) -> Poly:
    """Clear denominators and return the primitive integer polynomial."""
    cs = [Fraction(c) for c in poly_trim(cs)]
    if not cs:
        return ()
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return poly_primitive(int(c * den) for c in cs)


def squarefree_part(cs) -> Poly:
    """Primitive integer squarefree part of an integer polynomial."""
    cs = poly_trim(cs)
    if poly_degree(cs) < 1:
        return poly_primitive(cs)
    g = poly_gcd(cs, poly_derivative(cs))
    if poly_degree(g) == 0:
        return poly_primitive(cs)
    q, r = poly_divmod(cs, g)
    assert not r
    return poly_int_from_rational(q)


def poly_str(cs, var: str = "t") -> str:
    """Canonical descending-order rendering, e.g. ``t^2-6t+1``."""
    cs = poly_trim(cs)
    if not cs:
        return "0"
    parts = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            x = var if k == 1 else f"{var}^{k}"
            body = x if mag == 1 else f"{mag}{x}"
        parts.append(sign + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation
# ---------------------------------------------------------------------------

def _positive_primitive(cs) -> Poly:
    """Scale a rational polynomial by a positive constant into a primitive
    integer polynomial; signs of all coefficients are preserved."""
    cs = [Fraction(c) for c in poly_trim(cs)]
    if not cs:
        return ()
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    g = g or 1
    return tuple(c // g for c in ints)


def sturm_chain(cs) -> list:
    """Sturm sequence (negated-remainder chain) of a squarefree polynomial."""
    p0 = _positive_primitive(cs)
    p1 = _positive_primitive(poly_derivative(p0))
    chain = [p0, p1]
    while chain[-1] and poly_degree(chain[-1]) >= 1:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_positive_primitive(poly_neg(r)))
    return chain


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def sturm_variations_at(chain, x: Fraction) -> int:
    return _variations([_sign(poly_eval(p, x)) for p in chain])


def sturm_variations_at_inf(chain, positive: bool) -> int:
    signs = []
    for p in chain:
        if not p:
            signs.append(0)
            continue
        s = _sign(p[-1])
        if not positive and poly_degree(p) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(chain, lo: Fraction, hi: Fraction) -> int:
    """Number of real roots in (lo, hi] for a squarefree polynomial."""
    return sturm_variations_at(chain, lo) - sturm_variations_at(chain, hi)


def cauchy_bound(cs) -> Fraction:
    """All real roots lie in (-B, B]."""
    cs = poly_trim(cs)
    lead = abs(Fraction(cs[-1]))
    m = max((abs(Fraction(c)) for c in cs[:-1]), default=Fraction(0))
    return 1 + m / lead


@dataclass(frozen=True)
class RootInterval:
    """Half-open interval (low, high] holding exactly one real root.

    ``poly`` is a squarefree integer polynomial with poly(low) != 0. The
    interval can be narrowed on demand; for irrational roots this refines
    indefinitely.
    """

    poly: tuple
    low: Fraction
    high: Fraction

    @property
    def width(self) -> Fraction:
        return self.high - self.low

    def halved(self) -> "RootInterval":
        mid = (self.low + self.high) / 2
        v = poly_eval(self.poly, mid)
        if v == 0:
            # the root is exactly mid; keep a half-open sliver around it
            return RootInterval(self.poly, (self.low + mid) / 2, mid)
        if _sign(v) == _sign(poly_eval(self.poly, self.low)):
            return RootInterval(self.poly, mid, self.high)
        return RootInterval(self.poly, self.low, mid)

    def refined(self, max_width: Fraction) -> "RootInterval":
        iv = self
        while iv.width > max_width:
            iv = iv.halved()
        return iv

    def compare_rational(self, q: Fraction) -> int:
        """-1, 0, +1 comparison of the root against a rational number."""
        if poly_eval(self.poly, Fraction(q)) == 0:
            # q is a root of the defining polynomial; is it *this* root?
            if self.low < q <= self.high:
                return 0
        iv = self
        while iv.low < q <= iv.high:
            iv = iv.halved()
        return -1 if iv.high < q else 1

    def approx(self, digits: int = 15) -> float:
        return float(self.refined(Fraction(1, 10**digits)).high)


def isolate_squarefree(cs) -> list[RootInterval]:
    """Disjoint isolating intervals for all real roots, sorted ascending.

    Raises :class:`NotSquarefree` when the input has a repeated root.
    """
    cs = poly_int_from_rational(cs)
    if poly_degree(cs) < 1:
        return []
    if poly_degree(poly_gcd(cs, poly_derivative(cs))) > 0:
        raise NotSquarefree(f"{poly_str(cs)} has repeated roots")
    chain = sturm_chain(cs)
    bound = cauchy_bound(cs)
    out: list[RootInterval] = []

    def split(lo: Fraction, hi: Fraction, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            out.append(RootInterval(cs, lo, hi))
            return
        mid = (lo + hi) / 2
        while poly_eval(cs, mid) == 0:
            mid = (lo + mid) / 2
        nl = count_real_roots(chain, lo, mid)
        split(lo, mid, nl)
        split(mid, hi, n - nl)

    total = count_real_roots(chain, -bound, bound)
    split(-bound, bound, total)
    out.sort(key=lambda iv: iv.low)
    return out


def number_of_real_roots(cs) -> int:
    cs = squarefree_part(cs)
    if poly_degree(cs) < 1:
        return 0
    chain = sturm_chain(cs)
    b = cauchy_bound(cs)
    return count_real_roots(chain, -b, b)


# ---------------------------------------------------------------------------
# irreducibility (squarefree test + rational roots + bounded factor search)
# ---------------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _lagrange_interpolate(points) -> Poly:
    """Polynomial through (x_i, y_i) with rational coefficients."""
    acc: Poly = ()
    for i, (xi, yi) in enumerate(points):
        num: Poly = (Fraction(yi),)
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = poly_mul(num, (Fraction(-xj), Fraction(1)))
            den *= Fraction(xi - xj)
        acc = poly_add(acc, poly_scale(num, 1 / den))
    return poly_trim(acc)


def _has_bounded_factor(cs, k: int) -> bool:
    """Kronecker search for an integer factor of exact degree k."""
    xs = [0, 1, -1, 2, -2, 3, -3][: k + 1]
    values = [int(poly_eval(cs, x)) for x in xs]
    choice_sets = []
    for v in values:
        ds = _divisors(v)
        choice_sets.append([d for d in ds] + [-d for d in ds])
    order = sorted(range(len(xs)), key=lambda i: len(choice_sets[i]))
    xs = [xs[i] for i in order]
    choice_sets = [choice_sets[i] for i in order]
    for combo in itertools.product(*choice_sets):
        g = _lagrange_interpolate(list(zip(xs, combo)))
        if poly_degree(g) != k:
            continue
        if any(c.denominator != 1 for c in g):
            continue
        if abs(g[-1]) != 1:
            continue  # factors of a monic polynomial are +-monic
        q, r = poly_divmod(cs, g)
        if r:
            continue
        if all(c.denominator == 1 for c in q):
            return True
    return False


def is_irreducible(cs) -> bool:
    """Irreducibility over Q of a monic integer polynomial."""
    cs = poly_trim(cs)
    n = poly_degree(cs)
    if n < 1:
        return False
    if n == 1:
        return True
    if cs[0] == 0:
        return False
    if poly_degree(poly_gcd(cs, poly_derivative(cs))) > 0:
        return False
    for d in _divisors(int(cs[0])):
        for r in (d, -d):
            if poly_eval(cs, r) == 0:
                return False
    for k in range(2, n // 2 + 1):
        if _has_bounded_factor(cs, k):
            return False
    return True


# ---------------------------------------------------------------------------
# minimal polynomials and field elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic irreducible integer polynomial, ascending coefficients."""

    coeffs: tuple

    def __post_init__(self):
        cs = poly_trim(tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "coeffs", cs)
        if poly_degree(cs) < 1:
            raise ValueError("degree must be at least 1")
        if cs[-1] != 1:
            raise ValueError("polynomial must be monic")
        if not is_irreducible(cs):
            raise ReduciblePolynomial(f"{poly_str(cs)} is reducible over Q")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def has_unit_constant_term(self) -> bool:
        # recorded only; nothing downstream branches on it
        return abs(self.coeffs[0]) == 1

    def real_roots(self) -> list[RootInterval]:
        return _real_roots_cached(self.coeffs)

    def __str__(self) -> str:
        return poly_str(self.coeffs)


@lru_cache(maxsize=None)
def _real_roots_cached(coeffs) -> list:
    return isolate_squarefree(coeffs)


def isolate_real_roots(p: MinimalPolynomial) -> list[RootInterval]:
    """One refinable interval per real root of ``p``."""
    return p.real_roots()


def _interval_eval(cs, lo: Fraction, hi: Fraction):
    """Horner evaluation of a polynomial over an interval [lo, hi]."""
    alo = ahi = Fraction(cs[-1]) if cs else Fraction(0)
    for c in reversed(cs[:-1]):
        candidates = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(candidates) + c, max(candidates) + c
    return alo, ahi


@dataclass(frozen=True)
class FieldElement:
    """Element of Q(lambda) on the power basis 1, lambda, ..., lambda^(n-1)."""

    field: MinimalPolynomial
    coords: tuple

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coords)
        if len(cs) != self.field.degree:
            raise ValueError("coordinate count must equal the field degree")
        object.__setattr__(self, "coords", cs)

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, field: MinimalPolynomial, value) -> "FieldElement":
        n = field.degree
        return cls(field, (Fraction(value),) + (Fraction(0),) * (n - 1))

    @classmethod
    def generator(cls, field: MinimalPolynomial) -> "FieldElement":
        n = field.degree
        if n == 1:
            return cls(field, (Fraction(-field.coeffs[0]),))
        coords = [Fraction(0)] * n
        coords[1] = Fraction(1)
        return cls(field, tuple(coords))

    @classmethod
    def from_poly(cls, field: MinimalPolynomial, cs) -> "FieldElement":
        _, r = poly_divmod(cs, field.coeffs)
        coords = list(r) + [Fraction(0)] * (field.degree - len(r))
        return cls(field, tuple(coords[: field.degree]))

    # -- predicates ----------------------------------------------------
    def _check(self, other: "FieldElement") -> None:
        if self.field != other.field:
            raise FieldMismatch("elements live in different fields")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        prod = poly_mul(poly_trim(self.coords), poly_trim(other.coords))
        return FieldElement.from_poly(self.field, prod)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid: s*self + t*minpoly = 1
        a = poly_trim(self.coords)
        b = tuple(Fraction(c) for c in self.field.coeffs)
        s0, s1 = (Fraction(1),), ()
        r0, r1 = a, b
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        assert poly_degree(r0) == 0, "minimal polynomial is not irreducible?"
        inv = poly_scale(s0, 1 / Fraction(r0[0]))
        return FieldElement.from_poly(self.field, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc = FieldElement.rational(self.field, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        return FieldElement.rational(self.field, other)

    # -- invariants of the multiplication endomorphism ------------------
    def multiplication_matrix(self):
        """Rational matrix of x -> self*x on the power basis (rows)."""
        n = self.field.degree
        cols = []
        power = FieldElement.rational(self.field, 1)
        gen = FieldElement.generator(self.field)
        for j in range(n):
            cols.append((self * power).coords)
            power = power * gen
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    def trace(self) -> Fraction:
        m = self.multiplication_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def norm(self) -> Fraction:
        return _frac_det(self.multiplication_matrix())

    # -- the chosen real embedding --------------------------------------
    def interval_under(self, root: RootInterval):
        cs = poly_trim(self.coords)
        if not cs:
            return Fraction(0), Fraction(0)
        return _interval_eval(cs, root.low, root.high)

    def sign_under(self, root: RootInterval) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return _sign(self.coords[0])
        while True:
            lo, hi = self.interval_under(root)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            root = root.halved()

    def floor_under(self, root: RootInterval) -> int:
        if self.is_rational():
            return math.floor(self.coords[0])
        while True:
            lo, hi = self.interval_under(root)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            root = root.halved()

    def approx(self, root: RootInterval, digits: int = 15) -> float:
        eps = Fraction(1, 10**digits)
        while True:
            lo, hi = self.interval_under(root)
            if hi - lo < eps:
                return float((lo + hi) / 2)
            root = root.halved()

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Product in K, reduced modulo the minimal polynomial."""
    return a * b


def trace(a: FieldElement) -> Fraction:
    """Trace of the multiplication-by-``a`` endomorphism of K."""
    return a.trace()


def floor_of(a: FieldElement, root: RootInterval) -> int:
    """Exact floor of ``a`` under the real embedding named by ``root``."""
    return a.floor_under(root)


def compare_under(a: FieldElement, b: FieldElement, root: RootInterval) -> int:
    """Sign of a - b under the embedding."""
    return (a - b).sign_under(root)


# ---------------------------------------------------------------------------
# small exact linear algebra over Q (used for norms and eigen-solving)
# ---------------------------------------------------------------------------

def _frac_det(rows) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return det
