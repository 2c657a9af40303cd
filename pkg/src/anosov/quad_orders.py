"""Real quadratic fields, orders and conductors, continued-fraction tail
classes, and the period method for SL(2,Z) conjugacy.

Module similarity (= equality of ideal classes over the coefficient
order) is decided through continued-fraction tails: two quadratic
irrationals generate similar modules Z + theta*Z exactly when their
minimal periods agree up to cyclic rotation. SL(2,Z) conjugacy of
matrices is finer than tail equivalence: each continued-fraction step is
a determinant -1 move, so the rotation offset (plus both preperiod
lengths) must be realizable with even total parity unless the period
length is odd, in which case going once around the cycle supplies a
determinant -1 stabilizer. Class numbers of orders are counted as
reduction cycles of primitive indefinite forms of the order's
discriminant (the proper/narrow count).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import DegreeUnsupported, NotHyperbolic, NotIrrational
from .exact_core import (
    FieldElement,
    MinimalPolynomial,
    RootInterval,
    floor_of,
    poly_int_from_rational,
)
from .matrix_lab import IntMatrix, charpoly, perron_data
from .trace_form import JacobianModule, module_of


def squarefree_decompose(n: int):
    """n = s^2 * d with d squarefree; n must be positive."""
    if n <= 0:
        raise ValueError("positive integer required")
    s, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return s, d * n


@dataclass(frozen=True)
class QuadField:
    """Real quadratic field Q(sqrt(d)), d squarefree and at least 2."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        s, dd = squarefree_decompose(self.d)
        if s != 1 or dd != self.d:
            raise ValueError("d must be squarefree")

    @property
    def discriminant(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    def omega_minpoly(self) -> MinimalPolynomial:
        if self.d % 4 == 1:
            return MinimalPolynomial((-(self.d - 1) // 4, -1, 1))
        return MinimalPolynomial((-self.d, 0, 1))

    def omega_str(self) -> str:
        if self.d % 4 == 1:
            return f"(1+sqrt({self.d}))/2"
        return f"sqrt({self.d})"

    def embedding(self) -> RootInterval:
        """The real embedding sending omega to its positive value."""
        return self.omega_minpoly().real_roots()[-1]


@dataclass(frozen=True)
class QuadOrder:
    """Order Z + (f*omega)Z of conductor f inside a quadratic field."""

    field: QuadField
    conductor: int

    def __post_init__(self):
        if self.conductor < 1:
            raise ValueError("conductor must be positive")

    @property
    def discriminant(self) -> int:
        return self.conductor**2 * self.field.discriminant

    def as_module(self) -> JacobianModule:
        """The order viewed as the module with basis {1, f*omega}."""
        p = self.field.omega_minpoly()
        emb = self.field.embedding()
        one = FieldElement.rational(p, 1)
        fom = FieldElement(p, (Fraction(0), Fraction(self.conductor)))
        return JacobianModule(p, emb, (one, fom))


def quadratic_pair(x: FieldElement, embedding: RootInterval):
    """Canonical (p, q, d) with x = p + q*sqrt(d) under the embedding.

    Lets elements of differently presented degree-2 fields be compared by
    value.
    """
    field = x.field
    if field.degree != 2:
        raise DegreeUnsupported("quadratic fields only")
    c0, c1, _ = field.coeffs
    disc = c1 * c1 - 4 * c0
    if disc <= 0:
        raise DegreeUnsupported("field is not real quadratic")
    s, d = squarefree_decompose(disc)
    gen = FieldElement.generator(field)
    # generator = (-c1 + sigma*sqrt(disc))/2 under this embedding
    sigma = (2 * gen + c1).sign_under(embedding)
    u, v = x.coords
    return u - v * Fraction(c1, 2), sigma * v * Fraction(s, 2), d


def field_d(field: MinimalPolynomial) -> int:
    """Squarefree d with Q(root) = Q(sqrt(d)) for a quadratic minpoly."""
    if field.degree != 2:
        raise DegreeUnsupported("quadratic fields only")
    c0, c1, _ = field.coeffs
    disc = c1 * c1 - 4 * c0
    if disc <= 0:
        raise DegreeUnsupported("field is not real quadratic")
    return squarefree_decompose(disc)[1]


# ---------------------------------------------------------------------------
# coefficient rings
# ---------------------------------------------------------------------------

def _primitive_quadratic(theta: FieldElement):
    """Primitive (a, b, c), a > 0, with a*theta^2 + b*theta + c = 0."""
    sq = theta * theta
    u, v = theta.coords
    su, sv = sq.coords
    if v == 0:
        raise NotIrrational("rational element has no quadratic minimal polynomial")
    x = sv / v  # theta^2 = x*theta + y
    y = su - x * u
    cs = poly_int_from_rational((-y, -x, 1))
    c, b, a = cs
    return a, b, c


def coefficient_ring(m: JacobianModule) -> QuadOrder:
    """The order {alpha in K : alpha*m <= m} of a full quadratic module.

    Scale-invariant, so the basis is first normalized to {1, theta}; for
    theta with primitive equation a*theta^2 + b*theta + c = 0 the ring is
    Z + (a*theta)Z of discriminant b^2 - 4ac.
    """
    if m.field.degree != 2:
        raise DegreeUnsupported("coefficient rings are computed for quadratic fields only")
    if m.rank != 2:
        raise ValueError("full quadratic module needs two generators")
    theta = m.basis[1] / m.basis[0]
    a, b, c = _primitive_quadratic(theta)
    disc = b * b - 4 * a * c
    if disc <= 0:
        raise DegreeUnsupported("module is not in a real quadratic field")
    _, d = squarefree_decompose(disc)
    field = QuadField(d)
    f2, rem = divmod(disc, field.discriminant)
    assert rem == 0
    f = isqrt(f2)
    assert f * f == f2
    return QuadOrder(field, f)


def stabilizes(alpha: FieldElement, m: JacobianModule) -> bool:
    """Whether alpha * m is contained in m (oracle-style lattice check)."""
    n = m.rank
    cols = [list(b.coords) for b in m.basis]
    mat = [[cols[j][i] for j in range(n)] for i in range(len(m.basis[0].coords))]
    for b in m.basis:
        target = (alpha * b).coords
        sol = _solve_rational(mat, list(target))
        if sol is None or any(x.denominator != 1 for x in sol):
            return False
    return True


def _solve_rational(mat, rhs):
    rows = [list(map(Fraction, r)) + [Fraction(v)] for r, v in zip(mat, rhs)]
    n = len(rows)
    cols = len(rows[0]) - 1
    pr = 0
    pivots = []
    for pc in range(cols):
        pivot = next((i for i in range(pr, n) if rows[i][pc] != 0), None)
        if pivot is None:
            continue
        rows[pr], rows[pivot] = rows[pivot], rows[pr]
        inv = 1 / rows[pr][pc]
        rows[pr] = [x * inv for x in rows[pr]]
        for i in range(n):
            if i != pr and rows[i][pc] != 0:
                f = rows[i][pc]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
        pivots.append(pc)
        pr += 1
    for i in range(pr, n):
        if rows[i][-1] != 0:
            return None
    sol = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        sol[pc] = rows[r][-1]
    return sol


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CFExpansion:
    """Simple continued fraction with its minimal eventual period."""

    preperiod: tuple
    period: tuple

    def __post_init__(self):
        if not self.period:
            raise ValueError("quadratic continued fractions are eventually periodic")
        assert all(a >= 1 for a in self.period)

    def digits(self, k: int) -> tuple:
        out = list(self.preperiod)
        while len(out) < k:
            out.extend(self.period)
        return tuple(out[:k])


def _cf_expand_states(x: FieldElement, embedding: RootInterval):
    if x.field.degree != 2:
        raise DegreeUnsupported("continued fractions of quadratic irrationals only")
    if x.is_rational():
        raise NotIrrational(f"{x} is rational")
    digits = []
    states = []
    seen = {}
    state = x
    while True:
        key = state.coords
        if key in seen:
            i = seen[key]
            return CFExpansion(tuple(digits[:i]), tuple(digits[i:])), states[i:]
        seen[key] = len(digits)
        states.append(state)
        a = floor_of(state, embedding)
        digits.append(a)
        state = (state - a).inverse()


def cf_expand(x: FieldElement, embedding: RootInterval) -> CFExpansion:
    """Exact continued fraction; the period is found on the first repeated
    state, which makes it minimal."""
    return _cf_expand_states(x, embedding)[0]


def canonical_rotation(word: tuple) -> tuple:
    """Lexicographically minimal rotation (unique for minimal periods)."""
    w = tuple(word)
    return min(w[r:] + w[:r] for r in range(len(w)))


def rotations_equal(w1, w2) -> bool:
    w1, w2 = tuple(w1), tuple(w2)
    if len(w1) != len(w2):
        return False
    return canonical_rotation(w1) == canonical_rotation(w2)


# ---------------------------------------------------------------------------
# the period method for SL(2,Z) conjugacy
# ---------------------------------------------------------------------------

def _attracting_expansion(A: IntMatrix) -> CFExpansion:
    """Continued fraction of the attracting Moebius fixed point.

    Assumes trace > 2 and det +1; then the attracting fixed point is
    (lambda - d)/c for the larger eigenvalue lambda, and c != 0.
    """
    field = MinimalPolynomial(charpoly(A))
    emb = field.real_roots()[-1]
    lam = FieldElement.generator(field)
    c = A.rows[1][0]
    assert c != 0, "hyperbolic SL(2,Z) matrices have c != 0"
    x = (lam - A.rows[1][1]) * Fraction(1, c)
    return cf_expand(x, emb)


def _sl2_tail_equivalent(ea: CFExpansion, eb: CFExpansion) -> bool:
    wa, wb = ea.period, eb.period
    m = len(wa)
    if m != len(wb):
        return False
    rots = [r for r in range(m) if wb == wa[r:] + wa[:r]]
    if not rots:
        return False
    if m % 2 == 1:
        return True
    ka, kb = len(ea.preperiod), len(eb.preperiod)
    return any((ka + kb + r) % 2 == 0 for r in rots)


def gauss_conjugacy_test(A: IntMatrix, B: IntMatrix) -> bool:
    """SL(2,Z) conjugacy of hyperbolic matrices by comparing the periodic
    continued fractions of their attracting fixed points."""
    for M in (A, B):
        if M.n != 2:
            raise ValueError("2x2 matrices only")
        if M.det() != 1:
            raise ValueError("determinant +1 required")
        if abs(M.trace()) <= 2:
            raise NotHyperbolic(f"|trace| must exceed 2, got {M.trace()}")
    if charpoly(A) != charpoly(B):
        return False
    if A.trace() < 0:
        A, B = -A, -B  # -I is central, so conjugacy is unaffected
    return _sl2_tail_equivalent(_attracting_expansion(A), _attracting_expansion(B))


def sl2_class_key(A: IntMatrix):
    """Canonical key: two hyperbolic positive-trace SL(2,Z) matrices are
    conjugate exactly when their keys coincide."""
    if A.trace() < 0:
        A = -A
    e = _attracting_expansion(A)
    w, m, k = e.period, len(e.period), len(e.preperiod) % 2
    if m % 2 == 1:
        return (A.trace(), canonical_rotation(w))
    v = w[k:] + w[:k]
    return (A.trace(), min(v[r:] + v[:r] for r in range(0, m, 2)))


# ---------------------------------------------------------------------------
# similarity of modules (ideal classes) and class numbers
# ---------------------------------------------------------------------------

def _theta_of(m: JacobianModule) -> FieldElement:
    return m.basis[1] / m.basis[0]


def similar_modules(m1: JacobianModule, m2: JacobianModule) -> bool:
    """Whether m2 = mu * m1 for some mu in K (tail equivalence of the
    normalized generators); different fields compare as False."""
    for m in (m1, m2):
        if m.field.degree != 2 or m.rank != 2:
            raise DegreeUnsupported("similarity testing is quadratic-only")
    if field_d(m1.field) != field_d(m2.field):
        return False
    e1 = cf_expand(_theta_of(m1), m1.embedding)
    e2 = cf_expand(_theta_of(m2), m2.embedding)
    return rotations_equal(e1.period, e2.period)


def _is_reduced_form(a: int, b: int, c: int, D: int) -> bool:
    if b <= 0 or b * b >= D:
        return False
    t = 2 * abs(a)
    lhs = D + t * t - b * b  # |sqrt(D)-t| < b  <=>  lhs < 2t*sqrt(D)
    if lhs < 0:
        return True
    return lhs * lhs < 4 * t * t * D


def _gcd3(a, b, c):
    from math import gcd

    return gcd(gcd(abs(a), abs(b)), abs(c))


@lru_cache(maxsize=None)
def _reduced_primitive_forms(D: int):
    forms = set()
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac4 = b * b - D
        if ac4 % 4:
            continue
        ac = ac4 // 4  # negative
        m = -ac
        for a in range(1, m + 1):
            if m % a:
                continue
            c = ac // a
            for aa, cc in ((a, c), (-a, -c)):
                if _gcd3(aa, b, cc) == 1 and _is_reduced_form(aa, b, cc, D):
                    forms.add((aa, b, cc))
    return frozenset(forms)


def _rho(form, D: int, s: int):
    """Reduction operator on reduced indefinite forms."""
    a, b, c = form
    mmod = 2 * abs(c)
    r = (-b) % mmod
    r += ((s - r) // mmod) * mmod  # unique r = -b mod 2|c| with s-m < r <= s
    return (c, r, (r * r - D) // (4 * c))


@lru_cache(maxsize=None)
def class_number_of_discriminant(D: int) -> int:
    """Number of reduction cycles of primitive reduced forms of positive
    non-square discriminant D."""
    forms = _reduced_primitive_forms(D)
    s = isqrt(D)
    if s * s == D:
        raise ValueError("discriminant must not be a square")
    seen = set()
    cycles = 0
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            g = _rho(g, D, s)
            assert g in forms, "reduction left the reduced set"
    return cycles


def class_number(o: QuadOrder) -> int:
    """Class number of the order, counted through form-reduction cycles."""
    return class_number_of_discriminant(o.discriminant)


# ---------------------------------------------------------------------------
# the (order, ideal class, field) triple
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassTriple:
    """Stable conjugacy data: field, order, and the canonical purely
    periodic representative of the module's tail class."""

    order: QuadOrder
    ideal_class_rep: tuple  # (p, q) with theta* = p + q*sqrt(d)
    period: tuple

    @property
    def field(self) -> QuadField:
        return self.order.field

    def representative_module(self) -> JacobianModule:
        p = self.field.omega_minpoly()
        emb = self.field.embedding()
        pp, qq = self.ideal_class_rep
        if self.field.d % 4 == 1:
            # omega = (1+sqrt(d))/2 => sqrt(d) = 2*omega - 1
            theta = FieldElement(p, (pp - qq, 2 * qq))
        else:
            theta = FieldElement(p, (pp, qq))
        return JacobianModule(p, emb, (FieldElement.rational(p, 1), theta))


def class_triple(A: IntMatrix) -> ClassTriple:
    """Field, coefficient order and canonical ideal-class representative
    of the eigenvector module of a hyperbolic 2x2 matrix."""
    if A.n != 2:
        raise DegreeUnsupported("triples are computed for 2x2 matrices only")
    pd = perron_data(A)
    m = module_of(pd)
    order = coefficient_ring(m)
    exp, cycle_states = _cf_expand_states(_theta_of(m), m.embedding)
    word = exp.period
    best = min(range(len(word)), key=lambda r: word[r:] + word[:r])
    theta_star = cycle_states[best]
    p, q, d = quadratic_pair(theta_star, m.embedding)
    assert d == order.field.d
    return ClassTriple(order, (p, q), canonical_rotation(word))
