"""Trace bilinear form of a Z-module inside a number field.

The module carries the distinguished basis coming from the normalized
eigenvector; the Gram matrix a_ij = Tr(b_i * b_j) is exact, its
determinant is computed fraction-free, and the signature comes from a
symmetric congruence diagonalization over Q (Sylvester's law keeps it
basis-independent).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SingularForm
from .exact_core import FieldElement, MinimalPolynomial, RootInterval
from .matrix_lab import IntMatrix, PerronData


@dataclass(frozen=True)
class JacobianModule:
    """Z-module Z*b_1 + ... + Z*b_n with a distinguished basis in K."""

    field: MinimalPolynomial
    embedding: RootInterval
    basis: tuple

    def __post_init__(self):
        if not self.basis:
            raise ValueError("module needs at least one generator")
        if any(b.field != self.field for b in self.basis):
            raise ValueError("basis elements must live in the stated field")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def transformed(self, U: IntMatrix) -> "JacobianModule":
        """Same module presented on the basis U * (b_1, ..., b_n)."""
        n = self.rank
        if U.n != n:
            raise ValueError("dimension mismatch")
        zero = FieldElement.rational(self.field, 0)
        new = []
        for i in range(n):
            acc = zero
            for j in range(n):
                acc = acc + U.rows[i][j] * self.basis[j]
            new.append(acc)
        return JacobianModule(self.field, self.embedding, tuple(new))

    def scaled(self, mu: FieldElement) -> "JacobianModule":
        return JacobianModule(self.field, self.embedding, tuple(mu * b for b in self.basis))


@dataclass(frozen=True)
class GramMatrix:
    """Symmetric matrix of pairwise traces, exact rationals."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FormReport:
    """Gram matrix with its determinant, signature and diagonal form."""

    gram: GramMatrix
    determinant: Fraction
    signature: int
    diagonal: tuple


def module_of(pd: PerronData) -> JacobianModule:
    """Module generated by the normalized eigenvector coordinates."""
    return JacobianModule(pd.field, pd.embedding, pd.eigenvector)


def gram(m: JacobianModule) -> GramMatrix:
    n = m.rank
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j < i:
                row.append(rows[j][i])
            else:
                row.append((m.basis[i] * m.basis[j]).trace())
        rows.append(row)
    return GramMatrix(tuple(tuple(r) for r in rows))


def determinant(g: GramMatrix) -> Fraction:
    """Exact determinant via integer Bareiss after clearing denominators."""
    n = g.n
    scale = 1
    for row in g.entries:
        for x in row:
            d = x.denominator
            scale = scale * d // _gcd(scale, d)
    M = IntMatrix(tuple(tuple(int(x * scale) for x in row) for row in g.entries))
    return Fraction(M.det(), scale**n)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def signature(g: GramMatrix) -> int:
    """Signature by congruence diagonalization (positive minus negative)."""
    return form_diagonal(g)[1]


def form_diagonal(g: GramMatrix):
    """(diagonal entries, signature) of a congruence diagonalization.

    Pivoting: prefer a nonzero diagonal entry (symmetric swap); when the
    whole remaining diagonal vanishes, repair with row_k += row_j (and the
    matching column move) for the smallest j with g[k][j] != 0.
    """
    n = g.n
    if determinant(g) == 0:
        raise SingularForm("trace form is degenerate")
    m = [list(row) for row in g.entries]
    diag = []
    for k in range(n):
        if m[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if swap is not None:
                m[k], m[swap] = m[swap], m[k]
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = next(j for j in range(k + 1, n) if m[k][j] != 0)
                for col in range(n):
                    m[k][col] += m[j][col]
                for row in m:
                    row[k] += row[j]
        pivot = m[k][k]
        assert pivot != 0
        for i in range(k + 1, n):
            if m[i][k] == 0:
                continue
            f = m[i][k] / pivot
            for col in range(n):
                m[i][col] -= f * m[k][col]
            for row in m:
                row[i] -= f * row[k]
        diag.append(pivot)
    sig = sum(1 for d in diag if d > 0) - sum(1 for d in diag if d < 0)
    return tuple(diag), sig


def form_report(m: JacobianModule) -> FormReport:
    g = gram(m)
    det = determinant(g)
    if det == 0:
        raise SingularForm("module basis is not full")
    diag, sig = form_diagonal(g)
    return FormReport(g, det, sig, diag)
