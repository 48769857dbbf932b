"""Exact arithmetic: prime fields, cyclotomic integers Z[zeta_p], and rational
null spaces.

Everything here is exact.  Field elements are residues mod a prime q.
Cyclotomic integers are stored in the power basis {1, zeta, ..., zeta^(p-2)}
with the relation 1 + zeta + ... + zeta^(p-1) = 0 applied on construction, so
equality is coefficient-wise.  Null spaces are computed by fraction-free
(Bareiss) elimination over the integers.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import CyclotomicMismatch, DivisionByZero, FieldMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


class FFElem:
    """Residue mod a prime q."""

    __slots__ = ("value", "q")

    def __init__(self, value: int, q: int):
        if not is_prime(q):
            raise ValueError(f"modulus {q} is not prime")
        self.value = value % q
        self.q = q

    def _check(self, other: "FFElem"):
        if self.q != other.q:
            raise FieldMismatch(f"moduli differ: {self.q} vs {other.q}")

    def __add__(self, other):
        self._check(other)
        return FFElem(self.value + other.value, self.q)

    def __sub__(self, other):
        self._check(other)
        return FFElem(self.value - other.value, self.q)

    def __mul__(self, other):
        self._check(other)
        return FFElem(self.value * other.value, self.q)

    def __neg__(self):
        return FFElem(-self.value, self.q)

    def inv(self) -> "FFElem":
        if self.value == 0:
            raise DivisionByZero(f"inverse of 0 mod {self.q}")
        return FFElem(pow(self.value, self.q - 2, self.q), self.q)

    def __eq__(self, other):
        return isinstance(other, FFElem) and self.q == other.q and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.q))

    def __repr__(self):
        return f"{self.value} (mod {self.q})"


class CycInt:
    """Element of Z[zeta_p] in the power basis {1, zeta, ..., zeta^(p-2)}."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != p - 1:
            raise ValueError(f"need {p - 1} coefficients for p={p}, got {len(coeffs)}")
        self.coeffs = coeffs
        self.p = p

    @classmethod
    def zero(cls, p: int) -> "CycInt":
        return cls((0,) * (p - 1), p)

    @classmethod
    def one(cls, p: int) -> "CycInt":
        return cls((1,) + (0,) * (p - 2), p)

    @classmethod
    def from_int(cls, n: int, p: int) -> "CycInt":
        return cls((n,) + (0,) * (p - 2), p)

    @classmethod
    def zeta_power(cls, k: int, p: int) -> "CycInt":
        k %= p
        if k < p - 1:
            c = [0] * (p - 1)
            c[k] = 1
            return cls(c, p)
        # zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
        return cls((-1,) * (p - 1), p)

    def _check(self, other: "CycInt"):
        if self.p != other.p:
            raise CyclotomicMismatch(f"primes differ: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check(other)
        return CycInt(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __sub__(self, other):
        self._check(other)
        return CycInt(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.p)

    def __neg__(self):
        return CycInt(tuple(-a for a in self.coeffs), self.p)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(tuple(a * other for a in self.coeffs), self.p)
        self._check(other)
        p = self.p
        # multiply with exponents mod p, then eliminate zeta^(p-1)
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    acc[(i + j) % p] += a * b
        top = acc[p - 1]
        return CycInt(tuple(acc[k] - top for k in range(p - 1)), p)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, CycInt) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                z = "z" if k == 1 else f"z^{k}"
                terms.append(f"{c}*{z}" if c != 1 else z)
        return " + ".join(terms)


class CycRat:
    """CycInt numerator over a positive integer denominator, kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: CycInt, den: int = 1):
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(den, *(abs(c) for c in num.coeffs)) or 1
        self.num = CycInt(tuple(c // g for c in num.coeffs), num.p)
        self.den = den // g

    @classmethod
    def zero(cls, p: int) -> "CycRat":
        return cls(CycInt.zero(p))

    @classmethod
    def from_int(cls, n: int, p: int) -> "CycRat":
        return cls(CycInt.from_int(n, p))

    @classmethod
    def from_fraction(cls, f: Fraction, p: int) -> "CycRat":
        return cls(CycInt.from_int(f.numerator, p), f.denominator)

    @property
    def p(self) -> int:
        return self.num.p

    def __add__(self, other):
        return CycRat(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        return CycRat(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self):
        return CycRat(-self.num, self.den)

    def __mul__(self, other):
        if isinstance(other, int):
            return CycRat(self.num * other, self.den)
        if isinstance(other, Fraction):
            return CycRat(self.num * other.numerator, self.den * other.denominator)
        return CycRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, CycRat)
            and self.p == other.p
            and self.den == other.den
            and self.num == other.num
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == 1:
            return repr(self.num)
        return f"({self.num!r})/{self.den}"


def rational_null_space(rows, ncols: int | None = None):
    """Exact basis of {v : M v = 0} over Q, for an integer matrix given as a
    list of rows.  Fraction-free (Bareiss) forward elimination, then exact
    back-substitution.  Returns a list of primitive integer tuples; the empty
    list when the kernel is trivial.  A 0 x n matrix (pass ncols) has full
    kernel.
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        if ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    ncols = len(rows[0])
    m = [r[:] for r in rows]
    nrows = len(m)
    piv_cols = []
    r = 0
    prev = 1
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    rank = len(piv_cols)
    free_cols = [c for c in range(ncols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i in range(rank - 1, -1, -1):
            pc = piv_cols[i]
            s = Fraction(0)
            for j in range(pc + 1, ncols):
                if m[i][j]:
                    s += m[i][j] * v[j]
            v[pc] = -s / m[i][pc]
        lcm = 1
        for x in v:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        iv = [int(x * lcm) for x in v]
        g = 0
        for x in iv:
            g = math.gcd(g, abs(x))
        basis.append(tuple(x // (g or 1) for x in iv))
    return basis
