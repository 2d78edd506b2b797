"""Ground-field scalars: exact rationals, Gaussian rationals, square tools.

The ground field is QQ throughout (``fractions.Fraction``, which already
keeps numerator/denominator coprime with positive denominator), extended
to QQ(i) where conjugate pairing demands it.  This module also houses the
integer/rational square machinery used to express positive rationals as
sums of at most four rational squares, which is how "is a square in
R[[x]]" statements become explicit rational certificates.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import PreconditionViolated

#: Alias used in signatures: exact rational scalar in canonical form.
Rat = Fraction


def as_rat(value) -> Fraction:
    """Coerce an int, string \"p/q\" or Fraction to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


class GaussRat:
    """Gaussian rational a + b*i with exact Fraction parts.

    Conjugation is the involutive ring automorphism i -> -i.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rat(re))
        object.__setattr__(self, "im", as_rat(im))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("GaussRat is immutable")

    # -- ring structure -------------------------------------------------
    def __add__(self, other):
        other = _as_gauss(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_gauss(other))

    def __rsub__(self, other):
        return _as_gauss(other) + (-self)

    def __mul__(self, other):
        other = _as_gauss(other)
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gauss(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero GaussRat")
        c = other.conjugate()
        num = self * c
        return GaussRat(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return _as_gauss(other) / self

    # -- structure maps --------------------------------------------------
    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    # -- misc -------------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRat({self.re})"
        return f"GaussRat({self.re}, {self.im})"


def _as_gauss(value) -> GaussRat:
    if isinstance(value, GaussRat):
        return value
    return GaussRat(as_rat(value))


GAUSS_I = GaussRat(0, 1)


def conjugate_scalar(c):
    """Complex conjugation on a scalar; the identity on rationals."""
    if isinstance(c, GaussRat):
        return c.conjugate()
    return c


def real_part(c) -> Fraction:
    return c.re if isinstance(c, GaussRat) else as_rat(c)


def imag_part(c) -> Fraction:
    return c.im if isinstance(c, GaussRat) else Fraction(0)


# ---------------------------------------------------------------------------
# Squares in QQ.
# ---------------------------------------------------------------------------


def is_square_int(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def is_square_rat(q: Fraction) -> bool:
    """True iff q is the square of a rational."""
    return q >= 0 and is_square_int(q.numerator) and is_square_int(q.denominator)


def sqrt_rat(q: Fraction) -> Fraction:
    """Exact rational square root; raises if q is not a perfect square."""
    if not is_square_rat(q):
        raise PreconditionViolated(f"{q} is not a perfect rational square")
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


def _gauss_int_gcd(a, b):
    """Gcd in Z[i]; inputs and output are (re, im) integer pairs."""
    while b != (0, 0):
        br, bi = b
        n = br * br + bi * bi
        ar, ai = a
        # nearest-integer division a/b
        qr = (2 * (ar * br + ai * bi) + n) // (2 * n)
        qi = (2 * (ai * br - ar * bi) + n) // (2 * n)
        a, b = b, (ar - qr * br + qi * bi, ai - qr * bi - qi * br)
        # remainder components above: a - q*b with q = qr + qi*i
    return a


def _two_squares_prime(p: int):
    """p prime, p % 4 == 1: returns (a, b) with a*a + b*b == p."""
    from sympy.ntheory.residue_ntheory import sqrt_mod

    x = sqrt_mod(-1, p)
    a, b = _gauss_int_gcd((p, 0), (x, 1))
    return abs(a), abs(b)


def two_squares_int(n: int):
    """Representation n = a^2 + b^2 with a >= b >= 0, or None.

    Uses the classical criterion on the factorization of n and Gaussian
    gcds for the primes congruent to 1 mod 4.
    """
    if n < 0:
        return None
    if n == 0:
        return (0, 0)
    from sympy import factorint

    a, b = 1, 0
    for p, e in sorted(factorint(n).items()):
        if p == 2:
            for _ in range(e):
                a, b = a + b, abs(a - b)  # multiply by (1 + i)
        elif p % 4 == 3:
            if e % 2:
                return None
            a, b = a * p ** (e // 2), b * p ** (e // 2)
        else:
            c, d = _two_squares_prime(p)
            for _ in range(e):
                a, b = abs(a * c - b * d), a * d + b * c
    if a < b:
        a, b = b, a
    return (a, b)


def three_squares_int(n: int):
    """Representation of n as a sum of three squares (n not 4^k(8m+7))."""
    r = isqrt(n)
    if r * r == n:
        return (r, 0, 0)
    for a in range(r, -1, -1):
        rest = two_squares_int(n - a * a)
        if rest is not None:
            return (a, rest[0], rest[1])
    raise PreconditionViolated(f"{n} is not a sum of three squares")


def four_squares_int(n: int):
    """Lagrange representation n = sum of four squares, zeros allowed."""
    if n < 0:
        raise PreconditionViolated("negative integers are not sums of squares")
    if n == 0:
        return (0, 0, 0, 0)
    scale, m = 1, n
    while m % 4 == 0:
        m //= 4
        scale *= 2
    if m % 8 == 7:
        a, b, c = three_squares_int(m - 1)
        quad = (a, b, c, 1)
    else:
        a, b, c = three_squares_int(m)
        quad = (a, b, c, 0)
    return tuple(sorted((scale * v for v in quad), reverse=True))


def sum_of_squares_rat(q: Fraction):
    """Positive rational as a tuple of nonzero rational squares' roots.

    Returns rationals r_1 >= ... >= r_k (k <= 4) with q = sum r_i^2; a
    single entry when q is itself a perfect square.
    """
    q = as_rat(q)
    if q < 0:
        raise PreconditionViolated("negative rationals are not sums of squares")
    if q == 0:
        return ()
    if is_square_rat(q):
        return (sqrt_rat(q),)
    d = q.denominator
    parts = four_squares_int(q.numerator * d)
    return tuple(Fraction(p, d) for p in parts if p)
