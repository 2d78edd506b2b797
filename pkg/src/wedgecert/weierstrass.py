"""Weierstrass division and preparation, and square-root extraction.

A distinguished polynomial is monic in y with every other coefficient in
the maximal ideal of k[[x]]; ``YPoly`` stores such polynomials (and the
general monic-in-y intermediates the Hensel machinery needs) as a list of
truncated univariate coefficients.  Division reduces the defect one
x-order per round, so it terminates within the truncation; preparation is
one division of y^d plus a unit inversion.

Square roots over QQ exist only when the relevant lowest coefficient is a
perfect rational square; the ``*_sos_sqrt`` helpers lift that restriction
by writing the value as a sum of at most four rational squares, which is
what certificate construction actually needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InsufficientPrecision,
    NegativeLead,
    NotASquare,
    NotDistinguished,
    OddOrder,
    ZeroInput,
)
from .scalars import GaussRat, is_square_rat, sqrt_rat, sum_of_squares_rat
from .series import BSeries, USeries, invert_unit, useries_invert
from .errors import NotPositiveUnit

_ZERO = Fraction(0)


class YPoly:
    """Polynomial in y with truncated univariate series coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("YPoly needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("YPoly is immutable")

    @classmethod
    def one(cls, trunc):
        return cls([USeries.const(1, trunc)])

    @classmethod
    def from_scalars(cls, scalars, trunc):
        return cls([USeries.const(c, trunc) for c in scalars])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def trunc(self):
        return min(c.trunc for c in self.coeffs)

    def is_monic(self):
        lead = self.coeffs[-1]
        return lead.coeffs[0] == 1 and not any(lead.coeffs[1:])

    def is_distinguished(self):
        if not self.is_monic():
            return False
        return all(not c.coeffs[0] for c in self.coeffs[:-1])

    def truncate(self, trunc):
        return YPoly([c.truncate(trunc) for c in self.coeffs])

    def mod_x(self):
        """Reduction mod x: the list of constant coefficients (a z-poly)."""
        return [c.coeffs[0] for c in self.coeffs]

    def map_coeffs(self, fn):
        return YPoly([fn(c) for c in self.coeffs])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        t = min(self.trunc, other.trunc)
        z = USeries.zero(t)
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        b = list(other.coeffs) + [z] * (n - len(other.coeffs))
        return YPoly([x + y for x, y in zip(a, b)]).normalized()

    def __neg__(self):
        return YPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, USeries):
            return YPoly([c * other for c in self.coeffs])
        t = min(self.trunc, other.trunc)
        out = [USeries.zero(t) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return YPoly(out).normalized()

    def normalized(self):
        """Drop zero leading coefficients (keeping at least the constant)."""
        coeffs = list(self.coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        return YPoly(coeffs)

    def divmod_monic(self, w: "YPoly"):
        """Division by a monic YPoly; exact in the truncated coefficients."""
        if not w.is_monic():
            raise NotDistinguished("divisor must be monic in y")
        d = w.degree
        t = min(self.trunc, w.trunc)
        rem = [c.truncate(t) for c in self.coeffs]
        quo = [USeries.zero(t) for _ in range(max(0, len(rem) - d))]
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if not c.is_zero():
                quo[k - d] = c
                for i in range(d + 1):
                    rem[k - d + i] = rem[k - d + i] - c * w.coeffs[i].truncate(t)
        return YPoly(quo) if quo else YPoly([USeries.zero(t)]), YPoly(rem[:d] or [USeries.zero(t)]).normalized()

    def eval_y(self, u: USeries) -> USeries:
        total = USeries.zero(min(self.trunc, u.trunc))
        for c in reversed(self.coeffs):
            total = total * u + c
        return total

    def to_bseries(self, trunc: int) -> BSeries:
        d = {}
        for j, c in enumerate(self.coeffs):
            for i, v in enumerate(c.coeffs):
                if v and i + j < trunc:
                    d[(i, j)] = d.get((i, j), _ZERO) + v
        return BSeries.from_dict(d, trunc)

    def conjugate(self):
        return YPoly([c.conjugate() for c in self.coeffs])

    def is_real(self):
        return all(c.is_real() for c in self.coeffs)

    def real_imag_bseries(self, trunc: int):
        """Split a QQ(i)-coefficient YPoly into real and imaginary BSeries."""
        re, im = {}, {}
        for j, c in enumerate(self.coeffs):
            for i, v in enumerate(c.coeffs):
                if i + j < trunc:
                    if isinstance(v, GaussRat):
                        if v.re:
                            re[(i, j)] = v.re
                        if v.im:
                            im[(i, j)] = v.im
                    elif v:
                        re[(i, j)] = v
        return BSeries.from_dict(re, trunc), BSeries.from_dict(im, trunc)

    def __repr__(self):
        return f"YPoly(degree={self.degree}, trunc={self.trunc})"


@dataclass(frozen=True)
class WeierstrassData:
    """Preparation result: f = unit * x^m * w, with w distinguished."""

    unit: BSeries
    m: int
    w: YPoly

    def reassemble(self, trunc: int) -> BSeries:
        k = min(trunc, self.unit.trunc)
        prod = self.unit.truncate(k) * self.w.to_bseries(k)
        return _shift_x(prod, self.m, trunc)


def _shift_x(a: BSeries, m: int, trunc: int) -> BSeries:
    """x^m * a, re-expressed at truncation ``trunc`` (valid: a known mod m^{trunc-m})."""
    d = {}
    for (i, j), c in a.terms():
        if i + m + j < trunc:
            d[(i + m, j)] = c
    return BSeries.from_dict(d, trunc)


def _y_split(a: BSeries, d: int):
    """Split a = low + y^d * high by y-degree; both at a's truncation."""
    low, high = {}, {}
    for (i, j), c in a.terms():
        if j < d:
            low[(i, j)] = c
        else:
            high[(i, j - d)] = c
    n = a.trunc
    return BSeries.from_dict(low, n), BSeries.from_dict(high, n)


def weierstrass_divide(f: BSeries, w: YPoly, _min_rounds: int = 0):
    """Division f = q*w + r with deg_y r < deg w, exact mod m^N.

    The divisor must be distinguished.  Each round moves the defect up one
    power of x, so at most N rounds run; extra rounds are no-ops, which is
    the uniqueness property the tests pin down.
    """
    if not w.is_distinguished():
        raise NotDistinguished("divisor is not a distinguished polynomial")
    n = f.trunc
    d = w.degree
    if d == 0:
        return f, []
    low_part = w.to_bseries(n) - BSeries.monomial(1, 0, d, n)
    q = BSeries.zero(n)
    racc = BSeries.zero(n)
    defect = f
    rounds = 0
    while (not defect.is_zero()) or rounds < _min_rounds:
        if defect.is_zero():
            rounds += 1
            continue
        low, high = _y_split(defect, d)
        q = q + high
        racc = racc + low
        defect = -(high * low_part)
        rounds += 1
        if rounds > n + 2:  # pragma: no cover - convergence guard
            raise AssertionError("division failed to converge")
    rem = [
        USeries([racc.coeff(i, j) for i in range(n - j)], n - j) for j in range(d)
    ]
    return q, rem


def weierstrass_prepare(f: BSeries) -> WeierstrassData:
    """Preparation f = u * x^m * W mod m^N.

    m is the exact x-multiplicity of the known triangle; d is the y-order
    of f/x^m on the y-axis.  Fails with InsufficientPrecision when either
    is not determined below the truncation.
    """
    if f.is_zero():
        raise ZeroInput("cannot prepare the zero series")
    m = f.x_multiplicity()
    f1 = f.div_xm(m)
    n1 = f1.trunc
    u0 = f1.restrict_x0()
    d = u0.order()
    if d is None:
        raise InsufficientPrecision(
            "y-order of f/x^m is not determined below the truncation"
        )
    if d == 0:
        return WeierstrassData(unit=f1, m=m, w=YPoly.one(n1))
    if d >= n1:
        raise InsufficientPrecision("distinguished degree reaches the truncation")
    r_part, a_part = _y_split(f1, d)
    a_inv = invert_unit(a_part)
    q = BSeries.zero(n1)
    racc = BSeries.zero(n1)
    defect = BSeries.monomial(1, 0, d, n1)
    rounds = 0
    while not defect.is_zero():
        low, high = _y_split(defect, d)
        t = a_inv * high
        q = q + t
        racc = racc + low
        defect = -(r_part * t)
        rounds += 1
        if rounds > n1 + 2:  # pragma: no cover
            raise AssertionError("preparation failed to converge")
    coeffs = [
        USeries([-racc.coeff(i, j) for i in range(n1)], n1) for j in range(d)
    ]
    for j, c in enumerate(coeffs):
        if c.coeffs[0]:  # pragma: no cover - guaranteed by construction
            raise AssertionError("preparation produced a non-distinguished factor")
    w = YPoly(coeffs + [USeries.const(1, n1)])
    unit = invert_unit(q)
    return WeierstrassData(unit=unit, m=m, w=w)


# ---------------------------------------------------------------------------
# Square roots
# ---------------------------------------------------------------------------


def unit_sqrt(u: BSeries) -> BSeries:
    """Square root of a unit with positive square constant term.

    Newton iteration on the inverse square root (v <- v(3 - u v^2)/2)
    doubles precision per step; the result is normalized to a positive
    constant term.
    """
    c = u.constant()
    if c <= 0:
        raise NotPositiveUnit("constant term must be positive")
    if not is_square_rat(c):
        raise NotASquare(
            f"constant term {c} is not a rational square; use bseries_sos_sqrt"
        )
    n = u.trunc
    v = BSeries.const(1 / sqrt_rat(c), 1)
    k = 1
    while k < n:
        k = min(2 * k, n)
        uk = u.truncate(k)
        v = BSeries(v.coeffs, k)
        v = (v * (BSeries.const(3, k) - uk * v * v)).scale(Fraction(1, 2))
    return u * v


def _useries_unit_sqrt(b: USeries) -> USeries:
    """Square root of a univariate unit whose constant term is a square."""
    c = b.coeffs[0]
    if c <= 0:
        raise NotPositiveUnit("constant term must be positive")
    if not is_square_rat(c):
        raise NotASquare(f"constant term {c} is not a rational square")
    n = b.trunc
    v = USeries.const(1 / sqrt_rat(c), 1)
    k = 1
    while k < n:
        k = min(2 * k, n)
        bk = b.truncate(k)
        v = USeries(v.coeffs, k)
        v = (v * (USeries.const(3, k) - bk * v * v)).scale(Fraction(1, 2))
    return b * v


def useries_is_square(a: USeries) -> bool:
    """Squares in R[[x]] are exactly: even order, positive lowest coefficient."""
    k = a.order()
    return k is not None and k % 2 == 0 and a.coeffs[k] > 0


def useries_sqrt(a: USeries) -> USeries:
    """Exact square root in QQ[[x]]; result has positive lowest coefficient.

    The result is reported mod x^{N - k/2} for input order k, which is
    exactly the precision to which the square is determined mod x^N.
    """
    k = a.order()
    if k is None:
        raise ZeroInput("square root of the zero series is not representable")
    if k % 2:
        raise OddOrder(f"valuation {k} is odd")
    lead = a.coeffs[k]
    if lead < 0:
        raise NegativeLead(f"lowest coefficient {lead} is negative")
    body = a.div_xk(k)
    root = _useries_unit_sqrt(body)
    half = k // 2
    return USeries([_ZERO] * half + list(root.coeffs), root.trunc + half)


def useries_sos_sqrt(a: USeries):
    """A square in R[[x]] as an explicit tuple of QQ[[x]] squares.

    Same preconditions as useries_sqrt minus the perfect-square lead: the
    lowest coefficient is split into at most four rational squares.
    """
    k = a.order()
    if k is None:
        return ()
    if k % 2:
        raise OddOrder(f"valuation {k} is odd")
    lead = a.coeffs[k]
    if lead < 0:
        raise NegativeLead(f"lowest coefficient {lead} is negative")
    body = a.div_xk(k).scale(1 / lead)
    root = _useries_unit_sqrt(body)
    half = k // 2
    shifted = USeries([_ZERO] * half + list(root.coeffs), root.trunc + half)
    return tuple(shifted.scale(r) for r in sum_of_squares_rat(lead))


def bseries_sos_sqrt(u: BSeries):
    """A positive unit as an explicit tuple of series whose squares sum to it."""
    c = u.constant()
    if c <= 0:
        raise NotPositiveUnit("constant term must be positive")
    root = unit_sqrt(u.scale(1 / c))
    return tuple(root.scale(r) for r in sum_of_squares_rat(c))
