"""Exact truncated power series in one and two variables.

``USeries`` represents an element of k[[x]] modulo x^N; ``BSeries``
represents an element of QQ[[x, y]] modulo m^N for the total-degree
maximal ideal m = (x, y).  All arithmetic is exact; results of mixed
precision carry the minimum of the operand truncations.  Values are
immutable and operations are pure functions.

Univariate coefficients may live in QQ (Fraction), QQ(i) (GaussRat) or a
real number field (any scalar type with ring dunders); the bivariate type
is over QQ only, which is all the certificate pipeline needs.

Bivariate storage is a packed triangle: the coefficient of x^i y^j sits
at index T(i+j) + i with T(d) = d(d+1)/2, so truncating to a smaller
order is a prefix slice and the multiplication kernel walks flat lists.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from ._kernels import conv_lin, conv_tri, tri_len
from .errors import InsufficientPrecision, NotAUnit, ZeroInput
from .scalars import GaussRat, as_rat

_ZERO = Fraction(0)
_ONE = Fraction(1)


class InfiniteOrder(NamedTuple):
    """Marker returned for series that vanish identically mod the truncation."""

    trunc: int


def _coerce(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    return value  # GaussRat, number-field elements, ...


def _pack_fracs(coeffs):
    """Common-denominator packing: list of Fractions -> (int list, den)."""
    den = 1
    for c in coeffs:
        d = c.denominator
        den = den * d // gcd(den, d)
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


# ---------------------------------------------------------------------------
# Univariate series
# ---------------------------------------------------------------------------


class USeries:
    """Truncated univariate series: coefficients c_0 .. c_{N-1} mod x^N."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc: int):
        if trunc < 1:
            raise ValueError("truncation order must be >= 1")
        cs = [_coerce(c) for c in coeffs[:trunc]]
        cs.extend([_ZERO] * (trunc - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("USeries is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, trunc):
        return cls((), trunc)

    @classmethod
    def const(cls, value, trunc):
        return cls((value,), trunc)

    @classmethod
    def monomial(cls, value, k, trunc):
        cs = [_ZERO] * min(k, trunc)
        if k < trunc:
            cs.append(_coerce(value))
        return cls(cs, trunc)

    # -- basic structure --------------------------------------------------
    def __getitem__(self, k):
        return self.coeffs[k]

    def is_zero(self):
        return not any(self.coeffs)

    def order(self):
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def lead(self):
        """Lowest nonzero coefficient; raises on the zero series."""
        k = self.order()
        if k is None:
            raise ZeroInput("zero series has no lowest coefficient")
        return self.coeffs[k]

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise InsufficientPrecision(
                f"cannot extend truncation {self.trunc} to {trunc}"
            )
        return USeries(self.coeffs[:trunc], trunc)

    def is_real(self):
        return all(not isinstance(c, GaussRat) or c.is_real() for c in self.coeffs)

    def real_imag(self):
        re = [c.re if isinstance(c, GaussRat) else c for c in self.coeffs]
        im = [c.im if isinstance(c, GaussRat) else _ZERO for c in self.coeffs]
        return USeries(re, self.trunc), USeries(im, self.trunc)

    def conjugate(self):
        return USeries(
            [c.conjugate() if isinstance(c, GaussRat) else c for c in self.coeffs],
            self.trunc,
        )

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._promote(other)
        n = min(self.trunc, other.trunc)
        return USeries([self.coeffs[k] + other.coeffs[k] for k in range(n)], n)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return USeries([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self.scale(other)
        other = self._promote(other)
        n = min(self.trunc, other.trunc)
        a, b = self.coeffs[:n], other.coeffs[:n]
        if _all_frac(a) and _all_frac(b):
            na, da = _pack_fracs(a)
            nb, db = _pack_fracs(b)
            d = da * db
            return USeries([Fraction(v, d) for v in conv_lin(na, nb, n)], n)
        if _all_frac_or_gauss(a) and _all_frac_or_gauss(b):
            ar, ai = USeries(a, n).real_imag()
            br, bi = USeries(b, n).real_imag()
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            return USeries(
                [GaussRat(re.coeffs[k], im.coeffs[k]) for k in range(n)], n
            )
        out = [_ZERO] * n
        for i, va in enumerate(a):
            if va:
                for j in range(n - i):
                    vb = b[j]
                    if vb:
                        out[i + j] = out[i + j] + va * vb
        return USeries(out, n)

    def __rmul__(self, other):
        return self * other

    def scale(self, value):
        value = _coerce(value)
        return USeries([value * c for c in self.coeffs], self.trunc)

    def mul_xk(self, k):
        """Multiply by x^k (k >= 0), keeping the truncation."""
        return USeries((_ZERO,) * k + self.coeffs, self.trunc)

    def div_xk(self, k):
        """Exact division by x^k; truncation drops to N - k."""
        if any(self.coeffs[:k]):
            raise ValueError("series is not divisible by x^k")
        if self.trunc - k < 1:
            raise InsufficientPrecision("nothing left below the truncation")
        return USeries(self.coeffs[k:], self.trunc - k)

    def _promote(self, other):
        if isinstance(other, USeries):
            return other
        return USeries.const(other, self.trunc)

    def __eq__(self, other):
        if not isinstance(other, USeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.trunc))

    def __repr__(self):
        return f"USeries({list(self.coeffs)}, trunc={self.trunc})"


def _all_frac(cs):
    return all(isinstance(c, Fraction) for c in cs)


def _all_frac_or_gauss(cs):
    return all(isinstance(c, (Fraction, GaussRat)) for c in cs)


def useries_invert(a: USeries) -> USeries:
    """Inverse of a univariate unit mod x^N by Newton doubling."""
    c0 = a.coeffs[0]
    if not c0:
        raise NotAUnit("constant term is zero")
    n = a.trunc
    r = USeries.const(1 / c0 if not isinstance(c0, GaussRat) else GaussRat(1) / c0, 1)
    k = 1
    while k < n:
        k = min(2 * k, n)
        ak = a.truncate(k)
        r = USeries(r.coeffs, k)
        r = r + r * (USeries.const(1, k) - ak * r)
    return r


# ---------------------------------------------------------------------------
# Bivariate series
# ---------------------------------------------------------------------------


class BSeries:
    """Truncated bivariate series over QQ: coefficients c_ij for i + j < N."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc: int):
        if trunc < 1:
            raise ValueError("truncation order must be >= 1")
        size = tri_len(trunc)
        cs = [as_rat(c) for c in coeffs[:size]]
        cs.extend([_ZERO] * (size - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("BSeries is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, trunc):
        return cls((), trunc)

    @classmethod
    def const(cls, value, trunc):
        return cls((value,), trunc)

    one = const

    @classmethod
    def from_dict(cls, d, trunc):
        cs = [_ZERO] * tri_len(trunc)
        for (i, j), v in d.items():
            if i + j < trunc:
                cs[tri_len(i + j) + i] = as_rat(v)
        return cls(cs, trunc)

    @classmethod
    def monomial(cls, value, i, j, trunc):
        return cls.from_dict({(i, j): value}, trunc)

    @classmethod
    def var_x(cls, trunc):
        return cls.monomial(1, 1, 0, trunc)

    @classmethod
    def var_y(cls, trunc):
        return cls.monomial(1, 0, 1, trunc)

    @classmethod
    def from_useries(cls, u: USeries, var: str = "x", trunc: int | None = None):
        n = trunc if trunc is not None else u.trunc
        if n > u.trunc and any(u.coeffs[u.trunc :: 1]):  # pragma: no cover
            raise InsufficientPrecision("univariate data too short")
        if n > u.trunc:
            raise InsufficientPrecision(
                f"cannot extend truncation {u.trunc} to {n}"
            )
        d = {}
        for k, c in enumerate(u.coeffs[:n]):
            if c:
                d[(k, 0) if var == "x" else (0, k)] = c
        return cls.from_dict(d, n)

    # -- access -----------------------------------------------------------
    def coeff(self, i, j):
        if i < 0 or j < 0 or i + j >= self.trunc:
            return _ZERO
        return self.coeffs[tri_len(i + j) + i]

    def constant(self):
        return self.coeffs[0]

    def is_zero(self):
        return not any(self.coeffs)

    def terms(self):
        """Yield ((i, j), coeff) for nonzero coefficients, degree order."""
        idx = 0
        for d in range(self.trunc):
            for i in range(d + 1):
                c = self.coeffs[idx]
                if c:
                    yield (i, d - i), c
                idx += 1

    def order(self):
        idx = 0
        for d in range(self.trunc):
            for _ in range(d + 1):
                if self.coeffs[idx]:
                    return d
                idx += 1
        return None

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise InsufficientPrecision(
                f"cannot extend truncation {self.trunc} to {trunc}"
            )
        return BSeries(self.coeffs[: tri_len(trunc)], trunc)

    def y_order(self):
        """Least j with some c_ij nonzero; None if zero mod m^N."""
        best = None
        for (i, j), _ in self.terms():
            if best is None or j < best:
                best = j
        return best

    def x_multiplicity(self):
        """Largest m with x^m dividing the series (min i over support)."""
        best = None
        for (i, j), _ in self.terms():
            if best is None or i < best:
                best = i
            if best == 0:
                return 0
        return best

    def restrict_y0(self) -> USeries:
        """The univariate series f(x, 0) mod x^N."""
        return USeries([self.coeff(i, 0) for i in range(self.trunc)], self.trunc)

    def restrict_x0(self) -> USeries:
        return USeries([self.coeff(0, j) for j in range(self.trunc)], self.trunc)

    def swap_xy(self):
        d = {(j, i): c for (i, j), c in self.terms()}
        return BSeries.from_dict(d, self.trunc)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._promote(other)
        n = min(self.trunc, other.trunc)
        size = tri_len(n)
        return BSeries(
            [self.coeffs[k] + other.coeffs[k] for k in range(size)], n
        )

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return BSeries([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __rsub__(self, other):
        return self._promote(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._promote(other)
        n = min(self.trunc, other.trunc)
        size = tri_len(n)
        na, da = _pack_fracs(self.coeffs[:size])
        nb, db = _pack_fracs(other.coeffs[:size])
        d = da * db
        return BSeries([Fraction(v, d) for v in conv_tri(na, nb, n)], n)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not series")
        result = BSeries.const(1, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, value):
        value = as_rat(value)
        return BSeries([value * c for c in self.coeffs], self.trunc)

    def mul_monomial(self, value, a, b):
        """Multiply by value * x^a y^b via index shifting."""
        value = as_rat(value)
        d = {}
        for (i, j), c in self.terms():
            if i + a + j + b < self.trunc:
                d[(i + a, j + b)] = value * c
        return BSeries.from_dict(d, self.trunc)

    def div_xm(self, m):
        """Exact division by x^m; truncation drops to N - m."""
        if m == 0:
            return self
        n = self.trunc - m
        if n < 1:
            raise InsufficientPrecision("nothing left below the truncation")
        d = {}
        for (i, j), c in self.terms():
            if i < m:
                raise ValueError("series is not divisible by x^m")
            if (i - m) + j < n:
                d[(i - m, j)] = c
        return BSeries.from_dict(d, n)

    def _promote(self, other):
        if isinstance(other, BSeries):
            return other
        return BSeries.const(other, self.trunc)

    def __eq__(self, other):
        if not isinstance(other, BSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.trunc))

    def __repr__(self):
        parts = [f"({i},{j}):{c}" for (i, j), c in self.terms()]
        body = ", ".join(parts) if parts else "0"
        return f"BSeries[{body} mod m^{self.trunc}]"


# ---------------------------------------------------------------------------
# Module-level operations (the series-module contract surface)
# ---------------------------------------------------------------------------


def arith(a: BSeries, b: BSeries, op: str) -> BSeries:
    """Exact add/sub/mul mod m^min(Na, Nb)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def order_of(a: BSeries):
    """Least total degree with a nonzero coefficient, or an infinity marker."""
    d = a.order()
    if d is None:
        return InfiniteOrder(a.trunc)
    return d


def invert_unit(a: BSeries) -> BSeries:
    """Inverse of a unit mod m^N via Newton doubling: r <- r(2 - a r)."""
    c0 = a.constant()
    if not c0:
        raise NotAUnit("constant term is zero")
    n = a.trunc
    r = BSeries.const(1 / c0, 1)
    k = 1
    while k < n:
        k = min(2 * k, n)
        ak = a.truncate(k)
        r = BSeries(list(r.coeffs) + [_ZERO] * (tri_len(k) - len(r.coeffs)), k)
        r = r + r * (BSeries.const(1, k) - ak * r)
    return r


def _as_monomial(a: BSeries):
    found = None
    for t in a.terms():
        if found is not None:
            return None
        found = t
    return found


def substitute(a: BSeries, phi_x: BSeries, phi_y: BSeries) -> BSeries:
    """Composition a(phi_x, phi_y) mod m^min(trunc).

    Requires ord(phi) >= 1 for both substituted series: that makes the
    unknown tail of ``a`` land above the output truncation.  Callers that
    need an order-0 substitution must work at the exact polynomial level.
    """
    n = min(a.trunc, phi_x.trunc, phi_y.trunc)
    for phi, name in ((phi_x, "phi_x"), (phi_y, "phi_y")):
        if phi.constant():
            raise InsufficientPrecision(
                f"{name} has a constant term; output truncation cannot be certified"
            )
    a = a.truncate(n)
    mono_x, mono_y = _as_monomial(phi_x), _as_monomial(phi_y)
    if mono_x is not None and mono_y is not None:
        (ax, bx), cx = mono_x
        (ay, by), cy = mono_y
        d = {}
        for (i, j), c in a.terms():
            ii, jj = ax * i + ay * j, bx * i + by * j
            if ii + jj < n:
                d[(ii, jj)] = d.get((ii, jj), _ZERO) + c * cx**i * cy**j
        return BSeries.from_dict(d, n)
    phi_x, phi_y = phi_x.truncate(n), phi_y.truncate(n)
    pow_y = [BSeries.const(1, n)]
    for _ in range(1, n):
        pow_y.append(pow_y[-1] * phi_y)
    rows = []
    for i in range(n):
        row = BSeries.zero(n)
        for j in range(n - i):
            c = a.coeff(i, j)
            if c:
                row = row + pow_y[j].scale(c)
        rows.append(row)
    result = rows[-1]
    for i in range(n - 2, -1, -1):
        result = result * phi_x + rows[i]
    return result


def even_odd_split(a: BSeries, var: str = "x"):
    """Split a = E(x^2, y) + x O(x^2, y) (or symmetrically in y).

    The returned pair is reported at the input truncation; entries whose
    reassembled degree would reach the truncation are zero, so the
    reassembly identity holds exactly mod m^N.
    """
    n = a.trunc
    e, o = {}, {}
    for (i, j), c in a.terms():
        if var == "x":
            if i % 2 == 0:
                e[(i // 2, j)] = c
            else:
                o[((i - 1) // 2, j)] = c
        else:
            if j % 2 == 0:
                e[(i, j // 2)] = c
            else:
                o[(i, (j - 1) // 2)] = c
    return BSeries.from_dict(e, n), BSeries.from_dict(o, n)
