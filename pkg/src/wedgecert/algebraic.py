"""Exact real-algebraic machinery: Sturm isolation and number fields.

Branch coefficients beyond QQ are isolated real algebraic numbers: a
QQ-irreducible minimal polynomial plus an isolating rational interval,
refined lazily.  Elements of QQ(alpha) are vectors over QQ reduced mod
the minimal polynomial; every sign decision reduces to "sign of p(alpha)"
for a rational polynomial p, which is decided exactly: zero by reduction
mod the minimal polynomial, nonzero by interval refinement that is
guaranteed to terminate.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionExhausted
from .poly import udeg, udivmod, ueval, uderiv, umul, usub, uscale, utrim, uxgcd

_ZERO = Fraction(0)

#: Bisection rounds allowed per sign decision before giving up honestly.
REFINE_CAP = 64


# ---------------------------------------------------------------------------
# Sturm sequences and real-root isolation over QQ
# ---------------------------------------------------------------------------


def sturm_chain(p):
    """Sturm sequence of a univariate polynomial over an ordered field."""
    chain = [utrim(list(p))]
    d = uderiv(chain[0])
    if d:
        chain.append(d)
        while True:
            rem = udivmod(chain[-2], chain[-1])[1]
            if not rem:
                break
            chain.append([-c for c in rem])
    return chain


def _sign(value) -> int:
    if hasattr(value, "sign"):
        return value.sign()
    if value > 0:
        return 1
    if value < 0:
        return -1
    return 0


def _variations(signs):
    count, last = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def sturm_variations(chain, x) -> int:
    return _variations([_sign(ueval(p, x)) for p in chain])


def _variations_at_inf(chain, positive: bool) -> int:
    signs = []
    for p in chain:
        if not p:
            signs.append(0)
            continue
        s = _sign(p[-1])
        if not positive and (len(p) - 1) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(p, lo=None, hi=None) -> int:
    """Number of distinct real roots of p in (lo, hi]; None means infinity."""
    chain = sturm_chain(p)
    va = sturm_variations(chain, lo) if lo is not None else _variations_at_inf(chain, False)
    vb = sturm_variations(chain, hi) if hi is not None else _variations_at_inf(chain, True)
    return va - vb


def root_bound(p) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    p = utrim(list(p))
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=_ZERO)
    return Fraction(1) + m / lead


def isolate_real_roots(p):
    """Disjoint open isolating intervals for the distinct real roots of p.

    Returns a list of (lo, hi) with lo < hi rationals, p(lo) != 0 != p(hi),
    exactly one root inside each, ordered increasingly.  Works on the
    square-free part internally, so multiple roots are reported once.
    """
    from .poly import usquarefree

    p = usquarefree(utrim(list(p)))
    if udeg(p) in (None, 0):
        return []
    chain = sturm_chain(p)
    b = root_bound(p)

    def var(x):
        return sturm_variations(chain, x)

    out = []

    def split(lo, hi, nlo, nhi):
        roots = nlo - nhi
        if roots == 0:
            return
        if roots == 1 and ueval(p, lo) and ueval(p, hi):
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        if not ueval(p, mid):
            # nudge the cut off the root
            width = (hi - lo) / 4
            mid2 = mid + width
            while not ueval(p, mid2):  # pragma: no cover - finitely many roots
                width /= 2
                mid2 = mid + width
            mid = mid2
        nmid = var(mid)
        split(lo, mid, nlo, nmid)
        split(mid, hi, nmid, nhi)

    split(-b, b, var(-b), var(b))
    return out


def refine_root(p, lo, hi, limit=1):
    """Shrink an isolating interval of p below ``limit`` width by bisection."""
    slo = _sign(ueval(p, lo))
    while hi - lo >= limit:
        mid = (lo + hi) / 2
        sm = _sign(ueval(p, mid))
        if sm == 0:
            eps = (hi - lo) / 8
            lo, hi = mid - eps, mid + eps
            slo = _sign(ueval(p, lo))
            continue
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# Number fields QQ(alpha) with a fixed real embedding
# ---------------------------------------------------------------------------


class NumberField:
    """QQ(alpha) for a designated real root alpha of an irreducible minpoly.

    The isolating interval shrinks monotonically as signs get decided; the
    minimal polynomial never changes, so this benign caching is safe to
    share between values.
    """

    __slots__ = ("minpoly", "_lo", "_hi")

    def __init__(self, minpoly, lo, hi):
        minpoly = utrim([Fraction(c) for c in minpoly])
        lead = minpoly[-1]
        if lead != 1:
            minpoly = [c / lead for c in minpoly]
        self.minpoly = tuple(minpoly)
        if not ueval(minpoly, lo) or not ueval(minpoly, hi):
            raise ValueError("isolating interval endpoints must not be roots")
        if count_real_roots(list(minpoly), lo, hi) != 1:
            raise ValueError("interval does not isolate exactly one real root")
        self._lo, self._hi = Fraction(lo), Fraction(hi)

    @property
    def degree(self):
        return len(self.minpoly) - 1

    def interval(self):
        return self._lo, self._hi

    def refine(self):
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        v = ueval(list(self.minpoly), mid)
        if not v:
            eps = (hi - lo) / 8
            self._lo, self._hi = mid - eps, mid + eps
            # minpoly irreducible of degree >= 2 has no rational roots; for
            # degree 1 the root is rational and never reaches this branch.
            if ueval(list(self.minpoly), self._lo) == 0 or ueval(
                list(self.minpoly), self._hi
            ) == 0:  # pragma: no cover
                raise AssertionError("endpoint refinement hit a root")
            return
        slo = _sign(ueval(list(self.minpoly), lo))
        if _sign(v) == slo:
            self._lo = mid
        else:
            self._hi = mid

    # -- element factory -------------------------------------------------
    def element(self, vec) -> "AlgElt":
        return AlgElt(self, vec)

    def gen(self) -> "AlgElt":
        return AlgElt(self, [0, 1])

    def sign_of_qpoly(self, p) -> int:
        """Exact sign of p(alpha) for a rational-coefficient polynomial p."""
        rem = udivmod(utrim([Fraction(c) for c in p]), list(self.minpoly))[1]
        if not rem:
            return 0
        for _ in range(REFINE_CAP):
            lo_v, hi_v = _interval_eval(rem, self._lo, self._hi)
            if lo_v > 0:
                return 1
            if hi_v < 0:
                return -1
            self.refine()
        raise PrecisionExhausted(
            "sign of algebraic number undecided after refinement cap"
        )

    def approx(self, width=Fraction(1, 1024)) -> Fraction:
        """A rational approximation of alpha within ``width``."""
        while self._hi - self._lo > width:
            self.refine()
        return (self._lo + self._hi) / 2

    def __repr__(self):
        return f"NumberField(minpoly={list(self.minpoly)}, in ({self._lo}, {self._hi}))"


def _interval_eval(p, lo, hi):
    """Exact interval Horner evaluation of p on [lo, hi]."""
    vlo, vhi = _ZERO, _ZERO
    for c in reversed(p):
        cands = (vlo * lo, vlo * hi, vhi * lo, vhi * hi)
        vlo, vhi = min(cands) + c, max(cands) + c
    return vlo, vhi


class AlgElt:
    """Element of a NumberField: rational vector in the power basis."""

    __slots__ = ("field", "vec")

    def __init__(self, field: NumberField, vec):
        vec = [Fraction(c) for c in vec]
        if len(vec) >= field.degree:
            vec = udivmod(utrim(vec), list(field.minpoly))[1]
        vec = utrim(vec)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "vec", tuple(vec))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("AlgElt is immutable")

    # -- ring structure ----------------------------------------------------
    def _lift(self, other):
        if isinstance(other, AlgElt):
            if other.field is not self.field:
                raise ValueError("mixed number fields")
            return other
        return AlgElt(self.field, [Fraction(other)])

    def __add__(self, other):
        other = self._lift(other)
        from .poly import uadd

        return AlgElt(self.field, uadd(list(self.vec), list(other.vec)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElt(self.field, [-c for c in self.vec])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return AlgElt(self.field, umul(list(self.vec), list(other.vec)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def inverse(self) -> "AlgElt":
        if not self.vec:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = uxgcd(list(self.vec), list(self.field.minpoly))
        if udeg(g) != 0:  # pragma: no cover - minpoly is irreducible
            raise AssertionError("minimal polynomial is not irreducible")
        return AlgElt(self.field, uscale(s, 1 / g[0]))

    # -- order structure ----------------------------------------------------
    def __bool__(self):
        return bool(self.vec)

    def sign(self) -> int:
        if not self.vec:
            return 0
        return self.field.sign_of_qpoly(list(self.vec))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._lift(other)
        if not isinstance(other, AlgElt):
            return NotImplemented
        return self.field is other.field and self.vec == other.vec

    def __hash__(self):
        return hash((id(self.field), self.vec))

    def __gt__(self, other):
        return (self - self._lift(other)).sign() > 0

    def __lt__(self, other):
        return (self - self._lift(other)).sign() < 0

    def __ge__(self, other):
        return (self - self._lift(other)).sign() >= 0

    def __le__(self, other):
        return (self - self._lift(other)).sign() <= 0

    def as_fraction(self):
        """Fraction value if the element is rational, else None."""
        if not self.vec:
            return _ZERO
        if len(self.vec) == 1:
            return self.vec[0]
        return None

    def approx(self, width=Fraction(1, 1024)) -> Fraction:
        a = self.field.approx(width / (1 + sum(abs(c) for c in self.vec)))
        return ueval(list(self.vec), a)

    def __repr__(self):
        return f"AlgElt({list(self.vec)})"


def scalar_sign(value) -> int:
    """Exact sign for any supported real scalar (Fraction or AlgElt)."""
    return _sign(value)


def scalar_as_fraction(value):
    if isinstance(value, AlgElt):
        return value.as_fraction()
    return Fraction(value)


def scalar_approx(value, width=Fraction(1, 1024)) -> Fraction:
    if isinstance(value, AlgElt):
        return value.approx(width)
    return Fraction(value)
