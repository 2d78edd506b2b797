"""Bridge to sympy for the bought primitives: factorization, gcd, resultants.

Everything crossing this boundary is converted to and from the package's
own exact types, and factor lists are re-sorted canonically so output
never depends on sympy's internal ordering.  No sympy object escapes.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from .algebraic import AlgElt, NumberField, count_real_roots
from .poly import Poly2, utrim
from .scalars import GaussRat

_X, _Y, _Z = sp.symbols("wc_x wc_y wc_z")
# CRootOf keeps its defining variable; it must stay distinct from _Z,
# otherwise sympy refuses to factor polynomials over the extension.
_A = sp.Symbol("wc_alpha")


def _to_sp(q: Fraction):
    return sp.Rational(q.numerator, q.denominator)


def _from_sp(r) -> Fraction:
    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


def poly2_to_sp(p: Poly2):
    if p.is_zero():
        return sp.Integer(0)
    return sp.Add(*[_to_sp(v) * _X**i * _Y**j for (i, j), v in p.items()])


def sp_to_poly2(expr) -> Poly2:
    pp = sp.Poly(sp.expand(expr), _X, _Y)
    return Poly2({(int(i), int(j)): _from_sp(c) for (i, j), c in pp.terms()})


def _poly2_sort_key(p: Poly2):
    items = tuple(
        ((i, j), (v.numerator, v.denominator)) for (i, j), v in p.items()
    )
    return (p.total_degree() or 0, items)


def _normalize_primitive(p: Poly2):
    """Scale to a primitive polynomial with positive leading coefficient.

    Returns (normalized, scale) with p = scale * normalized; the leading
    term is the canonically largest monomial.
    """
    items = p.items()
    if not items:
        return p, Fraction(1)
    from math import gcd, lcm

    den = lcm(*[v.denominator for _, v in items]) if items else 1
    num = 0
    for _, v in items:
        num = gcd(num, v.numerator * (den // v.denominator))
    scale = Fraction(num, den)
    lead = items[-1][1]
    if lead < 0:
        scale = -scale
    return p.scale(1 / scale), scale


def factor_poly2(p: Poly2):
    """Factorization over QQ: (content, [(primitive irreducible, mult)]).

    Factors are primitive with positive leading coefficient, sorted by a
    canonical key, so the result is deterministic.
    """
    if p.is_zero():
        return Fraction(0), []
    content, facs = sp.factor_list(poly2_to_sp(p), _X, _Y)
    out = []
    c = _from_sp(content)
    for f, m in facs:
        q = sp_to_poly2(f)
        q, scale = _normalize_primitive(q)
        c *= scale**m
        out.append((q, int(m)))
    out.sort(key=lambda qm: _poly2_sort_key(qm[0]))
    return c, out


def gcd_poly2(p: Poly2, q: Poly2) -> Poly2:
    g = sp.gcd(poly2_to_sp(p), poly2_to_sp(q))
    return _normalize_primitive(sp_to_poly2(g))[0]


def divides_poly2(p: Poly2, q: Poly2) -> bool:
    """True iff p divides q exactly (p nonzero)."""
    if p.is_zero():
        return q.is_zero()
    pq = sp.Poly(poly2_to_sp(q), _X, _Y)
    pp = sp.Poly(poly2_to_sp(p), _X, _Y)
    return pq.div(pp)[1].is_zero


def exact_div_poly2(q: Poly2, p: Poly2) -> Poly2:
    pq = sp.Poly(poly2_to_sp(q), _X, _Y)
    pp = sp.Poly(poly2_to_sp(p), _X, _Y)
    quo, rem = pq.div(pp)
    if not rem.is_zero():
        raise ValueError("division is not exact")
    return sp_to_poly2(quo.as_expr())


def resultant_y(p: Poly2, q: Poly2):
    """Res_y(p, q) as a dense univariate x-polynomial (lowest first)."""
    res = sp.resultant(poly2_to_sp(p), poly2_to_sp(q), _Y)
    pp = sp.Poly(res, _X)
    return utrim([_from_sp(c) for c in reversed(pp.all_coeffs())])


def resultant_x(p: Poly2, q: Poly2):
    return resultant_y(p.swap_xy(), q.swap_xy())


# ---------------------------------------------------------------------------
# Univariate factorization over QQ, QQ(i) and real number fields
# ---------------------------------------------------------------------------


def _upoly_to_sp(coeffs):
    return sp.Add(*[_to_sp(c) * _Z**k for k, c in enumerate(coeffs) if c]) if any(
        coeffs
    ) else sp.Integer(0)


def factor_upoly_qq(coeffs):
    """Monic factorization over QQ: (unit, [(monic dense coeffs, mult)])."""
    content, facs = sp.factor_list(_upoly_to_sp(coeffs), _Z)
    unit = _from_sp(content)
    out = []
    for f, m in facs:
        fc = [_from_sp(c) for c in reversed(sp.Poly(f, _Z).all_coeffs())]
        lead = fc[-1]
        unit *= lead ** int(m)
        out.append(([c / lead for c in fc], int(m)))
    out.sort(key=lambda fm: (len(fm[0]), [(c.numerator, c.denominator) for c in fm[0]]))
    return unit, out


def _gauss_from_sp(expr) -> GaussRat:
    re, im = sp.expand(expr).as_real_imag()
    return GaussRat(_from_sp(re), _from_sp(im))


def factor_upoly_gauss(coeffs):
    """Monic factorization over QQ(i); coefficients may be GaussRat.

    Returns (unit: GaussRat, [(monic dense GaussRat coeffs, mult)]).
    """
    terms = []
    for k, c in enumerate(coeffs):
        if isinstance(c, GaussRat):
            if c:
                terms.append((_to_sp(c.re) + _to_sp(c.im) * sp.I) * _Z**k)
        elif c:
            terms.append(_to_sp(c) * _Z**k)
    expr = sp.Add(*terms) if terms else sp.Integer(0)
    content, facs = sp.factor_list(expr, _Z, gaussian=True)
    unit = _gauss_from_sp(content)
    out = []
    for f, m in facs:
        fc = [_gauss_from_sp(c) for c in reversed(sp.Poly(f, _Z).all_coeffs())]
        lead = fc[-1]
        if not (lead.re == 1 and lead.im == 0):
            for i, c in enumerate(fc):
                fc[i] = c / lead
            for _ in range(int(m)):
                unit = unit * lead
        out.append((fc, int(m)))
    out.sort(
        key=lambda fm: (
            len(fm[0]),
            [
                (c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator)
                for c in fm[0]
            ],
        )
    )
    return unit, out


def field_root_to_sp(field: NumberField):
    """The sympy CRootOf matching the field's isolated real root."""
    mp = sp.Poly([_to_sp(c) for c in reversed(field.minpoly)], _A)
    lo, _ = field.interval()
    idx = count_real_roots(list(field.minpoly), None, lo)
    return sp.CRootOf(mp, idx)


def _algelt_to_sp(value, root):
    if isinstance(value, AlgElt):
        return sp.Add(*[_to_sp(c) * root**k for k, c in enumerate(value.vec)])
    return _to_sp(Fraction(value))


def _sp_to_algelt(expr, field: NumberField, root) -> AlgElt:
    expr = sp.expand(expr)
    if not expr.has(root):
        return field.element([_from_sp(expr)])
    vec = [_from_sp(c) for c in reversed(sp.Poly(expr, root).all_coeffs())]
    return field.element(vec)


def factor_upoly_field(coeffs, field: NumberField):
    """Monic factorization over QQ(alpha): (unit, [(AlgElt coeffs, mult)])."""
    root = field_root_to_sp(field)
    terms = []
    for k, c in enumerate(coeffs):
        csp = _algelt_to_sp(c, root)
        if csp != 0:
            terms.append(csp * _Z**k)
    expr = sp.Add(*terms) if terms else sp.Integer(0)
    content, facs = sp.factor_list(expr, _Z, extension=root)
    unit = _sp_to_algelt(content, field, root)
    out = []
    for f, m in facs:
        fc = [_sp_to_algelt(c, field, root) for c in reversed(sp.Poly(f, _Z).all_coeffs())]
        lead = fc[-1]
        if lead.vec != (Fraction(1),):
            inv = lead.inverse()
            fc = [c * inv for c in fc]
            for _ in range(int(m)):
                unit = unit * lead
        out.append((fc, int(m)))
    out.sort(key=lambda fm: (len(fm[0]), [tuple(c.vec) for c in fm[0]]))
    return unit, out
