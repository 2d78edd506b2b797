"""Newton polygons, edge factorization, and real Puiseux half-branches.

The Newton polygon of a distinguished polynomial groups its roots by
x-valuation: each lower-hull edge of slope v and horizontal length k
carries exactly k roots of valuation v.  Edge factorization splits the
polynomial into one monic factor per edge by Hensel lifting, working over
QQ throughout (valuation grouping is stable under all field
automorphisms, so no extension is ever needed).

Real half-branches are enumerated by the classical Newton-Puiseux
recursion.  Leading coefficients beyond QQ live in a real number field
QQ(alpha); nested extensions are out of scope and raise
PrecisionExhausted honestly.  Inputs here are exact polynomials, never
truncated series: branch enumeration on truncated data cannot be
certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebraic import (
    AlgElt,
    NumberField,
    REFINE_CAP,
    count_real_roots,
    isolate_real_roots,
    scalar_approx,
    scalar_sign,
)
from .errors import (
    FactorizationObstruction,
    InsufficientPrecision,
    NotPsd,
    PreconditionViolated,
    PrecisionExhausted,
)
from .poly import Poly2, udeg, uorder, utrim
from .series import USeries, useries_invert
from .weierstrass import YPoly
from .scalars import GaussRat

_ZERO = Fraction(0)
_MAX_LEVELS = 48


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower-hull data: edges as (slope, length), slopes strictly decreasing."""

    edges: tuple[tuple[Fraction, int], ...]
    vertices: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.edges)


def _lower_hull(points):
    """Lower convex hull of (j, h) points sorted by j."""
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_polygon(w: YPoly) -> NewtonPolygon:
    """Polygon of a distinguished polynomial; slopes are root valuations."""
    if w.degree < 1:
        raise PreconditionViolated("polygon needs degree >= 1")
    points = []
    for j, c in enumerate(w.coeffs):
        k = c.order()
        if k is not None:
            points.append((j, k))
    if not points or points[0][0] != 0:
        raise InsufficientPrecision(
            "constant coefficient vanishes below the truncation; strip y first"
        )
    hull = _lower_hull(points)
    edges = []
    for (j1, h1), (j2, h2) in zip(hull, hull[1:]):
        edges.append((Fraction(h1 - h2, j2 - j1), j2 - j1))
    return NewtonPolygon(edges=tuple(edges), vertices=tuple(hull))


def _polygon_of_poly2(g: Poly2):
    """Positive-slope lower-hull edges of a (t, z)-polynomial.

    Returns (vertices, edges) where each edge is (v, k, j_start, h_start)
    with v > 0; exact data, no truncation involved.
    """
    heights = {}
    for (i, j), _ in g.d.items():
        if j not in heights or i < heights[j]:
            heights[j] = i
    points = sorted(heights.items())
    hull = _lower_hull(points)
    edges = []
    for (j1, h1), (j2, h2) in zip(hull, hull[1:]):
        v = Fraction(h1 - h2, j2 - j1)
        if v > 0:
            edges.append((v, j2 - j1, j1, h1))
    return hull, edges


# ---------------------------------------------------------------------------
# Hensel lifting for coprime factor pairs over k[[x]]
# ---------------------------------------------------------------------------


def _ypoly_from_scalars(scalars, trunc):
    return YPoly([USeries.const(c, trunc) for c in scalars])


def _hensel_pair(v: YPoly, g0, h0, prec: int):
    """Lift v = g*h from the coprime seed g0*h0 = v mod x to mod x^prec.

    v, g0, h0 monic; returns (g, h) monic with v = g*h mod x^prec.  The
    classical quadratic step; seeds and Bezout data live in the scalar
    field of the coefficients (QQ, QQ(i) or QQ(alpha)).
    """
    from .poly import uxgcd

    g0, h0 = utrim(list(g0)), utrim(list(h0))
    gcd, s0, t0 = uxgcd(g0, h0)
    if udeg(gcd) != 0:
        raise PreconditionViolated("Hensel seeds are not coprime")
    inv = 1 / gcd[0]
    s0, t0 = [c * inv for c in s0], [c * inv for c in t0]
    p = 1
    g = _ypoly_from_scalars(g0, 1)
    h = _ypoly_from_scalars(h0, 1)
    s = _ypoly_from_scalars(s0 or [_ZERO], 1)
    t = _ypoly_from_scalars(t0 or [_ZERO], 1)
    while p < prec:
        p = min(2 * p, prec)
        vk = v.truncate(p)
        g, h, s, t = (q.map_coeffs(lambda c: USeries(c.coeffs, p)) for q in (g, h, s, t))
        e = vk - g * h
        q, r = (s * e).divmod_monic(h)
        g = (g + t * e + q * g).normalized()
        h = (h + r).normalized()
        u = s * g + t * h
        b = u - YPoly.one(p)
        c, d = (s * b).divmod_monic(h)
        s = (s - d).normalized()
        t = (t - t * b - c * g).normalized()
    if g.degree + h.degree != v.degree or not (g.is_monic() and h.is_monic()):
        raise AssertionError("Hensel lift lost degrees")  # pragma: no cover
    return g, h


# ---------------------------------------------------------------------------
# Edge factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeFactor:
    """Monic single-edge factor: all roots share valuation ``slope``."""

    slope: Fraction
    degree: int
    coeffs: tuple[USeries, ...]

    def ypoly(self) -> YPoly:
        return YPoly(self.coeffs)

    @property
    def trunc(self):
        return min(c.trunc for c in self.coeffs)


def _stretch_useries(c: USeries, e: int, trunc: int) -> USeries:
    out = [_ZERO] * trunc
    for k, v in enumerate(c.coeffs):
        if v and k * e < trunc:
            out[k * e] = v
    return USeries(out, trunc)


def _compress_useries(c: USeries, e: int, trunc: int, what: str) -> USeries:
    out = [_ZERO] * trunc
    for k, v in enumerate(c.coeffs):
        if v:
            if k % e:
                raise FactorizationObstruction(
                    f"{what}: factor does not descend from the ramified cover"
                )
            if k // e < trunc:
                out[k // e] = v
    return USeries(out, trunc)


def _last_edge_transform(v: YPoly, cert: int):
    """Ramify and weight-shift so the shallowest edge sits at t-order 0.

    Returns (vhat, e, h, lift_prec): vhat is monic with vhat(0, z) =
    z^(d-k) P(z) for the edge polynomial P; lift_prec is the certified
    t-precision available for Hensel lifting.
    """
    poly = newton_polygon(v)
    vslope, _k = poly.edges[-1]
    e, h = vslope.denominator, vslope.numerator
    d = v.degree
    lift_prec = e * cert - h * d
    if lift_prec < 1:
        raise InsufficientPrecision(
            "truncation too small to separate the shallowest edge"
        )
    coeffs = []
    for j, c in enumerate(v.coeffs):
        shift = h * (d - j)
        stretched = _stretch_useries(c, e, e * cert)
        if shift:
            if any(stretched.coeffs[:shift]):
                raise AssertionError("hull bound violated")  # pragma: no cover
            stretched = stretched.div_xk(shift)
        coeffs.append(stretched.truncate(lift_prec))
    return YPoly(coeffs), e, h, lift_prec, poly


def _split_last_edge(v: YPoly, cert: int):
    """Split off the shallowest-edge factor: v = rest * edge mod x^cert'.

    Returns ((rest, edge), new_cert) where new_cert <= cert reflects the
    precision spent on the weighted transform.
    """
    vhat, e, h, lift_prec, poly = _last_edge_transform(v, cert)
    vslope, k = poly.edges[-1]
    d = v.degree
    bottom = vhat.mod_x()
    g0 = [_ZERO] * (d - k) + [bottom[d]]
    p_edge = bottom[d - k : d + 1]
    if not p_edge[0]:
        raise AssertionError("edge polynomial has zero constant term")  # pragma: no cover
    ghat, hhat = _hensel_pair(vhat, g0, p_edge, lift_prec)
    new_cert = lift_prec // e

    def back(fact: YPoly) -> YPoly:
        kk = fact.degree
        out = []
        for s, c in enumerate(fact.coeffs):
            shift = h * (kk - s)
            shifted = USeries([_ZERO] * shift + list(c.coeffs), lift_prec + shift)
            out.append(_compress_useries(shifted, e, new_cert, "edge factor"))
        return YPoly(out)

    return (back(ghat), back(hhat)), new_cert


def edge_factorize(w: YPoly, trunc: int) -> list[EdgeFactor]:
    """Split a distinguished polynomial into one monic factor per edge.

    The product of the returned factors reproduces w mod x^trunc; the
    input coefficients must carry enough extra precision to pay for the
    weighted transforms (the wedge pipeline retries with more slack on
    InsufficientPrecision).
    """
    if not w.is_distinguished():
        raise PreconditionViolated("edge factorization needs a distinguished input")
    if w.degree < 1:
        return []
    factors = []
    current, cert = w, min(c.trunc for c in w.coeffs)
    while True:
        poly = newton_polygon(current)
        if len(poly.edges) == 1:
            vslope, k = poly.edges[0]
            if cert < trunc:
                raise InsufficientPrecision(
                    f"edge factor certified only mod x^{cert} < x^{trunc}"
                )
            factors.append(
                EdgeFactor(
                    slope=vslope,
                    degree=current.degree,
                    coeffs=tuple(c.truncate(trunc) for c in current.coeffs),
                )
            )
            break
        (rest, edge), cert = _split_last_edge(current, cert)
        if cert < trunc:
            raise InsufficientPrecision(
                f"edge factor certified only mod x^{cert} < x^{trunc}"
            )
        vslope, k = poly.edges[-1]
        factors.append(
            EdgeFactor(
                slope=vslope,
                degree=edge.degree,
                coeffs=tuple(c.truncate(trunc) for c in edge.coeffs),
            )
        )
        current = rest
    factors.sort(key=lambda f: f.slope, reverse=True)
    for f in factors:
        _check_edge_bounds(f)
    return factors


def _check_edge_bounds(f: EdgeFactor):
    v, k = f.slope, f.degree
    for j, c in enumerate(f.coeffs):
        bound = (k - j) * v
        need = -(-bound.numerator // bound.denominator)  # ceil
        kk = c.order()
        if kk is not None and kk < need:
            raise AssertionError(
                f"edge factor violates valuation bound at coefficient {j}"
            )  # pragma: no cover
    k0 = f.coeffs[0].order()
    if k0 is not None and Fraction(k0) != k * v:
        raise AssertionError("edge factor constant term has wrong valuation")  # pragma: no cover


# ---------------------------------------------------------------------------
# Conjugate splitting over QQ(i)  (used by the two-squares construction)
# ---------------------------------------------------------------------------


def _ypoly_shift_y(p: YPoly, c):
    """p(y + c) by repeated synthetic division (Horner shift)."""
    coeffs = list(p.coeffs)
    n = len(coeffs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            coeffs[j] = coeffs[j] + coeffs[j + 1] * c
    return YPoly(coeffs)


def _gauss_conj_scalars(coeffs):
    return [
        c.conjugate() if isinstance(c, GaussRat) else c for c in coeffs
    ]


def conjugate_split(w: YPoly, trunc: int, _level: int = 0) -> YPoly:
    """Factor w = q * conj(q) over QQ(i)[[x]][y] for real w without real branches.

    Raises NotPsd when a real branch shows up (the input was not psd) and
    FactorizationObstruction when the pairing needs an extension beyond
    QQ(i) or a factor fails to descend from a ramified cover.
    """
    if _level > _MAX_LEVELS:
        raise PrecisionExhausted("conjugate splitting recursion cap reached")
    if w.degree == 0:
        return YPoly.one(trunc)
    if w.coeffs[0].is_zero():
        raise NotPsd("input vanishes on the x-axis: real branch y = 0")
    cert = min(c.trunc for c in w.coeffs)
    poly = newton_polygon(w)
    if len(poly.edges) > 1:
        (rest, edge), cert2 = _split_last_edge(w, cert)
        return conjugate_split(rest, trunc, _level) * conjugate_split(edge, trunc, _level)
    # single edge
    vhat, e, h, lift_prec, _ = _last_edge_transform(w, cert)
    bottom = vhat.mod_x()
    unit, facs = _factor_bottom_gauss(bottom)
    clusters = _hensel_clusters(vhat, facs, lift_prec)
    # classify factors: conjugate pairs and real ones
    paired, forced = _assign_clusters(clusters, lift_prec, trunc, _level, e, h)
    # try pairing assignments until one descends
    import itertools

    kdeg = w.degree
    for choice in itertools.product((0, 1), repeat=len(paired)):
        q = YPoly.one(lift_prec)
        for pick, (qa, qb) in zip(choice, paired):
            q = q * (qa if pick == 0 else qb)
        for piece in forced:
            q = q * piece
        try:
            return _descend_factor(q, e, h, trunc)
        except FactorizationObstruction:
            if e == 1:
                raise
            continue
    raise FactorizationObstruction(
        "no conjugate pairing descends from the ramified cover"
    )


def _factor_bottom_gauss(bottom):
    from ._sympybridge import factor_upoly_gauss

    return factor_upoly_gauss(bottom)


def _hensel_clusters(vhat: YPoly, facs, lift_prec):
    """Split vhat into one monic factor per irreducible cluster F^m."""
    from .poly import umul

    clusters = []
    remaining = vhat
    pending = list(facs)
    while len(pending) > 1:
        f, m = pending.pop()
        seed = [GaussRat(1)]
        for _ in range(m):
            seed = umul(seed, f)
        rest_seed = [GaussRat(1)]
        for g, mm in pending:
            for _ in range(mm):
                rest_seed = umul(rest_seed, g)
        cur_prec = min(c.trunc for c in remaining.coeffs)
        rest, piece = _hensel_pair(remaining, rest_seed, seed, min(lift_prec, cur_prec))
        clusters.append(((f, m), piece))
        remaining = rest
    if pending:
        f, m = pending[0]
        clusters.append(((f, m), remaining))
    return clusters


def _assign_clusters(clusters, lift_prec, trunc, level, e, h):
    """Return (paired, forced): conjugate-pair choices and forced factors."""
    paired = []
    forced = []
    used = [False] * len(clusters)
    for idx, ((f, m), piece) in enumerate(clusters):
        if used[idx]:
            continue
        if all(not isinstance(c, GaussRat) or c.is_real() for c in f):
            freal = [c.re if isinstance(c, GaussRat) else c for c in f]
            if udeg(freal) == 1:
                c0 = -freal[0] / freal[1]
                shifted = _ypoly_shift_y(piece, USeries.const(c0, piece.trunc))
                sub = conjugate_split(
                    _to_real_ypoly(shifted), trunc * e, level + 1
                )
                forced.append(_ypoly_shift_y(sub, USeries.const(-c0, sub.trunc)))
                used[idx] = True
                continue
            if count_real_roots(freal) > 0:
                raise NotPsd(
                    "real edge root: the input has a real half-branch"
                )
            raise FactorizationObstruction(
                "conjugate pairing needs an extension of QQ(i): "
                f"irreducible real edge factor of degree {udeg(freal)}"
            )
        fconj = _gauss_conj_scalars(f)
        mate = None
        for jdx in range(len(clusters)):
            if jdx != idx and not used[jdx]:
                g, mg = clusters[jdx][0]
                if mg == m and utrim(g) == utrim(fconj):
                    mate = jdx
                    break
        if mate is None:
            raise AssertionError("conjugation does not permute the clusters")  # pragma: no cover
        paired.append((clusters[idx][1], clusters[mate][1]))
        used[idx] = used[mate] = True
    return paired, forced


def _to_real_ypoly(p: YPoly) -> YPoly:
    out = []
    for c in p.coeffs:
        if not c.is_real():
            raise AssertionError("expected real coefficients")  # pragma: no cover
        out.append(USeries([v.re if isinstance(v, GaussRat) else v for v in c.coeffs], c.trunc))
    return YPoly(out)


def _descend_factor(q: YPoly, e: int, h: int, trunc: int) -> YPoly:
    """Undo y -> t^h z and t^e = x; raises if the factor is not x-integral."""
    kk = q.degree
    out = []
    for s, c in enumerate(q.coeffs):
        shift = h * (kk - s)
        lifted = USeries([_ZERO] * shift + list(c.coeffs), c.trunc + shift)
        out.append(_compress_useries(lifted, e, max(1, min(trunc, lifted.trunc // e)), "conjugate factor"))
    return YPoly(out)


# ---------------------------------------------------------------------------
# Real half-branches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HalfBranch:
    """A real half-branch at the origin: x = side * t^ram, y = sum c_k t^k.

    ``terms`` are (exponent, coefficient) pairs with nonzero coefficients
    in QQ or a real number field; the expansion is certified mod
    t^trunc_t.  ``exact`` branches are polynomial parametrizations (the
    expansion is the whole branch).  The y-axis branch (x | g) is flagged
    with axis='y' and parametrized (0, side * t).
    """

    side: int
    ram: int
    terms: tuple
    trunc_t: int
    exact: bool
    field: NumberField | None = None
    axis: str | None = None
    _state: tuple | None = None

    def lead(self):
        return self.terms[0] if self.terms else None

    def refined(self, extra: int) -> "HalfBranch":
        """A new branch with at least ``extra`` more certified t-orders."""
        if self.exact or self._state is None:
            return self
        return _emit_regular(*self._state, self.trunc_t + extra)

    def describe(self) -> str:
        side = "x>0" if self.side > 0 else "x<0"
        if self.axis == "y":
            return f"y-axis half-branch, {'y>0' if self.side > 0 else 'y<0'}"
        parts = []
        for k, c in self.terms[:6]:
            cf = scalar_approx(c) if isinstance(c, AlgElt) else c
            approx = "~" if isinstance(c, AlgElt) else ""
            parts.append(f"{approx}{cf}*t^{k}")
        body = " + ".join(parts) if parts else "0"
        return f"{side}: x = {'' if self.side > 0 else '-'}t^{self.ram}, y = {body}" + (
            "" if self.exact else f" + O(t^{self.trunc_t})"
        )


def _poly2_div_tpow(g: Poly2) -> Poly2:
    m = min(i for (i, _j) in g.d)
    if m == 0:
        return g
    return Poly2({(i - m, j): v for (i, j), v in g.d.items()})


def _poly2_stretch_t(g: Poly2, e: int) -> Poly2:
    return Poly2({(i * e, j): v for (i, j), v in g.d.items()})


def _poly2_div_z(g: Poly2) -> Poly2:
    return Poly2({(i, j - 1): v for (i, j), v in g.d.items() if j >= 1})


def _shift_edge_root(g: Poly2, h: int, c) -> Poly2:
    """Substitute z -> t^h (c + z) and strip the t-content."""
    sub = g.subs(Poly2({(1, 0): 1}), Poly2({(h, 0): c, (h, 1): 1}))
    return _poly2_div_tpow(sub)


def _edge_poly(g: Poly2, edge):
    v, k, j0, h0 = edge
    e, h = v.denominator, v.numerator
    out = [_ZERO] * (k // e + 1)
    for (i, j), val in g.d.items():
        if j >= j0 and (j - j0) % e == 0:
            # on the supporting line: i == h0 - (j - j0) * h / e
            if Fraction(i) == Fraction(h0) - Fraction((j - j0) * h, e):
                out[(j - j0) // e] = out[(j - j0) // e] + val
    return utrim(out)


def _roots_in_field(p, field):
    """Real roots of a univariate polynomial over QQ or QQ(alpha).

    Returns a list of (field, root scalar, multiplicity).  New quadratic-
    or-higher extensions are created only over QQ; over an existing field
    a nonlinear factor with real roots means a tower, which is honestly
    refused.
    """
    out = []
    if field is None:
        from ._sympybridge import factor_upoly_qq

        _unit, facs = factor_upoly_qq(p)
        for f, m in facs:
            if udeg(f) == 1:
                out.append((None, -f[0] / f[1], m))
            elif count_real_roots(f) > 0:
                for lo, hi in isolate_real_roots(f):
                    fld = NumberField(f, lo, hi)
                    out.append((fld, fld.gen(), m))
    else:
        from ._sympybridge import factor_upoly_field

        _unit, facs = factor_upoly_field(p, field)
        for f, m in facs:
            if udeg(f) == 1:
                out.append((field, -f[0] / f[1], m))
            else:
                if count_real_roots(f) > 0:
                    raise PrecisionExhausted(
                        "branch coefficient needs a nested field extension; "
                        "unsupported at this precision"
                    )
    return out


def real_half_branches(g: Poly2, depth: int = 8) -> list[HalfBranch]:
    """All real half-branches of g = 0 through the origin, both sides.

    ``depth`` bounds the certified expansion length (about depth x-orders
    per branch).  The y-axis branches are reported separately when x | g.
    """
    if g.is_zero():
        raise PreconditionViolated("zero polynomial has no branch structure")
    out = []
    work = g
    if all(i >= 1 for (i, _j) in g.d):
        out.append(HalfBranch(side=1, ram=1, terms=(), trunc_t=depth, exact=True, axis="y"))
        out.append(HalfBranch(side=-1, ram=1, terms=(), trunc_t=depth, exact=True, axis="y"))
        while all(i >= 1 for (i, _j) in work.d):
            work = Poly2({(i - 1, j): v for (i, j), v in work.d.items()})
    for side in (1, -1):
        g_side = Poly2({(i, j): v * side**i for (i, j), v in work.d.items()})
        _branch_rec(g_side, None, side, 1, (), 0, depth, 0, out, g)
    out.sort(key=_branch_sort_key)
    return out


def _branch_sort_key(b: HalfBranch):
    if b.axis == "y":
        return (0, -b.side, 0.0)
    lead = b.lead()
    if lead is None:
        return (1, -b.side, float("inf"))
    k, c = lead
    approx = scalar_approx(c) if isinstance(c, AlgElt) else Fraction(c)
    return (1, -b.side, float(Fraction(k, b.ram)), float(approx))


def _branch_rec(g, field, side, e_total, prefix, off, depth, level, out, g_orig):
    # off: the y-remainder solved at this level is t^off * z
    if level > _MAX_LEVELS:
        raise PrecisionExhausted("branch recursion cap reached")
    if not g.d:
        raise AssertionError("zero polynomial in branch recursion")  # pragma: no cover
    # z = 0 component: y = prefix exactly is a branch
    if all(j >= 1 for (_i, j) in g.d):
        out.append(
            HalfBranch(
                side=side,
                ram=e_total,
                terms=prefix,
                trunc_t=max(depth * e_total, (prefix[-1][0] + 1) if prefix else 1),
                exact=True,
                field=field,
                axis=None,
            )
        )
        g = _poly2_div_z(g)
        while all(j >= 1 for (_i, j) in g.d):
            g = _poly2_div_z(g)
        if g.deg_y() == 0 or g.deg_y() is None:
            return
    if g.deg_y() == 0:
        return
    _hull, edges = _polygon_of_poly2(g)
    for edge in edges:
        v, _k, _j0, _h0 = edge
        p_edge = _edge_poly(g, edge)
        e, h = v.denominator, v.numerator
        if e > 1:
            # ramified chart: the leading coefficients are roots of P(z^e)
            stretched = [_ZERO] * ((len(p_edge) - 1) * e + 1)
            for k0, c in enumerate(p_edge):
                stretched[k0 * e] = c
            p_edge = stretched
        for fld, root, mult in _roots_in_field(p_edge, field):
            if e > 1:
                g2 = _poly2_stretch_t(g, e)
                prefix2 = tuple((k0 * e, c0) for k0, c0 in prefix)
                et, off2 = e_total * e, off * e
            else:
                g2, prefix2, et, off2 = g, prefix, e_total, off
            shifted = _shift_edge_root(g2, h, root)
            exp_abs = off2 + h
            prefix3 = prefix2 + ((exp_abs, root),)
            if mult == 1:
                out.append(
                    _emit_regular(
                        shifted, fld, side, et, prefix3, g_orig, max(depth * et, exp_abs + 1)
                    )
                )
            else:
                _branch_rec(
                    shifted, fld, side, et, prefix3, exp_abs, depth, level + 1, out, g_orig
                )


def _emit_regular(shifted, field, side, e_total, prefix, g_orig, t_prec):
    """Finish a branch whose edge root is simple: unique tail by Newton."""
    h = prefix[-1][0]
    tail_prec = max(t_prec - h, 2)
    tail = _newton_tail(shifted, tail_prec)
    terms = list(prefix)
    for k in range(1, tail.trunc):
        c = tail.coeffs[k]
        if c:
            terms.append((h + k, c))
    terms.sort(key=lambda kc: kc[0])
    branch = HalfBranch(
        side=side,
        ram=e_total,
        terms=tuple(terms),
        trunc_t=h + tail.trunc,
        exact=False,
        field=field,
        axis=None,
        _state=(shifted, field, side, e_total, prefix, g_orig),
    )
    # detect exact polynomial branches so boundary coincidences terminate
    if _param_is_exact(g_orig, branch):
        branch = HalfBranch(
            side=side,
            ram=e_total,
            terms=branch.terms,
            trunc_t=branch.trunc_t,
            exact=True,
            field=field,
            axis=None,
        )
    return branch


def _newton_tail(shifted: Poly2, prec: int) -> USeries:
    """The unique series root z(t), z(0) = 0, of a regular local equation."""
    rows = {}
    for (i, j), v in shifted.d.items():
        rows.setdefault(j, {})[i] = v
    max_j = max(rows)

    def coeff_series(j, trunc):
        row = rows.get(j, {})
        out = [_ZERO] * trunc
        for i, v in row.items():
            if i < trunc:
                out[i] = v
        return USeries(out, trunc)

    d0 = coeff_series(0, 1)
    d1 = coeff_series(1, 1)
    if d0.coeffs[0]:
        raise AssertionError("regular tail: nonzero constant")  # pragma: no cover
    if not d1.coeffs[0]:
        raise AssertionError("regular tail: vanishing z-derivative")  # pragma: no cover
    z = USeries.zero(1)
    p = 1
    while p < prec:
        p = min(2 * p, prec)
        zc = USeries(z.coeffs, p)
        val = USeries.zero(p)
        for j in range(max_j, -1, -1):
            val = val * zc + coeff_series(j, p)
        dval = USeries.zero(p)
        for j in range(max_j, 0, -1):
            dval = dval * zc + _scale_int(coeff_series(j, p), j)
        z = zc - val * useries_invert(dval)
        z = USeries([(_ZERO if k == 0 else z.coeffs[k]) for k in range(p)], p)
    return z


def _scale_int(u: USeries, k: int) -> USeries:
    return USeries([c * k for c in u.coeffs], u.trunc)


def _param_is_exact(g_orig: Poly2, b: HalfBranch) -> bool:
    """Does the certified prefix already satisfy g exactly?"""
    vals = b.terms
    if any(isinstance(c, AlgElt) for _k, c in vals):
        gen_field = b.field
        conv = lambda c: c if isinstance(c, AlgElt) else gen_field.element([Fraction(c)])
    else:
        conv = lambda c: Fraction(c)
    psi = {}
    for k, c in vals:
        psi[(k, 0)] = conv(c)
    px = Poly2({(b.ram, 0): Fraction(b.side)})
    comp = g_orig.subs(px, Poly2(psi))
    return comp.is_zero()


# ---------------------------------------------------------------------------
# Positions and sign data
# ---------------------------------------------------------------------------


def _first_term_sign(b: HalfBranch):
    lead = b.lead()
    if lead is None:
        return None
    return scalar_sign(lead[1])


def _diff_with_monomial(b: HalfBranch, exp0: int, c0) -> int:
    """Exact sign of c0 t^exp0 - y(t) as t -> 0+, refining as needed.

    Returns 0 only for exact coincidence (y identically c0 t^exp0).
    """
    c0 = Fraction(c0)
    rounds = 0
    cur = b
    while True:
        matched = False
        for k, c in cur.terms:
            if k < exp0:
                return -scalar_sign(c)
            if k == exp0:
                s = scalar_sign(c0 - c)
                if s:
                    return s
                matched = True
                continue
            # k > exp0
            if not matched:
                return 1 if c0 > 0 else -1
            return -scalar_sign(c)
        if not matched and cur.trunc_t > exp0:
            return 1 if c0 > 0 else -1
        if cur.exact:
            if not matched:
                return 1 if c0 > 0 else -1
            return 0
        if rounds >= REFINE_CAP:
            raise PrecisionExhausted(
                "cannot separate branch from the boundary monomial"
            )
        cur = cur.refined(max(exp0 + 1, 2 * max(cur.trunc_t, 1)) - cur.trunc_t + 1)
        rounds += 1


def wedge_position(b: HalfBranch, n: int) -> str:
    """Position relative to the open wedge 0 < y < x^{2n}."""
    if b.axis == "y":
        return "above" if b.side > 0 else "below"
    if not b.terms:
        return "on-boundary-y0"
    s = _first_term_sign(b)
    if s < 0:
        return "below"
    cmp = _diff_with_monomial(b, 2 * n * b.ram, 1)
    if cmp > 0:
        return "inside"
    if cmp < 0:
        return "above"
    return "on-boundary-x2n"


def region_position(b: HalfBranch, region: str, n: int | None = None) -> str:
    """Position relative to {y > 0} or {x^{2n} > y}: inside/outside/boundary."""
    if region == "y>0":
        if b.axis == "y":
            return "inside" if b.side > 0 else "outside"
        if not b.terms:
            return "boundary"
        return "inside" if _first_term_sign(b) > 0 else "outside"
    if region == "x2n>y":
        if b.axis == "y":
            return "inside" if b.side < 0 else "outside"
        if not b.terms:
            return "inside"
        cmp = _diff_with_monomial(b, 2 * n * b.ram, 1)
        if cmp > 0:
            return "inside"
        if cmp < 0:
            return "outside"
        return "boundary"
    raise ValueError(f"unknown region {region!r}")


def eval_on_branch(p: Poly2, b: HalfBranch, min_terms: int = 4):
    """Order and sign of p along the branch: (order, sign) or (None, 0).

    (None, 0) means p vanishes identically along an exact branch; for a
    non-exact branch whose certified expansion cannot decide, refinement
    is attempted up to the cap.
    """
    rounds = 0
    cur = b
    while True:
        if cur.axis == "y":
            vals = [p.coeff(0, j) * cur.side**j for j in range(max((j for _i, j in p.d), default=0) + 1)]
            k = uorder(vals)
            if k is None:
                return (None, 0)
            return (k, scalar_sign(vals[k]))
        comp = _subs_param(p, cur)
        k = comp.order()
        if k is not None and k < cur.trunc_t:
            return (k, scalar_sign(comp.coeffs[k]))
        if cur.exact:
            if k is None:
                return (None, 0)
            return (k, scalar_sign(comp.coeffs[k]))
        if rounds >= REFINE_CAP:
            raise PrecisionExhausted("cannot determine the order along the branch")
        cur = cur.refined(max(cur.trunc_t, 4))
        rounds += 1


def _subs_param(p: Poly2, b: HalfBranch) -> USeries:
    """p(side t^ram, y(t)) as a truncated series over the branch field."""
    prec = b.trunc_t
    y = USeries.zero(prec)
    for k, c in b.terms:
        if k < prec:
            y = y + USeries.monomial(c, k, prec)
    rows = {}
    for (i, j), v in p.d.items():
        rows.setdefault(j, {})[i] = v
    max_j = max(rows) if rows else 0
    total = USeries.zero(prec)
    for j in range(max_j, -1, -1):
        row = rows.get(j, {})
        coeffs = [_ZERO] * prec
        for i, v in row.items():
            if i * b.ram < prec:
                coeffs[i * b.ram] = v * (b.side**i)
        total = total * y + USeries(coeffs, prec)
    return total


# ---------------------------------------------------------------------------
# Square-free split and constant-sign factors
# ---------------------------------------------------------------------------


def squarefree_part(f: Poly2):
    """Exact split f = h^2 g with g square-free; g keeps the content."""
    if f.is_zero():
        raise PreconditionViolated("zero polynomial")
    from ._sympybridge import factor_poly2

    content, facs = factor_poly2(f)
    h = Poly2.const(1)
    g = Poly2.const(content)
    for q, m in facs:
        if m // 2:
            h = h * q ** (m // 2)
        if m % 2:
            g = g * q
    return h, g


def constant_sign_region(p: Poly2, region: str, n: int | None = None, depth: int = 8):
    """Sign of p on the region's orderings, or None if p changes sign.

    region is 'y>0' or 'x2n>y' (the latter needs n).  Requires p not
    divisible by the region's boundary polynomial.
    """
    from ._sympybridge import divides_poly2

    if region == "y>0":
        boundary = Poly2.var_y()
    elif region == "x2n>y":
        if n is None:
            raise PreconditionViolated("region x2n>y needs the parameter n")
        boundary = Poly2({(2 * n, 0): 1, (0, 1): -1})
    else:
        raise ValueError(f"unknown region {region!r}")
    if divides_poly2(boundary, p):
        raise PreconditionViolated(
            "p is divisible by the region's boundary polynomial"
        )
    for b in real_half_branches(p, depth):
        if region_position(b, region, n) == "inside":
            return None
    col = [p.coeff(0, j) for j in range((p.deg_y() or 0) + 1)]
    k = uorder(col)
    if k is None:  # pragma: no cover - x | p implies a y-axis branch inside
        raise AssertionError("sample curve degenerated")
    if region == "y>0":
        return 1 if col[k] > 0 else -1
    sign = col[k] * (-1) ** k
    return 1 if sign > 0 else -1
