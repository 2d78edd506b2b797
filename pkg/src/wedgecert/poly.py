"""Exact polynomials: bivariate ``Poly2``, dense univariate helpers, text grammar.

Polynomials are the certified side of the system: branch enumeration and
zero isolation refuse truncated input, so series-producing callers keep
the exact polynomial they started from.  ``Poly2`` is scalar-generic
(Fraction by default; number-field elements work through the same ring
dunders).  Univariate polynomials are plain dense coefficient lists,
lowest degree first.

The text grammar here (integers, rationals ``p/q``, two variable names,
``+ - * ^``, parentheses) is shared with the CLI.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .series import BSeries, USeries
from .scalars import as_rat

_ZERO = Fraction(0)


def _coerce(value):
    if isinstance(value, (int, str)):
        return Fraction(value)
    return value


class Poly2:
    """Sparse exact polynomial in two variables over a field."""

    __slots__ = ("d",)

    def __init__(self, d=None):
        dd = {}
        if d:
            for key, v in d.items():
                v = _coerce(v)
                if v:
                    dd[key] = v
        object.__setattr__(self, "d", dd)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly2 is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def const(cls, value):
        return cls({(0, 0): value})

    @classmethod
    def var_x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def var_y(cls):
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, value, i, j):
        return cls({(i, j): value})

    # -- structure --------------------------------------------------------
    def is_zero(self):
        return not self.d

    def __bool__(self):
        return bool(self.d)

    def total_degree(self):
        return max((i + j for i, j in self.d), default=None)

    def deg_x(self):
        return max((i for i, _ in self.d), default=None)

    def deg_y(self):
        return max((j for _, j in self.d), default=None)

    def order(self):
        """Least total degree of a monomial (None for the zero polynomial)."""
        return min((i + j for i, j in self.d), default=None)

    def coeff(self, i, j):
        return self.d.get((i, j), _ZERO)

    def items(self):
        """Deterministic iteration: sorted by (total degree, x-degree)."""
        return sorted(self.d.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]))

    def is_fraction_poly(self):
        return all(isinstance(v, Fraction) for v in self.d.values())

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = _promote(other)
        d = dict(self.d)
        for key, v in other.d.items():
            w = d.get(key, _ZERO) + v
            if w:
                d[key] = w
            else:
                d.pop(key, None)
        return Poly2(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -v for k, v in self.d.items()})

    def __sub__(self, other):
        return self + (-_promote(other))

    def __rsub__(self, other):
        return _promote(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _promote(other)
        d = {}
        for (i1, j1), v1 in self.d.items():
            for (i2, j2), v2 in other.d.items():
                key = (i1 + i2, j1 + j2)
                w = d.get(key, _ZERO) + v1 * v2
                if w:
                    d[key] = w
                else:
                    d.pop(key, None)
        return Poly2(d)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers")
        result = Poly2.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, value):
        value = _coerce(value)
        if not value:
            return Poly2()
        return Poly2({k: value * v for k, v in self.d.items()})

    def __eq__(self, other):
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.d == other.d

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    # -- maps ---------------------------------------------------------------
    def eval(self, x, y):
        x, y = _coerce(x), _coerce(y)
        total = _ZERO
        for (i, j), v in self.d.items():
            total = total + v * x**i * y**j
        return total

    def subs(self, px: "Poly2", py: "Poly2") -> "Poly2":
        """Exact composition self(px, py)."""
        out = Poly2()
        xp = {0: Poly2.const(1)}
        yp = {0: Poly2.const(1)}

        def power(cache, base, k):
            if k not in cache:
                cache[k] = power(cache, base, k - 1) * base
            return cache[k]

        for (i, j), v in self.items():
            out = out + (power(xp, px, i) * power(yp, py, j)).scale(v)
        return out

    def translate(self, a, b) -> "Poly2":
        """self(x + a, y + b): exact recentering at the point (a, b)."""
        return self.subs(Poly2({(1, 0): 1, (0, 0): a}), Poly2({(0, 1): 1, (0, 0): b}))

    def derivative(self, var: str) -> "Poly2":
        d = {}
        for (i, j), v in self.d.items():
            if var == "x" and i:
                d[(i - 1, j)] = v * i
            elif var == "y" and j:
                d[(i, j - 1)] = v * j
        return Poly2(d)

    def gradient(self, x, y):
        return (self.derivative("x").eval(x, y), self.derivative("y").eval(x, y))

    def swap_xy(self):
        return Poly2({(j, i): v for (i, j), v in self.d.items()})

    # -- conversions ----------------------------------------------------------
    def to_bseries(self, trunc: int) -> BSeries:
        return BSeries.from_dict(
            {k: v for k, v in self.d.items() if k[0] + k[1] < trunc}, trunc
        )

    def coeffs_in_y(self):
        """List of univariate dense x-polys: self = sum coeffs[j](x) y^j."""
        dy = self.deg_y()
        if dy is None:
            return []
        dx = self.deg_x() or 0
        rows = [[_ZERO] * (dx + 1) for _ in range(dy + 1)]
        for (i, j), v in self.d.items():
            rows[j][i] = v
        return [utrim(r) for r in rows]

    def coeffs_in_x(self):
        return self.swap_xy().coeffs_in_y()

    @classmethod
    def from_coeffs_in_y(cls, rows):
        d = {}
        for j, row in enumerate(rows):
            for i, v in enumerate(row):
                if v:
                    d[(i, j)] = v
        return cls(d)

    def subs_curve(self, side: int, ram: int, terms):
        """Dense t-poly of self(side * t^ram, psi(t)) for psi = sum c t^k."""
        psi = {}
        for k, c in terms:
            psi[(k, 0)] = psi.get((k, 0), _ZERO) + _coerce(c)
        px = Poly2({(ram, 0): side})
        comp = self.subs(px, Poly2(psi))
        deg = comp.deg_x()
        out = [_ZERO] * ((deg or 0) + 1)
        for (i, j), v in comp.d.items():
            if j:  # pragma: no cover - composition is univariate by construction
                raise AssertionError("curve substitution left a y term")
            out[i] = v
        return utrim(out)

    def __repr__(self):
        return f"Poly2({poly_to_str(self)})"


def _promote(other):
    if isinstance(other, Poly2):
        return other
    return Poly2.const(other)


def bseries_to_poly(a: BSeries) -> Poly2:
    """Reads the known triangle as an exact polynomial (caller certifies)."""
    return Poly2(dict(a.terms()))


# ---------------------------------------------------------------------------
# Dense univariate helpers (lowest degree first)
# ---------------------------------------------------------------------------


def utrim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def udeg(p):
    return len(p) - 1 if p else None


def uadd(p, q):
    n = max(len(p), len(q))
    out = [_ZERO] * n
    for i, v in enumerate(p):
        out[i] = out[i] + v
    for i, v in enumerate(q):
        out[i] = out[i] + v
    return utrim(out)


def uneg(p):
    return [-v for v in p]


def usub(p, q):
    return uadd(p, uneg(q))


def uscale(p, c):
    if not c:
        return []
    return [c * v for v in p]


def umul(p, q):
    if not p or not q:
        return []
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, v in enumerate(p):
        if v:
            for j, w in enumerate(q):
                if w:
                    out[i + j] = out[i + j] + v * w
    return utrim(out)


def ushift(p, k):
    return [_ZERO] * k + list(p) if p else []

def uorder(p):
    for i, v in enumerate(p):
        if v:
            return i
    return None


def ueval(p, x):
    total = _ZERO
    for v in reversed(p):
        total = total * x + v
    return total


def uderiv(p):
    return utrim([p[i] * i for i in range(1, len(p))])


def udivmod(p, q):
    """Euclidean division over a field; q nonzero."""
    q = utrim(q)
    if not q:
        raise ZeroDivisionError("division by the zero polynomial")
    p = utrim(list(p))
    dq = len(q) - 1
    lead = q[-1]
    quo = [_ZERO] * max(0, len(p) - dq)
    while p and len(p) - 1 >= dq:
        c = p[-1] / lead
        k = len(p) - 1 - dq
        quo[k] = c
        for i in range(dq):
            p[k + i] = p[k + i] - c * q[i]
        p.pop()
        p = utrim(p)
    return utrim(quo), p


def ugcd(p, q):
    """Monic gcd over a field."""
    p, q = utrim(p), utrim(q)
    while q:
        p, q = q, udivmod(p, q)[1]
    if p:
        lead = p[-1]
        p = [v / lead for v in p]
    return p


def uxgcd(p, q):
    """Extended gcd: returns (g, s, t) with s p + t q = g, g monic."""
    r0, r1 = utrim(p), utrim(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        quo, rem = udivmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, usub(s0, umul(quo, s1))
        t0, t1 = t1, usub(t0, umul(quo, t1))
    if r0:
        lead = r0[-1]
        inv = 1 / lead if not isinstance(lead, Fraction) else Fraction(1) / lead
        r0, s0, t0 = uscale(r0, inv), uscale(s0, inv), uscale(t0, inv)
    return r0, s0, t0


def usquarefree(p):
    """Square-free part p / gcd(p, p') over a field."""
    p = utrim(p)
    if udeg(p) in (None, 0):
        return p
    g = ugcd(p, uderiv(p))
    if udeg(g) == 0:
        return p
    return udivmod(p, g)[0]


def uto_useries(p, trunc) -> USeries:
    return USeries(list(p), trunc)


# ---------------------------------------------------------------------------
# Shared text grammar
# ---------------------------------------------------------------------------


def parse_poly(text: str, vars: tuple[str, str] = ("x", "y")) -> Poly2:
    """Parse the shared polynomial grammar into an exact Poly2.

    Grammar: integers, rationals "p/q", the two variable names, ``+ - * ^``
    and parentheses.  Parse-print-parse is the identity.
    """
    tokens = _tokenize(text, vars)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input", len(text))
        tk, tv, tp = tokens[pos]
        if kind is not None and tk != kind:
            raise ParseError(f"expected {kind}, found {tv!r}", tp)
        pos += 1
        return tk, tv, tp

    def parse_expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
        node = parse_term().scale(sign)
        while peek() in ("+", "-"):
            op = take()[0]
            rhs = parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term():
        node = parse_factor()
        while True:
            if peek() == "*":
                take()
                node = node * parse_factor()
            elif peek() in ("num", "var", "("):
                # implicit product like "2x" or "x y"
                node = node * parse_factor()
            else:
                return node

    def parse_factor():
        node = parse_base()
        if peek() == "^":
            take()
            _, v, tp = take("num")
            if not isinstance(v, int) or v < 0:
                raise ParseError("exponent must be a nonnegative integer", tp)
            node = node**v
        return node

    def parse_base():
        kind = peek()
        if kind == "num":
            _, v, _ = take()
            return Poly2.const(v)
        if kind == "var":
            _, v, _ = take()
            return Poly2.var_x() if v == vars[0] else Poly2.var_y()
        if kind == "(":
            take()
            node = parse_expr()
            if peek() != ")":
                raise ParseError("expected ')'", tokens[pos][2] if pos < len(tokens) else len(text))
            take()
            return node
        if kind == "-":
            take()
            return -parse_base()
        raise ParseError(
            "expected a number, variable or '('",
            tokens[pos][2] if pos < len(tokens) else len(text),
        )

    node = parse_expr()
    if pos != len(tokens):
        raise ParseError(f"trailing input {tokens[pos][1]!r}", tokens[pos][2])
    return node


def _tokenize(text, vars):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            # rational literal p/q
            k = j
            while k < n and text[k].isspace():
                k += 1
            if k < n and text[k] == "/":
                k += 1
                while k < n and text[k].isspace():
                    k += 1
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                if m == k:
                    raise ParseError("expected denominator digits", k)
                tokens.append(("num", Fraction(num, int(text[k:m])), i))
                i = m
                continue
            tokens.append(("num", num, i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            name = text[i:j]
            if name not in vars:
                raise ParseError(f"unknown variable {name!r}", i)
            tokens.append(("var", name, i))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    return tokens


def poly_to_str(p: Poly2, vars: tuple[str, str] = ("x", "y")) -> str:
    """Canonical rendering; deterministic and re-parseable."""
    if p.is_zero():
        return "0"
    parts = []
    items = sorted(p.d.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))
    for (i, j), v in items:
        mono = []
        if i:
            mono.append(vars[0] if i == 1 else f"{vars[0]}^{i}")
        if j:
            mono.append(vars[1] if j == 1 else f"{vars[1]}^{j}")
        av = abs(v)
        if not mono:
            body = _frac_str(av)
        elif av == 1:
            body = "*".join(mono)
        else:
            body = "*".join([_frac_str(av)] + mono)
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if v > 0 else f"- {body}")
    return " ".join(parts)


def _frac_str(q) -> str:
    q = as_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
