"""Exception hierarchy.

Every failure mode that a caller can react to gets its own class; all of
them derive from :class:`WedgecertError` so blanket handling stays easy.
Exceptions that carry witness data (branches, defects) store it on the
instance rather than only in the message.
"""


class WedgecertError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WedgecertError):
    """Malformed polynomial / series / branch text; ``pos`` is the offset."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos


class NotAUnit(WedgecertError):
    """Inversion requested for a series with zero constant term."""


class InsufficientPrecision(WedgecertError):
    """The requested output cannot be certified from the given truncation."""


class NotDistinguished(WedgecertError):
    """Divisor is not a distinguished (Weierstrass) polynomial."""


class NotPositiveUnit(WedgecertError):
    """Square root of a unit whose constant term is not a positive square."""


class NotASquare(WedgecertError):
    """Series is a square over the reals but not over the rationals.

    Over the ground field QQ a square root exists only when the lowest
    coefficient is a perfect rational square; sum-of-squares helpers avoid
    this restriction.
    """


class OddOrder(WedgecertError):
    """Univariate square root requested at odd valuation."""


class NegativeLead(WedgecertError):
    """Univariate square root requested with negative lowest coefficient."""


class ZeroInput(WedgecertError):
    """Operation undefined for the zero series."""


class PrecisionExhausted(WedgecertError):
    """A sign decision could not be forced within the refinement cap."""


class PreconditionViolated(WedgecertError):
    """Caller passed data outside the documented input regime."""


class NotPsd(WedgecertError):
    """Input is not positive semidefinite; ``witness`` is a half-branch."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FactorizationObstruction(WedgecertError):
    """Conjugate pairing would require an extension beyond QQ(i)."""


class NotNonnegOnWedge(WedgecertError):
    """Input is negative somewhere on the wedge; ``witness`` shows where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularZero(WedgecertError):
    """A vanishing generator has zero gradient at the point."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InfinitelyManyZeros(WedgecertError):
    """The target polynomial vanishes along a curve meeting the set."""


class NonPositiveUnits(WedgecertError):
    """Local-parameter units s, t are not both positive."""


class OddContactOrder(WedgecertError):
    """Case-3 contact order is odd; configuration is out of scope."""


class NotInvariant(WedgecertError):
    """Polynomial is not invariant under the group action."""


class UnsupportedConfiguration(WedgecertError):
    """Geometry outside the supported classification cases."""
