"""Exception types shared across the package."""


class PolyfamError(Exception):
    """Base class for all package-specific errors."""


class BackendMismatch(PolyfamError):
    """Operands live in different groups or different backends."""


class ClosureOverflow(PolyfamError):
    """Point-part closure exceeded the configured size bound."""


class Unsupported(PolyfamError):
    """Operation is a documented limitation for this backend/input."""


class NotASubgroup(PolyfamError):
    """Containment precondition H <= K failed."""


class PreconditionViolated(PolyfamError):
    """An operation's stated precondition does not hold."""


class InconsistentPresentation(PolyfamError):
    """Polycyclic presentation fails its consistency checks."""


class EmptyBound(PolyfamError):
    """Height bound B = 0 leaves nothing to enumerate."""


class NotCellular(PolyfamError):
    """Map data does not define a cellular (chain) map."""


class NotSubcomplex(PolyfamError):
    """Designated cell subset is not closed under boundaries."""


class FamilyMismatch(PolyfamError):
    """Requested model's family does not admit the construction."""


class EmptyCatalog(PolyfamError):
    """A class catalog with no classes where one is required."""


class FamilyViolation(PolyfamError):
    """An orbit-cell stabilizer escapes the recipe's target family."""


class NotNormal(PolyfamError):
    """Subgroup required to be normal is not."""


class InfiniteMorphismSet(PolyfamError):
    """Requested orbit-category morphism set is infinite."""


class WindowIncomplete(PolyfamError):
    """A stabilizer is missing from the orbit window."""


class RuleNotApplicable(PolyfamError):
    """Bound rule preconditions not met for this query."""


class MissingData(PolyfamError):
    """Required declared data (e.g. Hirsch length) absent."""


class ParseError(PolyfamError):
    """Malformed JSON input."""
