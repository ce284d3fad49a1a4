"""Exception hierarchy shared across the package."""


class HypSupportError(Exception):
    """Base class for all errors raised by hypsupport."""


class ValidationError(HypSupportError):
    """Input data failed a structural check."""


# fields / linear algebra
class NonPrime(ValidationError):
    pass


class ExtensionTooLarge(ValidationError):
    pass


class WindowTooSmall(HypSupportError):
    pass


class ComplexError(HypSupportError):
    """A chain complex failed d∘d = 0 or has mismatched shapes."""


# algebras and modules
class BadOrder(ValidationError):
    pass


class BadExponents(ValidationError):
    pass


class BadTruncation(ValidationError):
    pass


class RegimeConflict(ValidationError):
    pass


class RelationViolated(ValidationError):
    def __init__(self, i, j, witness):
        self.i, self.j, self.witness = i, j, witness
        super().__init__(
            f"X_{i}X_{j} != q^a X_{j}X_{i} (first differing entry at {witness})"
        )


class NilpotencyViolated(ValidationError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"X_{i}^l != 0")


# support machinery
class ZeroLinearPart(ValidationError):
    pass


class D2NonZero(ComplexError):
    pass


class EnumerationTooLarge(HypSupportError):
    pass


class ZeroModule(ValidationError):
    pass


class LiftResidue(HypSupportError):
    pass


class WindowOutOfRange(HypSupportError):
    pass


class PreconditionViolated(HypSupportError):
    pass


class WrongRegime(HypSupportError):
    pass


class ParseError(ValidationError):
    pass
