"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`HeckeError`,
which is a ``ValueError`` so that callers validating user input can catch the
whole family at once.  The CLI maps these to exit status 2.
"""

from __future__ import annotations


class HeckeError(ValueError):
    pass


# field specs and scalars
class MalformedSpec(HeckeError):
    pass


class UnsupportedCharacteristic(HeckeError):
    pass


class NotPrime(HeckeError):
    pass


class FieldMismatch(HeckeError):
    pass


class FieldLacksRoot(HeckeError):
    pass


# linear algebra
class DimensionMismatch(HeckeError):
    pass


class Singular(HeckeError):
    pass


# Hecke symmetries and parameters
class InvalidParameter(HeckeError):
    pass


class ZeroParameter(InvalidParameter):
    pass


class DeltaRelationViolated(InvalidParameter):
    pass


class WrongRank(HeckeError):
    pass


class DoesNotCommute(HeckeError):
    pass


class UnexpectedDimension(HeckeError):
    pass


class NotInUpsilon3(HeckeError):
    """The tensor is not in the one-dimensional space of degree-3 exterior tensors."""


class ContextInvalid(HeckeError):
    pass


class NoRowMatches(HeckeError):
    pass


class FieldTooLarge(HeckeError):
    pass


class InternalInconsistency(RuntimeError):
    """Two independent computations that must agree did not.

    This is never a user error: it means a bug or a counterexample to a
    proven statement, and is deliberately not a ``HeckeError``.
    """


class EquivalenceViolated(InternalInconsistency):
    pass
