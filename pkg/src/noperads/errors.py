"""Exception types shared across the package."""


class NoperadsError(Exception):
    """Base class; every error carries a small replayable witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeBudgetExceeded(NoperadsError):
    pass


class CategoryError(NoperadsError):
    pass


class NonAssociative(CategoryError):
    pass


class BadIdentity(CategoryError):
    pass


class DanglingIndex(CategoryError):
    pass


class NotAFunctor(CategoryError):
    pass


class NotAPoset(CategoryError):
    pass


class NotConnected(NoperadsError):
    pass


class NotAMorphism(NoperadsError):
    pass


class ProfileMismatch(NoperadsError):
    pass


class AxiomFailure(NoperadsError):
    pass


class RepresentativeDependence(NoperadsError):
    pass


class NotStrictMonoidal(NoperadsError):
    pass


class TruncationRequired(NoperadsError):
    pass


class RetractionFailure(NoperadsError):
    pass


class StageMismatch(NoperadsError):
    pass


class NotFoundAtTruncation(NoperadsError):
    pass


class UnknownCheck(NoperadsError):
    pass
