#!/usr/bin/env python3

"""Exception hierarchy shared by the library and the command line."""


class HKZetaError(ValueError):
    pass


class FieldError(HKZetaError):
    pass


class DivisorError(HKZetaError):
    pass


class SeriesError(HKZetaError):
    pass


class CurveError(HKZetaError):
    pass


class MissingCurveDataError(CurveError):
    pass


class NotBigError(HKZetaError):
    pass


class NotPrimitiveError(HKZetaError):
    pass


class UnsupportedError(HKZetaError):
    pass


class UnsupportedGenusError(UnsupportedError):
    pass


class InfiniteCountError(HKZetaError):
    pass


class BudgetExceededError(HKZetaError):
    pass
