"""Exception types raised by nullknots."""


class NullKnotsError(Exception):
    pass


class DegenerateSpinor(NullKnotsError):
    """Both spinor branch discriminants vanish; alpha and beta are locally dependent."""


class AsymmetricInput(NullKnotsError):
    pass


class PointAtInfinity(NullKnotsError):
    """The north pole of S^3 has no finite image in R^3."""


class StagnationAtSeed(NullKnotsError):
    pass


class NonFinite(NullKnotsError):
    pass


class Stagnation(NullKnotsError):
    pass


class CurvesTooClose(NullKnotsError):
    pass


class NoConvergence(NullKnotsError):
    pass


class NonIntegerWinding(NullKnotsError):
    pass


class InvalidKnotParams(NullKnotsError, ValueError):
    pass
