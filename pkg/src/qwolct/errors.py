"""Exception hierarchy. Every error raised by the package derives from QwolctError."""


class QwolctError(Exception):
    pass


class GridMismatch(QwolctError, ValueError):
    pass


class NonGridShift(QwolctError, ValueError):
    pass


class AsymmetricGrid(QwolctError, ValueError):
    pass


class NotUnimodular(QwolctError, ValueError):
    pass


class DegenerateB(QwolctError, ValueError):
    pass


class NegativeD(QwolctError, ValueError):
    pass


class UnalignedGrid(QwolctError, ValueError):
    pass


class OffGridResample(QwolctError, ValueError):
    pass


class ZeroSignal(QwolctError, ValueError):
    pass


class ZeroWindow(QwolctError, ValueError):
    pass


class NonInvertibleWindowPair(QwolctError, ValueError):
    pass


class OffGridTarget(QwolctError, ValueError):
    pass


class NotNormalized(QwolctError, ValueError):
    pass


class MeasureTooLarge(QwolctError, ValueError):
    pass


class RemovableSingularity(QwolctError, ValueError):
    pass


class OffGridHalfWidth(QwolctError, ValueError):
    pass


class MalformedInput(QwolctError, ValueError):
    pass


class DimensionMismatch(QwolctError, ValueError):
    pass


class CorruptTensor(QwolctError, ValueError):
    pass
