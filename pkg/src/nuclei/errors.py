"""Exception hierarchy.

Every error raised by the library derives from :class:`NucleiError`, so the
CLI can map any of them onto the "precondition error" exit status.
"""


class NucleiError(Exception):
    """Base class for all library errors."""


# intlat
class NonSymmetric(NucleiError, ValueError):
    pass


class ZeroVector(NucleiError, ValueError):
    pass


class DimensionMismatch(NucleiError, ValueError):
    pass


# handlebody
class MalformedDiagram(NucleiError, ValueError):
    pass


class BadParameter(NucleiError, ValueError):
    pass


class InconsistentMarker(NucleiError, ValueError):
    pass


class UnknownHandle(NucleiError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# legendrian
class OpenFront(NucleiError, ValueError):
    pass


class MultiComponent(NucleiError, ValueError):
    pass


class InconsistentFront(NucleiError, ValueError):
    pass


class NoLegendrianData(NucleiError, ValueError):
    pass


class MissingLegendrianData(NucleiError, ValueError):
    def __init__(self, handles):
        self.handles = tuple(handles)
        super().__init__("handles without Legendrian data: " + ", ".join(self.handles))


class FramingTooHigh(NucleiError, ValueError):
    def __init__(self, handle, framing, tb):
        self.handle = handle
        self.framing = framing
        self.tb = tb
        self.required_p = framing - tb + 1
        super().__init__(
            f"handle {handle!r}: framing {framing} > tb - 1 = {tb - 1}; "
            f"needs a W+({self.required_p}) modification first"
        )


# surgery
class GcdViolation(NucleiError, ValueError):
    pass


class InvalidMarker(NucleiError, ValueError):
    pass


class DivisorNotOne(NucleiError, ValueError):
    pass


class BadCoefficient(NucleiError, ValueError):
    pass


class UnknownCork(NucleiError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SelfSlide(NucleiError, ValueError):
    pass


# swadj
class NonSquare(NucleiError, ValueError):
    pass


class TorsionClass(NucleiError, ValueError):
    pass


class EmptyBasicSet(NucleiError, ValueError):
    pass


# exotica
class NucleusFailed(NucleiError, ValueError):
    pass


class MissingGenusData(NucleiError, ValueError):
    pass


class LedgerIncomplete(NucleiError, ValueError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"genus ledger has no bound for {label}")


class ObligationFailure(NucleiError, ValueError):
    def __init__(self, ids):
        self.ids = tuple(ids)
        super().__init__("violated obligations: " + ", ".join(self.ids))


class MalformedCertificate(NucleiError, ValueError):
    pass


class HypothesisUnmet(NucleiError, ValueError):
    pass


class NotGoodHandlebody(NucleiError, ValueError):
    pass


class SteinificationFailed(NucleiError, ValueError):
    pass
