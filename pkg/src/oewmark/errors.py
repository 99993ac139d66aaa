"""Exception hierarchy shared by the watermarking core, codecs and CLI."""


class WatermarkError(ValueError):
    """Base class for every error raised by this package."""


class DimensionMismatch(WatermarkError):
    pass


class RangeViolation(WatermarkError):
    """A reconstructed pixel left [0, 255]; the blueprint does not belong to the image."""


class InvalidBlueprint(WatermarkError):
    pass


class MessageTooLarge(WatermarkError):
    def __init__(self, msg, layer=None):
        super().__init__(msg)
        self.layer = layer


class EmptyStack(WatermarkError):
    pass


class ZeroVariance(WatermarkError):
    pass


# codec errors

class FormatError(WatermarkError):
    """Malformed or unsupported file contents."""


class MalformedHeader(FormatError):
    pass


class UnsupportedMaxval(FormatError):
    pass


class TruncatedPixelData(FormatError):
    pass


class SidecarError(FormatError):
    pass


class BadMagic(SidecarError):
    pass


class UnsupportedVersion(SidecarError):
    pass


class CrcMismatch(SidecarError):
    pass


class Truncated(SidecarError):
    pass


class InconsistentDimensions(SidecarError):
    pass
