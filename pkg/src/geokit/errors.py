"""Exception hierarchy shared by every geokit module."""


class GeometryError(ValueError):
    pass


class ShapeError(GeometryError):
    """A point does not match the shape of its space."""


class DomainError(GeometryError):
    """A coordinate lies outside the underlying set (e.g. x2 <= 0 on the half-plane)."""


class RangeError(GeometryError):
    """A scalar parameter is outside its admissible interval."""


class DegenerateError(GeometryError):
    pass


class CapabilityError(GeometryError):
    """The space lacks the structure an operation needs (e.g. no pairing)."""


class SamplerError(RuntimeError):
    pass


class NonconvergenceError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(ValueError):
    pass
