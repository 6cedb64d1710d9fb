"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A system parameter is non-positive, non-finite, or otherwise invalid."""


class UnknownSchemeError(ValueError):
    """The requested scheme does not support the requested operation."""


class ProbabilityRangeError(ValueError):
    """A closed-form probability evaluated outside [0, 1] beyond float noise.

    Raw values inside [-1e-9, 1 + 1e-9] are clamped silently; anything worse
    indicates a broken formula or parameters and is raised instead of hidden.
    """


class QuadratureError(RuntimeError):
    """Adaptive quadrature exhausted its subdivisions before reaching tolerance."""


class InsufficientConditioningError(RuntimeError):
    """A conditional estimate saw too few conditioning events to be meaningful."""
