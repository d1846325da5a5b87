"""Exception and warning types raised across the package."""


class HarmoniumError(Exception):
    """Base class for all package errors."""


class UnboundSystem(HarmoniumError, ValueError):
    """The relative frequency is not real: k + n_total * delta <= 0."""


class DomainError(HarmoniumError, ValueError):
    """An input lies outside the domain on which an inverse relation is defined."""


class DegreeTooLarge(HarmoniumError, ValueError):
    pass


class DivergentIntegral(HarmoniumError, ValueError):
    """Gaussian weight is not integrable (a <= |c|)."""


class NoInteriorMaximum(HarmoniumError, RuntimeError):
    pass


class ConvergenceWarning(UserWarning):
    pass
