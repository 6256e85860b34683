"""Exception hierarchy shared across the package.

CLI exit codes: InputError -> 2, PrecisionError / CertificateError -> 3,
DeskScaleError -> 4.
"""


class TribasisError(Exception):
    pass


class InputError(TribasisError):
    """Malformed or out-of-contract input."""


class UnfactoredCofactor(InputError):
    """Integer factorization hit the trial-division bound without hints."""


class PrecisionError(TribasisError):
    """Truncated run failed its a-posteriori precision certificate."""


class CertificateError(TribasisError):
    """A computed basis failed its certificate."""


class DeskScaleError(TribasisError):
    """Instance exceeds the configured desk-scale budget."""
