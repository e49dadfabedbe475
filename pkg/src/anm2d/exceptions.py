"""Exception types shared across the toolkit."""


class Anm2dError(Exception):
    """Base class for all toolkit errors."""


class ScenarioError(Anm2dError):
    """Scenario file missing, malformed, or inconsistent."""


class DegenerateApertureError(Anm2dError):
    """Array too small for the separation test: floor((n-1)/4) = 0."""


class OrderError(Anm2dError):
    """Requested decomposition order exceeds the numerically detectable rank."""

    def __init__(self, requested: int, detected: int):
        super().__init__(
            f"requested order {requested} exceeds detected rank {detected}"
        )
        self.requested = requested
        self.detected = detected


class RankDeficiencyError(Anm2dError):
    """Steering matrix is rank deficient (coincident frequency estimates)."""


class CapacityError(Anm2dError):
    """Source count exceeds what the array can support."""


class CertificateUnavailableError(Anm2dError):
    """Dual certificate requested from an unconverged or certificate-free solve."""
