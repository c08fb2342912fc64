"""Small result containers returned by the numerical routines."""

from dataclasses import dataclass, field, asdict
import math


@dataclass(frozen=True)
class Estimate:
    """A number with its uncertainty.

    ``error`` is a standard error for Monte Carlo (``samples > 0``) and an
    absolute error bound for deterministic quadrature.
    """

    value: float
    error: float
    samples: int = 0
    method: str = "quadrature"

    def __post_init__(self):
        if not math.isfinite(self.error) or self.error < 0:
            raise ValueError(f"error must be finite and non-negative, got {self.error}")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ConvergenceVerdict:
    status: str  # "finite" | "divergent" | "inconclusive"
    value: float | None = None
    error: float | None = None
    shells: tuple = ()
    fitted_tail_exponent: float | None = None
    method: str = ""
    notes: tuple = ()
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in ("finite", "divergent", "inconclusive"):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == "finite" and (self.value is None or self.error is None):
            raise ValueError("a finite verdict needs a value and an error bound")

    @property
    def is_finite(self):
        return self.status == "finite"

    def to_dict(self):
        return {
            "status": self.status,
            "value": self.value,
            "error": self.error,
            "shells": [[int(k), float(s)] for k, s in self.shells],
            "fitted_tail_exponent": self.fitted_tail_exponent,
            "method": self.method,
            "notes": list(self.notes),
            "extras": {k: (v.to_dict() if hasattr(v, "to_dict") else v)
                       for k, v in self.extras.items()},
        }
