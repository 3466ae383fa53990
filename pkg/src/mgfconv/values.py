from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .quadrature import Status

__all__ = ["Route", "MgfValue"]


class Route(str, Enum):
    DENSITY = "density"
    TAIL = "tail"
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MgfValue:
    """Outcome of evaluating M(t) = E[exp(tX)] by one route."""

    status: Status
    value: float
    error_estimate: float
    route: Route
    diagnostics: str = ""

    @property
    def is_finite(self) -> bool:
        return self.status is Status.FINITE

    @classmethod
    def divergent(cls, route: Route, diagnostics: str = "") -> "MgfValue":
        return cls(Status.DIVERGENT, math.inf, math.inf, route, diagnostics)
