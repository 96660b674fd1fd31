"""The nine classical Grassmann distances from a principal-angle vector."""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError, ParseError


class GrassmannMetric(enum.Enum):
    ASIMOV = "asimov"
    BINET_CAUCHY = "binetcauchy"
    CHORDAL = "chordal"
    FUBINI_STUDY = "fubinistudy"
    MARTIN = "martin"
    PROCRUSTES = "procrustes"
    PROJECTION = "projection"
    SPECTRAL = "spectral"
    GEODESIC = "geodesic"

    @classmethod
    def from_name(cls, name: str) -> "GrassmannMetric":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ParseError(f"unknown Grassmann metric {name!r}; expected one of: {valid}")


def grassmann_distance(metric: GrassmannMetric, theta, r=None) -> float:
    """Distance between two subspaces from their principal angles.

    theta must be ascending in [0, pi/2], length min{r, s}. Martin's
    distance returns +inf when the largest angle is a right angle.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.size == 0:
        raise DomainError("empty principal-angle vector")
    if theta.min() < -1e-12 or theta.max() > math.pi / 2 + 1e-12:
        raise DomainError("principal angles must lie in [0, pi/2]")
    theta = np.clip(theta, 0.0, math.pi / 2)
    if r is not None and theta.size != r:
        raise DomainError(f"expected {r} principal angles, got {theta.size}")
    c = np.cos(theta)
    s = np.sin(theta)
    top = float(theta[-1])  # largest angle

    if metric is GrassmannMetric.ASIMOV:
        return top
    if metric is GrassmannMetric.BINET_CAUCHY:
        return math.sqrt(max(0.0, 1.0 - float(np.prod(c) ** 2)))
    if metric is GrassmannMetric.CHORDAL:
        return math.sqrt(float(np.sum(s**2)))
    if metric is GrassmannMetric.FUBINI_STUDY:
        return math.acos(min(1.0, max(-1.0, float(np.prod(c)))))
    if metric is GrassmannMetric.MARTIN:
        if np.any(c <= 1e-12):  # right angle up to roundoff in cos(pi/2)
            return math.inf
        return math.sqrt(max(0.0, -2.0 * float(np.sum(np.log(c)))))
    if metric is GrassmannMetric.PROCRUSTES:
        return 2.0 * math.sqrt(float(np.sum(np.sin(theta / 2.0) ** 2)))
    if metric is GrassmannMetric.PROJECTION:
        return math.sin(top)
    if metric is GrassmannMetric.SPECTRAL:
        return 2.0 * math.sin(top / 2.0)
    if metric is GrassmannMetric.GEODESIC:
        return math.sqrt(float(np.sum(theta**2)))
    raise DomainError(f"unhandled metric {metric!r}")
