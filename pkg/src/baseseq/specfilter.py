"""Power-spectrum elimination test over configurable angle grids.

For a valid quad the four spectra f_A + f_B + f_C + f_D add up to the
constant 4n+2 at every angle, and each f is nonnegative.  Any candidate
pair whose summed spectrum exceeds 4n+2 anywhere therefore cannot be
half of a valid quad.  The test is conservative screening only: passing
it proves nothing, final validity is always established by verification.

Spectra are evaluated from the integer autocorrelation vector against a
precomputed cosine table, in double precision with a 1e-9 acceptance
slack (the autocorrelations are small integers; the cosine is the only
inexact term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import MalformedInputError, PreconditionError
from .seqcore import SignSeq

EPS = 1e-9


@dataclass(frozen=True)
class ThetaGrid:
    """Strictly increasing angles in (0, 2*pi], with a display label."""

    points: tuple[float, ...]
    label: str

    def __post_init__(self):
        if not self.points:
            raise MalformedInputError("theta grid must be nonempty")
        prev = 0.0
        for t in self.points:
            if not (prev < t <= 2.0 * math.pi + 1e-12):
                raise MalformedInputError("grid points must increase within (0, 2*pi]")
            prev = t

    @classmethod
    def pi_over(cls, k: int) -> "ThetaGrid":
        """Angles j*pi/k for j = 1..2k (covers (0, 2*pi])."""
        if k < 1:
            raise PreconditionError("k must be >= 1")
        return cls(tuple(j * math.pi / k for j in range(1, 2 * k + 1)), f"pi-over-{k}")

    @classmethod
    def uniform(cls, count: int) -> "ThetaGrid":
        """Angles 2*j*pi/count for j = 1..count."""
        if count < 1:
            raise PreconditionError("count must be >= 1")
        return cls(tuple(2.0 * j * math.pi / count for j in range(1, count + 1)),
                   f"l={count}")

    @classmethod
    def from_spec(cls, spec: str) -> "ThetaGrid":
        """Parse "pi-over-<k>" or "l=<count>"."""
        if spec.startswith("pi-over-"):
            return cls.pi_over(int(spec[len("pi-over-"):]))
        if spec.startswith("l="):
            return cls.uniform(int(spec[2:]))
        raise MalformedInputError(f"unknown grid spec {spec!r}")


@lru_cache(maxsize=32)
def _cos_table(points: tuple[float, ...], length: int) -> np.ndarray:
    """cos(j * theta) for j = 1..length-1 at every grid angle."""
    js = np.arange(1, max(length, 1))
    return np.cos(np.outer(np.asarray(points), js))


def psd_vector(seq: SignSeq, grid: ThetaGrid) -> np.ndarray:
    """Spectrum values of one sequence at every grid angle."""
    acf = seq.autocorr
    if not acf:
        return np.zeros(len(grid.points))
    tail = np.asarray(acf[1:], dtype=float)
    table = _cos_table(grid.points, len(acf))
    return acf[0] + 2.0 * (table[:, :len(tail)] @ tail)


def pair_max(a: SignSeq, b: SignSeq, grid: ThetaGrid) -> float:
    """Largest value of f_a + f_b over the grid."""
    return float(np.max(psd_vector(a, grid) + psd_vector(b, grid)))


def pair_filter(a: SignSeq, b: SignSeq, bound: float, grid: ThetaGrid) -> bool:
    """True (keep) iff f_a + f_b stays within ``bound`` + slack everywhere."""
    return pair_max(a, b, grid) <= bound + EPS
