"""Thermal reservoir physics.

Planck occupation numbers, spectral densities and the rotating-wave bath
correlation function D^{ab}(omega) for bosonic heat reservoirs. Natural
units hbar = k_B = 1 throughout; frequencies, energies and temperatures
are all dimensionless.

A reservoir enters the dissipative kernels only through its temperature
and its spectral density g(omega), so that is all a BathSpec stores. The
two active correlation channels follow the usual convention

    D^{12}(omega) = g(omega) (1 + n(omega))    for omega > 0   (emission)
    D^{21}(omega) = g(-omega) n(-omega)        for omega < 0   (absorption)

with every other (channel, sign) combination identically zero. Detailed
balance D^{12}(omega) = exp(omega/T) D^{21}(-omega) then holds by
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BathSpec",
    "SpectralDensity",
    "SpectralLookupError",
    "bath_correlation",
    "planck_occupation",
]


class SpectralLookupError(LookupError):
    """Tabulated spectral density has no entry at the requested frequency."""


def planck_occupation(omega: float, T: float) -> float:
    """Thermal boson number n = 1/(exp(omega/T) - 1).

    The T = 0 limit is exactly 0. Once omega/T passes the overflow range
    of expm1 the distribution equals exp(-omega/T) to double precision,
    so that value is returned directly.
    """
    if omega <= 0:
        raise ValueError(f"occupation needs omega > 0, got {omega}")
    if T < 0:
        raise ValueError(f"temperature must be >= 0, got {T}")
    if T == 0.0:
        return 0.0
    x = omega / T
    if x > 700.0:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


class SpectralDensity:
    """Reservoir coupling weight g(omega), defined for omega > 0.

    Either a frequency-independent constant or a finite table with
    exact-frequency lookup. Tables deliberately do not interpolate:
    querying a missing frequency raises SpectralLookupError so that a
    misconfigured model surfaces instead of being silently extrapolated.
    """

    __slots__ = ("_constant", "_table")

    def __init__(self, constant=None, table=None):
        if (constant is None) == (table is None):
            raise ValueError("give exactly one of constant= or table=")
        if constant is not None:
            constant = float(constant)
            if constant < 0:
                raise ValueError(f"spectral density must be >= 0, got {constant}")
        else:
            table = {float(w): float(g) for w, g in dict(table).items()}
            for w, g in table.items():
                if w <= 0:
                    raise ValueError(f"tabulated frequency must be > 0, got {w}")
                if g < 0:
                    raise ValueError(f"spectral density must be >= 0, got {g} at omega={w}")
        self._constant = constant
        self._table = table

    @classmethod
    def constant(cls, value: float) -> "SpectralDensity":
        return cls(constant=value)

    @classmethod
    def from_table(cls, pairs) -> "SpectralDensity":
        return cls(table=dict(pairs))

    def __call__(self, omega: float) -> float:
        if omega <= 0:
            raise ValueError(f"spectral density only defined for omega > 0, got {omega}")
        if self._constant is not None:
            return self._constant
        try:
            return self._table[omega]
        except KeyError:
            raise SpectralLookupError(
                f"no tabulated spectral density at omega={omega!r}") from None

    def __repr__(self):
        if self._constant is not None:
            return f"SpectralDensity.constant({self._constant!r})"
        return f"SpectralDensity.from_table({sorted(self._table.items())!r})"


@dataclass(frozen=True, eq=False)
class BathSpec:
    """One bosonic heat reservoir: temperature plus spectral density.

    spectral_density may be given as a bare number, which is promoted to
    a constant SpectralDensity. Instances are immutable and safe to share
    between concurrent kernel builds.
    """

    temperature: float
    spectral_density: SpectralDensity
    label: str = ""

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not isinstance(self.spectral_density, SpectralDensity):
            object.__setattr__(
                self, "spectral_density",
                SpectralDensity.constant(self.spectral_density))

    def occupation(self, omega: float) -> float:
        """Planck occupation n(omega) at this reservoir's temperature."""
        return planck_occupation(omega, self.temperature)


def bath_correlation(bath: BathSpec, alpha: int, beta: int, omega: float) -> float:
    """Rotating-wave correlation D^{alpha beta}(omega) of one reservoir.

    Nonzero only on the (1,2) channel at omega > 0 and on the (2,1)
    channel at omega < 0; the diagonal channels (1,1) and (2,2) vanish
    identically. omega = 0 on an active channel is rejected: rotating-wave
    channels exist only at finite transition frequency, so a
    zero-frequency query means the caller's model is misconfigured.
    """
    if alpha not in (1, 2) or beta not in (1, 2):
        raise ValueError(f"channel indices must be 1 or 2, got ({alpha}, {beta})")
    if alpha == beta:
        return 0.0
    if omega == 0.0:
        raise ValueError(f"bath correlation channel ({alpha},{beta}) undefined at omega = 0")
    if alpha == 1:
        if omega < 0:
            return 0.0
        return bath.spectral_density(omega) * (1.0 + bath.occupation(omega))
    if omega > 0:
        return 0.0
    return bath.spectral_density(-omega) * bath.occupation(-omega)
