"""Angular flux densities of Aharonov–Bohm fields."""

from dataclasses import dataclass
from typing import Optional, Sequence
import math

import numpy as np

from absentia.fields.profiles import FieldModelError


def flux_distance(flux: float) -> float:
    """Distance from a flux value to the nearest integer, in [0, 1/2]."""
    if not math.isfinite(flux):
        raise FieldModelError(f"flux must be finite, got {flux}", "flux_distance")
    t = flux - math.floor(flux)
    return min(max(min(t, 1.0 - t), 0.0), 0.5)


@dataclass(frozen=True)
class AngularFluxDensity:
    """α(θ) = mean + Σ aₖ cos kθ + bₖ sin kθ, the angular profile of A = α(θ)/r θ̂.

    Sampled densities are stored through their trigonometric interpolant so
    every evaluation and integral goes through the series.
    """

    mean: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    samples: Optional[tuple[float, ...]] = None

    def __post_init__(self) -> None:
        values = (self.mean, *self.cos_coeffs, *self.sin_coeffs)
        if not all(math.isfinite(v) for v in values):
            raise FieldModelError("angular flux density must be bounded", "aharonov_bohm")
        if len(self.cos_coeffs) != len(self.sin_coeffs):
            raise FieldModelError(
                "cosine and sine coefficient lists must have equal length", "aharonov_bohm"
            )

    @classmethod
    def constant(cls, mean: float) -> "AngularFluxDensity":
        return cls(mean=float(mean))

    @classmethod
    def from_samples(cls, values: Sequence[float]) -> "AngularFluxDensity":
        """Trigonometric interpolant of equispaced samples α(2πj/n)."""
        samples = np.asarray(values, dtype=float)
        n = samples.size
        if n < 1 or not np.all(np.isfinite(samples)):
            raise FieldModelError("samples must be a non-empty finite sequence", "aharonov_bohm")
        c = np.fft.rfft(samples) / n
        cos_coeffs = 2.0 * c.real[1:]
        sin_coeffs = -2.0 * c.imag[1:]
        if n % 2 == 0 and n > 1:
            cos_coeffs[-1] /= 2.0
            sin_coeffs[-1] = 0.0
        return cls(
            mean=float(c[0].real),
            cos_coeffs=tuple(float(v) for v in cos_coeffs),
            sin_coeffs=tuple(float(v) for v in sin_coeffs),
            samples=tuple(float(v) for v in samples),
        )

    @property
    def bandwidth(self) -> int:
        return len(self.cos_coeffs)

    @property
    def is_constant(self) -> bool:
        return not any(self.cos_coeffs) and not any(self.sin_coeffs)

    @property
    def flux_distance(self) -> float:
        """β = dist(ᾱ, ℤ)."""
        return flux_distance(self.mean)

    def __call__(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.mean)
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            out += a * np.cos(k * theta) + b * np.sin(k * theta)
        return out

    def integral(self, theta_a: np.ndarray, theta_b: np.ndarray) -> np.ndarray:
        """∫ α dθ from theta_a to theta_b, exact for the series."""
        theta_a = np.asarray(theta_a, dtype=float)
        theta_b = np.asarray(theta_b, dtype=float)
        out = self.mean * (theta_b - theta_a)
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            out = out + a * (np.sin(k * theta_b) - np.sin(k * theta_a)) / k
            out = out - b * (np.cos(k * theta_b) - np.cos(k * theta_a)) / k
        return out

    def fourier_coefficients(self) -> dict[int, complex]:
        """Complex coefficients cₖ with α(θ) = Σ cₖ e^{ikθ}."""
        coeffs: dict[int, complex] = {0: complex(self.mean)}
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            c = complex(a, -b) / 2.0
            if c != 0:
                coeffs[k] = c
                coeffs[-k] = c.conjugate()
        return coeffs
