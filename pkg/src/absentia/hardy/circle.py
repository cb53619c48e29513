"""Lowest eigenvalue of (−i d/dθ + α(θ))² on the unit circle."""

from dataclasses import dataclass
import logging

import numpy as np
import scipy.linalg as la

from absentia.fields.angular import AngularFluxDensity

logger = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-10


@dataclass(frozen=True)
class CircleSpectrum:
    value: float
    n_modes: int
    converged: bool


def _lowest(alpha: AngularFluxDensity, n_modes: int) -> float:
    """Galerkin value on span{e^{imθ} : |m| <= n_modes}.

    (D + α) maps the truncated space into modes |m| <= n_modes + K exactly,
    so ‖(D + α)v‖² = vᴴ MᴴM v with the rectangular matrix M.
    """
    coeffs = alpha.fourier_coefficients()
    bandwidth = max(abs(k) for k in coeffs)
    cols = np.arange(-n_modes, n_modes + 1)
    offset = n_modes + bandwidth
    m = np.zeros((2 * offset + 1, cols.size), dtype=complex)
    for j, mode in enumerate(cols):
        m[mode + offset, j] += mode
        for k, c in coeffs.items():
            m[mode + k + offset, j] += c
    gram = m.conj().T @ m
    return float(la.eigvalsh((gram + gram.conj().T) / 2.0, subset_by_index=[0, 0])[0])


def circle_spectrum(alpha: AngularFluxDensity, n_modes: int = 64) -> CircleSpectrum:
    """Lowest circle eigenvalue, refined once when the truncation is unconverged."""
    if n_modes < 1:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    coarse = _lowest(alpha, n_modes)
    fine = _lowest(alpha, 2 * n_modes)
    if abs(coarse - fine) <= CONVERGENCE_TOL * (1.0 + abs(fine)):
        return CircleSpectrum(fine, 2 * n_modes, True)

    finest = _lowest(alpha, 4 * n_modes)
    converged = abs(fine - finest) <= CONVERGENCE_TOL * (1.0 + abs(finest))
    if not converged:
        logger.warning(
            f"Circle eigenvalue unconverged at {4 * n_modes} modes: {fine:.12g} -> {finest:.12g}"
        )
    return CircleSpectrum(finest, 4 * n_modes, converged)


def circle_eigenvalue(alpha: AngularFluxDensity, n_modes: int = 64) -> float:
    """λ₁ = min over m ∈ ℤ of (m + ᾱ)² for constant α, computed spectrally otherwise."""
    return circle_spectrum(alpha, n_modes).value
