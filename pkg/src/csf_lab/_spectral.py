"""Fourier pseudospectral helpers on the uniform periodic grid of [0, 2*pi)."""

import numpy as np


def wavenumbers(n):
    return np.arange(n // 2 + 1, dtype=float)


def derivative(values, order=1):
    """Spectral derivative of periodic samples.

    The Nyquist coefficient is dropped for odd orders so that real data
    stays real; it is kept for even orders.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    coeffs = np.fft.rfft(values, axis=-1)
    k = wavenumbers(n)
    mult = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        mult[-1] = 0.0
    return np.fft.irfft(coeffs * mult, n=n, axis=-1)


def antiderivative(values):
    """Periodic antiderivative of mean-free samples, pinned to 0 at theta = 0.

    Any mean left in ``values`` is discarded, so the result is always
    periodic; callers check the mean themselves when it matters.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    coeffs = np.fft.rfft(values, axis=-1)
    k = wavenumbers(n)
    out = np.zeros_like(coeffs)
    out[..., 1:] = coeffs[..., 1:] / (1j * k[1:])
    if n % 2 == 0:
        out[..., -1] = 0.0
    result = np.fft.irfft(out, n=n, axis=-1)
    return result - result[..., :1]


def periodic_integral(values):
    """Trapezoid rule on the uniform periodic grid (spectrally accurate)."""
    values = np.asarray(values, dtype=float)
    return 2.0 * np.pi * values.mean(axis=-1)
