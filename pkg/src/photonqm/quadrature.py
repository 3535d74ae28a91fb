"""Quadrature rules and derivative helpers for sampled momentum supports."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import fft, optimize


def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]."""
    x, w = leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def periodic_trapezoid(n: int, offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Uniform nodes on [0, 2pi) with equal weights 2pi/n."""
    phi = (offset + 2.0 * np.pi * np.arange(n) / n) % (2.0 * np.pi)
    return phi, np.full(n, 2.0 * np.pi / n)


def nonuniform_periodic_weights(phi: np.ndarray) -> np.ndarray:
    """Trapezoid weights for arbitrary distinct angles on the circle.

    Each node gets half the arc to each neighbour; the weights sum to 2pi.
    """
    phi = np.asarray(phi, dtype=float) % (2.0 * np.pi)
    order = np.argsort(phi)
    s = phi[order]
    gaps = np.diff(np.concatenate([s, [s[0] + 2.0 * np.pi]]))
    w_sorted = 0.5 * (gaps + np.roll(gaps, 1))
    w = np.empty_like(w_sorted)
    w[order] = w_sorted
    return w


def spectral_periodic_derivative(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """d/dphi of samples on a uniform periodic grid over [0, 2pi).

    The Nyquist harmonic (even n) is dropped, which keeps the operator
    anti-Hermitian under the uniform trapezoid weights.
    """
    n = values.shape[axis]
    m = fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        m[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    spec = fft.fft(values, axis=axis) * (1j * m).reshape(shape)
    return fft.ifft(spec, axis=axis)


def collocation_derivative_matrix(nodes: np.ndarray) -> np.ndarray:
    """Differentiation matrix of the polynomial interpolant through ``nodes``.

    Barycentric form (Berrut and Trefethen); exact for polynomials of degree
    below len(nodes).
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    # barycentric weights, scaled to avoid overflow
    c = 1.0 / np.prod(diff, axis=1)
    c = c / np.max(np.abs(c))
    d = (c[None, :] / c[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    d[np.arange(n), np.arange(n)] = -d.sum(axis=1)
    return d


def tail_cutoff(profile, peak_at: float, rel: float = 1e-10, upper: float | None = None) -> float:
    """Smallest x > peak_at where |profile(x)| falls to rel * |profile(peak_at)|.

    ``profile`` must decay monotonically beyond ``peak_at``.
    """
    ref = abs(profile(peak_at))
    if ref == 0.0:
        raise ValueError("profile vanishes at its peak")
    target = rel * ref

    def g(x):
        return np.log(abs(profile(x)) + 1e-300) - np.log(target)

    lo = peak_at
    hi = upper if upper is not None else max(2.0 * peak_at, 1.0)
    while g(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise ValueError("profile does not decay")
    return optimize.brentq(g, lo, hi, xtol=1e-12 * hi)


def profile_peak(profile, lo: float, hi: float, n: int = 4001) -> float:
    """Location of the maximum of |profile| on [lo, hi] (grid search + polish)."""
    x = np.linspace(lo, hi, n)
    vals = np.abs(np.array([profile(xi) for xi in x]))
    i = int(np.argmax(vals))
    if i in (0, n - 1):
        return float(x[i])
    res = optimize.minimize_scalar(lambda t: -abs(profile(t)), bounds=(x[i - 1], x[i + 1]), method="bounded")
    return float(res.x)
