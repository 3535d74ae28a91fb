"""Circular polarization frame e(k) and its connection.

The frame is e(k) = -(theta_hat + i phi_hat)/sqrt(2). It is transverse,
unit-normalised and satisfies k x e = -i|k| e, so it carries positive
helicity; its conjugate carries negative helicity.
"""

from __future__ import annotations

import numpy as np

from .errors import GaugeSingularityError

AXIS_EPS = 1e-8
SQRT_HALF = np.sqrt(0.5)


def angles(kvec):
    """(|k|, theta, phi) of Cartesian vectors, phi in [0, 2pi)."""
    kvec = np.asarray(kvec, dtype=float)
    k = np.linalg.norm(kvec, axis=-1)
    kperp = np.hypot(kvec[..., 0], kvec[..., 1])
    theta = np.arctan2(kperp, kvec[..., 2])
    phi = np.arctan2(kvec[..., 1], kvec[..., 0]) % (2.0 * np.pi)
    return k, theta, phi


def polarization_from_angles(theta, phi) -> np.ndarray:
    """e(theta, phi) as an array of shape (..., 3).

    On the polar axis the expression is used as is; the caller's phi (0 by
    convention) fixes the gauge there.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    return SQRT_HALF * np.stack([-ct * cp + 1j * sp, -ct * sp - 1j * cp, st + 0j * ct], axis=-1)


def polarization_vector(kvec) -> np.ndarray:
    """e(k) for Cartesian wave vectors, shape (..., 3)."""
    _, theta, phi = angles(kvec)
    return polarization_from_angles(theta, phi)


def spherical_basis(theta, phi):
    """Unit vectors (k_hat, theta_hat, phi_hat), each of shape (..., 3)."""
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    khat = np.stack([st * cp, st * sp, ct], axis=-1)
    that = np.stack([ct * cp, ct * sp, -st], axis=-1)
    phat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
    return khat, that, phat


def connection_closed_form(kvec) -> np.ndarray:
    """Beam-gauge connection alpha = (cot(theta)/k) phi_hat."""
    k, theta, phi = angles(kvec)
    st = np.sin(theta)
    if np.any(st < AXIS_EPS):
        raise GaugeSingularityError("gauge singular on k_z axis")
    c = (np.cos(theta) / st) / k
    return np.stack([-c * np.sin(phi), c * np.cos(phi), np.zeros_like(c)], axis=-1)


def _central4(fn, x, dx, h):
    # fourth-order central difference along dx (|dx| = h)
    return (8.0 * (fn(x + dx) - fn(x - dx)) - (fn(x + 2 * dx) - fn(x - 2 * dx))) / (12.0 * h)


def connection_numeric(kvec, step: float = 1e-5) -> np.ndarray:
    """alpha_j = i e* . d_j e by fourth-order central differences in Cartesian k."""
    kvec = np.asarray(kvec, dtype=float)
    k, theta, _ = angles(kvec)
    if np.any(np.sin(theta) < AXIS_EPS):
        raise GaugeSingularityError("gauge singular on k_z axis")
    e0 = polarization_vector(kvec)
    out = np.empty(kvec.shape, dtype=float)
    for j in range(3):
        dk = np.zeros(3)
        dk[j] = step
        de = _central4(polarization_vector, kvec, dk, step)
        a = 1j * np.sum(np.conj(e0) * de, axis=-1)
        out[..., j] = a.real
    return out


def curvature_numeric(kvec, step: float = 1e-4) -> np.ndarray:
    """Curl of the closed-form connection by fourth-order central differences."""
    kvec = np.asarray(kvec, dtype=float)

    def d(j):
        dk = np.zeros(3)
        dk[j] = step
        return _central4(connection_closed_form, kvec, dk, step)

    dx, dy, dz = d(0), d(1), d(2)
    # (curl a)_i = eps_ijk d_j a_k
    return np.stack(
        [dy[..., 2] - dz[..., 1], dz[..., 0] - dx[..., 2], dx[..., 1] - dy[..., 0]], axis=-1
    )
