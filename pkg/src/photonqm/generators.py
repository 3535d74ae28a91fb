"""Poincare generators in the momentum representation.

H and P act by multiplication. J and N need the covariant derivative
D = grad_k - i lambda alpha(k) with the beam-gauge connection alpha:

    J f = -i k x D f + lambda k_hat f,      N f = i omega D f.

Derivatives on a ``grid3d`` support use collocation in k and cos(theta) and
spectral differentiation in phi. Ring and disc supports only admit the phi
direction, which is enough for Jz (in the beam gauge the helicity term of Jz
cancels against alpha, leaving -i d/dphi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaugeSingularityError, ManifoldError, NonNormalizableError, PhotonError
from .frame import AXIS_EPS, connection_closed_form, connection_numeric, curvature_numeric, spherical_basis
from .momentum import MomentumWaveFunction, norm_squared, scalar_product
from .quadrature import collocation_derivative_matrix, spectral_periodic_derivative

GENERATORS = ("H", "Px", "Py", "Pz", "Jx", "Jy", "Jz", "Nx", "Ny", "Nz")
_AXIS = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class ConnectionSample:
    alpha: np.ndarray


def connection_alpha(sample, numeric: bool = False, step: float = 1e-5) -> ConnectionSample:
    """Connection at a ``WaveVectorSample`` (or Cartesian k).

    ``numeric=True`` evaluates i e*.grad e by finite differences instead of
    the closed form.
    """
    kvec = sample.vector if hasattr(sample, "vector") else np.asarray(sample, dtype=float)
    a = connection_numeric(kvec, step) if numeric else connection_closed_form(kvec)
    return ConnectionSample(np.asarray(a))


def curvature_check(kvec, step: float = 1e-4) -> float:
    """|curl alpha + k/k^3| with the curl taken by finite differences."""
    kvec = np.asarray(kvec, dtype=float)
    k = np.linalg.norm(kvec)
    return float(np.linalg.norm(curvature_numeric(kvec, step) + kvec / k ** 3))


def _check_selector(g: str):
    if g not in GENERATORS:
        raise PhotonError(f"unknown generator {g!r}; expected one of {GENERATORS}")


def _phi_derivative(f: MomentumWaveFunction, amp: np.ndarray) -> np.ndarray:
    if f.shape is None or "phi" not in f.axes or not f.uniform_phi:
        raise ManifoldError("support has no uniform phi axis for angular derivatives")
    a = amp.reshape(f.shape)
    return spectral_periodic_derivative(a, axis=len(f.shape) - 1).ravel()


def _gradient(f: MomentumWaveFunction, amp: np.ndarray) -> np.ndarray:
    """Cartesian k-gradient of a scalar sampled on a grid3d support, (Ns, 3)."""
    if f.manifold != "grid3d" or f.shape is None or not f.uniform_phi:
        raise ManifoldError(
            f"{f.manifold} support lacks the k and theta derivative directions (only Jz is available)"
        )
    a = amp.reshape(f.shape)
    dk = np.tensordot(collocation_derivative_matrix(f.axes["k"]), a, axes=(1, 0))
    dmu = np.moveaxis(np.tensordot(collocation_derivative_matrix(f.axes["mu"]), a, axes=(1, 1)), 0, 1)
    dphi = spectral_periodic_derivative(a, axis=2)
    k, theta, phi = f.k, f.theta, f.phi
    st = np.sin(theta)
    khat, that, phat = spherical_basis(theta, phi)
    d_theta = -st * dmu.ravel()
    return (
        khat * dk.ravel()[:, None]
        + that * (d_theta / k)[:, None]
        + phat * (dphi.ravel() / (k * st))[:, None]
    )


def _alpha(f: MomentumWaveFunction) -> np.ndarray:
    st = np.sin(f.theta)
    if np.any(st < AXIS_EPS):
        bad = np.flatnonzero(st < AXIS_EPS)
        raise GaugeSingularityError(f"gauge singular on k_z axis at samples {bad.tolist()}")
    return connection_closed_form(f.kvec)


def covariant_derivative(f: MomentumWaveFunction, lam: int) -> np.ndarray:
    """D f_lambda, shape (Ns, 3)."""
    amp = f.amp_plus if lam == 1 else f.amp_minus
    return _gradient(f, amp) - 1j * lam * _alpha(f) * amp[:, None]


def _apply_component(f: MomentumWaveFunction, g: str, lam: int) -> np.ndarray:
    amp = f.amp_plus if lam == 1 else f.amp_minus
    if g == "H":
        return f.omega * amp
    kind, ax = g[0], _AXIS[g[1]]
    if kind == "P":
        return f.kvec[:, ax] * amp
    if kind == "J" and ax == 2 and f.manifold != "grid3d":
        return -1j * _phi_derivative(f, amp)
    D = covariant_derivative(f, lam)
    if kind == "J":
        kxD = np.cross(f.kvec, D)
        return -1j * kxD[:, ax] + lam * f.unit[:, ax] * amp
    return 1j * f.omega * D[:, ax]


def apply_generator(f: MomentumWaveFunction, g: str) -> MomentumWaveFunction:
    """Act with one Poincare generator on both helicity components."""
    _check_selector(g)
    return f.with_amplitudes(_apply_component(f, g, 1), _apply_component(f, g, -1))


def expectation_value(f: MomentumWaveFunction, g: str, per_unit_norm: bool = False) -> float:
    """<f|g f>/<f|f>.

    Ring supports are delta-normalized; for them the ratio is still the
    eigenvalue-like quantity per unit norm and needs ``per_unit_norm=True``.
    """
    if not f.normalizable and not per_unit_norm:
        raise NonNormalizableError("non-normalizable state: pass per_unit_norm=True for a ratio")
    n2 = norm_squared(f)
    if n2 <= 0.0:
        raise NonNormalizableError("zero state")
    val = scalar_product(f, apply_generator(f, g)) / n2
    return float(val.real)


def expectation_complex(f: MomentumWaveFunction, g: str) -> complex:
    return scalar_product(f, apply_generator(f, g)) / norm_squared(f)


def eigen_residual(f: MomentumWaveFunction, g: str, value: float) -> float:
    """|g f - value f| / |f| in the scalar-product norm."""
    gf = apply_generator(f, g)
    d = f.with_amplitudes(gf.amp_plus - value * f.amp_plus, gf.amp_minus - value * f.amp_minus)
    n2 = norm_squared(f)
    if n2 <= 0.0:
        raise NonNormalizableError("zero state")
    return float(np.sqrt(norm_squared(d) / n2))


def available_generators(f: MomentumWaveFunction) -> list[str]:
    if f.manifold == "grid3d" and f.shape is not None and f.uniform_phi:
        return list(GENERATORS)
    out = ["H", "Px", "Py", "Pz"]
    if f.shape is not None and f.uniform_phi:
        out.append("Jz")
    return out


def report(f: MomentumWaveFunction, per_unit_norm: bool | None = None) -> dict:
    """Observables fragment: expectation values of every available generator.

    Unavailable components are reported as ``None``.
    """
    if per_unit_norm is None:
        per_unit_norm = not f.normalizable
    avail = set(available_generators(f))
    vals, imag = {}, {}
    for g in GENERATORS:
        if g in avail:
            z = expectation_complex(f, g) if (f.normalizable or per_unit_norm) else None
            if z is None:
                raise NonNormalizableError("non-normalizable state")
            vals[g] = float(z.real)
            imag[g] = float(abs(z.imag))
        else:
            vals[g] = None
    out = {
        "H": vals["H"],
        "P": [vals["Px"], vals["Py"], vals["Pz"]],
        "J": [vals["Jx"], vals["Jy"], vals["Jz"]],
        "N": [vals["Nx"], vals["Ny"], vals["Nz"]],
        "residuals": {"max_imag_part": max(imag.values()) if imag else 0.0},
        "norm": norm_squared(f),
        "per_unit_norm": bool(per_unit_norm),
    }
    return out
