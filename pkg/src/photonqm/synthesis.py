"""Field synthesis from momentum wave functions and field-level observables.

The two position-space wave functions are

    Psi+(r, t) = (2pi)^{-3/2} sum_q w_q e(k_q)  f+(k_q) exp(i(k.r - wt)),
    Psi-(r, t) = (2pi)^{-3/2} sum_q w_q e*(k_q) f-(k_q) exp(i(k.r - wt)),

with w_q the d^3k weights, and the RS vector is F = Psi+ + conj(Psi-). In
natural units F = (D + iB)/sqrt(2). Vacuum evolution reads
i dPsi+/dt = curl Psi+ and i dPsi-/dt = -curl Psi-.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonNormalizableError, NyquistError, PhotonError, ZeroEnergyError
from .frame import polarization_from_angles, polarization_vector  # noqa: F401  (re-export)
from .grid import Calculus, PositionGrid, require_same_grid
from .momentum import MomentumWaveFunction, norm_squared

NORM = (2.0 * np.pi) ** -1.5
SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class RSField:
    """RS field on a grid, optionally split into helicity wave functions.

    ``psi_plus``/``psi_minus`` are None when only F is known (for instance a
    field built from D and B). ``omega`` is set for monochromatic fields.
    """

    grid: PositionGrid
    F: np.ndarray
    time: float = 0.0
    psi_plus: np.ndarray | None = None
    psi_minus: np.ndarray | None = None
    omega: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        shp = (3,) + self.grid.shape
        for name in ("F", "psi_plus", "psi_minus"):
            a = getattr(self, name)
            if a is None:
                continue
            a = np.asarray(a, dtype=complex)
            if a.shape != shp:
                raise PhotonError(f"{name} has shape {a.shape}, expected {shp}")
            if not np.all(np.isfinite(a)):
                raise PhotonError(f"{name} has non-finite entries")
            object.__setattr__(self, name, a)

    @classmethod
    def from_pair(cls, grid, psi_plus, psi_minus, time=0.0, omega=None, meta=None) -> "RSField":
        psi_plus = np.asarray(psi_plus, dtype=complex)
        psi_minus = np.asarray(psi_minus, dtype=complex)
        return cls(grid, psi_plus + np.conj(psi_minus), time, psi_plus, psi_minus, omega, dict(meta or {}))

    @property
    def has_split(self) -> bool:
        return self.psi_plus is not None and self.psi_minus is not None

    def require_split(self):
        if not self.has_split:
            raise PhotonError("field carries no helicity split; run helicity_project first")

    def scaled(self, c: complex) -> "RSField":
        """Multiply the wave functions by c (F picks up c and conj(c))."""
        if self.has_split:
            return RSField.from_pair(self.grid, c * self.psi_plus, c * self.psi_minus, self.time, self.omega, self.meta)
        return replace(self, F=c * self.F)


@dataclass(frozen=True, eq=False)
class EMFields:
    grid: PositionGrid
    D: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        shp = (3,) + self.grid.shape
        for name in ("D", "B"):
            a = np.asarray(getattr(self, name))
            if np.iscomplexobj(a):
                if np.any(a.imag != 0):
                    raise PhotonError(f"{name} must be real")
                a = a.real
            a = a.astype(float)
            if a.shape != shp:
                raise PhotonError(f"{name} has shape {a.shape}, expected {shp}")
            object.__setattr__(self, name, a)


# --------------------------------------------------------------------------
# synthesis
# --------------------------------------------------------------------------

def check_nyquist(kvec: np.ndarray, grid: PositionGrid) -> None:
    kmax = np.max(np.abs(kvec), axis=0)
    nyq = grid.nyquist()
    bad = kmax >= nyq
    if np.any(bad):
        ax = "xyz"[int(np.argmax(bad))]
        i = "xyz".index(ax)
        raise NyquistError(
            f"undersampled grid: |k_{ax}| up to {kmax[i]:.6g} but pi/d_{ax} = {nyq[i]:.6g}"
        )


def _plane_sum(kvec, coef, grid, out):
    """out[c] += sum_s coef[c, s] exp(i k_s . r) for c = 0..2."""
    x, y, z = grid.axes()
    kz_vals, inv = np.unique(kvec[:, 2], return_inverse=True)
    ns = kvec.shape[0]
    if kz_vals.size * 4 <= ns:
        # few distinct k_z: transverse gemm per group, then outer product in z
        for gi, kz in enumerate(kz_vals):
            sel = np.flatnonzero(inv == gi)
            X = np.exp(1j * np.outer(x, kvec[sel, 0]))
            Y = np.exp(1j * np.outer(y, kvec[sel, 1]))
            Z = np.exp(1j * kz * z)
            for c in range(3):
                cc = coef[c, sel]
                if not np.any(cc):
                    continue
                T = (X * cc) @ Y.T
                out[c] += T[:, :, None] * Z[None, None, :]
        return
    chunk = max(1, min(ns, 4096))
    nx, ny, nz = grid.shape
    for s0 in range(0, ns, chunk):
        ks = kvec[s0:s0 + chunk]
        X = np.exp(1j * np.outer(x, ks[:, 0]))
        Y = np.exp(1j * np.outer(y, ks[:, 1]))
        Z = np.exp(1j * np.outer(z, ks[:, 2]))
        XY = (X[:, None, :] * Y[None, :, :]).reshape(nx * ny, -1)
        for c in range(3):
            cc = coef[c, s0:s0 + chunk]
            if not np.any(cc):
                continue
            out[c] += (XY @ (cc[:, None] * Z.T)).reshape(nx, ny, nz)


def synthesize_wavefunctions(f: MomentumWaveFunction, grid: PositionGrid, t: float = 0.0):
    """(Psi+, Psi-) on ``grid`` at time ``t``."""
    kvec = f.kvec
    check_nyquist(kvec, grid)
    e = polarization_from_angles(f.theta, f.phi)  # (Ns, 3)
    base = NORM * f.synthesis_weight * np.exp(-1j * f.omega * t)
    out = []
    for amp, pol in ((f.amp_plus, e), (f.amp_minus, np.conj(e))):
        psi = np.zeros((3,) + grid.shape, dtype=complex)
        if np.any(amp):
            coef = (base * amp)[None, :] * pol.T
            _plane_sum(kvec, coef, grid, psi)
        out.append(psi)
    return out[0], out[1]


def synthesize_rs(f: MomentumWaveFunction, grid: PositionGrid, t: float = 0.0) -> RSField:
    """Synthesize F = Psi+ + conj(Psi-) and keep the helicity split."""
    pp, pm = synthesize_wavefunctions(f, grid, t)
    om = f.omega
    omega = float(om[0]) if np.ptp(om) <= 1e-14 * om[0] else None
    return RSField.from_pair(grid, pp, pm, t, omega, {"manifold": f.manifold})


# --------------------------------------------------------------------------
# conversions and residuals
# --------------------------------------------------------------------------

def rs_to_em(field: RSField) -> EMFields:
    return EMFields(field.grid, SQRT2 * field.F.real, SQRT2 * field.F.imag)


def em_to_rs(em: EMFields, time: float = 0.0) -> RSField:
    return RSField(em.grid, (em.D + 1j * em.B) / SQRT2, time)


def _calc(grid, method, order):
    if method is None:
        method = "spectral" if grid.boundary == "periodic" else "fd"
    return Calculus(grid, method, order)


def _rel(num, den):
    return float(num / den) if den > 0 else (0.0 if num == 0 else float("inf"))


def maxwell_residual(field: RSField, later: RSField | None = None, method: str | None = None,
                     order: int = 4) -> tuple[float, float]:
    """(curl_residual, div_residual) of the vacuum wave equations.

    Monochromatic fields use i d/dt -> omega. Otherwise pass a second snapshot
    ``later``; the time derivative is the centred difference between the two
    and the spatial terms are taken at their mean.
    """
    calc = _calc(field.grid, method, order)
    sl = field.grid.interior(calc.margin)
    if later is None:
        if field.omega is None:
            raise PhotonError("non-monochromatic field: supply a second snapshot")
        w = field.omega
        if field.has_split:
            pairs = [(w * field.psi_plus, field.psi_plus, 1), (w * field.psi_minus, field.psi_minus, -1)]
        else:
            raise PhotonError("monochromatic residual needs the helicity split")
    else:
        require_same_grid(field.grid, later.grid)
        dt = later.time - field.time
        if dt == 0:
            raise PhotonError("snapshots at equal times")
        if field.has_split and later.has_split:
            pairs = []
            for a, b, lam in ((field.psi_plus, later.psi_plus, 1), (field.psi_minus, later.psi_minus, -1)):
                pairs.append((1j * (b - a) / dt, 0.5 * (a + b), lam))
        else:
            pairs = [(1j * (later.F - field.F) / dt, 0.5 * (field.F + later.F), 1)]
    num_c = den_c = num_d = den_d = 0.0
    for lhs, psi, lam in pairs:
        if not np.any(psi):
            continue
        c = calc.curl(psi)
        r = lhs - lam * c
        num_c += np.sum(np.abs(r[(slice(None),) + sl]) ** 2)
        den_c += np.sum(np.abs(lhs[(slice(None),) + sl]) ** 2)
        dv = calc.div(psi)
        num_d += np.sum(np.abs(dv[sl]) ** 2)
        # |k Psi| measured by |curl Psi|, which equals it for transverse fields
        den_d += np.sum(np.abs(c[(slice(None),) + sl]) ** 2)
    return _rel(np.sqrt(num_c), np.sqrt(den_c)), _rel(np.sqrt(num_d), np.sqrt(den_d))


SPIN_MATRICES = np.zeros((3, 3, 3), dtype=complex)
for _i in range(3):
    for _j in range(3):
        for _k in range(3):
            _eps = ((_i - _j) * (_j - _k) * (_k - _i)) / 2
            SPIN_MATRICES[_i, _j, _k] = -1j * _eps


def apply_spin_gradient(psi: np.ndarray, calc: Calculus) -> np.ndarray:
    """(s . grad) psi with the explicit spin-1 matrices (s_i)_jk = -i eps_ijk."""
    out = np.zeros_like(psi)
    for i in range(3):
        dpsi = np.stack([calc.d(c, i) for c in psi])
        out += np.einsum("jk,k...->j...", SPIN_MATRICES[i], dpsi)
    return out


def spin_curl_equivalence(field: RSField, method: str | None = None, order: int = 4) -> float:
    """|(s.grad)Psi - i curl Psi| / |curl Psi| for the explicit spin matrices.

    With (s_i)_jk = -i eps_ijk one has (s.grad)Psi = +i curl Psi identically,
    so this is zero up to rounding whenever both sides use the same
    derivative.
    """
    calc = _calc(field.grid, method, order)
    psi = field.psi_plus if field.has_split and np.any(field.psi_plus) else (
        field.psi_minus if field.has_split else field.F)
    lhs = apply_spin_gradient(psi, calc)
    rhs = 1j * calc.curl(psi)
    den = np.sqrt(np.sum(np.abs(rhs) ** 2))
    num = np.sqrt(np.sum(np.abs(lhs - rhs) ** 2))
    if den == 0:
        return 0.0 if num == 0 else float("inf")
    return float(num / den)


def field_energy_momentum(field: RSField) -> tuple[float, np.ndarray, float]:
    """(E, P, imag_rel): E = int |F|^2, P = Re(-i int F* x F) on the grid.

    ``imag_rel`` is the size of the discarded imaginary part of the momentum
    integral relative to E.
    """
    dv = field.grid.cell_volume
    F = field.F
    E = float(np.sum(np.abs(F) ** 2) * dv)
    cr = np.cross(np.conj(F), F, axis=0)
    Pc = -1j * np.array([np.sum(cr[i]) for i in range(3)]) * dv
    imag_rel = float(np.max(np.abs(Pc.imag)) / E) if E > 0 else 0.0
    return E, Pc.real.copy(), imag_rel


def helicity_energies(field: RSField) -> tuple[float, float]:
    field.require_split()
    dv = field.grid.cell_volume
    return float(np.sum(np.abs(field.psi_plus) ** 2) * dv), float(np.sum(np.abs(field.psi_minus) ** 2) * dv)


def energy_fraction(field: RSField, volume_mask=None) -> tuple[float, float]:
    """Fractions of the total helicity energy found inside ``volume_mask``."""
    field.require_split()
    ip = np.sum(np.abs(field.psi_plus) ** 2, axis=0)
    im = np.sum(np.abs(field.psi_minus) ** 2, axis=0)
    tot = float(np.sum(ip) + np.sum(im))
    if tot <= 0.0:
        raise ZeroEnergyError("zero total energy")
    if volume_mask is None:
        mask = np.ones(field.grid.shape, dtype=bool)
    else:
        mask = np.broadcast_to(np.asarray(volume_mask, dtype=bool), field.grid.shape)
    return float(np.sum(ip[mask]) / tot), float(np.sum(im[mask]) / tot)


def coherent_average(f: MomentumWaveFunction, N: float, require_normalized: bool = True,
                     tol: float = 1e-8) -> MomentumWaveFunction:
    """Mean-field amplitudes of a coherent state with mean photon number N."""
    if N < 0:
        raise PhotonError("photon number must be non-negative")
    if require_normalized:
        if not f.normalizable:
            raise NonNormalizableError("coherent average needs a normalizable state")
        if abs(norm_squared(f) - 1.0) > tol:
            raise NonNormalizableError("coherent average needs a normalized state; call normalize first")
    return f * np.sqrt(float(N))


def momentum_energy_momentum(f: MomentumWaveFunction, lz: float | None = None) -> tuple[float, np.ndarray]:
    """Field energy and momentum predicted from the momentum representation.

    These are sum_q w_q |a_q|^2 and sum_q w_q n_q |a_q|^2 over both helicities
    (w the d^3k weights). For a single-k_z support the field is a plane wave
    along z and the prediction refers to a slab of thickness ``lz``, giving an
    extra factor lz/2pi.
    """
    a2 = np.abs(f.amp_plus) ** 2 + np.abs(f.amp_minus) ** 2
    E = float(np.sum(f.synthesis_weight * a2))
    P = np.sum((f.weight * a2)[:, None] * f.kvec, axis=0)
    if lz is not None:
        E *= lz / (2.0 * np.pi)
        P = P * lz / (2.0 * np.pi)
    return E, P


def paraxial_residual(field: RSField, Omega: float, method: str | None = None, order: int = 4) -> float:
    """|(i d_z + (d_x^2 + d_y^2)/(4 Omega)) Psi + Omega Psi| / |Omega Psi|.

    Every plane wave on the LG paraboloid satisfies this exactly, so the value
    measures only the derivative error.
    """
    calc = _calc(field.grid, method, order)
    sl = (slice(None),) + field.grid.interior(calc.margin)
    psi = field.psi_plus if field.has_split and np.any(field.psi_plus) else (
        field.psi_minus if field.has_split else field.F)
    out = np.empty_like(psi)
    for c in range(3):
        out[c] = 1j * calc.d(psi[c], 2) + (calc.d2(psi[c], 0) + calc.d2(psi[c], 1)) / (4.0 * Omega) + Omega * psi[c]
    den = np.sqrt(np.sum(np.abs(Omega * psi[sl]) ** 2))
    return float(np.sqrt(np.sum(np.abs(out[sl]) ** 2)) / den)
