"""Two-helicity propagation through a static inhomogeneous medium.

With v = 1/sqrt(eps mu) and h = sqrt(mu/eps) the helicity pair obeys

    i dPsi+/dt =  v [curl Psi+ + grad ln sqrt(v) x Psi+ + grad ln sqrt(h) x Psi-]
    i dPsi-/dt = -v [curl Psi- + grad ln sqrt(v) x Psi- + grad ln sqrt(h) x Psi+]

where Psi+ = (D/sqrt(eps) + iB/sqrt(mu))/sqrt2 and Psi- is the same with -i.
The default discretisation writes v(curl X + grad ln sqrt(v) x X) as
(v curl X + curl(v X))/2. That operator is Hermitian on the grid and the
coupling v b x is anti-Hermitian, so int |Psi+|^2 + |Psi-|^2 is conserved by
the semi-discrete system; only the time stepper drifts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CFLViolation, NonFiniteStateError, PhotonError, ZeroEnergyError
from .frame import polarization_vector
from .grid import Calculus, PositionGrid

# largest stable dt * max(v) / min(spacing) for classical RK4 (imaginary-axis
# limit 2 sqrt 2) against the largest curl eigenvalue of each scheme
_RK4_IMAG = 2.0 * math.sqrt(2.0)
_FD4_PEAK = max((8 * math.sin(x) - math.sin(2 * x)) / 6 for x in np.linspace(0, math.pi, 20001))
CFL_LIMIT = {
    "rk4_spectral": _RK4_IMAG / (math.sqrt(3.0) * math.pi),
    "rk4_fd4": _RK4_IMAG / (math.sqrt(3.0) * _FD4_PEAK),
}


class MediumAliasingWarning(UserWarning):
    """Medium varies too fast between neighbouring cells."""


@dataclass(frozen=True, eq=False)
class MediumMap:
    grid: PositionGrid
    eps: np.ndarray
    mu: np.ndarray
    v: np.ndarray
    h: np.ndarray
    grad_ln_sqrt_v: np.ndarray
    grad_ln_sqrt_h: np.ndarray
    method: str = "spectral"

    @property
    def vacuum_like(self) -> bool:
        return not np.any(self.grad_ln_sqrt_v) and not np.any(self.grad_ln_sqrt_h)


def _grad_log_sqrt(a: np.ndarray, calc: Calculus) -> np.ndarray:
    # variation at rounding level (e.g. sqrt(3 eps / eps)) counts as constant
    if np.ptp(a) <= 8 * np.finfo(float).eps * np.max(np.abs(a)):
        return np.zeros((3,) + a.shape)
    la = 0.5 * np.log(a)
    return np.stack([calc.d(la, i).real for i in range(3)])


def build_medium(eps_map, mu_map, grid: PositionGrid, method: str = "spectral", order: int = 4) -> MediumMap:
    """Velocity, impedance and their log-gradients from eps and mu."""
    shp = grid.shape
    eps = np.broadcast_to(np.asarray(eps_map, dtype=float), shp).copy()
    mu = np.broadcast_to(np.asarray(mu_map, dtype=float), shp).copy()
    if not (np.all(np.isfinite(eps)) and np.all(np.isfinite(mu))):
        raise PhotonError("non-finite eps or mu")
    if np.any(eps <= 0) or np.any(mu <= 0):
        raise PhotonError("eps and mu must be positive")
    for name, a in (("eps", eps), ("mu", mu)):
        for ax in range(3):
            if grid.boundary == "periodic":
                lo, hi = a, np.roll(a, -1, axis=ax)
            else:
                lo, hi = np.delete(a, -1, axis=ax), np.delete(a, 0, axis=ax)
            jump = float(np.max(np.abs(hi - lo) / np.minimum(hi, lo)))
            if jump > 0.5:
                warnings.warn(
                    f"{name} jumps by {jump:.3g} (relative) between cells along axis {ax}; "
                    "smooth the profile over at least 4 cells",
                    MediumAliasingWarning,
                    stacklevel=2,
                )
                break
    v = 1.0 / np.sqrt(eps * mu)
    h = np.sqrt(mu / eps)
    calc = Calculus(grid, method, order)
    return MediumMap(grid, eps, mu, v, h, _grad_log_sqrt(v, calc), _grad_log_sqrt(h, calc), method)


def tanh_slab(grid: PositionGrid, axis: int = 2, center: float = 0.0, half_width: float = 1.0,
              inside: float = 2.0, outside: float = 1.0, smoothing: float | None = None) -> np.ndarray:
    """Smooth slab profile: ``inside`` for |x - center| < half_width, ``outside`` far away.

    ``smoothing`` is the tanh length; by default 2 cells, so the edge spans
    about 4 cells.
    """
    x = grid.axis(axis)
    s = 2.0 * grid.spacing[axis] if smoothing is None else float(smoothing)
    L = grid.lengths[axis]
    d = x - center
    if grid.boundary == "periodic":
        d = (d + L / 2) % L - L / 2
    prof = 0.5 * (np.tanh((d + half_width) / s) - np.tanh((d - half_width) / s))
    vals = outside + (inside - outside) * prof
    shape = [1, 1, 1]
    shape[axis] = -1
    return np.broadcast_to(vals.reshape(shape), grid.shape).copy()


# --------------------------------------------------------------------------
# state and stepper
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PropagationState:
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    time: float = 0.0
    step_count: int = 0
    diagnostics: list = field(default_factory=list)

    def energy(self, cell_volume: float = 1.0) -> float:
        return float((np.sum(np.abs(self.psi_plus) ** 2) + np.sum(np.abs(self.psi_minus) ** 2)) * cell_volume)


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    cfl: float = 0.5
    scheme: str = "rk4_spectral"
    boundary: str = "periodic"
    form: str = "symmetric"
    cadence: int = 1

    def __post_init__(self):
        if self.scheme not in CFL_LIMIT:
            raise PhotonError(f"unknown scheme {self.scheme!r}")
        if self.boundary != "periodic":
            raise PhotonError("only periodic boundaries are supported")
        if self.form not in ("symmetric", "literal"):
            raise PhotonError(f"unknown operator form {self.form!r}")
        if not self.dt > 0:
            raise PhotonError("dt must be positive")
        if not 0 < self.cfl <= CFL_LIMIT[self.scheme]:
            raise CFLViolation(
                f"cfl {self.cfl} outside (0, {CFL_LIMIT[self.scheme]:.4f}] for {self.scheme}"
            )
        if self.cadence < 1:
            raise PhotonError("cadence must be >= 1")

    @property
    def method(self) -> tuple[str, int]:
        return ("spectral", 4) if self.scheme == "rk4_spectral" else ("fd", 4)


def check_cfl(config: StepperConfig, medium: MediumMap) -> float:
    """Largest admissible dt; raises CFLViolation if ``config.dt`` exceeds it."""
    dt_max = config.cfl * min(medium.grid.spacing) / float(np.max(medium.v))
    if config.dt > dt_max * (1 + 1e-12):
        raise CFLViolation(f"dt = {config.dt:.6g} exceeds CFL bound {dt_max:.6g} (cfl = {config.cfl})")
    return dt_max


def _cross(a, b):
    return np.stack([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


class _Operator:
    def __init__(self, medium: MediumMap, calc: Calculus, form: str):
        self.m = medium
        self.calc = calc
        self.form = form
        self.v = medium.v
        self.v_const = not np.any(medium.grad_ln_sqrt_v)
        self.a = medium.grad_ln_sqrt_v
        self.b = medium.grad_ln_sqrt_h
        self.has_b = bool(np.any(self.b))

    def diag(self, x):
        """v(curl x + grad ln sqrt(v) x x)."""
        if not np.any(x):
            return np.zeros_like(x)
        if self.v_const:
            return self.v[0, 0, 0] * self.calc.curl(x)
        if self.form == "symmetric":
            return 0.5 * (self.v * self.calc.curl(x) + self.calc.curl(self.v * x))
        return self.v * (self.calc.curl(x) + _cross(self.a, x))

    def couple(self, y):
        if not self.has_b or not np.any(y):
            return np.zeros_like(y)
        return self.v * _cross(self.b, y)

    def __call__(self, pp, pm):
        """Time derivatives (dPsi+/dt, dPsi-/dt)."""
        dp = -1j * (self.diag(pp) + self.couple(pm))
        dm = 1j * (self.diag(pm) + self.couple(pp))
        return dp, dm


def rhs(state: PropagationState, medium: MediumMap, scheme: str = "rk4_spectral",
        form: str = "symmetric") -> tuple[np.ndarray, np.ndarray]:
    """(dPsi+/dt, dPsi-/dt) for the given state."""
    shp = (3,) + medium.grid.shape
    if state.psi_plus.shape != shp or state.psi_minus.shape != shp:
        raise PhotonError("grid mismatch between state and medium")
    method, order = ("spectral", 4) if scheme == "rk4_spectral" else ("fd", 4)
    return _Operator(medium, Calculus(medium.grid, method, order), form)(state.psi_plus, state.psi_minus)


def mixing_measure(state: PropagationState) -> float:
    """int |Psi-|^2 / int (|Psi+|^2 + |Psi-|^2)."""
    ep = float(np.sum(np.abs(state.psi_plus) ** 2))
    em = float(np.sum(np.abs(state.psi_minus) ** 2))
    if ep + em <= 0:
        raise ZeroEnergyError("zero total energy")
    return em / (ep + em)


def _diag_row(pp, pm, t, step, dv):
    ep = float(np.sum(np.abs(pp) ** 2)) * dv
    em = float(np.sum(np.abs(pm) ** 2)) * dv
    tot = ep + em
    return {
        "step": step,
        "time": t,
        "energy": tot,
        "frac_plus": ep / tot if tot > 0 else float("nan"),
        "frac_minus": em / tot if tot > 0 else float("nan"),
        "max_amplitude": float(max(np.max(np.abs(pp)), np.max(np.abs(pm)))),
    }


def evolve(state: PropagationState, medium: MediumMap, config: StepperConfig, t_end: float,
           callback=None) -> PropagationState:
    """Classical RK4 from ``state.time`` to ``t_end``.

    The step is shrunk (never enlarged) so that an integer number of steps
    lands exactly on ``t_end``. Diagnostics are recorded every
    ``config.cadence`` steps and at the end.
    """
    if medium.method != config.method[0]:
        medium = build_medium(medium.eps, medium.mu, medium.grid, config.method[0], config.method[1])
    check_cfl(config, medium)
    span = t_end - state.time
    if span < 0:
        raise PhotonError("t_end precedes the state time")
    nsteps = int(math.ceil(span / config.dt - 1e-12)) if span > 0 else 0
    dt = span / nsteps if nsteps else 0.0
    op = _Operator(medium, Calculus(medium.grid, *config.method), config.form)
    dv = medium.grid.cell_volume
    pp = np.array(state.psi_plus, dtype=complex)
    pm = np.array(state.psi_minus, dtype=complex)
    t0 = state.time
    step0 = state.step_count
    diags = list(state.diagnostics)
    if not diags:
        diags.append(_diag_row(pp, pm, t0, step0, dv))
    # overflow is caught below as a non-finite state
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(1, nsteps + 1):
            k1p, k1m = op(pp, pm)
            k2p, k2m = op(pp + 0.5 * dt * k1p, pm + 0.5 * dt * k1m)
            k3p, k3m = op(pp + 0.5 * dt * k2p, pm + 0.5 * dt * k2m)
            k4p, k4m = op(pp + dt * k3p, pm + dt * k3m)
            pp = pp + (dt / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
            pm = pm + (dt / 6.0) * (k1m + 2 * k2m + 2 * k3m + k4m)
            t = t0 + i * dt
            if not (np.all(np.isfinite(pp)) and np.all(np.isfinite(pm))):
                raise NonFiniteStateError(step0 + i, t)
            if i % config.cadence == 0 or i == nsteps:
                row = _diag_row(pp, pm, t, step0 + i, dv)
                diags.append(row)
                if callback is not None:
                    callback(row, pp, pm)
    return PropagationState(pp, pm, t0 + nsteps * dt if nsteps else state.time, step0 + nsteps, diags)


# --------------------------------------------------------------------------
# initial data and checks
# --------------------------------------------------------------------------

def gaussian_pulse(grid: PositionGrid, k0, width: float, center=(0.0, 0.0, 0.0), helicity: int = 1):
    """Pure-helicity wave packet: e(k0) exp(i k0.r) Gaussian envelope, projected.

    Returns (psi_plus, psi_minus) with the other component zero.
    """
    from .helicity import projector

    X, Y, Z = grid.mesh()
    c = np.asarray(center, dtype=float)
    k0 = np.asarray(k0, dtype=float)
    r2 = (X - c[0]) ** 2 + (Y - c[1]) ** 2 + (Z - c[2]) ** 2
    env = np.exp(-r2 / (2.0 * width ** 2)) * np.exp(1j * (k0[0] * X + k0[1] * Y + k0[2] * Z))
    e = polarization_vector(k0)
    if helicity < 0:
        e = np.conj(e)
    f = e[:, None, None, None] * env[None]
    f = projector(f, grid, 1 if helicity > 0 else -1)
    # Psi- evolves with -curl; its positive-helicity-like partner is P- applied to the field
    zero = np.zeros_like(f)
    return (f, zero) if helicity > 0 else (zero, f)


def state_from_field(rs) -> PropagationState:
    rs.require_split()
    return PropagationState(rs.psi_plus.copy(), rs.psi_minus.copy(), rs.time)


def em_from_state(pp, pm, medium: MediumMap):
    """(D, B) reconstructed from the helicity pair in the medium."""
    se = np.sqrt(medium.eps)
    sm = np.sqrt(medium.mu)
    D = se * (pp + pm) / math.sqrt(2.0)
    B = sm * (pp - pm) / (1j * math.sqrt(2.0))
    return D, B


def macroscopic_maxwell_residual(state: PropagationState, medium: MediumMap, scheme: str = "rk4_spectral",
                                 form: str = "symmetric", dpsi=None) -> tuple[float, float]:
    """Relative residuals of dD/dt = curl(B/mu) and dB/dt = -curl(D/eps).

    Time derivatives come from ``rhs`` (or ``dpsi``), so the check isolates
    the signs and structure of the helicity equations.
    """
    dp, dm = rhs(state, medium, scheme, form) if dpsi is None else dpsi
    D, B = em_from_state(state.psi_plus, state.psi_minus, medium)
    dD, dB = em_from_state(dp, dm, medium)
    method, order = ("spectral", 4) if scheme == "rk4_spectral" else ("fd", 4)
    calc = Calculus(medium.grid, method, order)
    cH = calc.curl(B / medium.mu)
    cE = calc.curl(D / medium.eps)
    rD = np.linalg.norm(dD - cH) / max(np.linalg.norm(cH), 1e-300)
    rB = np.linalg.norm(dB + cE) / max(np.linalg.norm(cE), 1e-300)
    return float(rD), float(rB)


def rhs_with_signs(state: PropagationState, medium: MediumMap, coupling_sign: float = 1.0,
                   velocity_sign: float = 1.0, scheme: str = "rk4_spectral"):
    """Right-hand side with the two gradient terms' signs flipped at will.

    Used to show that the Maxwell check rejects sign-altered equations.
    """
    method, order = ("spectral", 4) if scheme == "rk4_spectral" else ("fd", 4)
    calc = Calculus(medium.grid, method, order)
    v, a, b = medium.v, medium.grad_ln_sqrt_v, medium.grad_ln_sqrt_h
    pp, pm = state.psi_plus, state.psi_minus

    def br(x, y):
        return v * (calc.curl(x) + velocity_sign * _cross(a, x) + coupling_sign * _cross(b, y))

    return -1j * br(pp, pm), 1j * br(pm, pp)

