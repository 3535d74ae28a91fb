"""Helicity analysis of RS fields.

The helicity operator chi acts on a Fourier mode as i k x / |k|; the zero
mode is dropped. P+- = (1 +- chi)/2 split a transverse field into
Psi+ = P+ F and Psi- = conj(P- F). The Landau-Peierls wave function divides
each mode by sqrt(|k|).

Real-space kernels (|r|^-2 for chi, |r|^-5/2 for Landau-Peierls) are
provided as independent cross-checks of the Fourier route; see
``periodic_power_kernel``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft, special

from .errors import PhotonError, StaticComponentError, ZeroEnergyError
from .generators import expectation_value
from .grid import Calculus, PositionGrid, workers
from .momentum import MomentumWaveFunction, norm_squared
from .synthesis import RSField

LP_PREFACTOR = np.pi * (2.0 * np.pi) ** -2.5
CHI_PREFACTOR = 1.0 / (2.0 * np.pi ** 2)


def _fftn(a):
    return fft.fftn(a, axes=(-3, -2, -1), workers=workers())


def _ifftn(a):
    return fft.ifftn(a, axes=(-3, -2, -1), workers=workers())


def _kvectors(grid: PositionGrid):
    kx, ky, kz = grid.kmesh()
    kabs = np.sqrt(kx ** 2 + ky ** 2 + kz ** 2)
    return (kx, ky, kz), kabs


def _require_periodic(grid, what):
    if grid.boundary != "periodic":
        raise PhotonError(f"{what} needs a periodic grid")


def _chi_fourier(v: np.ndarray, grid: PositionGrid) -> np.ndarray:
    (kx, ky, kz), kabs = _kvectors(grid)
    vh = _fftn(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(kabs > 0, 1.0 / kabs, 0.0)
    c = np.stack([ky * vh[2] - kz * vh[1], kz * vh[0] - kx * vh[2], kx * vh[1] - ky * vh[0]])
    return _ifftn(1j * c * inv)


# --------------------------------------------------------------------------
# real-space power-law kernels
# --------------------------------------------------------------------------

def epstein_zeta_cubic(s: float, nmax: int = 6) -> float:
    """Analytic continuation of sum over n != 0 of |n|^-s on the cubic lattice.

    Theta-function splitting into two incomplete-gamma series (each converges
    like exp(-pi n^2)). Z(0) = -1.
    """
    if s == 0.0:
        return -1.0
    r = np.arange(-nmax, nmax + 1)
    i, j, k = np.meshgrid(r, r, r, indexing="ij")
    n2 = (i ** 2 + j ** 2 + k ** 2).ravel()
    x = np.pi * n2[n2 > 0]
    a1, a2 = s / 2.0, (3.0 - s) / 2.0
    t1 = special.gammaincc(a1, x) * special.gamma(a1) * x ** (-a1)
    t2 = special.gammaincc(a2, x) * special.gamma(a2) * x ** (-a2)
    lam = t1.sum() + t2.sum() + 2.0 / (s - 3.0) - 2.0 / s
    return float(lam * np.pi ** (s / 2.0) / special.gamma(s / 2.0))


def _cube_tail(q: float, m: int = 400) -> float:
    """Integral of |u|^-q over the outside of the cube [-1, 1]^3 (q > 3)."""
    t = (np.arange(m) + 0.5) / m * 2.0 - 1.0
    y, z = np.meshgrid(t, t, indexing="ij")
    r = np.sqrt(1.0 + y ** 2 + z ** 2)
    da = (2.0 / m) ** 2
    return float(6.0 * np.sum(da * r ** -3 * r ** (3.0 - q)) / (q - 3.0))


def _cubic_spacing(grid: PositionGrid) -> tuple[int, float]:
    n = grid.shape[0]
    h = grid.spacing[0]
    if any(x != n for x in grid.shape) or not np.allclose(grid.spacing, h, rtol=1e-12, atol=0):
        raise PhotonError("real-space kernels need a cubic grid with equal spacing")
    return n, h


@lru_cache(maxsize=8)
def _periodic_kernel_hat(n: int, h: float, p: float, periodic: bool, n_img: int = 4) -> np.ndarray:
    m = 2 * n if not periodic else n
    idx = fft.fftfreq(m, 1.0 / m)
    x = h * idx
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij", sparse=True)
    r2 = X ** 2 + Y ** 2 + Z ** 2
    ker = np.zeros((m, m, m))
    nz = r2 > 0
    ker[nz] = np.broadcast_to(r2, ker.shape)[nz] ** (-p / 2.0)
    if periodic:
        L = n * h
        S = np.zeros((m, m, m))
        rng = range(-n_img, n_img + 1)
        for a in rng:
            for b in rng:
                for c in rng:
                    if a == b == c == 0:
                        continue
                    d2 = (X + a * L) ** 2 + (Y + b * L) ** 2 + (Z + c * L) ** 2
                    # subtracting the constant only moves the (discarded) zero mode
                    S += d2 ** (-p / 2.0) - ((a * a + b * b + c * c) * L * L) ** (-p / 2.0)
        # second-order continuum estimate of the images beyond the summed cube
        A = (n_img + 0.5) * L
        coef = (p / 2.0) * (-1.0 + (p + 2.0) / 3.0)
        S += coef * r2 * _cube_tail(p + 2.0) * A ** (3.0 - (p + 2.0)) / L ** 3
        ker += S
    ker *= h ** 3
    # singular cell: lattice-sum correction of the sampled integral
    ker[0, 0, 0] += -h ** (3.0 - p) * epstein_zeta_cubic(p)
    kh = fft.fftn(ker, workers=workers()).real
    # next order of the same expansion: a discrete Laplacian term
    beta = h ** (5.0 - p) * epstein_zeta_cubic(p - 2.0) / 6.0
    kk = 2.0 * np.pi * fft.fftfreq(m, h)
    c1 = 1.0 - np.cos(kk * h)
    lap = -(2.0 / h ** 2) * (c1[:, None, None] + c1[None, :, None] + c1[None, None, :])
    return kh - beta * lap


def periodic_power_kernel(grid: PositionGrid, p: float) -> np.ndarray:
    """Fourier symbol of the sampled convolution with |r|^-p on ``grid``.

    The symbol is obtained by FFT of the real-space kernel, which is built
    from the sampled power law at minimum-image distances, a finite sum of
    periodic images with a continuum estimate of the remainder, and
    lattice-sum corrections for the singular cell. It approximates the
    continuum symbol pi^{3/2} 2^{3-p} Gamma((3-p)/2)/Gamma(p/2) |k|^{p-3}
    without using it. For open grids the kernel lives on a doubled,
    zero-padded grid and carries no images.
    """
    n, h = _cubic_spacing(grid)
    return _periodic_kernel_hat(n, float(h), float(p), grid.boundary == "periodic")


def _convolve(v: np.ndarray, grid: PositionGrid, p: float) -> np.ndarray:
    """Discrete convolution of each component of v with h^3 |r|^-p."""
    kh = periodic_power_kernel(grid, p)
    if grid.boundary == "periodic":
        vh = _fftn(v)
        vh[..., 0, 0, 0] = 0.0
        return _ifftn(vh * kh)
    n = grid.shape[0]
    pad = np.zeros(v.shape[:-3] + (2 * n,) * 3, dtype=complex)
    pad[..., :n, :n, :n] = v
    vh = _fftn(pad)
    vh[..., 0, 0, 0] = 0.0
    out = _ifftn(vh * kh)
    return out[..., :n, :n, :n]


def _check_decay(v: np.ndarray, grid: PositionGrid, rel: float = 1e-6) -> None:
    if grid.boundary == "periodic":
        return
    peak = np.max(np.abs(v))
    faces = [v[:, 0], v[:, -1], v[:, :, 0], v[:, :, -1], v[..., 0], v[..., -1]]
    edge = max(np.max(np.abs(fc)) for fc in faces)
    if peak > 0 and edge > rel * peak:
        raise PhotonError("kernel method needs a field decaying within the box (unbounded tail)")


def _chi_kernel(v: np.ndarray, grid: PositionGrid) -> np.ndarray:
    _check_decay(v, grid)
    calc = Calculus(grid, "fd", 8)
    return CHI_PREFACTOR * _convolve(calc.curl(v), grid, 2.0)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def helicity_apply(field: RSField, method: str = "fourier") -> RSField:
    """chi F as a new (unsplit) field."""
    if method == "fourier":
        _require_periodic(field.grid, "fourier helicity operator")
        out = _chi_fourier(field.F, field.grid)
    elif method == "kernel":
        out = _chi_kernel(field.F, field.grid)
    else:
        raise PhotonError(f"unknown method {method!r}")
    return RSField(field.grid, out, field.time)


def apply_chi(v: np.ndarray, grid: PositionGrid, method: str = "fourier") -> np.ndarray:
    if method == "fourier":
        _require_periodic(grid, "fourier helicity operator")
        return _chi_fourier(v, grid)
    if method == "kernel":
        return _chi_kernel(v, grid)
    raise PhotonError(f"unknown method {method!r}")


def projector(v: np.ndarray, grid: PositionGrid, sign: int, method: str = "fourier") -> np.ndarray:
    """P+- v = (v +- chi v)/2."""
    return 0.5 * (v + sign * apply_chi(v, grid, method))


def helicity_split(field: RSField, method: str = "fourier") -> RSField:
    """Field with Psi+ = P+ F and Psi- = conj(P- F) attached."""
    chi = apply_chi(field.F, field.grid, method)
    pp = 0.5 * (field.F + chi)
    pm = np.conj(0.5 * (field.F - chi))
    return RSField(field.grid, field.F, field.time, pp, pm, field.omega, dict(field.meta))


def helicity_project(field: RSField, method: str = "fourier") -> tuple[RSField, RSField]:
    """(Psi+, Psi-) as two single-array fields."""
    s = helicity_split(field, method)
    return RSField(field.grid, s.psi_plus, field.time), RSField(field.grid, s.psi_minus, field.time)


# --------------------------------------------------------------------------
# Landau-Peierls
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LPWaveFunction:
    grid: PositionGrid
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    time: float = 0.0

    def norm_squared(self) -> float:
        dv = self.grid.cell_volume
        return float((np.sum(np.abs(self.phi_plus) ** 2) + np.sum(np.abs(self.phi_minus) ** 2)) * dv)


def _lp_multiply(v: np.ndarray, grid: PositionGrid, power: float, check_static: bool) -> np.ndarray:
    _, kabs = _kvectors(grid)
    vh = _fftn(v)
    if check_static:
        zero = np.max(np.abs(vh[:, 0, 0, 0]))
        scale = np.max(np.abs(vh))
        if scale > 0 and zero > 1e-12 * scale:
            raise StaticComponentError("LP undefined for static component (nonzero field mean)")
    with np.errstate(divide="ignore"):
        mult = np.where(kabs > 0, kabs ** power, 0.0)
    return _ifftn(vh * mult)


def landau_peierls(field, direction: str = "forward", method: str = "fourier"):
    """Forward: RSField -> LPWaveFunction; inverse: LPWaveFunction -> RSField.

    ``method='kernel'`` (forward only) evaluates the real-space convolution
    with pi (2pi)^-5/2 |r|^-5/2 instead of the Fourier division.
    """
    if direction == "forward":
        if not isinstance(field, RSField):
            raise PhotonError("forward transform expects an RSField")
        _require_periodic(field.grid, "Landau-Peierls transform")
        if not field.has_split:
            field = helicity_split(field)
        out = []
        for psi in (field.psi_plus, field.psi_minus):
            if method == "fourier":
                out.append(_lp_multiply(psi, field.grid, -0.5, True))
            elif method == "kernel":
                _lp_multiply(psi, field.grid, 0.0, True)
                out.append(LP_PREFACTOR * _convolve(psi, field.grid, 2.5))
            else:
                raise PhotonError(f"unknown method {method!r}")
        return LPWaveFunction(field.grid, out[0], out[1], field.time)
    if direction == "inverse":
        if not isinstance(field, LPWaveFunction):
            raise PhotonError("inverse transform expects an LPWaveFunction")
        pp = _lp_multiply(field.phi_plus, field.grid, 0.5, False)
        pm = _lp_multiply(field.phi_minus, field.grid, 0.5, False)
        return RSField.from_pair(field.grid, pp, pm, field.time)
    raise PhotonError(f"unknown direction {direction!r}")


def _lp_action(phi: np.ndarray, lam: int, g: str, grid: PositionGrid, calc: Calculus) -> np.ndarray:
    if g == "H":
        return lam * calc.curl(phi)
    kind, ax = g[0], "xyz".index(g[1])
    if kind == "P":
        return -1j * np.stack([calc.d(c, ax) for c in phi])
    if kind == "J":
        r = grid.mesh()
        a, b = [(1, 2), (2, 0), (0, 1)][ax]
        orb = -1j * np.stack([r[a] * calc.d(c, b) - r[b] * calc.d(c, a) for c in phi])
        # (s_i v)_j = -i eps_ijk v_k, i.e. s_i v = i e_i x v
        e = np.zeros(3)
        e[ax] = 1.0
        spin = 1j * np.cross(e[:, None, None, None], phi, axis=0)
        return orb + spin
    raise PhotonError(f"generator {g!r} has no position form here (N is excluded)")


def lp_expectation(lp: LPWaveFunction, g: str) -> float:
    """Sum over helicities of int Phi* (g Phi) / int |Phi|^2.

    Position forms: H = lambda curl, P = -i grad, J = -i r x grad + s.
    """
    if g.startswith("N"):
        raise PhotonError("boost generator N is not available in the position representation")
    if g not in ("H", "Px", "Py", "Pz", "Jx", "Jy", "Jz"):
        raise PhotonError(f"unknown generator {g!r}")
    calc = Calculus(lp.grid, "spectral")
    n2 = np.sum(np.abs(lp.phi_plus) ** 2) + np.sum(np.abs(lp.phi_minus) ** 2)
    if n2 <= 0:
        raise ZeroEnergyError("zero Landau-Peierls norm")
    tot = 0.0 + 0.0j
    for phi, lam in ((lp.phi_plus, 1), (lp.phi_minus, -1)):
        if np.any(phi):
            tot += np.sum(np.conj(phi) * _lp_action(phi, lam, g, lp.grid, calc))
    return float((tot / n2).real)


def lp_orbital_spin(lp: LPWaveFunction, axis: int = 2) -> tuple[float, float]:
    """(L_i, S_i) expectation split in the position representation."""
    calc = Calculus(lp.grid, "spectral")
    r = lp.grid.mesh()
    a, b = [(1, 2), (2, 0), (0, 1)][axis]
    e = np.zeros(3)
    e[axis] = 1.0
    n2 = np.sum(np.abs(lp.phi_plus) ** 2) + np.sum(np.abs(lp.phi_minus) ** 2)
    L = S = 0.0
    for phi in (lp.phi_plus, lp.phi_minus):
        if not np.any(phi):
            continue
        orb = -1j * np.stack([r[a] * calc.d(c, b) - r[b] * calc.d(c, a) for c in phi])
        spin = 1j * np.cross(e[:, None, None, None], phi, axis=0)
        L += np.sum(np.conj(phi) * orb).real
        S += np.sum(np.conj(phi) * spin).real
    return float(L / n2), float(S / n2)


# --------------------------------------------------------------------------
# Stokes parameters
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StokesSet:
    S0: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    S3: np.ndarray

    def integrated(self, cell_volume: float = 1.0) -> "StokesSet":
        return StokesSet(*(np.asarray(np.sum(s) * cell_volume) for s in (self.S0, self.S1, self.S2, self.S3)))

    def as_tuple(self):
        return self.S0, self.S1, self.S2, self.S3


def stokes(field: RSField) -> StokesSet:
    """Pointwise Stokes parameters of the helicity pair."""
    field.require_split()
    pp, pm = field.psi_plus, field.psi_minus
    ap = np.sum(np.abs(pp) ** 2, axis=0)
    am = np.sum(np.abs(pm) ** 2, axis=0)
    z = np.sum(np.conj(pp) * pm, axis=0)
    return StokesSet(ap + am, 2.0 * z.real, 2.0 * z.imag, ap - am)


def momentum_stokes(f: MomentumWaveFunction, integrated: bool = True) -> StokesSet:
    """Stokes parameters of the amplitudes (f+, f-) at each k."""
    a, b = f.amp_plus, f.amp_minus
    z = np.conj(a) * b
    st = StokesSet(np.abs(a) ** 2 + np.abs(b) ** 2, 2.0 * z.real, 2.0 * z.imag, np.abs(a) ** 2 - np.abs(b) ** 2)
    if not integrated:
        return st
    w = f.weight
    return StokesSet(*(np.asarray(np.sum(w * s)) for s in st.as_tuple()))


def poincare_point(st: StokesSet, floor: float = 0.0):
    """(S1, S2, S3)/S0 and a validity mask; masked entries are NaN."""
    s0 = np.asarray(st.S0, dtype=float)
    mask = s0 > floor
    with np.errstate(divide="ignore", invalid="ignore"):
        pts = np.stack([np.where(mask, np.asarray(s) / s0, np.nan) for s in (st.S1, st.S2, st.S3)], axis=-1)
    return pts, mask


def stokes_in_basis(st: StokesSet, basis: str = "helicity") -> dict:
    """Named Stokes parameters in the helicity or linear basis.

    The linear basis a = (Psi+ + Psi-)/sqrt2, b = -i(Psi+ - Psi-)/sqrt2 only
    relabels the axes of the sphere: (S1, S2, S3) -> (-S2, -S3, S1).
    """
    if basis == "helicity":
        return {"S0": st.S0, "S1": st.S1, "S2": st.S2, "S3": st.S3}
    if basis == "linear":
        return {"S0": st.S0, "S1": -st.S2, "S2": -st.S3, "S3": st.S1}
    raise PhotonError(f"unknown basis {basis!r}")


# --------------------------------------------------------------------------
# orbital / spin split in momentum space
# --------------------------------------------------------------------------

def orbital_spin_split(f: MomentumWaveFunction, per_unit_norm: bool | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(L, S) with S = <lambda k_hat> and L = <J> - S.

    Components that need derivatives the support lacks are NaN (on ring and
    disc supports only L_z is available).
    """
    if per_unit_norm is None:
        per_unit_norm = not f.normalizable
    n2 = norm_squared(f)
    if n2 <= 0:
        raise ZeroEnergyError("zero state")
    lamw = f.weight * (np.abs(f.amp_plus) ** 2 - np.abs(f.amp_minus) ** 2)
    S = np.sum(lamw[:, None] * f.unit, axis=0) / n2
    L = np.full(3, np.nan)
    comps = ("x", "y", "z") if f.manifold == "grid3d" else ("z",)
    for c in comps:
        i = "xyz".index(c)
        L[i] = expectation_value(f, "J" + c, per_unit_norm=per_unit_norm) - S[i]
    return L, S


# --------------------------------------------------------------------------
# test data
# --------------------------------------------------------------------------

def random_transverse_field(grid: PositionGrid, band: int = 8, seed: int | None = 0,
                            helicity: int | None = None) -> np.ndarray:
    """Random transverse complex field with Fourier modes |m_i| <= band, m != 0."""
    _require_periodic(grid, "random transverse field")
    rng = np.random.default_rng(seed)
    shp = (3,) + grid.shape
    vh = np.zeros(shp, dtype=complex)
    m = [np.rint(fft.fftfreq(n, 1.0 / n)).astype(int) for n in grid.shape]
    sel = np.ix_(*[np.flatnonzero(np.abs(mi) <= band) for mi in m])
    sub = rng.normal(size=(3,) + tuple(len(s.ravel()) for s in sel)) + 1j * rng.normal(
        size=(3,) + tuple(len(s.ravel()) for s in sel))
    for c in range(3):
        vh[c][sel] = sub[c]
    vh[:, 0, 0, 0] = 0.0
    (kx, ky, kz), kabs = _kvectors(grid)
    k = [np.broadcast_to(a, grid.shape) for a in (kx, ky, kz)]
    with np.errstate(divide="ignore", invalid="ignore"):
        kd = np.where(kabs > 0, (k[0] * vh[0] + k[1] * vh[1] + k[2] * vh[2]) / kabs ** 2, 0.0)
    for c in range(3):
        vh[c] -= k[c] * kd
    v = _ifftn(vh)
    if helicity is not None:
        v = projector(v, grid, int(np.sign(helicity)))
    return v / np.sqrt(np.mean(np.sum(np.abs(v) ** 2, axis=0)))
