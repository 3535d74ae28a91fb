"""Photon states in the momentum representation.

A state is a pair of helicity amplitudes (f+, f-) sampled on a quadrature
support in k-space. The support is one of

* ``ring``   - a circle k_perp = const at fixed k_z (monochromatic beams),
* ``disc``   - a 2D surface k_z = k_z(k_perp) parametrised by (k_perp, phi),
* ``grid3d`` - a tensor grid in (k, cos(theta), phi).

Every sample carries a weight for the invariant measure d^3k/k, so the
scalar product is a plain weighted sum. Structured supports also carry the
1D node sets needed for derivatives (see ``generators``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonNormalizableError, PhotonError, SupportMismatchError
from .quadrature import (
    gauss_legendre,
    nonuniform_periodic_weights,
    periodic_trapezoid,
    profile_peak,
    tail_cutoff,
)

MANIFOLDS = ("ring", "disc", "grid3d")
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class WaveVectorSample:
    """One node of a momentum-space quadrature."""

    k: float
    theta: float
    phi: float
    weight: float

    def __post_init__(self):
        _check_sample_arrays(
            np.array([self.k]), np.array([self.theta]), np.array([self.phi]), np.array([self.weight])
        )

    @property
    def vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return self.k * np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


def _check_sample_arrays(k, theta, phi, weight):
    if k.size == 0:
        raise PhotonError("empty support")
    if not (np.all(np.isfinite(k)) and np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))):
        raise PhotonError("invalid quadrature: non-finite sample coordinates")
    if np.any(k <= 0.0):
        raise PhotonError("invalid quadrature: k must be positive")
    if np.any(theta < 0.0) or np.any(theta > np.pi):
        raise PhotonError("invalid quadrature: theta outside [0, pi]")
    if np.any(phi < 0.0) or np.any(phi >= TWO_PI):
        raise PhotonError("invalid quadrature: phi outside [0, 2pi)")
    if not np.all(np.isfinite(weight)) or np.any(weight < 0.0):
        raise PhotonError("invalid quadrature: negative weight")


@dataclass(frozen=True, eq=False)
class MomentumWaveFunction:
    """Two-component helicity amplitude on a sampled k-space support.

    Parameters
    ----------
    k, theta, phi, weight : ndarray
        Sample coordinates and d^3k/k quadrature weights, shape (Ns,).
    amp_plus, amp_minus : ndarray
        Complex amplitudes f+ and f- at the samples.
    manifold : str
        ``ring``, ``disc`` or ``grid3d``.
    reduced_params : dict
        Quantum numbers fixed by delta reduction (``omega``, ``qz``, ...).
    shape : tuple or None
        Tensor shape of a structured support; the flat arrays are its C-order
        ravel. ``None`` for scattered samples.
    axes : dict
        1D node arrays of a structured support (``kperp``, ``k``, ``mu``,
        ``phi``).
    """

    k: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    weight: np.ndarray
    amp_plus: np.ndarray
    amp_minus: np.ndarray
    manifold: str = "grid3d"
    reduced_params: dict = field(default_factory=dict)
    shape: tuple | None = None
    axes: dict = field(default_factory=dict)
    uniform_phi: bool = False

    def __post_init__(self):
        if self.manifold not in MANIFOLDS:
            raise PhotonError(f"unknown manifold {self.manifold!r}")
        arrs = {}
        for name in ("k", "theta", "phi", "weight"):
            arrs[name] = np.ascontiguousarray(getattr(self, name), dtype=float).ravel()
        for name in ("amp_plus", "amp_minus"):
            arrs[name] = np.ascontiguousarray(getattr(self, name), dtype=complex).ravel()
        n = arrs["k"].size
        if any(a.size != n for a in arrs.values()):
            raise PhotonError("mismatched lengths of samples and amplitudes")
        _check_sample_arrays(arrs["k"], arrs["theta"], arrs["phi"], arrs["weight"])
        if not (np.all(np.isfinite(arrs["amp_plus"])) and np.all(np.isfinite(arrs["amp_minus"]))):
            raise PhotonError("non-finite amplitudes")
        if self.shape is not None and int(np.prod(self.shape)) != n:
            raise PhotonError("structured shape does not match sample count")
        for name, a in arrs.items():
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    # --- geometry -----------------------------------------------------
    @property
    def size(self) -> int:
        return self.k.size

    @property
    def normalizable(self) -> bool:
        return self.manifold != "ring"

    @property
    def omega(self) -> np.ndarray:
        return self.k

    @property
    def kvec(self) -> np.ndarray:
        """Cartesian wave vectors, shape (Ns, 3)."""
        st = np.sin(self.theta)
        return self.k[:, None] * np.stack(
            [st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)], axis=1
        )

    @property
    def unit(self) -> np.ndarray:
        return self.kvec / self.k[:, None]

    @property
    def synthesis_weight(self) -> np.ndarray:
        """Weights for the d^3k measure (after delta reduction)."""
        return self.weight * self.k

    @property
    def samples(self) -> list[WaveVectorSample]:
        return [WaveVectorSample(*t) for t in zip(self.k, self.theta, self.phi, self.weight)]

    def amplitudes(self) -> np.ndarray:
        """Stacked (f+, f-), shape (2, Ns)."""
        return np.stack([self.amp_plus, self.amp_minus])

    def with_amplitudes(self, amp_plus, amp_minus) -> "MomentumWaveFunction":
        return replace(self, amp_plus=amp_plus, amp_minus=amp_minus)

    def same_support(self, other: "MomentumWaveFunction") -> bool:
        return (
            self.manifold == other.manifold
            and self.size == other.size
            and np.array_equal(self.k, other.k)
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.phi, other.phi)
            and np.array_equal(self.weight, other.weight)
        )

    def __add__(self, other):
        _require_same_support(self, other)
        return self.with_amplitudes(self.amp_plus + other.amp_plus, self.amp_minus + other.amp_minus)

    def __mul__(self, c):
        return self.with_amplitudes(c * self.amp_plus, c * self.amp_minus)

    __rmul__ = __mul__

    # --- serialisation ------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "manifold": self.manifold,
            "reduced_params": dict(self.reduced_params),
            "samples": [
                {"k": float(a), "theta": float(b), "phi": float(c), "weight": float(d)}
                for a, b, c, d in zip(self.k, self.theta, self.phi, self.weight)
            ],
            "amp_plus": [[float(z.real), float(z.imag)] for z in self.amp_plus],
            "amp_minus": [[float(z.real), float(z.imag)] for z in self.amp_minus],
        }
        if self.shape is not None:
            out["structure"] = {
                "shape": list(self.shape),
                "axes": {key: [float(x) for x in v] for key, v in self.axes.items()},
                "uniform_phi": bool(self.uniform_phi),
            }
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "MomentumWaveFunction":
        try:
            s = d["samples"]
            k = np.array([x["k"] for x in s], dtype=float)
            theta = np.array([x["theta"] for x in s], dtype=float)
            phi = np.array([x["phi"] for x in s], dtype=float)
            w = np.array([x["weight"] for x in s], dtype=float)
            ap = np.array([complex(*z) for z in d["amp_plus"]])
            am = np.array([complex(*z) for z in d["amp_minus"]])
            manifold = d["manifold"]
        except (KeyError, TypeError, ValueError) as exc:
            raise PhotonError(f"malformed wave function record: {exc}") from None
        st = d.get("structure")
        kw = {}
        if st:
            kw = dict(
                shape=tuple(st["shape"]),
                axes={key: np.asarray(v, dtype=float) for key, v in st["axes"].items()},
                uniform_phi=bool(st.get("uniform_phi", False)),
            )
        return cls(k, theta, phi, w, ap, am, manifold, dict(d.get("reduced_params", {})), **kw)


def make_sampled_wavefunction(samples, amp_plus, amp_minus, manifold: str = "grid3d",
                              reduced_params: dict | None = None) -> MomentumWaveFunction:
    """Validated state from a list of ``WaveVectorSample`` and amplitudes."""
    samples = list(samples)
    if not samples:
        raise PhotonError("empty support")
    ap = np.atleast_1d(np.asarray(amp_plus, dtype=complex))
    am = np.atleast_1d(np.asarray(amp_minus, dtype=complex))
    if ap.size != len(samples) or am.size != len(samples):
        raise PhotonError("mismatched lengths of samples and amplitudes")
    arr = np.array([[s.k, s.theta, s.phi, s.weight] for s in samples], dtype=float)
    return MomentumWaveFunction(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], ap, am, manifold,
                                dict(reduced_params or {}))


def _require_same_support(f, g):
    if not f.same_support(g):
        raise SupportMismatchError("incompatible supports")


def scalar_product(f: MomentumWaveFunction, g: MomentumWaveFunction) -> complex:
    """Sum over helicities of the d^3k/k quadrature of conj(f) g."""
    _require_same_support(f, g)
    w = f.weight
    return complex(np.sum(w * np.conj(f.amp_plus) * g.amp_plus) + np.sum(w * np.conj(f.amp_minus) * g.amp_minus))


def norm_squared(f: MomentumWaveFunction) -> float:
    return float(np.sum(f.weight * (np.abs(f.amp_plus) ** 2 + np.abs(f.amp_minus) ** 2)))


def normalize(f: MomentumWaveFunction) -> MomentumWaveFunction:
    if not f.normalizable:
        raise NonNormalizableError("non-normalizable: ring-supported (delta-normalized) state")
    n2 = norm_squared(f)
    if n2 <= 0.0:
        raise NonNormalizableError("non-normalizable: zero state")
    return f * (1.0 / math.sqrt(n2))


_RHO = {
    "rho1": np.array([[0, 1], [1, 0]], dtype=complex),
    "rho2": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "rho3": np.array([[1, 0], [0, -1]], dtype=complex),
}


def apply_helicity_matrix(f: MomentumWaveFunction, which: str) -> MomentumWaveFunction:
    """Act with one of the Pauli-type helicity matrices; ``rho3`` is the helicity operator."""
    try:
        m = _RHO[which]
    except KeyError:
        raise PhotonError(f"unknown helicity matrix {which!r}") from None
    a = m @ f.amplitudes()
    return f.with_amplitudes(a[0], a[1])


def translate_phase(f: MomentumWaveFunction, displacement=(0.0, 0.0, 0.0), t0: float = 0.0) -> MomentumWaveFunction:
    """Space-time translation: multiply by exp(i(k.r0 - omega t0))."""
    r0 = np.asarray(displacement, dtype=float)
    ph = np.exp(1j * (f.kvec @ r0 - f.omega * t0))
    return f.with_amplitudes(ph * f.amp_plus, ph * f.amp_minus)


def _inverted_support(f: MomentumWaveFunction) -> dict:
    theta = np.pi - f.theta
    phi = (f.phi + np.pi) % TWO_PI
    rp = dict(f.reduced_params)
    # the image is no longer labelled by the original M in this frame
    rp.pop("M", None)
    if "qz" in rp:
        rp["qz"] = -rp["qz"]
    axes = dict(f.axes)
    if "mu" in axes:
        axes["mu"] = -np.asarray(axes["mu"])
    if "phi" in axes:
        axes["phi"] = (np.asarray(axes["phi"]) + np.pi) % TWO_PI
    if "kz_sign" in rp:
        rp["kz_sign"] = -rp["kz_sign"]
    return dict(theta=theta, phi=phi, reduced_params=rp, axes=axes)


def discrete_symmetry(f: MomentumWaveFunction, which: str) -> MomentumWaveFunction:
    """Parity or time reversal.

    The sample at k is carried to -k, so the result lives on the inverted
    support (theta -> pi - theta, phi -> phi + pi) with the same ordering and
    weights; both operations swap the helicity components, and time
    reversal also conjugates.
    """
    if which == "parity":
        ap, am = f.amp_minus, f.amp_plus
    elif which == "time_reversal":
        ap, am = np.conj(f.amp_minus), np.conj(f.amp_plus)
    else:
        raise PhotonError(f"unknown discrete symmetry {which!r}")
    return replace(f, amp_plus=ap, amp_minus=am, **_inverted_support(f))


# --------------------------------------------------------------------------
# Beams
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BeamSpec:
    """Quantum numbers of a closed-form beam.

    ``helicity`` selects the slot (f+ or f-) the scalar profile occupies.
    Unused parameters for a family are ignored.
    """

    family: str
    M: int = 0
    omega: float | None = None
    qz: float | None = None
    Omega: float | None = None
    n: int = 0
    l: float | None = None
    tau: float | None = None
    helicity: int = 1

    def __post_init__(self):
        fam = {"lg": "laguerre_gauss", "exp": "exponential"}.get(self.family, self.family)
        object.__setattr__(self, "family", fam)
        if fam not in ("bessel", "laguerre_gauss", "exponential"):
            raise PhotonError(f"unknown beam family {self.family!r}")
        if int(self.M) != self.M:
            raise PhotonError("M must be an integer")
        if self.helicity not in (1, -1):
            raise PhotonError("helicity must be +1 or -1")
        if fam == "bessel":
            if self.omega is None or self.qz is None:
                raise PhotonError("bessel beam needs omega and qz")
            if self.omega < abs(self.qz):
                raise PhotonError("evanescent: no real k_perp (omega < |qz|)")
            if self.omega <= 0:
                raise PhotonError("omega must be positive")
        elif fam == "laguerre_gauss":
            if self.Omega is None or self.l is None:
                raise PhotonError("laguerre_gauss beam needs Omega and l")
            if self.Omega <= 0:
                raise PhotonError("Omega must be positive")
            if self.l <= 0:
                raise PhotonError("l must be positive")
            if int(self.n) != self.n or self.n < 0:
                raise PhotonError("n must be a non-negative integer")
        else:
            if self.qz is None or self.tau is None:
                raise PhotonError("exponential beam needs qz and tau")
            if self.tau <= 0:
                raise PhotonError("tau must be positive")


def lg_profile(kperp, phi, M: int, n: int, l: float):
    """Laguerre-Gauss scalar amplitude at t = 0 (exponent taken literally)."""
    kperp = np.asarray(kperp, dtype=float)
    p = n + M / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        rad = np.where(kperp > 0, kperp ** p, 1.0 if p == 0 else (0.0 if p > 0 else np.inf))
    return np.exp(1j * M * np.asarray(phi)) * rad * np.exp(-(l * kperp) ** 2 / 4.0)


def exponential_profile(kperp, phi, M: int, qz: float, tau: float):
    kperp = np.asarray(kperp, dtype=float)
    k = np.sqrt(kperp ** 2 + qz ** 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        rad = np.where(kperp > 0, kperp ** float(M), 1.0 if M == 0 else (0.0 if M > 0 else np.inf))
        return np.exp(1j * M * np.asarray(phi)) * np.exp(-k * tau) * rad / k


def _slots(spec: BeamSpec, amp):
    zero = np.zeros_like(amp)
    return (amp, zero) if spec.helicity == 1 else (zero, amp)


def _theta_from(kperp, kz):
    return np.arctan2(kperp, kz)


def _lattice_points(box, kperp_max):
    """Transverse reciprocal-lattice points of a periodic box within kperp_max."""
    lx, ly = box[0], box[1]
    ax = int(np.floor(kperp_max * lx / TWO_PI))
    ay = int(np.floor(kperp_max * ly / TWO_PI))
    a, b = np.meshgrid(np.arange(-ax, ax + 1), np.arange(-ay, ay + 1), indexing="ij")
    kx = TWO_PI * a.ravel() / lx
    ky = TWO_PI * b.ravel() / ly
    return kx, ky


def _check_commensurate(kz, lz, what):
    m = np.asarray(kz) * lz / TWO_PI
    if np.any(np.abs(m - np.round(m)) > 1e-9 * np.maximum(1.0, np.abs(m))):
        raise PhotonError(f"{what}: k_z not commensurate with box length {lz}")


def beam_bessel(spec: BeamSpec, n_phi: int = 64, lattice_box=None) -> MomentumWaveFunction:
    """Bessel beam on the ring k_perp = sqrt(omega^2 - qz^2), k_z = qz.

    With the uniform rule the d^3k/k weight of each node is 2pi/n_phi (the
    delta Jacobian omega cancels against the 1/k of the measure).

    ``lattice_box=(Lx, Ly, Lz)`` instead keeps only the reciprocal-lattice
    points of that periodic box lying on the ring, with nonuniform
    periodic trapezoid weights; the synthesized field is then exactly
    periodic.
    """
    if spec.family != "bessel":
        raise PhotonError("spec is not a bessel beam")
    omega, qz = float(spec.omega), float(spec.qz)
    kperp = math.sqrt(max(omega ** 2 - qz ** 2, 0.0))
    if kperp == 0.0:
        raise PhotonError("degenerate ring: omega == |qz| leaves no transverse extent")
    rp = {"omega": omega, "qz": qz, "M": int(spec.M)}
    if lattice_box is None:
        phi, w = periodic_trapezoid(n_phi)
        uniform = True
    else:
        lx, ly, lz = lattice_box
        _check_commensurate([qz], lz, "bessel lattice ring")
        kx, ky = _lattice_points(lattice_box, kperp * (1 + 1e-9))
        on = np.abs(np.hypot(kx, ky) - kperp) <= 1e-9 * kperp
        if not np.any(on):
            raise PhotonError("no reciprocal-lattice points lie on the ring")
        phi = np.arctan2(ky[on], kx[on]) % TWO_PI
        phi = np.sort(phi)
        w = nonuniform_periodic_weights(phi)
        uniform = False
        rp["lattice_box"] = [float(lx), float(ly), float(lz)]
    n = phi.size
    theta = np.full(n, _theta_from(kperp, qz))
    k = np.full(n, omega)
    amp = np.exp(1j * spec.M * phi)
    ap, am = _slots(spec, amp)
    return MomentumWaveFunction(k, theta, phi, w, ap, am, "ring", rp, shape=(n,),
                                axes={"phi": phi}, uniform_phi=uniform)


def _disc_radial(profile, scale, tail):
    peak = profile_peak(profile, 0.0, scale)
    return tail_cutoff(profile, max(peak, 1e-12), rel=tail)


def _disc_state(spec, kperp_nodes, kperp_w, phi, phi_w, kz_of, amp_of, rp, axes_extra=None):
    kp, ph = np.meshgrid(kperp_nodes, phi, indexing="ij")
    kz = kz_of(kp)
    k = np.hypot(kp, kz)
    theta = _theta_from(kp, kz)
    # d^3k -> kperp dkperp dphi on the surface; divide by k for d^3k/k
    w = (kperp_w[:, None] * kp * phi_w[None, :]) / k
    amp = amp_of(kp, ph)
    ap, am = _slots(spec, amp.ravel())
    axes = {"kperp": np.asarray(kperp_nodes), "phi": np.asarray(phi)}
    if axes_extra:
        axes.update(axes_extra)
    return MomentumWaveFunction(k.ravel(), theta.ravel(), ph.ravel(), w.ravel(), ap, am, "disc", rp,
                                shape=kp.shape, axes=axes, uniform_phi=True)


def _lattice_disc_state(spec, box, kperp_max, kz_of, amp_of, rp):
    kx, ky = _lattice_points(box, kperp_max)
    kp = np.hypot(kx, ky)
    keep = kp <= kperp_max
    kx, ky, kp = kx[keep], ky[keep], kp[keep]
    kz = kz_of(kp)
    _check_commensurate(kz, box[2], f"{spec.family} lattice")
    k = np.hypot(kp, kz)
    if np.any(k <= 0):
        raise PhotonError("lattice support contains k = 0")
    cell = (TWO_PI / box[0]) * (TWO_PI / box[1])
    phi = np.arctan2(ky, kx) % TWO_PI
    w = np.full(kp.size, cell) / k
    amp = amp_of(kp, phi)
    ap, am = _slots(spec, amp)
    rp = dict(rp, lattice_box=[float(b) for b in box])
    return MomentumWaveFunction(k, _theta_from(kp, kz), phi, w, ap, am, "disc", rp)


def beam_laguerre_gauss(spec: BeamSpec, n_radial: int = 64, n_phi: int = 64, tail: float = 1e-10,
                        lattice_box=None, kperp_max: float | None = None) -> MomentumWaveFunction:
    """Laguerre-Gauss beam on the paraboloid k_z = Omega - k_perp^2/(4 Omega).

    On this surface omega = Omega + k_perp^2/(4 Omega), so the time factor of
    the closed form is just exp(-i omega t) and the stored amplitude is the
    t = 0 value.
    """
    if spec.family != "laguerre_gauss":
        raise PhotonError("spec is not a laguerre_gauss beam")
    M, n, l, Om = int(spec.M), int(spec.n), float(spec.l), float(spec.Omega)
    if n + M / 2.0 <= -1.0:
        raise NonNormalizableError("non-normalizable: n + M/2 <= -1 makes the norm diverge at k_perp = 0")

    def prof(x):
        return abs(complex(lg_profile(x, 0.0, M, n, l)))

    if kperp_max is None:
        kperp_max = _disc_radial(prof, 4.0 * (math.sqrt(2 * abs(n + M / 2.0)) + 6.0) / l, tail)
    rp = {"Omega": Om, "M": M, "n": n, "l": l, "kperp_max": kperp_max}

    def kz_of(kp):
        return Om - kp ** 2 / (4.0 * Om)

    def amp_of(kp, ph):
        return lg_profile(kp, ph, M, n, l)

    if lattice_box is not None:
        return _lattice_disc_state(spec, lattice_box, kperp_max, kz_of, amp_of, rp)
    kn, kw = gauss_legendre(0.0, kperp_max, n_radial)
    phi, pw = periodic_trapezoid(n_phi)
    return _disc_state(spec, kn, kw, phi, pw, kz_of, amp_of, rp)


def beam_exponential(spec: BeamSpec, n_radial: int = 64, n_phi: int = 64, tail: float = 1e-10,
                     lattice_box=None, kperp_max: float | None = None) -> MomentumWaveFunction:
    """Exponential beam on the plane k_z = qz."""
    if spec.family != "exponential":
        raise PhotonError("spec is not an exponential beam")
    M, qz, tau = int(spec.M), float(spec.qz), float(spec.tau)
    if qz != 0.0 and M <= -1:
        raise NonNormalizableError("non-normalizable: exponential beam needs M > -1")
    if qz == 0.0 and M < 1:
        raise NonNormalizableError("non-normalizable: exponential beam with qz = 0 needs M >= 1")

    def prof(x):
        return abs(complex(exponential_profile(x, 0.0, M, qz, tau)))

    if kperp_max is None:
        kperp_max = _disc_radial(prof, 4.0 * (abs(M) + 6.0) / tau + abs(qz), tail)
    rp = {"qz": qz, "M": M, "tau": tau, "kperp_max": kperp_max}

    def kz_of(kp):
        return np.full_like(kp, qz)

    def amp_of(kp, ph):
        return exponential_profile(kp, ph, M, qz, tau)

    if lattice_box is not None:
        return _lattice_disc_state(spec, lattice_box, kperp_max, kz_of, amp_of, rp)
    kn, kw = gauss_legendre(0.0, kperp_max, n_radial)
    phi, pw = periodic_trapezoid(n_phi)
    return _disc_state(spec, kn, kw, phi, pw, kz_of, amp_of, rp)


def make_beam(spec: BeamSpec, **kw) -> MomentumWaveFunction:
    builder = {
        "bessel": beam_bessel,
        "laguerre_gauss": beam_laguerre_gauss,
        "exponential": beam_exponential,
    }[spec.family]
    return builder(spec, **kw)


def grid3d_wavefunction(amp_plus, amp_minus=None, k_range=(0.5, 2.0), n_k: int = 24,
                        mu_range=(-1.0, 1.0), n_mu: int = 24, n_phi: int = 32) -> MomentumWaveFunction:
    """Tensor-grid state from callables f(kvec) -> complex.

    Nodes are Gauss-Legendre in k and mu = cos(theta) and uniform in phi;
    the weight of a node is k dk dmu dphi.
    """
    kn, kw = gauss_legendre(*k_range, n_k)
    mn, mw = gauss_legendre(*mu_range, n_mu)
    pn, pw = periodic_trapezoid(n_phi)
    K, MU, PH = np.meshgrid(kn, mn, pn, indexing="ij")
    W = kw[:, None, None] * mw[None, :, None] * pw[None, None, :] * K
    theta = np.arccos(np.clip(MU, -1.0, 1.0))
    st = np.sin(theta)
    kvec = K[..., None] * np.stack([st * np.cos(PH), st * np.sin(PH), MU], axis=-1)
    ap = np.asarray(amp_plus(kvec), dtype=complex) if amp_plus is not None else np.zeros(K.shape, complex)
    am = np.asarray(amp_minus(kvec), dtype=complex) if amp_minus is not None else np.zeros(K.shape, complex)
    return MomentumWaveFunction(K.ravel(), theta.ravel(), PH.ravel(), W.ravel(), ap.ravel(), am.ravel(),
                                "grid3d", {}, shape=K.shape, axes={"k": kn, "mu": mn, "phi": pn},
                                uniform_phi=True)
