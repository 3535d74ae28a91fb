import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from photonqm.errors import PhotonError, StaticComponentError, ZeroEnergyError
from photonqm.generators import expectation_value
from photonqm.grid import PositionGrid
from photonqm.helicity import (
    LPWaveFunction,
    StokesSet,
    apply_chi,
    helicity_apply,
    helicity_project,
    helicity_split,
    landau_peierls,
    lp_expectation,
    lp_orbital_spin,
    momentum_stokes,
    orbital_spin_split,
    poincare_point,
    projector,
    random_transverse_field,
    stokes,
    stokes_in_basis,
)
from photonqm.momentum import (
    BeamSpec,
    WaveVectorSample,
    beam_bessel,
    beam_exponential,
    beam_laguerre_gauss,
    discrete_symmetry,
    grid3d_wavefunction,
    make_sampled_wavefunction,
    norm_squared,
)
from photonqm.synthesis import RSField, synthesize_rs


def rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def plane_wave_field(lam, kdir=(1, 2, 0), L=2 * np.pi, n=16):
    kv = np.asarray(kdir, float)
    k = np.linalg.norm(kv)
    th, ph = math.acos(kv[2] / k), math.atan2(kv[1], kv[0])
    f = make_sampled_wavefunction([WaveVectorSample(k, th, ph, 1.0)], [1.0 if lam > 0 else 0.0],
                                  [0.0 if lam > 0 else 1.0])
    return synthesize_rs(f, PositionGrid.box(L, n))


def lattice_bessel(helicity=1, n=32):
    L = 8 * np.pi
    f = beam_bessel(BeamSpec("bessel", M=1, omega=math.hypot(1.25, 0.5), qz=0.5, helicity=helicity),
                    lattice_box=(L, L, L))
    return f, synthesize_rs(f, PositionGrid.box(L, n))


# ------------------------------------------------------------------ chi

@pytest.mark.parametrize("lam", [1, -1])
@pytest.mark.parametrize("kdir", [(1, 2, 0), (0, 0, 3), (-2, 1, 1)])
def test_plane_wave_is_chi_eigenfunction(lam, kdir):
    fl = plane_wave_field(lam, kdir)
    out = helicity_apply(fl).F
    assert rel(out, lam * fl.F) < 1e-13


@pytest.mark.parametrize("lam", [1, -1])
def test_chi_eigen_on_beams(lam):
    _, fl = lattice_bessel(lam)
    assert rel(helicity_apply(fl).F, lam * fl.F) < 1e-6


def test_kernel_matches_fourier_small_box():
    g = PositionGrid.box(2 * np.pi, 32)
    v = random_transverse_field(g, band=4, seed=3)
    assert rel(apply_chi(v, g, "kernel"), apply_chi(v, g, "fourier")) < 1e-3


def test_kernel_rejects_unbounded_tail():
    f = beam_bessel(BeamSpec("bessel", omega=1.0, qz=0.0), n_phi=32)
    g = PositionGrid.centered(16, 0.6, "open")
    with pytest.raises(PhotonError, match="unbounded tail"):
        helicity_apply(synthesize_rs(f, g), "kernel")


def test_fourier_needs_periodic():
    fl = RSField(PositionGrid.centered(8, 0.5, "open"), np.zeros((3, 8, 8, 8), complex))
    with pytest.raises(PhotonError):
        helicity_apply(fl)
    with pytest.raises(PhotonError):
        helicity_apply(plane_wave_field(1), "bogus")


# ------------------------------------------------------------ projectors

@given(st.integers(0, 2**31 - 1))
def test_projector_algebra(seed):
    g = PositionGrid.box(2 * np.pi, 16)
    v = random_transverse_field(g, band=5, seed=seed)
    pp = projector(v, g, 1)
    pm = projector(v, g, -1)
    scale = np.linalg.norm(v)
    assert np.linalg.norm(projector(pp, g, 1) - pp) < 1e-10 * scale
    assert np.linalg.norm(projector(pm, g, -1) - pm) < 1e-10 * scale
    assert np.linalg.norm(projector(pm, g, 1)) < 1e-10 * scale
    assert np.linalg.norm(pp + pm - v) < 1e-10 * scale


@given(st.integers(0, 2**31 - 1))
def test_reconstruction(seed):
    g = PositionGrid.box(2 * np.pi, 12)
    v = random_transverse_field(g, band=4, seed=seed)
    s = helicity_split(RSField(g, v))
    assert np.max(np.abs(s.psi_plus + np.conj(s.psi_minus) - v)) < 1e-12 * np.max(np.abs(v))


def test_pure_plus_bessel_split():
    _, fl = lattice_bessel(1)
    plus, minus = helicity_project(fl)
    assert rel(plus.F, fl.F) < 1e-10
    assert np.linalg.norm(minus.F) < 1e-10 * np.linalg.norm(fl.F)


def test_negative_helicity_lands_in_psi_minus():
    f, fl = lattice_bessel(-1)
    _, minus = helicity_project(fl)
    assert rel(np.conj(minus.F), fl.F) < 1e-10


def test_projection_is_nonlocal():
    # a field compactly supported in a ball has helicity parts outside it
    g = PositionGrid.box(2 * np.pi, 32)
    X, Y, Z = g.mesh()
    r2 = (X - np.pi) ** 2 + (Y - np.pi) ** 2 + (Z - np.pi) ** 2
    bump = np.where(r2 < 1.0, np.exp(-1.0 / np.maximum(1.0 - r2, 1e-300)), 0.0)
    v = np.stack([np.zeros_like(bump), bump, np.zeros_like(bump)]).astype(complex)
    s = helicity_split(RSField(g, v))
    outside = r2 > 1.5
    assert not np.any(v[:, outside])
    assert np.max(np.abs(s.psi_plus[:, outside])) > 1e-3 * np.max(np.abs(s.psi_plus))
    # the parts still recombine into a field that vanishes outside
    assert np.max(np.abs((s.psi_plus + np.conj(s.psi_minus))[:, outside])) < 1e-12


# ------------------------------------------------------------ Landau-Peierls

def test_lp_monochromatic_is_scaled_copy():
    f, fl = lattice_bessel(1)
    lp = landau_peierls(fl)
    om = f.omega[0]
    assert rel(lp.phi_plus, fl.F / math.sqrt(om)) < 1e-10
    assert not np.any(np.abs(lp.phi_minus) > 1e-10 * np.max(np.abs(lp.phi_plus)))


def test_lp_round_trip():
    g = PositionGrid.box(2 * np.pi, 16)
    v = random_transverse_field(g, band=5, seed=11)
    back = landau_peierls(landau_peierls(RSField(g, v)), "inverse")
    assert np.max(np.abs(back.F - v)) < 1e-12 * np.max(np.abs(v))


def test_lp_kernel_matches_fourier():
    g = PositionGrid.box(2 * np.pi, 32)
    fl = RSField(g, random_transverse_field(g, band=4, seed=3))
    a = landau_peierls(fl)
    b = landau_peierls(fl, method="kernel")
    assert rel(b.phi_plus, a.phi_plus) < 0.02
    assert rel(b.phi_minus, a.phi_minus) < 0.02


def test_lp_static_component_rejected():
    g = PositionGrid.box(2 * np.pi, 8)
    v = random_transverse_field(g, band=2, seed=0) + 0.3
    with pytest.raises(StaticComponentError, match="static component"):
        landau_peierls(RSField(g, v))


def test_lp_direction_checks():
    g = PositionGrid.box(2 * np.pi, 8)
    fl = RSField(g, random_transverse_field(g, band=2, seed=0))
    with pytest.raises(PhotonError):
        landau_peierls(fl, "inverse")
    with pytest.raises(PhotonError):
        landau_peierls(fl, "sideways")


def _lattice_exponential(M=2, n=48, L=16.0):
    qz = 1.5
    box = (L, L, 2 * np.pi / qz)
    f = beam_exponential(BeamSpec("exponential", M=M, qz=qz, tau=2.5), lattice_box=box, kperp_max=7.37)
    return f, synthesize_rs(f, PositionGrid.box(box, (n, n, 4))), box


def test_lp_norm_equals_momentum_norm():
    # the momentum norm of a kz = qz beam is per unit length along z
    f, fl, box = _lattice_exponential()
    lp = landau_peierls(fl)
    assert lp.norm_squared() == pytest.approx(norm_squared(f) * box[2] / (2 * np.pi), rel=1e-10)


def test_lp_expectations_match_momentum():
    f, fl, _ = _lattice_exponential()
    lp = landau_peierls(fl)
    assert lp_expectation(lp, "H") == pytest.approx(expectation_value(f, "H"), rel=1e-6)
    assert lp_expectation(lp, "Pz") == pytest.approx(1.5, rel=1e-10)
    assert lp_expectation(lp, "Jz") == pytest.approx(2.0, rel=1e-3)
    L, S = lp_orbital_spin(lp)
    assert L + S == pytest.approx(lp_expectation(lp, "Jz"), rel=1e-12)


def test_lp_boost_excluded():
    _, fl = lattice_bessel(1, n=16)
    lp = landau_peierls(fl)
    with pytest.raises(PhotonError, match="boost"):
        lp_expectation(lp, "Nx")
    with pytest.raises(ZeroEnergyError):
        z = np.zeros_like(lp.phi_plus)
        lp_expectation(LPWaveFunction(lp.grid, z, z), "H")


# ------------------------------------------------------------------ Stokes

def test_stokes_north_pole():
    _, fl = lattice_bessel(1, n=16)
    st_ = stokes(helicity_split(fl))
    assert np.allclose(st_.S3, st_.S0, rtol=0, atol=1e-12 * np.max(st_.S0))
    assert np.max(np.abs(st_.S1)) < 1e-10 * np.max(st_.S0)
    pts, mask = poincare_point(st_.integrated())
    assert mask and np.allclose(pts, [0, 0, 1], atol=1e-10)


def test_stokes_equal_components():
    g = PositionGrid.box(2 * np.pi, 8)
    psi = random_transverse_field(g, band=2, seed=5)
    st_ = stokes(RSField.from_pair(g, psi, psi))
    assert np.allclose(st_.S1, st_.S0, rtol=1e-14, atol=0)
    assert np.allclose(st_.S0, 2 * np.sum(np.abs(psi) ** 2, axis=0), rtol=1e-14)
    assert np.max(np.abs(st_.S2)) < 1e-14 * np.max(st_.S0)
    assert np.max(np.abs(st_.S3)) < 1e-14 * np.max(st_.S0)


@given(st.integers(0, 2**31 - 1))
def test_stokes_cauchy_schwarz(seed):
    g = PositionGrid.box(2 * np.pi, 8)
    r = np.random.default_rng(seed)
    shp = (3,) + g.shape
    pp = r.normal(size=shp) + 1j * r.normal(size=shp)
    pm = r.normal(size=shp) + 1j * r.normal(size=shp)
    s = stokes(RSField.from_pair(g, pp, pm))
    assert np.all(s.S1 ** 2 + s.S2 ** 2 + s.S3 ** 2 <= s.S0 ** 2 * (1 + 1e-12))
    # rank one: psi- proportional to psi+ node by node
    c = r.normal(size=g.shape) + 1j * r.normal(size=g.shape)
    s1 = stokes(RSField.from_pair(g, pp, c * pp))
    lhs = s1.S1 ** 2 + s1.S2 ** 2 + s1.S3 ** 2
    assert np.max(np.abs(lhs - s1.S0 ** 2) / s1.S0 ** 2) < 1e-10


def test_stokes_parity_flips_s3():
    f = beam_laguerre_gauss(BeamSpec("lg", M=1, n=0, l=2.0, Omega=1.0), n_radial=16, n_phi=16)
    f = f.with_amplitudes(f.amp_plus, 0.4j * f.amp_plus)
    a = momentum_stokes(f)
    b = momentum_stokes(discrete_symmetry(f, "parity"))
    assert float(b.S0) == pytest.approx(float(a.S0), rel=1e-14)
    assert float(b.S3) == pytest.approx(-float(a.S3), rel=1e-14)


def test_poincare_masks_dark_nodes():
    s = StokesSet(np.array([0.0, 2.0]), np.array([0.0, 1.0]), np.zeros(2), np.array([0.0, 1.0]))
    pts, mask = poincare_point(s)
    assert list(mask) == [False, True]
    assert np.all(np.isnan(pts[0])) and np.allclose(pts[1], [0.5, 0.0, 0.5])


def test_linear_basis_is_relabeling():
    g = PositionGrid.box(2 * np.pi, 8)
    r = np.random.default_rng(9)
    shp = (3,) + g.shape
    pp = r.normal(size=shp) + 1j * r.normal(size=shp)
    pm = r.normal(size=shp) + 1j * r.normal(size=shp)
    s = stokes(RSField.from_pair(g, pp, pm))
    a = (pp + pm) / math.sqrt(2)
    b = -1j * (pp - pm) / math.sqrt(2)
    direct = stokes(RSField.from_pair(g, a, b))
    lin = stokes_in_basis(s, "linear")
    for name in ("S0", "S1", "S2", "S3"):
        assert np.allclose(lin[name], getattr(direct, name), rtol=1e-12, atol=1e-12)
    with pytest.raises(PhotonError):
        stokes_in_basis(s, "elliptic")


# ------------------------------------------------------------- orbital / spin

def test_orbital_plus_spin_is_jz():
    for spec in (BeamSpec("lg", M=2, n=0, l=2.0, Omega=1.0), BeamSpec("lg", M=-1, n=1, l=1.5, Omega=2.0)):
        f = beam_laguerre_gauss(spec)
        L, S = orbital_spin_split(f)
        assert L[2] + S[2] == pytest.approx(spec.M, abs=1e-6)
        assert np.isnan(L[0]) and np.isnan(L[1])


def _axial_packet():
    c = np.array([0.0, 0.0, 3.0])
    prof = lambda kv: np.exp(-np.sum((kv - c) ** 2, -1) / (2 * 0.15 ** 2))
    return grid3d_wavefunction(prof, None, k_range=(2.3, 3.7), n_k=24, mu_range=(0.9, 1.0), n_mu=24, n_phi=16)


def test_spin_of_axial_packet():
    L, S = orbital_spin_split(_axial_packet())
    assert np.allclose(S, [0, 0, 1], atol=5e-3)
    assert np.all(np.isfinite(L))


def test_spin_under_helicity_swap_and_parity():
    f = _axial_packet()
    _, S = orbital_spin_split(f)
    _, Ss = orbital_spin_split(f.with_amplitudes(f.amp_minus, f.amp_plus))
    assert np.allclose(Ss, -S, atol=1e-15)
    # full parity also reverses k, so the axial vector S is unchanged
    _, Sp = orbital_spin_split(discrete_symmetry(f, "parity"))
    assert np.allclose(Sp, S, atol=1e-15)
