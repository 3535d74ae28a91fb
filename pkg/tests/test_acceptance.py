"""Acceptance suite: one or more checks per criterion, tolerances pinned.

Run ``pytest tests/test_acceptance.py`` to get the per-criterion PASS/FAIL
summary at the end of the output.
"""

import math

import numpy as np
import pytest

from photonqm.frame import connection_closed_form, connection_numeric, curvature_numeric, polarization_vector
from photonqm.generators import eigen_residual, expectation_value
from photonqm.grid import PositionGrid
from photonqm.helicity import (
    apply_chi,
    helicity_apply,
    helicity_split,
    landau_peierls,
    lp_expectation,
    projector,
    random_transverse_field,
    stokes,
)
from photonqm.medium import (
    PropagationState,
    StepperConfig,
    build_medium,
    evolve,
    gaussian_pulse,
    mixing_measure,
    tanh_slab,
)
from photonqm.momentum import (
    BeamSpec,
    beam_bessel,
    beam_exponential,
    beam_laguerre_gauss,
    discrete_symmetry,
    normalize,
)
from photonqm.synthesis import (
    RSField,
    coherent_average,
    field_energy_momentum,
    maxwell_residual,
    momentum_energy_momentum,
    paraxial_residual,
    synthesize_rs,
)

crit = pytest.mark.criterion

AC1 = "polarization identity |k x e + i w e| and |e*.e - 1| < 1e-12 over 100 directions"
AC2 = "connection matches closed form and curl(alpha) = -k/k^3 within 1e-6 at 20 points"
AC3 = "bessel H/Pz residuals < 1e-12, Jz < 1e-8 for M in -3..3; LG paraxial order >= 2"
AC4 = "bessel and LG fields on periodic 64^3: curl and div residuals < 1e-6"
AC5 = "field E and P match momentum <H>, <P> within 1% for an exponential beam, converging"
AC6 = "projector algebra < 1e-10, kernel vs fourier chi < 1e-3 on 64^3, chi eigen < 1e-6"
AC7 = "LP forward/inverse identity < 1e-12; LP <H>, <Jz> match momentum within 1%"
AC8 = "Stokes Cauchy-Schwarz pointwise, north pole for pure helicity, parity flips S3"
AC9 = "medium: vacuum L2 < 1e-6, decoupling < 1e-10, mixing > 1e-4, drift < 1e-8 at order 4"
AC10 = "coherent mean field scales exactly as sqrt(N), energy as N"

L_BESSEL = 8 * math.pi
OMEGA = math.hypot(1.25, 0.5)


def lattice_bessel(M=1, n=64, helicity=1):
    box = (L_BESSEL,) * 3
    f = beam_bessel(BeamSpec("bessel", M=M, omega=OMEGA, qz=0.5, helicity=helicity), lattice_box=box)
    return f, synthesize_rs(f, PositionGrid.box(box, n))


def rel(a, b):
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


# ----------------------------------------------------------------------- 1

@crit("AC1", AC1)
def test_ac1_polarization_identity():
    r = np.random.default_rng(1)
    kv = r.normal(size=(100, 3)) * r.uniform(0.05, 20, size=(100, 1))
    e = polarization_vector(kv)
    w = np.linalg.norm(kv, axis=1)
    res = np.linalg.norm(np.cross(kv, e) + 1j * w[:, None] * e, axis=1) / w
    norm = np.abs(np.sum(np.conj(e) * e, axis=1) - 1)
    print(f"AC1 max identity residual {res.max():.2e}, max norm error {norm.max():.2e}")
    assert res.max() < 1e-12
    assert norm.max() < 1e-12


# ----------------------------------------------------------------------- 2

def _off_axis(r, n):
    k = r.uniform(0.3, 3.0, n)
    th = r.uniform(0.2, np.pi - 0.2, n)
    ph = r.uniform(0, 2 * np.pi, n)
    return np.stack([k * np.sin(th) * np.cos(ph), k * np.sin(th) * np.sin(ph), k * np.cos(th)], axis=1)


@crit("AC2", AC2)
def test_ac2_connection():
    pts = _off_axis(np.random.default_rng(2), 20)
    err = max(np.max(np.abs(connection_numeric(kv) - connection_closed_form(kv))) for kv in pts)
    print(f"AC2 connection max error {err:.2e}")
    assert err < 1e-6


@crit("AC2", AC2)
def test_ac2_curvature():
    pts = _off_axis(np.random.default_rng(3), 20)
    err = max(np.max(np.abs(curvature_numeric(kv) + kv / np.linalg.norm(kv) ** 3)) for kv in pts)
    print(f"AC2 curvature max error {err:.2e}")
    assert err < 1e-6


# ----------------------------------------------------------------------- 3

@crit("AC3", AC3)
@pytest.mark.parametrize("M", range(-3, 4))
def test_ac3_bessel_eigen(M):
    f = beam_bessel(BeamSpec("bessel", M=M, omega=1.4, qz=0.6))
    rH, rP, rJ = eigen_residual(f, "H", 1.4), eigen_residual(f, "Pz", 0.6), eigen_residual(f, "Jz", M)
    print(f"AC3 M={M}: H {rH:.1e} Pz {rP:.1e} Jz {rJ:.1e}")
    assert rH < 1e-12 and rP < 1e-12 and rJ < 1e-8


@crit("AC3", AC3)
def test_ac3_lg_paraxial_convergence():
    f = beam_laguerre_gauss(BeamSpec("lg", M=1, n=0, l=2.0, Omega=1.0), n_radial=32, n_phi=32)
    res = []
    for h in (0.2, 0.1, 0.05):
        n, nz = int(round(4 / h)) + 1, int(round(2 / h)) + 1
        g = PositionGrid((-2.0, -2.0, -1.0), (h, h, h), (n, n, nz), "open")
        res.append(paraxial_residual(synthesize_rs(f, g), 1.0, "fd", 4))
    orders = [math.log2(res[i] / res[i + 1]) for i in range(2)]
    print(f"AC3 paraxial residuals {res}, observed orders {orders}")
    assert res[0] > res[1] > res[2]
    assert min(orders) >= 2.0


# ----------------------------------------------------------------------- 4

@crit("AC4", AC4)
@pytest.mark.parametrize("helicity", [1, -1])
def test_ac4_bessel_64(helicity):
    _, fl = lattice_bessel(M=2, helicity=helicity)
    c, d = maxwell_residual(fl)
    print(f"AC4 bessel h={helicity}: curl {c:.2e} div {d:.2e}")
    assert c < 1e-6 and d < 1e-6


@crit("AC4", AC4)
def test_ac4_lg_64():
    Lb = 64.0
    Om = 2 * np.pi / Lb
    box = (Lb, Lb, 4 * Lb)
    f = beam_laguerre_gauss(BeamSpec("lg", M=1, n=0, l=16.0, Omega=Om), lattice_box=box, kperp_max=5.9 * Om)
    g = PositionGrid.box(box, 64)
    a, b = synthesize_rs(f, g, 0.0), synthesize_rs(f, g, 1e-3)
    c, d = maxwell_residual(a, b)
    print(f"AC4 LG ({f.size} modes): curl {c:.2e} div {d:.2e}")
    assert c < 1e-6 and d < 1e-6


# ----------------------------------------------------------------------- 5

@crit("AC5", AC5)
def test_ac5_parseval_exponential():
    qz = 1.5
    f = beam_exponential(BeamSpec("exponential", M=1, qz=qz, tau=2.5), n_radial=64, n_phi=128, tail=1e-6)
    per = 2 * np.pi / qz
    errs = []
    for n, L in ((32, 10.0), (64, 16.0), (128, 24.0)):
        # whole periods along z, quarter-period sampling
        g = PositionGrid((-L / 2, -L / 2, 0.0), (L / n, L / n, per / 4), (n, n, n), "open")
        E, P, _ = field_energy_momentum(synthesize_rs(f, g))
        Em, Pm = momentum_energy_momentum(f, per * n / 4)
        eE, eP = abs(E / Em - 1), float(np.max(np.abs(P - Pm)) / np.linalg.norm(Pm))
        print(f"AC5 {n}^3 box {L}: E rel err {eE:.2e}, P rel err {eP:.2e}")
        errs.append((eE, eP))
    assert all(e < 0.01 and p < 0.01 for e, p in errs)
    assert errs[0][0] > errs[1][0] > errs[2][0]
    assert errs[0][1] > errs[1][1] > errs[2][1]


# ----------------------------------------------------------------------- 6

@crit("AC6", AC6)
def test_ac6_projector_algebra():
    g = PositionGrid.box(2 * np.pi, 32)
    worst = 0.0
    for seed in range(5):
        v = random_transverse_field(g, band=8, seed=seed)
        s = np.linalg.norm(v)
        pp, pm = projector(v, g, 1), projector(v, g, -1)
        worst = max(worst,
                    np.linalg.norm(projector(pp, g, 1) - pp) / s,
                    np.linalg.norm(projector(pm, g, -1) - pm) / s,
                    np.linalg.norm(projector(pm, g, 1)) / s,
                    np.linalg.norm(pp + pm - v) / s)
    print(f"AC6 projector algebra worst residual {worst:.2e}")
    assert worst < 1e-10


@crit("AC6", AC6)
def test_ac6_kernel_vs_fourier_64():
    g = PositionGrid.box(2 * np.pi, 64)
    v = random_transverse_field(g, band=4, seed=3)
    r = rel(apply_chi(v, g, "kernel"), apply_chi(v, g, "fourier"))
    print(f"AC6 kernel vs fourier on 64^3: {r:.2e}")
    assert r < 1e-3


@crit("AC6", AC6)
@pytest.mark.parametrize("helicity", [1, -1])
def test_ac6_chi_eigen_beams(helicity):
    _, fl = lattice_bessel(M=1, n=32, helicity=helicity)
    r = rel(helicity_apply(fl).F, helicity * fl.F)
    Lb = 32.0
    Om = 2 * np.pi / Lb
    box = (Lb, Lb, 4 * Lb)
    f = beam_laguerre_gauss(BeamSpec("lg", M=2, n=0, l=8.0, Omega=Om, helicity=helicity), lattice_box=box,
                            kperp_max=5.9 * Om)
    lg = synthesize_rs(f, PositionGrid.box(box, (32, 32, 64)))
    r2 = rel(helicity_apply(lg).F, helicity * lg.F)
    print(f"AC6 chi eigen residual h={helicity}: bessel {r:.2e}, LG {r2:.2e}")
    assert r < 1e-6 and r2 < 1e-6


# ----------------------------------------------------------------------- 7

@crit("AC7", AC7)
def test_ac7_round_trip():
    g = PositionGrid.box(2 * np.pi, 32)
    v = random_transverse_field(g, band=8, seed=4)
    back = landau_peierls(landau_peierls(RSField(g, v)), "inverse").F
    err = np.max(np.abs(back - v)) / np.max(np.abs(v))
    print(f"AC7 forward/inverse error {err:.2e}")
    assert err < 1e-12


@crit("AC7", AC7)
def test_ac7_lp_expectations():
    M, qz, tau = 2, 1.5, 2.5
    spec = BeamSpec("exponential", M=M, qz=qz, tau=tau)
    cont = beam_exponential(spec, n_radial=96, n_phi=64, tail=1e-6)
    H0, J0 = expectation_value(cont, "H"), expectation_value(cont, "Jz")
    L = 24.0
    box = (L, L, 2 * np.pi / qz)
    f = beam_exponential(spec, lattice_box=box, kperp_max=cont.reduced_params["kperp_max"])
    lp = landau_peierls(synthesize_rs(f, PositionGrid.box(box, (64, 64, 4))))
    eH, eJ = abs(lp_expectation(lp, "H") / H0 - 1), abs(lp_expectation(lp, "Jz") / J0 - 1)
    print(f"AC7 <H> rel err {eH:.2e}, <Jz> rel err {eJ:.2e} (momentum <H> {H0:.6f}, <Jz> {J0:.6f})")
    assert eH < 0.01 and eJ < 0.01


# ----------------------------------------------------------------------- 8

@crit("AC8", AC8)
def test_ac8_cauchy_schwarz_and_pole():
    _, fl = lattice_bessel(M=1, n=32)
    # add a negative-helicity beam with a different M
    _, fm = lattice_bessel(M=-2, n=32, helicity=-1)
    both = helicity_split(RSField(fl.grid, fl.F + 0.6 * fm.F))
    s = stokes(both)
    excess = np.max(s.S1 ** 2 + s.S2 ** 2 + s.S3 ** 2 - s.S0 ** 2 * (1 + 1e-12))
    pure = stokes(helicity_split(fl))
    pole = np.max(np.abs(pure.S3 - pure.S0)) / np.max(pure.S0)
    print(f"AC8 max CS excess {excess:.2e}, pure-helicity |S3 - S0| {pole:.2e}")
    assert excess <= 0.0
    assert pole < 1e-10


@crit("AC8", AC8)
def test_ac8_parity_flips_s3():
    f, _ = lattice_bessel(M=1, n=32)
    f = f.with_amplitudes(f.amp_plus, 0.5 * np.exp(0.3j) * f.amp_plus)
    g = PositionGrid.box((L_BESSEL,) * 3, 32)
    a = stokes(helicity_split(synthesize_rs(f, g))).integrated(g.cell_volume)
    b = stokes(helicity_split(synthesize_rs(discrete_symmetry(f, "parity"), g))).integrated(g.cell_volume)
    print(f"AC8 S3 {float(a.S3):.6e} -> {float(b.S3):.6e}, S0 {float(a.S0):.6e} -> {float(b.S0):.6e}")
    assert float(b.S0) == pytest.approx(float(a.S0), rel=1e-10)
    assert float(b.S3) == pytest.approx(-float(a.S3), rel=1e-10)
    assert abs(float(a.S3)) > 0.1 * float(a.S0)


# ----------------------------------------------------------------------- 9

@crit("AC9", AC9)
def test_ac9a_vacuum_period_64():
    _, fl = lattice_bessel(M=1, n=64)
    T = 2 * np.pi / fl.omega
    st = evolve(PropagationState(fl.psi_plus, fl.psi_minus), build_medium(1.0, 1.0, fl.grid), StepperConfig(dt=0.03), T)
    d = rel(st.psi_plus, fl.psi_plus)
    print(f"AC9a vacuum one-period L2 deviation {d:.2e} after {st.step_count} steps")
    assert d < 1e-6
    assert mixing_measure(st) == 0.0


@crit("AC9", AC9)
def test_ac9b_constant_impedance_1000_steps():
    g = PositionGrid.box(4 * np.pi, 32)
    X, Y, Z = g.mesh()
    eps = 1 + 0.4 * np.exp(-(X ** 2 + Y ** 2 + Z ** 2) / 6)
    m = build_medium(eps, 2.0 * eps, g)  # h = sqrt2 everywhere, v varies
    assert np.ptp(m.v) > 0.1
    pp, pm = gaussian_pulse(g, (0, 0, 2.0), 1.5, center=(0, 0, -3.0))
    st = evolve(PropagationState(pp, pm), m, StepperConfig(dt=0.02, cadence=10), 20.0)
    worst = max(r["frac_minus"] for r in st.diagnostics)
    print(f"AC9b {st.step_count} steps, max mixing {worst:.2e}")
    assert st.step_count >= 1000
    assert worst < 1e-10


@crit("AC9", AC9)
def test_ac9c_varying_impedance_mixes():
    g = PositionGrid.box((8.0, 8.0, 16.0), (16, 16, 64))
    slab = tanh_slab(g, axis=2, center=2.0, half_width=2.0, inside=2.5, smoothing=0.6)
    m = build_medium(slab, 1.0, g)
    pp, pm = gaussian_pulse(g, (0, 0, 2.0), 1.5, center=(0, 0, -3.0))
    st = evolve(PropagationState(pp, pm), m, StepperConfig(dt=0.05), 4.0)
    frac = np.array([r["frac_minus"] for r in st.diagnostics])
    print(f"AC9c final mixing {frac[-1]:.2e}, max {frac.max():.2e}")
    assert frac[0] == 0.0
    assert frac.max() > 1e-4
    # onset: grows monotonically over the first steps
    assert np.all(np.diff(frac[:8]) > 0)


@crit("AC9", AC9)
def test_ac9d_energy_drift_and_order():
    g = PositionGrid.box(4 * np.pi, 32)
    X, Y, Z = g.mesh()
    m = build_medium(1 + 0.3 * np.exp(-(X ** 2 + Y ** 2 + Z ** 2) / 8), 1 + 0.2 * np.cos(X / 2), g)
    pp, pm = gaussian_pulse(g, (0, 0, 2.0), 1.5)
    st0 = PropagationState(pp, pm)
    E0 = st0.energy()
    T = 2 * np.pi / 2.0
    runs = {dt: evolve(st0, m, StepperConfig(dt=dt), T) for dt in (0.04, 0.02, 0.01)}
    drift = {dt: abs(s.energy() / E0 - 1) for dt, s in runs.items()}

    def diff(a, b):
        return math.sqrt(np.sum(np.abs(a.psi_plus - b.psi_plus) ** 2) + np.sum(np.abs(a.psi_minus - b.psi_minus) ** 2))

    order = math.log2(diff(runs[0.04], runs[0.02]) / diff(runs[0.02], runs[0.01]))
    print(f"AC9d drift per period {drift}, observed order {order:.3f}, mixing {mixing_measure(runs[0.01]):.2e}")
    assert drift[0.02] < 1e-8 and drift[0.01] < 1e-8
    assert 3.8 < order < 4.3
    assert mixing_measure(runs[0.01]) > 0


# ---------------------------------------------------------------------- 10

@crit("AC10", AC10)
def test_ac10_coherent_scaling():
    f = normalize(beam_exponential(BeamSpec("exponential", M=1, qz=1.0, tau=2.0), n_radial=16, n_phi=16,
                                   kperp_max=3.0))
    g = PositionGrid.centered((16, 16, 8), 0.4, "open")
    F1 = synthesize_rs(coherent_average(f, 1), g).F
    E1 = field_energy_momentum(synthesize_rs(coherent_average(f, 1), g))[0]
    worst_f = worst_e = 0.0
    for N in (2, 4, 9, 10, 1000):
        FN = synthesize_rs(coherent_average(f, N), g).F
        EN = field_energy_momentum(synthesize_rs(coherent_average(f, N), g))[0]
        worst_f = max(worst_f, np.max(np.abs(FN - math.sqrt(N) * F1)) / np.max(np.abs(FN)))
        worst_e = max(worst_e, abs(EN / (N * E1) - 1))
    print(f"AC10 worst field scaling error {worst_f:.1e}, energy scaling error {worst_e:.1e}")
    assert worst_f < 1e-14
    assert worst_e < 1e-13
    assert np.array_equal(synthesize_rs(coherent_average(f, 4), g).F, 2 * F1)
