"""Command-line front end.

Subcommands: beam, analyze, split, lp, propagate, report. Exit codes: 0 ok,
2 invalid input (bad beam parameters, malformed or missing file, zero field), 3 CFL
violation, 4 non-finite field during propagation.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from . import generators as gen
from .errors import CFLViolation, NonFiniteStateError, PhotonError
from .grid import PositionGrid, set_workers
from .helicity import (
    helicity_split,
    landau_peierls,
    LPWaveFunction,
    lp_expectation,
    momentum_stokes,
    orbital_spin_split,
    poincare_point,
    stokes,
)
from .io import (
    dump_json,
    load_json,
    read_field,
    read_wavefunction,
    write_field,
    write_stokes_map,
    write_table,
    write_wavefunction,
)
from .medium import (
    PropagationState,
    StepperConfig,
    build_medium,
    evolve,
    gaussian_pulse,
    mixing_measure,
    tanh_slab,
)
from .momentum import BeamSpec, MomentumWaveFunction, make_beam
from .synthesis import (
    RSField,
    field_energy_momentum,
    helicity_energies,
    maxwell_residual,
    synthesize_rs,
)
from .units import DEFAULT_LENGTH_UNIT, to_si, units_block

EXIT_INPUT, EXIT_CFL, EXIT_NAN = 2, 3, 4


# --------------------------------------------------------------------------
# run configuration
# --------------------------------------------------------------------------

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Strict):
    shape: list[int]
    box: Optional[list[float]] = None
    spacing: Optional[list[float]] = None
    boundary: Literal["periodic", "open"] = "periodic"

    @model_validator(mode="after")
    def _one_size(self):
        if (self.box is None) == (self.spacing is None):
            raise ValueError("give exactly one of 'box' or 'spacing'")
        return self

    def build(self) -> PositionGrid:
        shape = _triple(self.shape)
        if self.box is not None:
            return PositionGrid.box(_triple(self.box), shape, self.boundary)
        return PositionGrid.centered(shape, _triple(self.spacing), self.boundary)


class BeamConfig(_Strict):
    family: str
    M: int = 0
    omega: Optional[float] = None
    qz: Optional[float] = None
    Omega: Optional[float] = None
    n: int = 0
    l: Optional[float] = None
    tau: Optional[float] = None
    helicity: Literal[1, -1] = 1
    n_phi: int = 64
    n_radial: int = 64
    tail: float = 1e-10
    lattice: Optional[list[float]] = None
    kperp_max: Optional[float] = None

    def spec(self) -> BeamSpec:
        return BeamSpec(self.family, self.M, self.omega, self.qz, self.Omega, self.n, self.l, self.tau, self.helicity)


class PulseConfig(_Strict):
    k0: list[float]
    width: float
    center: list[float] = [0.0, 0.0, 0.0]
    helicity: Literal[1, -1] = 1
    amplitude: float = 1.0


class MediumConfig(_Strict):
    profile: Literal["vacuum", "tanh_slab", "file"] = "vacuum"
    eps: float = 1.0
    mu: float = 1.0
    inside_eps: float = 1.0
    inside_mu: float = 1.0
    axis: int = 2
    center: float = 0.0
    half_width: float = 1.0
    smoothing: Optional[float] = None
    file: Optional[str] = None
    time_dependent: bool = False

    @model_validator(mode="after")
    def _static(self):
        if self.time_dependent:
            raise ValueError("time-dependent media are not supported")
        if self.profile == "file" and not self.file:
            raise ValueError("profile 'file' needs 'file'")
        return self


class RunConfig(_Strict):
    command: Literal["propagate"] = "propagate"
    grid: GridConfig
    medium: MediumConfig = MediumConfig()
    beam: Optional[BeamConfig] = None
    pulse: Optional[PulseConfig] = None
    dt: Optional[float] = None
    cfl: float = 0.5
    scheme: Literal["rk4_spectral", "rk4_fd4"] = "rk4_spectral"
    form: Literal["symmetric", "literal"] = "symmetric"
    t_end: Optional[float] = None
    periods: Optional[float] = None
    cadence: int = 1
    snapshots: bool = False

    @model_validator(mode="after")
    def _choices(self):
        if (self.beam is None) == (self.pulse is None):
            raise ValueError("give exactly one of 'beam' or 'pulse'")
        if (self.t_end is None) == (self.periods is None):
            raise ValueError("give exactly one of 't_end' or 'periods'")
        return self


def _triple(x):
    x = list(x)
    if len(x) == 1:
        return x * 3
    if len(x) != 3:
        raise PhotonError("expected 1 or 3 values")
    return x


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------

def _out(args, name: str) -> Path:
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def _ext(args) -> str:
    return "csv" if args.format == "csv" else "json"


def _emit(args, report: dict, name: str) -> None:
    report = dict(report)
    report["units"] = units_block(args.si, args.length_unit)
    path = _out(args, name)
    dump_json(report, path)
    print(path)


def _si(args, value, kind):
    return to_si(value, kind, args.length_unit) if args.si else value


def _parse_helicity(s: str) -> int:
    s = str(s).strip()
    if s in ("+", "+1", "1", "plus"):
        return 1
    if s in ("-", "-1", "minus"):
        return -1
    raise PhotonError(f"helicity must be + or -, got {s!r}")


def _auto_grid(f: MomentumWaveFunction, shape, boundary: str) -> PositionGrid:
    kmax = np.max(np.abs(f.kvec), axis=0)
    kmax = np.where(kmax > 0, kmax, np.max(kmax))
    return PositionGrid.centered(shape, 0.8 * np.pi / kmax, boundary)


def _beam_from_args(args) -> tuple[BeamSpec, dict]:
    spec = BeamSpec(
        args.family, args.M, args.omega, args.qz, args.Omega, args.n, args.l, args.tau,
        _parse_helicity(args.helicity),
    )
    kw = {}
    if spec.family == "bessel":
        kw["n_phi"] = args.n_phi
    else:
        kw.update(n_phi=args.n_phi, n_radial=args.n_radial, tail=args.tail)
    if args.lattice:
        kw["lattice_box"] = tuple(args.lattice)
    return spec, kw


def _grid_from_args(args, f: MomentumWaveFunction) -> PositionGrid:
    shape = _triple(args.grid)
    if args.lattice:
        return PositionGrid.box(args.lattice, shape, "periodic")
    if args.box:
        return PositionGrid.box(_triple(args.box), shape, args.boundary)
    if args.spacing:
        return PositionGrid.centered(shape, _triple(args.spacing), args.boundary)
    return _auto_grid(f, shape, args.boundary)


def _wavefunction_report(f: MomentumWaveFunction, args) -> dict:
    rep = gen.report(f)
    L, S = orbital_spin_split(f)
    ms = momentum_stokes(f)
    rep["orbital"] = L
    rep["spin"] = S
    rep["normalizable"] = f.normalizable
    rep["manifold"] = f.manifold
    rep["reduced_params"] = f.reduced_params
    rep["stokes_momentum"] = {k: float(v) for k, v in zip(("S0", "S1", "S2", "S3"), ms.as_tuple())}
    M = f.reduced_params.get("M")
    res = {}
    if "omega" in f.reduced_params:
        res["H_eigen"] = gen.eigen_residual(f, "H", f.reduced_params["omega"])
    if "qz" in f.reduced_params and f.manifold == "ring":
        res["Pz_eigen"] = gen.eigen_residual(f, "Pz", f.reduced_params["qz"])
    if M is not None and "Jz" in gen.available_generators(f):
        res["Jz_eigen"] = gen.eigen_residual(f, "Jz", M)
    rep["residuals"].update(res)
    if args.si:
        rep["H"] = _si(args, rep["H"], "energy")
        rep["P"] = _si(args, rep["P"], "momentum")
        rep["J"] = _si(args, rep["J"], "angular_momentum")
        rep["orbital"] = _si(args, list(L), "angular_momentum")
        rep["spin"] = _si(args, list(S), "angular_momentum")
    return rep


def _field_report(field: RSField, header: dict, args) -> dict:
    E, P, imag = field_energy_momentum(field)
    if E <= 0.0:
        raise PhotonError("zero total energy")
    if not field.has_split:
        field = helicity_split(field) if field.grid.boundary == "periodic" else field
    rep = {"energy": _si(args, E, "energy"), "momentum": _si(args, list(P), "momentum"),
           "momentum_imag_rel": imag}
    if field.has_split:
        ep, em = helicity_energies(field)
        rep["helicity_energy"] = {"plus": ep, "minus": em}
        rep["helicity_fraction"] = {"plus": ep / (ep + em), "minus": em / (ep + em)}
        st = stokes(field).integrated(field.grid.cell_volume)
        pt, ok = poincare_point(st)
        rep["stokes"] = {k: float(v) for k, v in zip(("S0", "S1", "S2", "S3"), st.as_tuple())}
        rep["poincare_point"] = pt.tolist() if bool(ok) else None
        res = {}
        if field.omega is not None:
            try:
                c, d = maxwell_residual(field)
                res["curl"], res["div"] = c, d
            except PhotonError as exc:
                res["note"] = str(exc)
        rep["residuals"] = res
    src = header.get("source")
    if src:
        f = MomentumWaveFunction.from_dict(src)
        if "Jz" in gen.available_generators(f):
            rep["Jz_over_hbar"] = gen.expectation_value(f, "Jz", per_unit_norm=True)
        else:
            rep["Jz_over_hbar"] = None
            rep["Jz_note"] = "source support is not sampled uniformly in phi (lattice beam); Jz is undefined there"
        rep["H_momentum"] = gen.expectation_value(f, "H", per_unit_norm=True)
    elif field.has_split and field.grid.boundary == "periodic":
        try:
            lp = landau_peierls(field)
            rep["Jz_over_hbar"] = lp_expectation(lp, "Jz")
            rep["Jz_note"] = "position-space estimate; meaningful for fields decaying inside the box"
        except PhotonError as exc:
            rep["Jz_note"] = str(exc)
    return rep


def _load_any(path):
    rec = load_json(path) if not str(path).endswith(".csv") else {"kind": "rs_field"}
    if rec.get("kind") == "momentum_wavefunction":
        return "wavefunction", MomentumWaveFunction.from_dict(rec), rec
    field, header = read_field(path)
    return "field", field, header


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_beam(args) -> int:
    spec, kw = _beam_from_args(args)
    f = make_beam(spec, **kw)
    path = _out(args, "wavefunction.json")
    write_wavefunction(f, path, si=args.si, length_unit=args.length_unit)
    print(path)
    if args.synth:
        grid = _grid_from_args(args, f)
        field = synthesize_rs(f, grid, args.time)
        fpath = _out(args, f"field.{_ext(args)}")
        write_field(field, fpath, _ext(args), args.si, args.length_unit, extra={"source": f.to_dict()})
        print(fpath)
    return 0


def cmd_analyze(args) -> int:
    kind, obj, header = _load_any(args.input)
    if kind == "wavefunction":
        rep = _wavefunction_report(obj, args)
    else:
        rep = _field_report(obj, header, args)
        if args.split:
            _write_split(obj, args)
        if args.stokes_map:
            split = obj if obj.has_split else helicity_split(obj, args.method)
            write_stokes_map(split.grid, stokes(split), _out(args, "stokes.csv"), {"units": units_block(args.si, args.length_unit)})
    _emit(args, rep, "report.json")
    return 0


def _write_split(field: RSField, args) -> dict:
    split = helicity_split(field, args.method) if not field.has_split else field
    ext = _ext(args)
    plus = RSField(split.grid, split.psi_plus, split.time, omega=split.omega, meta={"component": "psi_plus"})
    minus = RSField(split.grid, split.psi_minus, split.time, omega=split.omega, meta={"component": "psi_minus"})
    for name, fl in (("psi_plus", plus), ("psi_minus", minus)):
        p = _out(args, f"{name}.{ext}")
        write_field(fl, p, ext, args.si, args.length_unit)
        print(p)
    ep, em = helicity_energies(split)
    if ep + em <= 0:
        raise PhotonError("zero total energy")
    return {"plus": ep / (ep + em), "minus": em / (ep + em)}


def cmd_split(args) -> int:
    kind, field, _ = _load_any(args.input)
    if kind != "field":
        raise PhotonError("split needs a field file")
    if not np.any(field.F):
        raise PhotonError("zero total energy")
    # recompute the split from F so the command is a real projection
    field = RSField(field.grid, field.F, field.time, omega=field.omega, meta=field.meta)
    fr = _write_split(field, args)
    _emit(args, {"helicity_fraction": fr, "method": args.method}, "split_report.json")
    return 0


def cmd_lp(args) -> int:
    kind, obj, header = _load_any(args.input)
    if kind != "field":
        raise PhotonError("lp needs a field file")
    ext = _ext(args)
    if args.inverse:
        if not header.get("meta", {}).get("landau_peierls"):
            raise PhotonError("input is not a Landau-Peierls file")
        lpw = LPWaveFunction(obj.grid, obj.psi_plus, obj.psi_minus, obj.time)
        field = landau_peierls(lpw, "inverse")
        p = _out(args, f"field_from_lp.{ext}")
        write_field(field, p, ext, args.si, args.length_unit)
        print(p)
        return 0
    if not np.any(obj.F):
        raise PhotonError("zero total energy")
    lpw = landau_peierls(obj, "forward", args.method)
    wrapped = RSField.from_pair(lpw.grid, lpw.phi_plus, lpw.phi_minus, lpw.time, meta={"landau_peierls": True})
    p = _out(args, f"lp.{ext}")
    write_field(wrapped, p, ext, args.si, args.length_unit)
    print(p)
    rep = {"norm": lpw.norm_squared()}
    for g in ("H", "Px", "Py", "Pz", "Jz"):
        val = lp_expectation(lpw, g)
        kind_ = {"H": "energy", "J": "angular_momentum", "P": "momentum"}[g[0]]
        rep[g] = _si(args, val, kind_)
    _emit(args, rep, "lp_report.json")
    return 0


def _medium_from_config(mc: MediumConfig, grid: PositionGrid):
    if mc.profile == "vacuum":
        return mc.eps, mc.mu
    if mc.profile == "tanh_slab":
        eps = tanh_slab(grid, mc.axis, mc.center, mc.half_width, mc.inside_eps, mc.eps, mc.smoothing)
        mu = tanh_slab(grid, mc.axis, mc.center, mc.half_width, mc.inside_mu, mc.mu, mc.smoothing)
        return eps, mu
    p = Path(mc.file)
    if not p.is_file():
        raise PhotonError(f"medium file not found: {mc.file}")
    try:
        with np.load(p) as data:
            return np.asarray(data["eps"], dtype=float), np.asarray(data["mu"], dtype=float)
    except (KeyError, ValueError, OSError) as exc:
        raise PhotonError(f"malformed medium file {mc.file}: {exc}") from None


def run_propagation(cfg: RunConfig, out_dir: Path, fmt: str = "json", si: bool = False,
                    length_unit: float = DEFAULT_LENGTH_UNIT, log=print) -> dict:
    grid = cfg.grid.build()
    eps, mu = _medium_from_config(cfg.medium, grid)
    method = ("spectral", 4) if cfg.scheme == "rk4_spectral" else ("fd", 4)
    medium = build_medium(eps, mu, grid, *method)
    omega = None
    if cfg.beam is not None:
        bc = cfg.beam
        kw = {"n_phi": bc.n_phi}
        if bc.family not in ("bessel",):
            kw.update(n_radial=bc.n_radial, tail=bc.tail, kperp_max=bc.kperp_max)
        if bc.lattice:
            kw["lattice_box"] = tuple(bc.lattice)
        f = make_beam(bc.spec(), **kw)
        field = synthesize_rs(f, grid, 0.0)
        pp, pm = field.psi_plus, field.psi_minus
        omega = field.omega
    else:
        pc = cfg.pulse
        pp, pm = gaussian_pulse(grid, pc.k0, pc.width, pc.center, pc.helicity)
        pp, pm = pc.amplitude * pp, pc.amplitude * pm
        omega = float(np.linalg.norm(pc.k0))
    if cfg.t_end is not None:
        t_end = cfg.t_end
    else:
        if not omega:
            raise PhotonError("'periods' needs a carrier frequency")
        t_end = cfg.periods * 2.0 * math.pi / omega
    dt_bound = cfg.cfl * min(grid.spacing) / float(np.max(medium.v))
    dt = cfg.dt if cfg.dt is not None else dt_bound
    sc = StepperConfig(dt=dt, cfl=cfg.cfl, scheme=cfg.scheme, form=cfg.form, cadence=cfg.cadence)
    st0 = PropagationState(pp, pm)
    st = evolve(st0, medium, sc, t_end)
    rows = st.diagnostics
    diag_path = out_dir / "diagnostics.csv"
    write_table(rows, diag_path, {"units": units_block(si, length_unit), "dt": st.time / max(st.step_count, 1)})
    log(str(diag_path))
    e0 = rows[0]["energy"]
    rep = {
        "steps": st.step_count,
        "t_end": st.time,
        "dt": st.time / max(st.step_count, 1),
        "energy_initial": e0,
        "energy_final": rows[-1]["energy"],
        "energy_drift_rel": (rows[-1]["energy"] - e0) / e0 if e0 > 0 else None,
        "mixing_final": mixing_measure(st),
        "mixing_max": max(r["frac_minus"] for r in rows),
    }
    rep["l2_final_vs_initial"] = _rel_l2(st.psi_plus, st.psi_minus, pp, pm)
    if cfg.beam is not None and field.omega is not None and medium.vacuum_like and np.ptp(medium.v) == 0.0:
        # monochromatic field in a uniform medium only picks up a phase
        ph = np.exp(-1j * omega * st.time * float(medium.v.flat[0]))
        rep["l2_vs_exact_phase"] = _rel_l2(st.psi_plus, st.psi_minus, ph * pp, ph * pm)
    if cfg.snapshots:
        snap = RSField.from_pair(grid, st.psi_plus, st.psi_minus, st.time)
        p = out_dir / f"final_field.{fmt}"
        write_field(snap, p, fmt, si, length_unit)
        log(str(p))
    return rep


def _rel_l2(ap, am, bp, bm) -> float:
    num = math.sqrt(np.sum(np.abs(ap - bp) ** 2) + np.sum(np.abs(am - bm) ** 2))
    den = math.sqrt(np.sum(np.abs(bp) ** 2) + np.sum(np.abs(bm) ** 2))
    return num / den if den > 0 else float("nan")


def cmd_propagate(args) -> int:
    if args.config:
        raw = load_json(args.config)
    else:
        raw = _propagate_flags_to_config(args)
    try:
        cfg = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise PhotonError(f"invalid run config: {exc}") from None
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rep = run_propagation(cfg, out_dir, _ext(args), args.si, args.length_unit)
    _emit(args, rep, "propagate_report.json")
    return 0


def _propagate_flags_to_config(args) -> dict:
    if args.family is None:
        raise PhotonError("propagate needs --config or --family")
    grid = {"shape": args.grid, "box": args.box} if args.box else {"shape": args.grid, "spacing": args.spacing or [0.5]}
    beam = {"family": args.family, "M": args.M, "helicity": _parse_helicity(args.helicity)}
    for k in ("omega", "qz", "Omega", "l", "tau"):
        if getattr(args, k) is not None:
            beam[k] = getattr(args, k)
    if args.lattice:
        beam["lattice"] = args.lattice
    cfg = {"grid": grid, "beam": beam, "cfl": args.cfl, "scheme": args.scheme}
    if args.dt is not None:
        cfg["dt"] = args.dt
    if args.medium_file:
        cfg["medium"] = {"profile": "file", "file": args.medium_file}
    if args.t_end is not None:
        cfg["t_end"] = args.t_end
    else:
        cfg["periods"] = args.periods
    return cfg


def cmd_report(args) -> int:
    kind, obj, header = _load_any(args.input)
    if kind == "wavefunction":
        rep = _wavefunction_report(obj, args)
    else:
        rep = _field_report(obj, header, args)
    _emit(args, rep, "observables.json")
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_global(p, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--out", default=d("."), help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--threads", type=int, default=d(1), help="FFT worker threads")
    p.add_argument("--seed", type=int, default=d(0), help="seed for randomized data")
    p.add_argument("--si", action="store_true", default=d(False), help="report physical quantities in SI")
    p.add_argument("--length-unit", type=float, default=d(DEFAULT_LENGTH_UNIT),
                   help="metres per natural length unit (for --si)")


def _add_beam_args(p, required: bool = True):
    p.add_argument("--family", required=required, choices=("bessel", "lg", "laguerre_gauss", "exponential", "exp"))
    p.add_argument("--M", type=int, default=0)
    p.add_argument("--omega", type=float)
    p.add_argument("--qz", type=float)
    p.add_argument("--Omega", type=float)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--l", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--helicity", default="+")
    p.add_argument("--lattice", type=float, nargs=3, metavar=("LX", "LY", "LZ"),
                   help="restrict to the reciprocal lattice of this periodic box")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="photonqm", description="Photon wave functions, fields and helicity tools.")
    _add_global(ap, False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("beam", help="construct a beam wave function (and optionally its field)")
    _add_global(p, True)
    _add_beam_args(p)
    p.add_argument("--n-phi", type=int, default=64)
    p.add_argument("--n-radial", type=int, default=64)
    p.add_argument("--tail", type=float, default=1e-10)
    p.add_argument("--synth", action="store_true", help="also synthesize the RS field")
    p.add_argument("--grid", type=int, nargs="+", default=[64])
    p.add_argument("--spacing", type=float, nargs="+")
    p.add_argument("--box", type=float, nargs="+")
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument("--time", type=float, default=0.0)
    p.set_defaults(func=cmd_beam)

    for name, func, hlp in (("analyze", cmd_analyze, "observables of a field or wave function"),
                            ("report", cmd_report, "generator expectation values")):
        p = sub.add_parser(name, help=hlp)
        _add_global(p, True)
        p.add_argument("input")
        p.add_argument("--method", choices=("fourier", "kernel"), default="fourier")
        if name == "analyze":
            p.add_argument("--split", action="store_true", help="also write the helicity components")
            p.add_argument("--stokes-map", action="store_true", help="write a pointwise Stokes CSV")
        else:
            p.set_defaults(split=False, stokes_map=False)
        p.set_defaults(func=func)

    p = sub.add_parser("split", help="helicity decomposition of a field")
    _add_global(p, True)
    p.add_argument("input")
    p.add_argument("--method", choices=("fourier", "kernel"), default="fourier")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("lp", help="Landau-Peierls transform")
    _add_global(p, True)
    p.add_argument("input")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--method", choices=("fourier", "kernel"), default="fourier")
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("propagate", help="evolve through a static medium")
    _add_global(p, True)
    p.add_argument("--config", help="run configuration JSON")
    _add_beam_args(p, required=False)
    p.add_argument("--grid", type=int, nargs="+", default=[32])
    p.add_argument("--box", type=float, nargs="+")
    p.add_argument("--spacing", type=float, nargs="+")
    p.add_argument("--dt", type=float)
    p.add_argument("--cfl", type=float, default=0.5)
    p.add_argument("--scheme", choices=("rk4_spectral", "rk4_fd4"), default="rk4_spectral")
    p.add_argument("--t-end", type=float)
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--medium-file", help="npz with eps and mu arrays")
    p.set_defaults(func=cmd_propagate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    set_workers(args.threads)
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except CFLViolation as exc:
        print(f"error: CFL violation: {exc}", file=sys.stderr)
        return EXIT_CFL
    except NonFiniteStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NAN
    except PhotonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
