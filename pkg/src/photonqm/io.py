"""File formats: JSON/CSV for wave functions, fields, Stokes maps and diagnostics.

JSON numbers use Python's shortest round-trip float repr (bit exact and
deterministic); CSV cells use 17 significant digits.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import PhotonError
from .grid import PositionGrid
from .momentum import MomentumWaveFunction
from .synthesis import RSField
from .units import DEFAULT_LENGTH_UNIT, units_block

FMT = "%.17g"


def _clean(obj):
    """Make numpy scalars/arrays JSON-friendly; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(_clean(obj), indent=1, sort_keys=False) + "\n")


def load_json(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise PhotonError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise PhotonError(f"malformed JSON in {path}: {exc}") from None


# --------------------------------------------------------------------------
# wave functions
# --------------------------------------------------------------------------

def wavefunction_record(f: MomentumWaveFunction, si: bool = False, length_unit: float = DEFAULT_LENGTH_UNIT) -> dict:
    rec = {"kind": "momentum_wavefunction", "units": units_block(si, length_unit)}
    rec.update(f.to_dict())
    return rec


def write_wavefunction(f: MomentumWaveFunction, path, **kw) -> None:
    dump_json(wavefunction_record(f, **kw), path)


def read_wavefunction(path) -> MomentumWaveFunction:
    rec = load_json(path)
    if rec.get("kind", "momentum_wavefunction") != "momentum_wavefunction":
        raise PhotonError(f"{path} is not a wave function file")
    return MomentumWaveFunction.from_dict(rec)


# --------------------------------------------------------------------------
# fields
# --------------------------------------------------------------------------

def _field_header(field: RSField, si, length_unit, extra=None) -> dict:
    h = {
        "kind": "rs_field",
        "units": units_block(si, length_unit),
        "grid": field.grid.to_dict(),
        "time": field.time,
        "omega": field.omega,
        "has_split": field.has_split,
        "columns": _columns(field),
        "meta": field.meta,
    }
    if extra:
        h.update(extra)
    return h


def _columns(field: RSField) -> list[str]:
    cols = ["x", "y", "z"]
    names = ("psi_plus", "psi_minus") if field.has_split else ("F",)
    for n in names:
        for c in "xyz":
            cols += [f"re_{n}_{c}", f"im_{n}_{c}"]
    return cols


def _field_rows(field: RSField) -> np.ndarray:
    X, Y, Z = field.grid.mesh()
    cols = [X.ravel(), Y.ravel(), Z.ravel()]
    arrs = (field.psi_plus, field.psi_minus) if field.has_split else (field.F,)
    for a in arrs:
        for c in range(3):
            cols += [a[c].real.ravel(), a[c].imag.ravel()]
    return np.stack(cols, axis=1)


def write_field(field: RSField, path, fmt: str = "json", si: bool = False,
                length_unit: float = DEFAULT_LENGTH_UNIT, extra: dict | None = None) -> None:
    """Header plus one row per node: x, y, z and Re/Im of each component."""
    header = _field_header(field, si, length_unit, extra)
    rows = _field_rows(field)
    if fmt == "json":
        header["nodes"] = rows
        dump_json(header, path)
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write("# " + json.dumps(_clean(header)) + "\n")
            w = csv.writer(fh)
            w.writerow(header["columns"])
            for r in rows:
                w.writerow([FMT % x for x in r])
    else:
        raise PhotonError(f"unknown format {fmt!r}")


def _assemble(header: dict, rows: np.ndarray) -> RSField:
    grid = PositionGrid.from_dict(header["grid"])
    n = int(np.prod(grid.shape))
    if rows.shape[0] != n:
        raise PhotonError(f"field has {rows.shape[0]} nodes, grid needs {n}")
    data = rows[:, 3:]

    def vec(off):
        comps = [data[:, off + 2 * c] + 1j * data[:, off + 2 * c + 1] for c in range(3)]
        return np.stack([c.reshape(grid.shape) for c in comps])

    if header.get("has_split"):
        if data.shape[1] != 12:
            raise PhotonError("split field needs 12 value columns")
        return RSField.from_pair(grid, vec(0), vec(6), header.get("time", 0.0), header.get("omega"),
                                 header.get("meta") or {})
    if data.shape[1] != 6:
        raise PhotonError("field needs 6 value columns")
    return RSField(grid, vec(0), header.get("time", 0.0), omega=header.get("omega"), meta=header.get("meta") or {})


def read_field(path) -> tuple[RSField, dict]:
    """Field and its header (which may embed the source wave function)."""
    p = Path(path)
    if not p.is_file():
        raise PhotonError(f"no such file: {path}")
    try:
        if p.suffix == ".csv":
            with open(p) as fh:
                first = fh.readline()
                if not first.startswith("# "):
                    raise PhotonError("CSV field file lacks its header line")
                header = json.loads(first[2:])
                rd = csv.reader(fh)
                next(rd)
                rows = np.array([[float(x) for x in r] for r in rd], dtype=float)
        else:
            header = load_json(p)
            if header.get("kind") != "rs_field":
                raise PhotonError(f"{path} is not a field file")
            rows = np.asarray(header.pop("nodes"), dtype=float)
        return _assemble(header, rows), header
    except (KeyError, ValueError, TypeError, IndexError, StopIteration) as exc:
        raise PhotonError(f"malformed field file {path}: {exc}") from None


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------

def write_table(rows: list[dict], path, header: dict | None = None) -> None:
    """CSV of dict rows; floats with 17 significant digits."""
    if not rows:
        raise PhotonError("empty table")
    cols = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        if header is not None:
            fh.write("# " + json.dumps(_clean(header)) + "\n")
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            w.writerow([FMT % r[c] if isinstance(r[c], float) else r[c] for c in cols])


def write_stokes_map(grid: PositionGrid, st, path, header: dict | None = None) -> None:
    X, Y, Z = grid.mesh()
    rows = np.stack([X.ravel(), Y.ravel(), Z.ravel()] + [np.asarray(s).ravel() for s in st.as_tuple()], axis=1)
    with open(path, "w", newline="") as fh:
        if header is not None:
            fh.write("# " + json.dumps(_clean(header)) + "\n")
        w = csv.writer(fh)
        w.writerow(["x", "y", "z", "S0", "S1", "S2", "S3"])
        for r in rows:
            w.writerow([FMT % x for x in r])


def write_line_cut(field: RSField, path, axis: int = 0, through=(0.0, 0.0, 0.0)) -> None:
    """Intensity |F|^2 and helicity densities along one grid line through ``through``."""
    g = field.grid
    idx = [int(np.argmin(np.abs(g.axis(i) - through[i]))) for i in range(3)]
    sl = list(idx)
    sl[axis] = slice(None)
    sl = tuple(sl)
    coord = g.axis(axis)
    inten = np.sum(np.abs(field.F[(slice(None),) + sl]) ** 2, axis=0)
    rows = []
    for j, x in enumerate(coord):
        row = {"s": float(x), "intensity": float(inten[j])}
        if field.has_split:
            row["plus"] = float(np.sum(np.abs(field.psi_plus[(slice(None),) + sl][:, j]) ** 2))
            row["minus"] = float(np.sum(np.abs(field.psi_minus[(slice(None),) + sl][:, j]) ** 2))
        rows.append(row)
    write_table(rows, path)


def write_structured_ascii(field: RSField, path, quantity: str = "intensity") -> None:
    """Legacy VTK structured-points file of |F|^2 for external viewers."""
    g = field.grid
    val = np.sum(np.abs(field.F) ** 2, axis=0)
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{quantity}\nASCII\nDATASET STRUCTURED_POINTS\n")
        fh.write("DIMENSIONS %d %d %d\n" % g.shape)
        fh.write("ORIGIN " + " ".join(FMT % o for o in g.origin) + "\n")
        fh.write("SPACING " + " ".join(FMT % d for d in g.spacing) + "\n")
        fh.write(f"POINT_DATA {val.size}\nSCALARS {quantity} double 1\nLOOKUP_TABLE default\n")
        # VTK wants x fastest
        for x in np.transpose(val, (2, 1, 0)).ravel():
            fh.write(FMT % x + "\n")
