"""Uniform position grids and vector calculus on them.

Vector fields are complex arrays of shape (3, Nx, Ny, Nz). Derivatives are
spectral (FFT, periodic boxes only) or central finite differences of order
4 or 8. On open grids the finite-difference stencils see edge-replicated
values, so the outer ``order // 2`` layers are not accurate; use
``PositionGrid.interior`` to mask them out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import PhotonError

_WORKERS = 1

# central first-derivative stencils (offsets 1..p), antisymmetric
_FD1 = {
    2: [1 / 2],
    4: [2 / 3, -1 / 12],
    6: [3 / 4, -3 / 20, 1 / 60],
    8: [4 / 5, -1 / 5, 4 / 105, -1 / 280],
}
# central second-derivative stencils: centre weight, then offsets 1..p
_FD2 = {
    2: (-2.0, [1.0]),
    4: (-5 / 2, [4 / 3, -1 / 12]),
    8: (-205 / 72, [8 / 5, -1 / 5, 8 / 315, -1 / 560]),
}


def set_workers(n: int | None) -> None:
    """Thread count handed to scipy.fft (``None`` or -1 for all cores)."""
    global _WORKERS
    _WORKERS = -1 if n in (None, -1) else max(1, int(n))


def workers() -> int:
    return _WORKERS


@dataclass(frozen=True)
class PositionGrid:
    origin: tuple
    spacing: tuple
    shape: tuple
    boundary: str = "periodic"

    def __post_init__(self):
        origin = tuple(float(x) for x in self.origin)
        spacing = tuple(float(x) for x in self.spacing)
        shape = tuple(int(x) for x in self.shape)
        if len(origin) != 3 or len(spacing) != 3 or len(shape) != 3:
            raise PhotonError("grid needs three axes")
        if any(s <= 0 for s in spacing):
            raise PhotonError("grid spacing must be positive")
        if any(n < 2 for n in shape):
            raise PhotonError("grid shape must be at least 2 per axis")
        if self.boundary not in ("periodic", "open"):
            raise PhotonError("boundary must be 'periodic' or 'open'")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "shape", shape)

    @classmethod
    def centered(cls, shape, spacing, boundary: str = "periodic") -> "PositionGrid":
        """Grid symmetric about the origin: x_i = (i - (N-1)/2) d."""
        shape = tuple(int(n) for n in np.broadcast_to(shape, (3,)))
        spacing = tuple(float(d) for d in np.broadcast_to(spacing, (3,)))
        origin = tuple(-(n - 1) / 2.0 * d for n, d in zip(shape, spacing))
        return cls(origin, spacing, shape, boundary)

    @classmethod
    def box(cls, lengths, shape, boundary: str = "periodic") -> "PositionGrid":
        """Periodic box of the given side lengths, centred on the origin."""
        shape = tuple(int(n) for n in np.broadcast_to(shape, (3,)))
        lengths = tuple(float(x) for x in np.broadcast_to(lengths, (3,)))
        return cls.centered(shape, [L / n for L, n in zip(lengths, shape)], boundary)

    @property
    def lengths(self) -> tuple:
        return tuple(n * d for n, d in zip(self.shape, self.spacing))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis(self, i: int) -> np.ndarray:
        return self.origin[i] + self.spacing[i] * np.arange(self.shape[i])

    def axes(self) -> list[np.ndarray]:
        return [self.axis(i) for i in range(3)]

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(*self.axes(), indexing="ij"))

    def wavenumbers(self, i: int) -> np.ndarray:
        return 2.0 * np.pi * fft.fftfreq(self.shape[i], self.spacing[i])

    def kmesh(self, sparse: bool = True):
        return np.meshgrid(*[self.wavenumbers(i) for i in range(3)], indexing="ij", sparse=sparse)

    def nyquist(self) -> np.ndarray:
        return np.pi / np.asarray(self.spacing)

    def interior(self, margin: int) -> tuple:
        """Slices dropping ``margin`` layers on every face (for open grids)."""
        if margin <= 0:
            return (slice(None),) * 3
        return tuple(slice(margin, n - margin) for n in self.shape)

    def same_as(self, other: "PositionGrid") -> bool:
        return (
            self.shape == other.shape
            and self.boundary == other.boundary
            and np.allclose(self.origin, other.origin, rtol=0, atol=1e-12 * max(self.lengths))
            and np.allclose(self.spacing, other.spacing, rtol=1e-12, atol=0)
        )

    def to_dict(self) -> dict:
        return {"origin": list(self.origin), "spacing": list(self.spacing),
                "shape": list(self.shape), "boundary": self.boundary}

    @classmethod
    def from_dict(cls, d: dict) -> "PositionGrid":
        try:
            return cls(d["origin"], d["spacing"], d["shape"], d.get("boundary", "periodic"))
        except (KeyError, TypeError) as exc:
            raise PhotonError(f"malformed grid record: {exc}") from None


def require_same_grid(a: PositionGrid, b: PositionGrid) -> None:
    if not a.same_as(b):
        raise PhotonError("grid mismatch")


# --------------------------------------------------------------------------
# derivative engine
# --------------------------------------------------------------------------

class Calculus:
    """Vector calculus bound to one grid and one derivative scheme.

    ``method`` is ``spectral`` (periodic only) or ``fd``; ``order`` picks the
    finite-difference stencil (2, 4, 6 or 8).
    """

    def __init__(self, grid: PositionGrid, method: str = "spectral", order: int = 4):
        if method not in ("spectral", "fd"):
            raise PhotonError(f"unknown derivative method {method!r}")
        if method == "spectral" and grid.boundary != "periodic":
            raise PhotonError("spectral derivatives need a periodic grid")
        if method == "fd" and order not in _FD1:
            raise PhotonError(f"unsupported finite-difference order {order}")
        self.grid = grid
        self.method = method
        self.order = order
        if method == "spectral":
            ks = []
            for i in range(3):
                k = grid.wavenumbers(i).copy()
                n = grid.shape[i]
                if n % 2 == 0:
                    k[n // 2] = 0.0  # odd derivative of the Nyquist mode is dropped
                shape = [1, 1, 1]
                shape[i] = n
                ks.append(k.reshape(shape))
            self._ik = [1j * k for k in ks]
            k2 = [(grid.wavenumbers(i) ** 2).reshape([n if j == i else 1 for j, n in enumerate(grid.shape)])
                  for i in range(3)]
            self._k2 = k2

    @property
    def margin(self) -> int:
        if self.method == "spectral" or self.grid.boundary == "periodic":
            return 0
        return self.order // 2

    # ---- primitive first/second derivatives ----
    def _shift(self, a, s, axis):
        if self.grid.boundary == "periodic":
            return np.roll(a, -s, axis=axis)
        n = a.shape[axis]
        idx = np.clip(np.arange(n) + s, 0, n - 1)
        return np.take(a, idx, axis=axis)

    def d(self, a: np.ndarray, axis: int) -> np.ndarray:
        """First derivative of a scalar field along grid axis 0, 1 or 2."""
        if self.method == "spectral":
            return fft.ifft(fft.fft(a, axis=axis, workers=_WORKERS) * self._ik[axis].reshape(
                [a.shape[axis] if j == axis else 1 for j in range(a.ndim)]), axis=axis, workers=_WORKERS)
        h = self.grid.spacing[axis]
        out = np.zeros_like(a)
        for j, c in enumerate(_FD1[self.order], start=1):
            out += c * (self._shift(a, j, axis) - self._shift(a, -j, axis))
        return out / h

    def d2(self, a: np.ndarray, axis: int) -> np.ndarray:
        if self.method == "spectral":
            k2 = self._k2[axis].reshape([a.shape[axis] if j == axis else 1 for j in range(a.ndim)])
            return fft.ifft(-k2 * fft.fft(a, axis=axis, workers=_WORKERS), axis=axis, workers=_WORKERS)
        h = self.grid.spacing[axis]
        order = self.order if self.order in _FD2 else 4
        c0, cs = _FD2[order]
        out = c0 * a
        for j, c in enumerate(cs, start=1):
            out = out + c * (self._shift(a, j, axis) + self._shift(a, -j, axis))
        return out / h ** 2

    # ---- vector operators ----
    def grad(self, a: np.ndarray) -> np.ndarray:
        return np.stack([self.d(a, i) for i in range(3)])

    def div(self, v: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            vh = fft.fftn(v, axes=(1, 2, 3), workers=_WORKERS)
            s = self._ik[0] * vh[0] + self._ik[1] * vh[1] + self._ik[2] * vh[2]
            return fft.ifftn(s, axes=(0, 1, 2), workers=_WORKERS)
        return self.d(v[0], 0) + self.d(v[1], 1) + self.d(v[2], 2)

    def curl(self, v: np.ndarray) -> np.ndarray:
        if self.method == "spectral":
            vh = fft.fftn(v, axes=(1, 2, 3), workers=_WORKERS)
            ikx, iky, ikz = self._ik
            c = np.stack([
                iky * vh[2] - ikz * vh[1],
                ikz * vh[0] - ikx * vh[2],
                ikx * vh[1] - iky * vh[0],
            ])
            return fft.ifftn(c, axes=(1, 2, 3), workers=_WORKERS)
        return np.stack([
            self.d(v[2], 1) - self.d(v[1], 2),
            self.d(v[0], 2) - self.d(v[2], 0),
            self.d(v[1], 0) - self.d(v[0], 1),
        ])

    def laplacian(self, a: np.ndarray) -> np.ndarray:
        if a.ndim == 4:
            return np.stack([self.laplacian(c) for c in a])
        return self.d2(a, 0) + self.d2(a, 1) + self.d2(a, 2)


def l2(a: np.ndarray, sl=None) -> float:
    if sl is not None:
        a = a[(Ellipsis,) + tuple(sl)] if a.ndim > 3 else a[tuple(sl)]
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))
