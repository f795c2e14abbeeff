"""Rectangular node lattice in the physical (transformed) plane."""

from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall


@dataclass(frozen=True)
class Grid2:
    """Nodes ``origin + (i*hx, j*hy)`` for ``0 <= i < nx``, ``0 <= j < ny``.

    Arrays living on the grid have shape ``(nx, ny)`` and are indexed
    ``[i, j]`` with ``i`` along x.
    """

    origin: tuple[float, float]
    spacing: tuple[float, float]
    counts: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "spacing", tuple(float(v) for v in self.spacing))
        object.__setattr__(self, "counts", tuple(int(v) for v in self.counts))
        if len(self.origin) != 2 or len(self.spacing) != 2 or len(self.counts) != 2:
            raise ValueError("origin, spacing and counts must each have 2 entries")
        if not all(np.isfinite(self.origin)):
            raise ValueError("grid origin must be finite")
        if not all(h > 0 and np.isfinite(h) for h in self.spacing):
            raise ValueError(f"grid spacing must be positive, got {self.spacing}")
        if min(self.counts) < 3:
            raise GridTooSmall(f"need at least 3 nodes per axis, got {self.counts}")

    @classmethod
    def square(cls, lower, upper, n):
        """``n`` x ``n`` nodes covering the box ``lower``..``upper`` inclusive."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        h = (upper - lower) / (n - 1)
        return cls(tuple(lower), tuple(h), (n, n))

    @property
    def shape(self):
        return self.counts

    @property
    def size(self):
        return self.counts[0] * self.counts[1]

    @property
    def h(self):
        """Characteristic spacing, ``max(hx, hy)``."""
        return max(self.spacing)

    @property
    def extent(self):
        return tuple(o + h * (n - 1) for o, h, n in zip(self.origin, self.spacing, self.counts))

    def axes(self):
        x = self.origin[0] + self.spacing[0] * np.arange(self.counts[0])
        y = self.origin[1] + self.spacing[1] * np.arange(self.counts[1])
        return x, y

    def coordinates(self):
        """Return ``(X, Y)`` arrays of shape ``(nx, ny)``."""
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="ij")

    def nodes(self):
        """Node positions as complex numbers ``x + iy``, shape ``(nx, ny)``."""
        X, Y = self.coordinates()
        return X + 1j * Y

    def refined(self):
        """Same box with spacing halved (``n -> 2n - 1`` nodes per axis)."""
        return Grid2(
            self.origin,
            (self.spacing[0] / 2, self.spacing[1] / 2),
            (2 * self.counts[0] - 1, 2 * self.counts[1] - 1),
        )

    def interior_mask(self):
        mask = np.zeros(self.counts, dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask
