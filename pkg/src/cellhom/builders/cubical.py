"""Pure cubical complexes: occupancy arrays of unit cubes and their face lattices."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.ndimage import maximum_filter

from ..cw import RegularCW


class EmptyComplex(ValueError):
    pass


class UnassignedCube(ValueError):
    pass


@dataclass
class PureCubical:
    """Union of the closed unit cubes ``[a, a+1]^n`` with ``occupancy[a]`` true."""

    occupancy: np.ndarray

    def __post_init__(self):
        self.occupancy = np.asarray(self.occupancy, dtype=bool)
        if self.occupancy.ndim < 1:
            raise ValueError("occupancy must have at least one axis")

    @property
    def dimension(self) -> int:
        return self.occupancy.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.occupancy.shape

    def cube_count(self) -> int:
        return int(self.occupancy.sum())

    def to_json(self) -> dict:
        return {"shape": list(self.shape), "cells": self.occupancy.astype(int).ravel().tolist()}

    @classmethod
    def from_json(cls, data) -> "PureCubical":
        return cls(np.asarray(data["cells"], dtype=bool).reshape(data["shape"]))


def pure_complement(N: PureCubical) -> PureCubical:
    """Closure of the complement of ``N`` in its bounding box padded by one cube layer."""
    if not N.occupancy.any():
        raise EmptyComplex("complement of an empty complex is undefined")
    padded = np.pad(N.occupancy, 1, constant_values=False)
    return PureCubical(~padded)


def cell_presence(N: PureCubical) -> np.ndarray:
    """Presence of every cell on the doubled lattice (odd coordinates span a direction)."""
    occ = N.occupancy
    doubled = np.zeros(tuple(2 * s + 1 for s in occ.shape), dtype=bool)
    doubled[tuple(slice(1, None, 2) for _ in occ.shape)] = occ
    return maximum_filter(doubled, size=3, mode="constant", cval=False)


def to_regular_cw(N: PureCubical) -> RegularCW:
    """Face lattice of a pure cubical complex.

    Cells of each dimension are numbered by the lexicographic order of their
    doubled coordinates; the boundary list of a cell runs over its spanning
    axes in increasing order, lower face before upper face.
    """
    if not N.occupancy.any():
        raise EmptyComplex("no filled cube")
    present = cell_presence(N)
    d = present.ndim
    odd = [(np.arange(s) % 2 == 1) for s in present.shape]
    nodd = np.zeros(present.shape, dtype=np.int8)
    for ax in range(d):
        shape = [1] * d
        shape[ax] = -1
        nodd = nodd + odd[ax].reshape(shape)
    number = np.full(present.shape, -1, dtype=np.int64)
    coords = []
    for n in range(d + 1):
        sel = present & (nodd == n)
        pts = np.argwhere(sel)
        number[tuple(pts.T)] = np.arange(len(pts))
        coords.append(pts)
    indptr, indices = [], []
    for n in range(d + 1):
        pts = coords[n]
        m = len(pts)
        ptr = np.arange(m + 1, dtype=np.int64) * (2 * n)
        out = np.empty((m, 2 * n), dtype=np.int64)
        if n and m:
            is_odd = pts % 2 == 1
            for axes in combinations(range(d), n):
                mask = np.all(is_odd[:, list(axes)], axis=1)
                if not mask.any():
                    continue
                sub = pts[mask]
                cols = []
                for ax in axes:
                    for step in (-1, 1):
                        q = sub.copy()
                        q[:, ax] += step
                        cols.append(number[tuple(q.T)])
                out[mask] = np.stack(cols, axis=1)
        indptr.append(ptr)
        indices.append(out.ravel())
    return RegularCW(indptr, indices, {"doubled_coordinates": coords})


def temperature_extrusion(Y: PureCubical, assignment) -> PureCubical:
    """Lift a 3-dimensional complex to four dimensions by temperatures.

    ``assignment`` maps each filled cube (an index tuple) to one temperature
    or a sequence of temperatures; it can be a dict, a callable or an integer
    array of the occupancy's shape (one temperature per cube).  The 4-cube
    at ``(x, y, z, t)`` is filled exactly when ``t`` is a temperature of
    ``(x, y, z)``.
    """
    if Y.dimension != 3:
        raise ValueError("temperature extrusion needs a 3-dimensional complex")
    cubes = [tuple(int(v) for v in p) for p in np.argwhere(Y.occupancy)]
    temps: dict[tuple, list[int]] = {}
    for c in cubes:
        if isinstance(assignment, np.ndarray):
            val = assignment[c]
        elif callable(assignment):
            val = assignment(c)
        else:
            val = assignment.get(c)
        if val is None:
            raise UnassignedCube(f"cube {c} has no temperature")
        vals = [int(val)] if np.isscalar(val) else [int(v) for v in val]
        if not vals:
            raise UnassignedCube(f"cube {c} has no temperature")
        temps[c] = vals
    lo = min(min(v) for v in temps.values())
    hi = max(max(v) for v in temps.values())
    occ = np.zeros(Y.shape + (hi - lo + 1,), dtype=bool)
    for c, vals in temps.items():
        for t in vals:
            occ[c + (t - lo,)] = True
    return PureCubical(occ)


def annulus() -> PureCubical:
    """The square annulus made of eight unit squares around a hole."""
    return PureCubical(np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=bool))
