"""Exact prefix sums of lattice weights over a fixed integer box.

Used by the fast maximal-function sweeps: a sup-metric ball is a box, so its
mass and integral cost four lookups; a Euclidean ball costs one lookup pair
per row.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch
from .functions import TestFunction
from .geometry import Ball, MetricKind, Window, lattice_rows
from .measures import DiscreteWeights


class LatticeSums:
    def __init__(self, mu: DiscreteWeights, f: TestFunction | None, window: Window):
        if mu.dim != window.dim:
            raise DimensionMismatch("window/measure dimension mismatch")
        self.window = window
        self.dim = mu.dim
        shape = tuple(h - l + 1 for l, h in zip(window.lo, window.hi))
        w = np.empty(shape, dtype=object)
        fw = np.empty(shape, dtype=object)
        for key in window.points():
            idx = tuple(k - l for k, l in zip(key, window.lo))
            weight = mu.exact_weight(key)
            if weight is None:
                raise ValueError("prefix sums need exact weights")
            w[idx] = weight
            if f is not None:
                v = f.lattice_value(key)
                if not isinstance(v, (int,)) and not hasattr(v, "denominator"):
                    raise ValueError("prefix sums need exact function values")
                fw[idx] = weight * v
            else:
                fw[idx] = 0
        self.mass_box = self._sat(w)
        self.int_box = self._sat(fw)
        if self.dim == 2:
            self.mass_rows = self._rows(w)
            self.int_rows = self._rows(fw)

    @staticmethod
    def _sat(arr):
        out = np.zeros(tuple(s + 1 for s in arr.shape), dtype=object)
        if arr.ndim == 1:
            out[1:] = np.cumsum(arr)
        else:
            out[1:, 1:] = np.cumsum(np.cumsum(arr, axis=0), axis=1)
        return out

    @staticmethod
    def _rows(arr):
        # cumulative along n for each fixed m: rows[m_idx][n_idx + 1]
        out = np.zeros((arr.shape[1], arr.shape[0] + 1), dtype=object)
        out[:, 1:] = np.cumsum(arr.T, axis=1)
        return out

    def _box(self, sat, n_lo, n_hi, m_lo=None, m_hi=None):
        a0 = n_lo - self.window.lo[0]
        a1 = n_hi - self.window.lo[0] + 1
        if a0 < 0 or a1 > sat.shape[0] - 1:
            raise IndexError("ball leaves the prefix-sum window")
        if self.dim == 1:
            return sat[a1] - sat[a0]
        b0 = m_lo - self.window.lo[1]
        b1 = m_hi - self.window.lo[1] + 1
        if b0 < 0 or b1 > sat.shape[1] - 1:
            raise IndexError("ball leaves the prefix-sum window")
        return sat[a1, b1] - sat[a0, b1] - sat[a1, b0] + sat[a0, b0]

    def box(self, n_lo, n_hi, m_lo=None, m_hi=None):
        """(mass, integral) over an inclusive integer box."""
        return (
            self._box(self.mass_box, n_lo, n_hi, m_lo, m_hi),
            self._box(self.int_box, n_lo, n_hi, m_lo, m_hi),
        )

    def ball(self, b: Ball):
        """(mass, integral) of an open ball lying inside the window."""
        if self.dim == 1 or b.metric == MetricKind.SUPREMUM:
            rows = list(lattice_rows(b))
            if not rows:
                return 0, 0
            if self.dim == 1:
                _, lo, hi = rows[0]
                return self.box(lo, hi)
            return self.box(rows[0][1], rows[0][2], rows[0][0], rows[-1][0])
        mass = integral = 0
        for m, lo, hi in lattice_rows(b):
            j = m - self.window.lo[1]
            a0 = lo - self.window.lo[0]
            a1 = hi - self.window.lo[0] + 1
            if j < 0 or j >= self.mass_rows.shape[0] or a0 < 0 or a1 > self.mass_rows.shape[1] - 1:
                raise IndexError("ball leaves the prefix-sum window")
            mass += self.mass_rows[j, a1] - self.mass_rows[j, a0]
            integral += self.int_rows[j, a1] - self.int_rows[j, a0]
        return mass, integral
