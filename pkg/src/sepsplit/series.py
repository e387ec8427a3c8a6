"""Truncated inverse-power series sum_{l=1}^{N} c_l / z^l.

The asymptotic seeds of the inner-equation modes live in this algebra.
All operations truncate at the shorter operand's order; coefficients past
the truncation order are treated as zero, so callers that need exactness
after multiplying by z^p must carry guard terms (see inner_solver, which
pads seed construction and truncates at the end).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class InverseZSeries:
    """Coefficients c_1..c_N of sum c_l / z^l (no constant term)."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @classmethod
    def zero(cls, order: int) -> "InverseZSeries":
        return cls((0j,) * order)

    @property
    def order_N(self) -> int:
        return len(self.coeffs)

    @property
    def leading_order(self) -> int:
        """Index of the first nonzero coefficient; order_N + 1 for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i + 1
        return self.order_N + 1

    def __add__(self, other: "InverseZSeries") -> "InverseZSeries":
        n = min(self.order_N, other.order_N)
        return InverseZSeries(tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __sub__(self, other: "InverseZSeries") -> "InverseZSeries":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, InverseZSeries):
            return self._convolve(other)
        return InverseZSeries(tuple(complex(other) * c for c in self.coeffs))

    __rmul__ = __mul__

    def _convolve(self, other: "InverseZSeries") -> "InverseZSeries":
        n = min(self.order_N, other.order_N)
        full = np.convolve(np.asarray(self.coeffs), np.asarray(other.coeffs))
        out = np.zeros(n, complex)
        # full[i] carries the power i + 2
        out[1:] = full[: n - 1]
        return InverseZSeries(tuple(out))

    def differentiate(self) -> "InverseZSeries":
        """d/dz, truncated back to the same order.

        c_l / z^l differentiates to -l c_l / z^{l+1}; the term that falls
        past the truncation order is dropped.
        """
        out = [0j] * self.order_N
        for l in range(2, self.order_N + 1):
            out[l - 1] = -(l - 1) * self.coeffs[l - 2]
        return InverseZSeries(tuple(out))

    def times_z_power(self, p: int) -> "InverseZSeries":
        """Multiply by z^p (p >= 0), keeping the truncation order.

        The first p coefficients would land on nonnegative powers of z and
        must be zero.  The last p output coefficients are unknown at this
        truncation order and are zero-filled; callers carry guard terms.
        """
        if p < 0:
            raise ValueError("p must be nonnegative")
        if any(c != 0 for c in self.coeffs[:p]):
            raise ValueError("z^p shift would create nonnegative powers of z")
        out = list(self.coeffs[p:]) + [0j] * p
        return InverseZSeries(tuple(out))

    def truncated(self, order: int) -> "InverseZSeries":
        if order > self.order_N:
            raise ValueError("cannot extend a truncated series")
        return InverseZSeries(self.coeffs[:order])

    def eval(self, z):
        """Evaluate by Horner in 1/z.  Works on scalars and numpy arrays."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = (acc + c) / z
        return acc
