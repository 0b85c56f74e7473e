"""Trigonometric interpolation of smooth periodic functions of one variable.

A TrigSeries stores the Fourier coefficients obtained from samples at N
uniform nodes over one period.  For trigonometric polynomials of degree
< N/2 the interpolant is exact; for other analytic periodic functions the
node count is doubled until an off-node residual check passes, so the error
is spectrally small.  Evaluation is ring-generic: floats, numpy arrays, and
jets (through univariate Taylor recomposition) are all supported.
"""

from __future__ import annotations

import numpy as np

from . import jets


class TrigSeries:
    """sum_k a_k cos(k w x) + b_k sin(k w x) with w = 2 pi / period."""

    def __init__(self, cos_coeffs, sin_coeffs, period):
        self.cos_coeffs = np.asarray(cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(sin_coeffs, dtype=float)
        self.period = float(period)
        self.omega = 2.0 * np.pi / self.period
        self._k = np.arange(len(self.cos_coeffs))

    @classmethod
    def fit(cls, fn, period, nodes=64, tol=1e-11, max_nodes=4096):
        """Interpolate fn at uniform nodes, doubling until off-node residuals pass.

        fn must accept a numpy array of sample points.
        """
        n = int(nodes)
        while True:
            xs = np.arange(n) * (period / n)
            vals = np.asarray(fn(xs), dtype=float)
            series = cls._from_samples(vals, period)
            # probe at every midpoint of the sample grid, where the
            # interpolation error is largest
            probe = xs + period / (2 * n)
            ref = np.asarray(fn(probe), dtype=float)
            scale = max(1.0, float(np.max(np.abs(vals))))
            if np.max(np.abs(series(probe) - ref)) <= tol * scale:
                return series
            if 2 * n > max_nodes:
                raise ValueError(f"trigonometric fit did not converge below {tol} with {max_nodes} nodes")
            n *= 2

    @classmethod
    def from_samples(cls, values, period):
        return cls._from_samples(np.asarray(values, dtype=float), period)

    @classmethod
    def _from_samples(cls, vals, period):
        n = len(vals)
        spec = np.fft.rfft(vals) / n
        cos_c = 2.0 * spec.real
        sin_c = -2.0 * spec.imag
        cos_c[0] /= 2.0
        if n % 2 == 0:
            cos_c[-1] /= 2.0
        return cls(cos_c, sin_c, period)

    def _eval_scalar(self, x):
        t = self.omega * np.multiply.outer(np.asarray(x, dtype=float), self._k)
        return np.cos(t) @ self.cos_coeffs + np.sin(t) @ self.sin_coeffs

    def derivative(self):
        k = self._k * self.omega
        return TrigSeries(self.sin_coeffs * k, -self.cos_coeffs * k, self.period)

    def mean(self):
        return float(self.cos_coeffs[0])

    def __call__(self, x):
        if isinstance(x, jets.Jet):
            series = self
            derivs = []
            for _ in range(x.order + 1):
                derivs.append(series._eval_scalar(x.value))
                series = series.derivative()
            return x.compose_univariate(derivs)
        return self._eval_scalar(x)
