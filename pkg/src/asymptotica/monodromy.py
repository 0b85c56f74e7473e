"""Derivative of the first-return map along a closed asymptotic line.

The flow near the curve is dy/dx = p, dz/dx = A + B p with
p = (-e_y y - e_z z)/2f + O(2), so the variational system is Q' = M(x) Q,
Q(0) = I, with

    M(x) = [    -e_y/2f            -e_z/2f       ]
           [ A_y - B e_y/2f     A_z - B e_z/2f   ]   at (x, 0, 0),

where A = -a/c and B = -b/c.  The B terms in the second row carry the
dz/dx-coupling to the slope and vanish only where b does; the independent
finite-difference Jacobian below cross-checks them.  Q(period) is the
derivative of the return map at the fixed point; the orbit is hyperbolic
when both eigenvalues stay off the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import flow, tubular
from .spectral import TrigSeries


class ParabolicOnCurve(Exception):
    """f(x,0,0) = 0 somewhere on the curve; the variational matrix is undefined."""


def variational_matrix(field, chart, x):
    """M(x) from jet partials of the reduced coefficient pipeline."""
    d = tubular.chart_data(field, chart, float(x), 0.0, 0.0, order=1)
    f = d.value("f")
    if abs(f) < 1e-12:
        raise ParabolicOnCurve(f"f(x,0,0) = {f} at x = {x}")
    b0 = d.value("B")
    m11 = -d.partial("e", "y") / (2 * f)
    m12 = -d.partial("e", "z") / (2 * f)
    return np.array(
        [
            [m11, m12],
            [d.partial("A", "y") + b0 * m11, d.partial("A", "z") + b0 * m12],
        ]
    )


class VariationalCache:
    """Trigonometric interpolants of the four entries of M over one period.

    Entries are sampled at uniform nodes with one vectorized pipeline pass
    and validated against direct evaluation between nodes; the node count
    doubles until the residual passes.  This makes the Q integration (and the
    diagonal quadratures) cheap without touching accuracy.
    """

    def __init__(self, field, chart, period, nodes=256, tol=1e-9, max_nodes=2048):
        self.period = float(period)
        n = nodes
        while True:
            xs = np.arange(n) * (self.period / n)
            entries = self._sample(field, chart, xs)
            series = [TrigSeries.from_samples(v, self.period) for v in entries]
            probe = xs + self.period / (2 * n)
            ref = self._sample(field, chart, probe)
            res = max(
                float(np.max(np.abs(s(probe) - r))) / max(1.0, float(np.max(np.abs(v))))
                for s, r, v in zip(series, ref, entries)
            )
            if res <= tol:
                self.series = series
                self.nodes = n
                self.residual = res
                return
            if 2 * n > max_nodes:
                raise ParabolicOnCurve(f"variational entries failed to interpolate (residual {res})")
            n *= 2

    @staticmethod
    def _sample(field, chart, xs):
        d = tubular.chart_data(field, chart, np.asarray(xs, dtype=float), 0.0, 0.0, order=1)
        f = np.asarray(d.value("f"), dtype=float)
        if np.any(np.abs(f) < 1e-12):
            raise ParabolicOnCurve("f(x,0,0) vanishes at a sample node")
        b0 = np.asarray(d.value("B"), dtype=float)
        m11 = -np.asarray(d.partial("e", "y")) / (2 * f)
        m12 = -np.asarray(d.partial("e", "z")) / (2 * f)
        return (
            m11 + 0 * f,
            m12 + 0 * f,
            np.asarray(d.partial("A", "y"), dtype=float) + b0 * m11 + 0 * f,
            np.asarray(d.partial("A", "z"), dtype=float) + b0 * m12 + 0 * f,
        )

    def matrix(self, x):
        m11, m12, m21, m22 = (float(s(x)) for s in self.series)
        return np.array([[m11, m12], [m21, m22]])


@dataclass
class MonodromyResult:
    Q: np.ndarray
    eigenvalues: tuple
    hyperbolic: bool
    classification: str  # "Hyperbolic" | "NonHyperbolic"
    unit_circle_distance: float
    tolerance: float
    triangular: bool
    integrals: dict
    det_residual: float
    stats: dict

    def to_dict(self):
        return {
            "Q": [[float(v) for v in row] for row in self.Q],
            "eigenvalues": [{"re": ev.real, "im": ev.imag} for ev in self.eigenvalues],
            "hyperbolic": bool(self.hyperbolic),
            "classification": self.classification,
            "unit_circle_distance": self.unit_circle_distance,
            "tolerance": self.tolerance,
            "triangular": self.triangular,
            "integrals": {k: float(v) for k, v in self.integrals.items()},
            "det_residual": self.det_residual,
        }


def eigenvalues_2x2(Q):
    """Closed-form eigenvalues, with the small root recovered from det/trace."""
    tr = Q[0, 0] + Q[1, 1]
    det = Q[0, 0] * Q[1, 1] - Q[0, 1] * Q[1, 0]
    disc = tr * tr - 4 * det
    if disc >= 0:
        r = math.sqrt(disc)
        l1 = (tr + r) / 2 if tr >= 0 else (tr - r) / 2
        l2 = det / l1 if l1 != 0 else (tr - l1)
        return complex(l1), complex(l2)
    r = math.sqrt(-disc)
    return complex(tr / 2, r / 2), complex(tr / 2, -r / 2)


def monodromy(field, chart, period, tol=1e-6, cache=None, rtol=1e-11, atol=1e-13, checkpoints=None):
    """Solve Q' = M(x) Q over one period and classify hyperbolicity.

    cache may be a prebuilt VariationalCache (reused across calls), True/None
    to build one, or False to evaluate M directly at every integrator stage.
    checkpoints, when given, collects (x, Q(x)) pairs at that many uniform
    stations for identity tests.
    """
    period = float(period)
    if cache is False:
        mfn = lambda x: variational_matrix(field, chart, x)
        vc = None
    else:
        vc = cache if isinstance(cache, VariationalCache) else VariationalCache(field, chart, period)
        mfn = vc.matrix

    if checkpoints:
        stations = list(np.linspace(0.0, period, checkpoints + 1)[1:])
    else:
        stations = [period]

    def rhs(x, qflat):
        return (mfn(x) @ qflat.reshape(2, 2)).reshape(4)

    collected = []
    q = np.eye(2).reshape(4)
    x_prev = 0.0
    for x_next in stations:
        _, q, stats = flow.rk45(rhs, x_prev, x_next, q, rtol=rtol, atol=atol)
        x_prev = x_next
        collected.append((float(x_next), q.reshape(2, 2).copy()))
    Q = q.reshape(2, 2)

    ev = eigenvalues_2x2(Q)
    dist = min(abs(abs(e) - 1.0) for e in ev)
    hyperbolic = dist > tol

    # Liouville identity: det Q(l) = exp of the integrated trace
    trace_integral = quad(lambda x: float(np.trace(mfn(x))), 0.0, period, limit=200, epsabs=1e-12)[0]
    detQ = float(np.linalg.det(Q))
    det_residual = abs(detQ - math.exp(trace_integral)) / max(abs(detQ), 1e-300)

    # when M is triangular the eigenvalues are exponentials of the diagonal integrals
    if vc is not None:
        xs_probe = np.linspace(0.0, period, 64, endpoint=False)
        off_upper = float(np.max(np.abs(vc.series[1](xs_probe))))
        off_lower = float(np.max(np.abs(vc.series[2](xs_probe))))
    else:
        ms = [mfn(x) for x in np.linspace(0.0, period, 32, endpoint=False)]
        off_upper = max(abs(m[0, 1]) for m in ms)
        off_lower = max(abs(m[1, 0]) for m in ms)
    triangular = min(off_upper, off_lower) < 1e-7
    integrals = {"trace": trace_integral}
    if triangular:
        i11 = quad(lambda x: float(mfn(x)[0, 0]), 0.0, period, limit=200, epsabs=1e-12)[0]
        i22 = quad(lambda x: float(mfn(x)[1, 1]), 0.0, period, limit=200, epsabs=1e-12)[0]
        integrals.update(
            {
                "diag_first": i11,
                "diag_second": i22,
                "eigen_from_first": math.exp(i11),
                "eigen_from_second": math.exp(i22),
            }
        )

    result = MonodromyResult(
        Q=Q,
        eigenvalues=ev,
        hyperbolic=hyperbolic,
        classification="Hyperbolic" if hyperbolic else "NonHyperbolic",
        unit_circle_distance=dist,
        tolerance=tol,
        triangular=triangular,
        integrals=integrals,
        det_residual=det_residual,
        stats=stats,
    )
    if checkpoints:
        result.stats = dict(stats, checkpoints=collected)
    return result


def fd_poincare_derivative(field, chart, period, h=1e-5, rtol=1e-11, atol=1e-14, cache=None):
    """Central-difference Jacobian of the actual return map at the fixed point.

    This is the independent oracle for the variational route: it only uses
    the flow integrator, never the variational matrix.  By default the
    right-hand side is evaluated through a ChartSpectralCache (validated
    against the direct pipeline), which keeps the evaluation smooth enough
    for the central differences to resolve; pass cache=False to force the
    direct per-step pipeline.
    """
    if not (1e-8 < h < chart.radius):
        raise ValueError(f"step h = {h} outside (1e-8, tube radius {chart.radius})")
    if cache is None:
        cache = flow.ChartSpectralCache(field, chart, float(period))
    elif cache is False:
        cache = None
    starts = np.array([[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
    ends = flow.integrate_batch(field, chart, starts, 0.0, float(period), rtol=rtol, atol=atol, cache=cache)
    col_y = (ends[0] - ends[1]) / (2 * h)
    col_z = (ends[2] - ends[3]) / (2 * h)
    return np.column_stack([col_y, col_z])
