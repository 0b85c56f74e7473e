"""Tubular chart around a core curve and the reduction of the asymptotic-line
equation to a binary quadratic form.

In chart coordinates (x, y, z) the asymptotic-line condition splits into a
linear equation a dx + b dy + c dz = 0 and a quadratic one with coefficients
L1..L6.  Solving the linear one for dz (possible wherever c != 0) reduces the
quadratic to e dx^2 + 2 f dx dy + g dy^2 = 0; the sign of eg - f^2 classifies
points, and eg - f^2 itself is the Gaussian curvature of the plane field.

All partial derivatives here come from jet arithmetic, never from divided
differences: the monodromy eigenvalues downstream are exponentially sensitive
to the entries built from these partials.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import jets
from .jets import value_of


class ReductionSingular(Exception):
    """c = 0 at the requested point: dz cannot be solved for."""


class PointClass(enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    FULLY_DEGENERATE = "FullyDegenerate"

    def __str__(self):
        return self.value


class TubularChart:
    """alpha(x, y, z) = gamma(x) + y Y(x) + z Z(x) around the core curve."""

    def __init__(self, curve, radius=0.1):
        self.curve = curve
        self.radius = float(radius)

    def alpha(self, x, y, z):
        g, X, Y, Z = self.curve.frame_vectors(x)
        return tuple(g[i] + y * Y[i] + z * Z[i] for i in range(3))

    def point(self, x, y, z):
        return np.array([float(value_of(c)) for c in self.alpha(x, y, z)])

    def inside(self, y, z):
        return abs(y) <= self.radius and abs(z) <= self.radius


@dataclass
class ChartData:
    """Reduced binary-equation data at one chart point (or an array of them).

    The jet fields keep derivative information up to the order requested from
    chart_data; scalar convenience accessors read the plain values.
    """

    x: object
    y: object
    z: object
    a: object
    b: object
    c: object
    L: tuple
    e: object
    f: object
    g: object
    A: object
    B: object

    def value(self, name):
        return value_of(getattr(self, name))

    def partial(self, name, var):
        j = getattr(self, name)
        index = {"x": 0, "y": 1, "z": 2}[var]
        if not isinstance(j, jets.Jet):
            return 0.0
        exps = tuple(1 if i == index else 0 for i in range(3))
        return j.deriv(*exps)

    @property
    def K(self):
        return self.value("e") * self.value("g") - self.value("f") ** 2


def _partial_vec(vec, i):
    return [comp.partial(i) if isinstance(comp, jets.Jet) else 0 for comp in vec]


def _truncate(v, order):
    return v.truncated(order) if isinstance(v, jets.Jet) else v


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def chart_data(field, chart, x, y, z, order=0, c_tol=1e-13):
    """Evaluate the full coefficient pipeline at a chart point.

    order is the jet order retained on the outputs: 0 for plain values,
    1 when first partials in (x, y, z) are wanted.  x, y, z may be numpy
    arrays (broadcast evaluation at many points at once).
    """
    q = order + 1
    xj, yj, zj = jets.seed((x, y, z), q)
    xi = field.chart_components(chart, xj, yj, zj)
    alpha = chart.alpha(xj, yj, zj)
    d_alpha = [_partial_vec(alpha, i) for i in range(3)]
    d_xi = [_partial_vec(xi, i) for i in range(3)]
    xi_t = [_truncate(cmp, order) for cmp in xi]

    a = _dot(xi_t, d_alpha[0])
    b = _dot(xi_t, d_alpha[1])
    c = _dot(xi_t, d_alpha[2])
    L1 = _dot(d_xi[0], d_alpha[0])
    L2 = _dot(d_xi[0], d_alpha[1]) + _dot(d_xi[1], d_alpha[0])
    L3 = _dot(d_xi[1], d_alpha[1])
    L4 = _dot(d_xi[0], d_alpha[2]) + _dot(d_xi[2], d_alpha[0])
    L5 = _dot(d_xi[1], d_alpha[2]) + _dot(d_xi[2], d_alpha[1])
    L6 = _dot(d_xi[2], d_alpha[2])

    cv = value_of(c)
    if np.any(np.abs(cv) < c_tol):
        raise ReductionSingular(f"c = {cv} at (x, y, z) = ({x}, {y}, {z})")

    A = -(a / c)
    B = -(b / c)
    e = L1 + A * L4 + A * A * L6
    # substituting dz = A dx + B dy into L6 dz^2 puts 2AB L6 on the dx dy
    # coefficient, so the mixed reduced coefficient carries the full AB L6
    # (gauge invariance of the root slopes pins this down)
    f = L2 / 2 + (A * L5 + B * L4) / 2 + A * B * L6
    g = L3 + B * L5 + B * B * L6
    return ChartData(x=x, y=y, z=z, a=a, b=b, c=c, L=(L1, L2, L3, L4, L5, L6), e=e, f=f, g=g, A=A, B=B)


def linear_coeffs(field, chart, x, y, z):
    d = chart_data(field, chart, x, y, z, order=0)
    return d.value("a"), d.value("b"), d.value("c")


def quadratic_coeffs(field, chart, x, y, z):
    d = chart_data(field, chart, x, y, z, order=0)
    return tuple(value_of(Li) for Li in d.L)


def reduce(field, chart, x, y, z):
    d = chart_data(field, chart, x, y, z, order=0)
    return d.value("e"), d.value("f"), d.value("g")


def gaussian_curvature(field, chart, x, y, z):
    return chart_data(field, chart, x, y, z, order=0).K


def classify(field, chart, point, tol=1e-8):
    """Sign classification of eg - f^2, scale-free, with a Parabolic band."""
    e, f, g = reduce(field, chart, *point)
    scale = max(abs(e), abs(f), abs(g), 1.0)
    if max(abs(e), abs(f), abs(g)) <= tol * scale:
        return PointClass.FULLY_DEGENERATE
    K = (e * g - f * f) / scale**2
    if K < -tol:
        return PointClass.HYPERBOLIC
    if K > tol:
        return PointClass.ELLIPTIC
    return PointClass.PARABOLIC


def binary_equation_data(field, chart):
    """A callable (x, y, z) -> (e, f, g, A, B) of plain values, array-capable.

    This is the interface the flow integrator consumes.
    """

    def efgab(x, y, z):
        d = chart_data(field, chart, x, y, z, order=0)
        return (d.value("e"), d.value("f"), d.value("g"), d.value("A"), d.value("B"))

    return efgab
