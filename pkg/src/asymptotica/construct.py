"""Constructions of plane fields in tubular-coefficient form.

A field here is determined along a core curve by the frame functions k0, l0
(forced by the requirement that the curve be an asymptotic line) together
with free coefficient functions of x multiplying the chart monomials
y, z, y^2/2, yz, z^2/2 on each frame direction.  The module provides:

  * the forced k0, l0;
  * the k1(H) choice that makes the curve parabolic-free with on-curve
    coefficient f = H (so the field's Gaussian curvature on the curve is
    -H^2);
  * an exact-series realization for polynomial local models (x, a_m x^m + ...,
    b_n x^n + ...), including the exact factoring of x^(m-2) that makes the
    chart reduction regular through x = 0;
  * the closed worked example on (sin x, cos x, sin^3 x) whose monodromy is
    triangular with explicitly integrable diagonal.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import jets, tubular
from .curves import Curve, finite_type_symbol
from .exprlang import compile_function
from .jets import Jet, value_of
from .rational_series import PowerSeriesQ, SeriesError
from .spectral import TrigSeries

COEFFICIENT_NAMES = (
    "k1", "k2", "k3", "l1", "l2", "l3",
    "kt1", "kt2", "kt3", "jt1", "jt2", "jt3", "lt1", "lt2", "lt3",
)
REMAINDER_NAMES = ("A", "B", "C")


class ConstructError(Exception):
    pass


class InflectionOfProjection(ConstructError):
    """gamma1' gamma2'' - gamma2' gamma1'' = 0: the k1 formula denominator vanishes."""


def k0_l0(curve, t):
    """The forced frame coefficients making the curve an asymptotic line."""
    d1 = [curve.component(i, t, 1) for i in range(3)]
    d2 = [curve.component(i, t, 2) for i in range(3)]
    k0 = d1[0] * d2[1] - d1[1] * d2[0]
    l0 = (d1[2] * d2[0] - d1[0] * d2[2]) * d1[0] + (d1[2] * d2[1] - d1[1] * d2[2]) * d1[1]
    return k0, l0


def _as_fn(spec):
    """Accept an expression string, a number, a callable, or None (zero)."""
    if spec is None:
        return None
    if callable(spec):
        return spec
    if isinstance(spec, (int, float, Fraction)):
        value = spec
        return lambda t: value
    return compile_function(str(spec), "x")


def k1_function(curve, l1=None, H=1):
    """The coefficient k1(x) that gives e(x,0,0) = 0 and f(x,0,0) = H(x).

    Ring-generic in x.  Raises InflectionOfProjection where the horizontal
    projection of the curve has an inflection (denominator zero); for
    polynomial local models with m > 2 that zero at x = 0 is removable and
    handled exactly by realize_t5 instead.
    """
    l1_fn = _as_fn(l1) or (lambda t: 0)
    H_fn = _as_fn(H)

    def k1(t):
        num, den = _k1_num_den(curve, t, l1_fn, H_fn)
        dv = value_of(den)
        if np.any(np.abs(np.asarray(dv, dtype=float)) < 1e-13):
            raise InflectionOfProjection(f"k1 denominator vanishes at x = {value_of(t)}")
        return num / den

    return k1


def _k1_num_den(curve, t, l1_fn, H_fn):
    d1 = [curve.component(i, t, 1) for i in range(3)]
    d2 = [curve.component(i, t, 2) for i in range(3)]
    d3 = [curve.component(i, t, 3) for i in range(3)]
    q = d1[0] * d1[0] + d1[1] * d1[1]
    s = q + d1[2] * d1[2]
    w = d1[0] * d2[1] - d1[1] * d2[0]
    tor = (
        (d2[1] * d3[2] - d2[2] * d3[1]) * d1[0]
        + (d2[2] * d3[0] - d2[0] * d3[2]) * d1[1]
        + (d2[0] * d3[1] - d2[1] * d3[0]) * d1[2]
    )
    lin = (d1[0] * d2[0] + d1[1] * d2[1]) * d1[2] - q * d2[2]
    num = q * q * tor + lin * l1_fn(t) + 2 * w * H_fn(t)
    den = s * w
    return num, den


class TubularField:
    """A plane field given by coefficient functions in the tubular chart."""

    def __init__(self, curve, coefficients=None, remainders=None, name=None):
        self.curve = curve
        self.coefficients = {}
        for key, spec in (coefficients or {}).items():
            if key not in COEFFICIENT_NAMES:
                raise ConstructError(f"unknown coefficient {key!r}")
            fn = _as_fn(spec)
            if fn is not None:
                self.coefficients[key] = fn
        self.remainders = {}
        for key, spec in (remainders or {}).items():
            if key not in REMAINDER_NAMES:
                raise ConstructError(f"unknown remainder {key!r}")
            fn = compile_function(str(spec), "x", "y", "z") if not callable(spec) else spec
            self.remainders[key] = fn
        self.name = name

    def coefficient(self, name):
        return self.coefficients.get(name)

    def xi_frame_polynomials(self, xj, yj, zj):
        """The three scalar factors multiplying X, Y, Z beyond l0 Y + k0 Z."""
        out = []
        for row, rem_name in ((1, "A"), (2, "B"), (3, "C")):
            acc = 0
            for key, monom in (
                (f"k{row}", yj),
                (f"l{row}", zj),
                (f"kt{row}", yj * yj / 2 if f"kt{row}" in self.coefficients else None),
                (f"jt{row}", yj * zj if f"jt{row}" in self.coefficients else None),
                # the z^2 coefficient on the Z row is displayed with weight 1/3
                # rather than 1/2; it is a free higher-order coefficient either
                # way, and the displayed weight is kept (see docs).
                (f"lt{row}", (zj * zj / 3 if row == 3 else zj * zj / 2) if f"lt{row}" in self.coefficients else None),
            ):
                fn = self.coefficients.get(key)
                if fn is not None:
                    acc = acc + monom * fn(xj)
            rem = self.remainders.get(rem_name)
            if rem is not None:
                acc = acc + rem(xj, yj, zj)
            out.append(acc)
        return tuple(out)

    def chart_components(self, chart, xj, yj, zj):
        curve = self.curve
        g, X, Y, Z = curve.frame_vectors(xj)
        k0, l0 = k0_l0(curve, xj)
        PX, PY, PZ = self.xi_frame_polynomials(xj, yj, zj)
        return tuple(
            l0 * Y[i] + k0 * Z[i] + PX * X[i] + PY * Y[i] + PZ * Z[i] for i in range(3)
        )

    def __repr__(self):
        keys = sorted(self.coefficients)
        return f"TubularField({self.name or 'anonymous'}, coefficients={keys})"


def build_field(curve, coefficients=None, remainders=None, name=None):
    return TubularField(curve, coefficients=coefficients, remainders=remainders, name=name)


def build_lac(curve, H=1, l1=None, extra=None, name=None):
    """Field with k1 chosen so the curve is parabolic-free and f(x,0,0) = H."""
    coeffs = dict(extra or {})
    if l1 is not None:
        coeffs["l1"] = l1
    coeffs["k1"] = k1_function(curve, l1=l1, H=H)
    return TubularField(curve, coefficients=coeffs, name=name)


# -- exact realization for polynomial local models ---------------------------


def _component_series(curve, i, order):
    u = Jet.variable(Fraction(0), 0, 1, order)
    v = curve.component(i, u)
    if not isinstance(v, Jet):
        return PowerSeriesQ.constant(v, order)
    coeffs = [v.coef.get((k,), 0) for k in range(order + 1)]
    if not all(isinstance(c, (int, Fraction)) for c in coeffs):
        raise ConstructError("exact realization needs rational polynomial components")
    return PowerSeriesQ(coeffs, order)


def realize_t5(curve, order=None):
    """Realize a finite-type polynomial local model as a parabolic-free
    asymptotic line; returns (field, certificate).

    The certificate is computed in exact rational arithmetic: the factoring
    of x^(m-2) from the on-curve linear coefficients b and c, the constant
    C(0,0,0) = a_m m (m-1) of the factored c, and the on-curve identities
    e = 0, f = 1 (hence Gaussian curvature -1) as power-series identities.
    """
    symbol = finite_type_symbol(curve, Fraction(0))
    m, n = symbol.m, symbol.n
    if order is None:
        order = m + n + 8
    g = [_component_series(curve, i, order) for i in range(3)]
    if g[0].coeffs[1] == 0:
        raise ConstructError("local model must be regular in x (gamma1' (0) != 0)")
    d1 = [gi.derivative() for gi in g]
    d2 = [di.derivative() for di in d1]
    d3 = [di.derivative() for di in d2]
    a_m = g[1].coeffs[m]

    q = d1[0] * d1[0] + d1[1] * d1[1]
    s = q + d1[2] * d1[2]
    k0 = d1[0] * d2[1] - d1[1] * d2[0]
    l0 = (d1[2] * d2[0] - d1[0] * d2[2]) * d1[0] + (d1[2] * d2[1] - d1[1] * d2[2]) * d1[1]

    b_curve = l0 * q
    c_curve = k0 * q * s
    try:
        b_factored = b_curve.factor_x(m - 2)
        c_factored = c_curve.factor_x(m - 2)
    except SeriesError as exc:
        raise ConstructError(f"factoring x^{m - 2} from the on-curve coefficients failed: {exc}") from exc
    C000 = c_factored.coeffs[0]
    B000 = b_factored.coeffs[0]
    expected_C = a_m * m * (m - 1)

    # k1 with H = 1, l1 = 0; numerator and denominator share the x^(m-2) factor
    tor = (
        (d2[1] * d3[2] - d2[2] * d3[1]) * d1[0]
        + (d2[2] * d3[0] - d2[0] * d3[2]) * d1[1]
        + (d2[0] * d3[1] - d2[1] * d3[0]) * d1[2]
    )
    num = q * q * tor + 2 * k0
    den = s * k0
    try:
        k1_series = num.factor_x(m - 2) / den.factor_x(m - 2)
    except SeriesError as exc:
        raise ConstructError(f"k1 series is not regular at 0: {exc}") from exc

    # on-curve reduced coefficients, exactly
    X = d1
    Y = (d1[1], -d1[0], PowerSeriesQ.constant(0, order))
    Z = (
        X[1] * Y[2] - X[2] * Y[1],
        X[2] * Y[0] - X[0] * Y[2],
        X[0] * Y[1] - X[1] * Y[0],
    )
    xi0 = [l0 * Y[i] + k0 * Z[i] for i in range(3)]
    xi0p = [c.derivative() for c in xi0]
    xiy = [k1_series * X[i] for i in range(3)]

    def dot(u, v):
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]

    a_curve = dot(xi0, X)
    L1 = dot(xi0p, X)
    L2 = dot(xi0p, Y) + dot(xiy, X)
    L3 = dot(xiy, Y)
    L4 = dot(xi0p, Z) + 0  # xi_z = 0 for this construction
    L5 = dot(xiy, Z)
    B = -(b_factored / c_factored)
    e_curve = L1  # A = -a/c = 0 since a vanishes on the curve
    f_curve = L2 / 2 + B * L4 / 2
    g_curve = L3 + B * L5

    margin = 3  # orders consumed by derivatives in the pipeline
    valid = order - margin
    e_ok = all(c == 0 for c in e_curve.coeffs[: valid + 1])
    f_dev = [c for k, c in enumerate(f_curve.coeffs[: valid + 1]) if c != (1 if k == 0 else 0)]
    K_curve = e_curve * g_curve - f_curve * f_curve

    certificate = {
        "m": m,
        "n": n,
        "a_m": a_m,
        "C000": C000,
        "C000_expected": expected_C,
        "C000_exact": C000 == expected_C,
        "B000": B000,
        "a_on_curve_zero": a_curve.is_zero(),
        "b_factored": b_factored,
        "c_factored": c_factored,
        "k1_series": k1_series,
        "e_on_curve_zero": e_ok,
        "f_on_curve_one": not f_dev,
        "K_series": K_curve,
        "valid_order": valid,
    }
    field = TubularField(curve, coefficients={"k1": k1_function(curve, l1=None, H=1)}, name=f"t5:{m},{n}")
    return field, certificate


# -- the closed worked example -----------------------------------------------


_TILDE_KEYS = ("kt1", "jt1", "lt1", "kt2", "jt2", "lt2", "kt3", "jt3", "lt3")
_CUBIC_MONOMS = ((3, 0), (2, 1), (1, 2), (0, 3))


class _PolynomialRemainder:
    """Sum of coefficient-function * y^i z^j monomials for one frame row."""

    def __init__(self, terms):
        # terms: list of ((i, j), coefficient function of x)
        self.terms = terms

    def __call__(self, x, y, z):
        acc = 0
        for (i, j), fn in self.terms:
            acc = acc + fn(x) * y ** i * z ** j
        return acc


def _slope_and_vertical_jets(field, chart, xs, order):
    """Jets of the flow data along the curve: the slope branch p through 0
    (division-stable root of g p^2 + 2 f p + e = 0), the decoupled vertical
    part A + (B - B(x,0,0)) p, and the full vertical rate A + B p."""
    d = tubular.chart_data(field, chart, xs, 0.0, 0.0, order=order)
    e, f, g, A, B = d.e, d.f, d.g, d.A, d.B
    p = -e / (f + jets.sqrt(f * f - g * e))
    return p, A + (B - B.value) * p, A + B * p


def _t1_flatten(curve, chart, base_coefficients, nodes=256, residual_tol=1e-9, max_nodes=1024):
    """Choose the free quadratic and cubic coefficients so the flow is linear
    to third order around the curve.

    The tilded quadratic coefficients and the cubic remainder terms are free:
    they enter no on-curve value and no first partial of the reduced
    equation.  The quadratic and cubic Taylor coefficients of the flow
    right-hand side (dy/dx = p, dz/dx = A + B p) are affine in them, and the
    dependence is triangular in four stages:

      1. the quadratic part of A + (B - B0) p pins the first-direction
         quadratic coefficients (no derivative coupling),
      2. the quadratic part of p then pins the second-direction quadratic
         coefficients,
      3-4. the same two steps at cubic order pin the first- and
         second-direction cubic remainder terms.

    Each stage is a well-conditioned pointwise linear solve at uniform nodes,
    interpolated trigonometrically; the assembled field is verified against
    off-node residuals of the full flow expansion, measured relative to the
    pre-flattening coefficient magnitude (the verification itself runs
    through the same large cancellations as the solve, so its noise floor
    scales with that magnitude).  Killing these coefficients makes the
    return map agree with its linearization to fourth order in the start
    point, which is what lets the finite-difference Jacobian cross-check
    converge at practical step sizes.
    """
    period = curve.period
    quad = ((2, 0), (1, 1), (0, 2))
    stages = (
        ("vertical", quad, [("coeff", k) for k in ("kt1", "jt1", "lt1")]),
        ("slope", quad, [("coeff", k) for k in ("kt2", "jt2", "lt2")]),
        ("vertical", _CUBIC_MONOMS, [("rem", "A", mon) for mon in _CUBIC_MONOMS]),
        ("slope", _CUBIC_MONOMS, [("rem", "B", mon) for mon in _CUBIC_MONOMS]),
    )

    n = nodes
    while True:
        xs = np.arange(n) * (period / n)
        store = {}  # slot -> node samples of the solved coefficient function

        def assemble(bump=None):
            c = dict(base_coefficients)
            terms = {"A": [], "B": []}
            for slot, samples in store.items():
                series = TrigSeries.from_samples(samples, period)
                if slot[0] == "coeff":
                    c[slot[1]] = series
                else:
                    terms[slot[1]].append((slot[2], series))
            if bump is not None:
                # unit perturbation of one slot on top of the current state,
                # used to measure sensitivities
                if bump[0] == "coeff":
                    prev = c.get(bump[1])
                    if prev is None:
                        c[bump[1]] = 1.0
                    elif callable(prev):
                        c[bump[1]] = lambda x, _f=prev: _f(x) + 1.0
                    else:
                        c[bump[1]] = prev + 1.0
                else:
                    terms[bump[1]].append((bump[2], lambda x: 1.0))
            remainders = {k: _PolynomialRemainder(v) for k, v in terms.items() if v}
            return TubularField(curve, coefficients=c, remainders=remainders or None)

        def rows(field, which, degrees, pts):
            order = max(i + j for i, j in degrees)
            p, vert, _ = _slope_and_vertical_jets(field, chart, pts, order)
            r = p if which == "slope" else vert
            return np.stack(
                [
                    np.asarray(r.coef.get((0, i, j), 0), dtype=float)
                    + np.zeros_like(np.asarray(pts, dtype=float))
                    for i, j in degrees
                ]
            )

        # each stage is affine in its unknowns, but the large intermediate
        # cancellations leave roundoff in a single solve; a second sweep with
        # the same sensitivities removes it (classical iterative refinement)
        sens_lu = {}
        initial_scale = 1.0
        for sweep in range(2):
            for which, degrees, slots in stages:
                F0 = rows(assemble(), which, degrees, xs)
                if sweep == 0:
                    initial_scale = max(initial_scale, float(np.max(np.abs(F0))))
                    sens = np.stack(
                        [rows(assemble(slot), which, degrees, xs) - F0 for slot in slots],
                        axis=1,
                    )  # (nconds, nunk, nnodes)
                    sens_lu[which, degrees] = sens.transpose(2, 0, 1)
                sol = np.linalg.solve(sens_lu[which, degrees], -F0.T[:, :, None])[:, :, 0]
                for k, slot in enumerate(slots):
                    store[slot] = store.get(slot, 0.0) + sol[:, k]

        field = assemble()
        # verify the full quadratic + cubic expansion of (dy/dx, dz/dx) at
        # the midpoints of the build grid, so the probe resolution grows
        # with the node count and localized residual peaks cannot hide
        probe = xs + period / (2 * n)
        p, _, full = _slope_and_vertical_jets(field, chart, probe, 3)
        res = max(
            float(np.max(np.abs(np.asarray(r.coef.get((0, i, j), 0), dtype=float))))
            for r in (p, full)
            for i, j in quad + _CUBIC_MONOMS
        )
        if res <= residual_tol * initial_scale:
            return field
        if 2 * n > max_nodes:
            raise ConstructError(f"flattening residual {res} did not meet {residual_tol * initial_scale}")
        n *= 2


def t1_curve():
    return Curve.from_expressions(
        ("sin(x)", "cos(x)", "sin(x)^3"), (0.0, 2.0 * math.pi), closed=True, name="t1"
    )


def _t1_az_target(t):
    """The target value of the variational entry A_z(x,0,0) (a trig polynomial)."""
    s = jets.sin(t)
    c = jets.cos(t)
    c2 = c * c
    c4 = c2 * c2
    c6 = c4 * c2
    c8 = c4 * c4
    return (
        9 * s * c8 + 54 * s * c6 - 9 * c6 - 117 * s * c4 + 18 * c4 + 55 * c2 * s - 9 * c2 - 1
    )


def _t1_l1(curve):
    """l1(x) chosen so that A_z(x,0,0) equals the target trig polynomial.

    On the curve A = -a/c has a vanishing on it, which makes
    A_z = -(l1 |X|^2 + l0 <Y, Z'> + k0 <Z, Z'>) / (k0 |Z|^2), affine in l1;
    solve that relation for l1 pointwise.
    """

    def l1(t):
        d1 = [curve.component(i, t, 1) for i in range(3)]
        d2 = [curve.component(i, t, 2) for i in range(3)]
        X = d1
        Y = (d1[1], -d1[0], 0)
        dY = (d2[1], -d2[0], 0)
        Z = (
            X[1] * Y[2] - X[2] * Y[1],
            X[2] * Y[0] - X[0] * Y[2],
            X[0] * Y[1] - X[1] * Y[0],
        )
        dX = d2
        dZ = (
            dX[1] * Y[2] - dX[2] * Y[1] + X[1] * dY[2] - X[2] * dY[1],
            dX[2] * Y[0] - dX[0] * Y[2] + X[2] * dY[0] - X[0] * dY[2],
            dX[0] * Y[1] - dX[1] * Y[0] + X[0] * dY[1] - X[1] * dY[0],
        )
        k0, l0 = k0_l0(curve, t)
        XX = X[0] * X[0] + X[1] * X[1] + X[2] * X[2]
        ZZ = Z[0] * Z[0] + Z[1] * Z[1] + Z[2] * Z[2]
        YdZ = Y[0] * dZ[0] + Y[1] * dZ[1] + Y[2] * dZ[2]
        ZdZ = Z[0] * dZ[0] + Z[1] * dZ[1] + Z[2] * dZ[2]
        target = _t1_az_target(t)
        return (-(target * k0 * ZZ) - l0 * YdZ - k0 * ZdZ) / XX

    return l1


def build_t1(nodes=256, residual_tol=1e-9, max_nodes=1024):
    """The worked-example field on (sin x, cos x, sin^3 x).

    k1 comes from the H = 1 parabolic-free choice; l1 from the closed-form
    affine solve above; l2 and k2 are then chosen so that e_z(x,0,0) = 0 and
    e_y(x,0,0) + 2 f(x,0,0) = 0, which makes the variational matrix lower
    triangular with constant first diagonal entry 1.  Both are affine in the
    pointwise values of (l2, k2), so they are solved by a 2x2 linear system
    at each interpolation node and stored as trigonometric interpolants; the
    final field is verified against off-node residuals.
    """
    curve = t1_curve()
    period = curve.period
    l1 = _t1_l1(curve)
    k1 = k1_function(curve, l1=l1, H=1)
    chart = tubular.TubularChart(curve)

    n = nodes
    while True:
        xs = np.arange(n) * (period / n)

        def targets(l2_const, k2_const):
            field = TubularField(
                curve,
                coefficients={"k1": k1, "l1": l1, "l2": l2_const, "k2": k2_const},
            )
            d = tubular.chart_data(field, chart, xs, 0.0, 0.0, order=1)
            ez = d.partial("e", "z")
            ey2f = d.partial("e", "y") + 2 * d.value("f")
            return np.asarray(ez), np.asarray(ey2f)

        F00 = targets(0.0, 0.0)
        F10 = targets(1.0, 0.0)
        F01 = targets(0.0, 1.0)
        # rows: (e_z, e_y + 2f); columns: sensitivities to (l2, k2)
        m11 = F10[0] - F00[0]
        m12 = F01[0] - F00[0]
        m21 = F10[1] - F00[1]
        m22 = F01[1] - F00[1]
        det = m11 * m22 - m12 * m21
        if np.any(np.abs(det) < 1e-10):
            raise ConstructError("affine solve for (l2, k2) is degenerate")
        l2_vals = (-F00[0] * m22 + F00[1] * m12) / det
        k2_vals = (F00[0] * m21 - F00[1] * m11) / det

        base = {
            "k1": k1,
            "l1": l1,
            "l2": TrigSeries.from_samples(l2_vals, period),
            "k2": TrigSeries.from_samples(k2_vals, period),
            "k3": 0,
        }
        field = TubularField(curve, coefficients=base, name="t1")
        # off-node residuals check both the affine model and the interpolation
        probe = xs + period / (2 * n)
        d = tubular.chart_data(field, chart, probe, 0.0, 0.0, order=1)
        res = max(
            float(np.max(np.abs(d.partial("e", "z")))),
            float(np.max(np.abs(d.partial("e", "y") + 2 * d.value("f")))),
        )
        if res <= residual_tol:
            break
        if 2 * n > max_nodes:
            raise ConstructError(f"worked-example residual {res} did not meet {residual_tol}")
        n *= 2

    # choose the free quadratic/cubic coefficients so the flow around the
    # curve is linear to third order (the finite-difference cross-check of
    # the monodromy depends on this; on-curve data are unaffected)
    field = _t1_flatten(curve, chart, base)
    field.name = "t1"
    return field
