"""Command-line front end.

Subcommands wrap the library operations: classify a tube grid, compute the
return-map derivative, integrate asymptotic lines, evaluate curvature and
integrability, test the starlike projection, build the appendix surfaces,
and run the full verification suite.  Built-in names ("t1",
"circle-example", "arnold:m,n") make every check runnable without input
files.

Exit codes: 0 success, 1 check failure, 2 usage/parse error, 3 numerical
failure.  With --format json each subcommand writes a single JSON document
to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import os
import sys
import time

import numpy as np

from . import construct, curves, exprlang, flow, monodromy, planefield, surfaces, tubular

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def default_seed():
    try:
        return int(os.environ.get("ASYMPTOTICA_SEED", "0"))
    except ValueError:
        return 0


@functools.lru_cache(maxsize=1)
def _t1_field():
    return construct.build_t1()


def _circle_curve():
    return curves.Curve.from_expressions(
        ("cos(x)", "sin(x)", "0"), (0.0, 2.0 * math.pi), closed=True, name="circle"
    )


def resolve_curve(name):
    """A built-in curve name or comma-separated component expressions."""
    if name == "t1":
        return construct.t1_curve()
    if name == "circle":
        return _circle_curve()
    parts = [p.strip() for p in name.split(",")]
    if len(parts) != 3:
        raise UsageError(f"unknown curve {name!r}: use t1, circle, or three comma-separated expressions")
    try:
        return curves.Curve.from_expressions(parts, (0.0, 2.0 * math.pi), closed=False, name=name)
    except exprlang.ExprError as exc:
        raise UsageError(f"curve expression error: {exc}") from exc


def resolve_field(name):
    """A built-in field name, an inline JSON field document, or a JSON file."""
    if name == "t1":
        field = _t1_field()
        return field, tubular.TubularChart(field.curve)
    if name == "circle-example":
        return planefield.circle_example_field(), tubular.TubularChart(_circle_curve())
    doc = None
    if name.lstrip().startswith("{"):
        doc = json.loads(name)
    elif os.path.exists(name):
        with open(name) as fh:
            doc = json.load(fh)
    if doc is None:
        raise UsageError(f"unknown field {name!r}: use t1, circle-example, a JSON document, or a file path")
    if "xi" not in doc or len(doc["xi"]) != 3:
        raise UsageError('field document needs "xi": [three component expressions]')
    try:
        field = planefield.AmbientField(doc["xi"])
    except (exprlang.ExprError, planefield.FieldError) as exc:
        raise UsageError(f"field expression error: {exc}") from exc
    curve = resolve_curve(doc.get("curve", "circle"))
    return field, tubular.TubularChart(curve)


def parse_orders(spec):
    """The (m, n) pair of an "arnold:m,n" name or a bare "m,n"."""
    body = spec.split(":", 1)[1] if spec.startswith("arnold:") else spec
    try:
        m, n = (int(p) for p in body.split(","))
    except ValueError:
        raise UsageError(f"orders {spec!r}: expected arnold:m,n with integers 1 < m < n")
    return m, n


def emit(args, document, csv_rows=None, csv_header=None):
    """Write the result document (JSON) or rows (CSV) to --output or stdout."""
    out = sys.stdout if args.output is None else open(args.output, "w")
    try:
        if getattr(args, "format", "json") == "csv" and csv_rows is not None:
            if csv_header:
                out.write(",".join(csv_header) + "\n")
            for row in csv_rows:
                out.write(",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in row) + "\n")
        else:
            json.dump(document, out, indent=2)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()


def write_svg(path_obj, filename, width=640, height=480, margin=20):
    """Minimal static polyline rendering of the (x, y) chart projection."""
    xs, ys = path_obj.xs, path_obj.ys
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    sx = (width - 2 * margin) / max(x1 - x0, 1e-12)
    sy = (height - 2 * margin) / max(y1 - y0, 1e-12)
    pts = " ".join(
        f"{margin + (x - x0) * sx:.2f},{height - margin - (y - y0) * sy:.2f}"
        for x, y in zip(xs, ys)
    )
    with open(filename, "w") as fh:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
            f'  <polyline points="{pts}" fill="none" stroke="black" stroke-width="1"/>\n'
            "</svg>\n"
        )


# -- subcommands -------------------------------------------------------------


def cmd_classify(args):
    field, chart = resolve_field(args.field)
    x0, x1 = chart.curve.interval
    xs = np.linspace(x0, x1, args.samples, endpoint=not chart.curve.closed)
    offsets = np.linspace(-args.offset, args.offset, args.rings) if args.rings > 1 else [0.0]
    rows = []
    counts = {}
    for x in xs:
        for y in offsets:
            for z in offsets:
                cls = str(tubular.classify(field, chart, (float(x), float(y), float(z))))
                counts[cls] = counts.get(cls, 0) + 1
                rows.append((float(x), float(y), float(z), cls))
    emit(
        args,
        {"field": args.field, "counts": counts, "points": [list(r) for r in rows]},
        csv_rows=rows,
        csv_header=("x", "y", "z", "class"),
    )
    return EXIT_OK


def cmd_poincare(args):
    field, chart = resolve_field(args.field)
    if not chart.curve.closed:
        raise UsageError("the return map needs a closed core curve")
    period = chart.curve.period
    result = monodromy.monodromy(field, chart, period)
    doc = result.to_dict()
    code = EXIT_OK
    if args.fd_check:
        fd = monodromy.fd_poincare_derivative(field, chart, period, h=args.h)
        diff = np.abs(fd - result.Q)
        tol = np.maximum(args.fd_rtol * np.abs(result.Q), args.fd_atol)
        doc["fd_jacobian"] = fd.tolist()
        doc["fd_max_deviation"] = float(np.max(diff))
        doc["fd_within_tolerance"] = bool(np.all(diff <= tol))
        if not doc["fd_within_tolerance"]:
            code = EXIT_CHECK_FAILED
    emit(args, doc)
    return code


def cmd_integrate(args):
    field, chart = resolve_field(args.field)
    try:
        x0, y0, z0 = (float(v) for v in args.start.split(","))
    except ValueError:
        raise UsageError(f"--start {args.start!r}: expected x,y,z")
    path = flow.integrate_asymptotic(
        field, chart, (x0, y0, z0), args.to, rtol=args.rtol, atol=args.atol
    )
    if args.svg:
        write_svg(path, args.svg)
    rows = list(zip(path.xs, path.ys, path.zs, path.ps))
    doc = {
        "status": path.status,
        "reason": path.reason,
        "endpoint": list(path.endpoint()),
        "samples": len(path.xs),
        "max_residual": path.stats.get("max_residual"),
    }
    if args.format == "json":
        doc["path"] = [list(map(float, r)) for r in rows]
    emit(args, doc, csv_rows=rows, csv_header=("x", "y", "z", "p"))
    if not path.reached:
        print(f"integration stopped: {path.status} ({path.reason})", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_curvature(args):
    field, chart = resolve_field(args.field)
    x0, x1 = chart.curve.interval
    xs = np.linspace(x0, x1, args.samples, endpoint=not chart.curve.closed)
    rows = [(float(x), float(tubular.gaussian_curvature(field, chart, float(x), 0.0, 0.0))) for x in xs]
    emit(
        args,
        {"field": args.field, "K": [list(r) for r in rows]},
        csv_rows=rows,
        csv_header=("x", "K"),
    )
    return EXIT_OK


def cmd_integrability(args):
    field, chart = resolve_field(args.field)
    if not hasattr(field, "components"):
        raise UsageError("integrability needs an ambient field (three expressions)")
    if args.point:
        pts = [tuple(float(v) for v in args.point.split(","))]
    else:
        x0, x1 = chart.curve.interval
        pts = [tuple(chart.point(x, 0.0, 0.0)) for x in np.linspace(x0, x1, args.samples, endpoint=False)]
    rows = [(p[0], p[1], p[2], float(planefield.integrability_defect(field, p))) for p in pts]
    emit(
        args,
        {"field": args.field, "defects": [list(r) for r in rows]},
        csv_rows=rows,
        csv_header=("x", "y", "z", "defect"),
    )
    return EXIT_OK


def cmd_starlike(args):
    curve = resolve_curve(args.curve)
    ok, witness = curves.is_starlike_projection(curve)
    point = [float(v) for v in witness] if witness is not None else None
    emit(args, {"curve": args.curve, "starlike": bool(ok), "kernel_point": point})
    return EXIT_OK


def cmd_arnold_surface(args):
    m, n = parse_orders(args.orders)
    try:
        _, report = surfaces.arnold_surface(m, n, samples=args.samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    doc = {
        "m": report["m"],
        "n": report["n"],
        "rotating": bool(report["rotating"]),
        "f00": float(report["f00"]),
        "f00_expected": (float(report["f00_expected"]) if report["f00_expected"] is not None else None),
        "max_abs_e_on_curve": float(report["max_abs_e"]),
        "max_rel_f_mismatch": float(report["max_rel_f_mismatch"]),
    }
    emit(args, doc)
    return EXIT_OK


# -- the verification suite --------------------------------------------------


def _check(name, fn):
    t0 = time.time()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed check, not a crash of the suite
        passed, detail = False, f"error: {exc!r}"
    return {"name": name, "passed": bool(passed), "detail": detail, "seconds": round(time.time() - t0, 3)}


def verify_checks(seed=0, perturb=False):
    """The acceptance checks as (name, callable) pairs."""
    checks = []

    def t1_eigenvalues():
        field = _t1_field()
        chart = tubular.TubularChart(field.curve)
        result = monodromy.monodromy(field, chart, field.curve.period)
        got = sorted(abs(ev) for ev in result.eigenvalues)
        want = sorted((math.exp(2 * math.pi), math.exp(-25 * math.pi / 8)))
        rel = max(abs(a - b) / b for a, b in zip(got, want))
        return rel <= 1e-4 and result.hyperbolic, f"max relative eigenvalue error {rel:.2e}"

    def t1_integrals():
        field = _t1_field()
        chart = tubular.TubularChart(field.curve)
        result = monodromy.monodromy(field, chart, field.curve.period)
        d2 = abs(result.integrals["diag_second"] + 25 * math.pi / 8)
        d1 = abs(result.integrals["diag_first"] - 2 * math.pi)
        return d1 <= 1e-8 and d2 <= 1e-8, f"|int - target| = {d1:.2e}, {d2:.2e}"

    def fd_oracle():
        field = _t1_field()
        chart = tubular.TubularChart(field.curve)
        period = field.curve.period
        result = monodromy.monodromy(field, chart, period)
        fd = monodromy.fd_poincare_derivative(field, chart, period, h=1e-5)
        if perturb:
            fd = fd * 1.001
        diff = np.abs(fd - result.Q)
        tol = np.maximum(1e-4 * np.abs(result.Q), 1e-8)
        return bool(np.all(diff <= tol)), f"max deviation {float(np.max(diff)):.2e}"

    def lac():
        curve = construct.t1_curve()
        chart = tubular.TubularChart(curve)
        xs = np.linspace(0.0, curve.period, 128, endpoint=False)
        worst = 0.0
        for H in (1, "2 + sin(x)"):
            field = construct.build_lac(curve, H=H)
            d = tubular.chart_data(field, chart, xs, 0.0, 0.0)
            e = np.asarray(d.value("e"))
            f = np.asarray(d.value("f"))
            g = np.asarray(d.value("g"))
            Hv = np.ones_like(xs) if H == 1 else 2.0 + np.sin(xs)
            devs = (
                np.max(np.abs(e)),
                np.max(np.abs(f - Hv)),
                np.max(np.abs(e * g - f * f + Hv * Hv)) / 10,
            )
            worst = max(worst, float(max(devs)))
            if np.max(np.abs(e)) > 1e-9 or np.max(np.abs(f - Hv)) > 1e-9:
                return False, f"on-curve identity failed for H = {H}"
            if np.max(np.abs(e * g - f * f + Hv * Hv)) > 1e-8:
                return False, f"K + H^2 identity failed for H = {H}"
        return True, f"worst scaled deviation {worst:.2e}"

    def t5():
        worst = 0.0
        for comps in (("x", "x^2", "x^3"), ("x", "x^3", "x^5"), ("x", "x^2", "x^4")):
            curve = curves.Curve.from_expressions(comps, (-0.5, 0.5), name=",".join(comps))
            field, cert = construct.realize_t5(curve)
            if not (cert["C000_exact"] and cert["e_on_curve_zero"] and cert["f_on_curve_one"]):
                return False, f"certificate failed for {comps}"
            chart = tubular.TubularChart(curve)
            xs = np.linspace(-0.3, 0.3, 64)
            d = tubular.chart_data(field, chart, xs, 0.0, 0.0)
            K = np.asarray(d.value("e")) * np.asarray(d.value("g")) - np.asarray(d.value("f")) ** 2
            dev = float(np.max(np.abs(K + 1)))
            if dev > 1e-8:
                return False, f"K(x,0,0) != -1 for {comps} (deviation {dev:.2e})"
            worst = max(worst, dev)
        return True, f"worst |K + 1| = {worst:.2e}"

    def appendix():
        for m in (2, 3, 4, 5):
            _, rep = surfaces.arnold_surface(m, m + 1)
            if abs(rep["f00"] - (m + 1) / (m - 1)) > 1e-9:
                return False, f"f(0,0) off target for (m,n)=({m},{m+1})"
            if rep["max_abs_e"] > 1e-9:
                return False, f"e(u,0) != 0 for (m,n)=({m},{m+1})"
        _, rep = surfaces.arnold_surface(2, 4)
        if abs(rep["f00"]) > 1e-9:
            return False, "f(0,0) != 0 for (m,n)=(2,4)"
        return True, "f(0,0) and e(u,0) match for m in 2..5 and (2,4)"

    def circle():
        xi = planefield.circle_example_field()
        ts = np.linspace(0.0, 2 * math.pi, 64, endpoint=False)
        kmax = max(
            abs(planefield.normal_curvature(xi, (math.cos(t), math.sin(t), 0.0), (-math.sin(t), math.cos(t), 0.0)))
            for t in ts
        )
        if kmax > 1e-10:
            return False, f"normal curvature along the circle up to {kmax:.2e}"
        defect = planefield.integrability_defect(xi, (1.0, 0.0, 0.0))
        if abs(defect + 2.0) > 1e-9:
            return False, f"integrability defect {defect} != -2"
        chart = tubular.TubularChart(_circle_curve())
        for t in np.linspace(0.0, 2 * math.pi, 16, endpoint=False):
            if tubular.classify(xi, chart, (float(t), 0.0, 0.0)) is not tubular.PointClass.HYPERBOLIC:
                return False, f"classify not Hyperbolic at x = {t}"
        ok, _ = curves.is_starlike_projection(_circle_curve())
        if not ok:
            return False, "circle projection not starlike"
        return True, f"normal curvature <= {kmax:.2e}, defect -2, Hyperbolic, starlike"

    def gauge():
        rng = np.random.default_rng(seed)
        xi = planefield.AmbientField(("z - y", "1 + 0*x", "1 + y*y"))
        chart = tubular.TubularChart(_circle_curve())
        direct = tubular.binary_equation_data(xi, chart)
        phis = ("2 + sin(x)*cos(y) + z^2", "1 + x^2/20", "3 - cos(z)", "exp(y)", "2 + sin(x*y)")
        worst = 0.0
        for phi in phis:
            scaled = tubular.binary_equation_data(planefield.gauge_scale(xi, phi), chart)
            hits = 0
            while hits < 100:
                x = rng.uniform(0.0, 2 * math.pi)
                y = rng.uniform(-chart.radius, chart.radius)
                z = rng.uniform(-chart.radius, chart.radius)
                e1, f1, g1, _, _ = direct(x, y, z)
                e2, f2, g2, _, _ = scaled(x, y, z)
                s1 = flow.branch_slopes(e1, f1, g1)[0]
                s2 = flow.branch_slopes(e2, f2, g2)[0]
                if len(s1) != 2 or len(s2) != 2:
                    continue
                hits += 1
                worst = max(worst, max(abs(a - b) for a, b in zip(sorted(s1), sorted(s2))))
        return worst <= 1e-9, f"worst slope deviation {worst:.2e}"

    def properties():
        for s in (seed, seed + 1, seed + 2):
            rng = np.random.default_rng(s)
            # expression round-trip
            for _ in range(25):
                src = _random_expression(rng)
                tree = exprlang.parse(src)
                again = exprlang.parse(exprlang.to_source(tree))
                if again != tree:
                    return False, f"round-trip failed for {src!r} (seed {s})"
            # jet derivative vs central finite difference
            for _ in range(25):
                src = _random_expression(rng)
                x0 = rng.uniform(0.2, 1.2)
                tree = exprlang.parse(src)
                from . import jets

                j = exprlang.evaluate(tree, {"x": jets.Jet.variable(x0, 0, 1, 1)})
                d = j.coef.get((1,), 0) if isinstance(j, jets.Jet) else 0.0
                h = 1e-5
                vp = exprlang.evaluate(tree, {"x": x0 + h})
                vm = exprlang.evaluate(tree, {"x": x0 - h})
                fd = (vp - vm) / (2 * h)
                # the difference quotient loses |f| * eps / h to cancellation,
                # so the comparison scale includes the value magnitude
                scale = max(1.0, abs(d), abs(vp) * 1e-10 / h)
                if abs(d - fd) > 1e-6 * scale:
                    return False, f"jet/fd mismatch for {src!r} at {x0} (seed {s})"
            # flow residual along the core curve of the worked example
            field = _t1_field()
            chart = tubular.TubularChart(field.curve)
            x0 = rng.uniform(0.0, 1.0)
            path = flow.integrate_asymptotic(field, chart, (x0, 0.0, 0.0), x0 + field.curve.period)
            if not path.reached or max(abs(path.ys).max(), abs(path.zs).max()) > 1e-9:
                return False, f"core-curve integration drifted (seed {s})"
            if path.stats["max_residual"] > 1e-9:
                return False, f"slope residual {path.stats['max_residual']:.2e} (seed {s})"
            # Liouville identity at 16 checkpoints
            result = monodromy.monodromy(field, chart, field.curve.period, checkpoints=16)
            if result.det_residual > 1e-6:
                return False, f"Liouville residual {result.det_residual:.2e} (seed {s})"
            for x, Q in result.stats["checkpoints"]:
                det = float(np.linalg.det(Q))
                if det <= 0:
                    return False, f"det Q({x}) = {det} not positive (seed {s})"
        return True, "round-trip, jet/fd, flow residual, Liouville at 16 checkpoints"

    checks.append(("t1-eigenvalues", t1_eigenvalues))
    checks.append(("t1-integrals", t1_integrals))
    checks.append(("fd-oracle", fd_oracle))
    checks.append(("lac", lac))
    checks.append(("t5", t5))
    checks.append(("appendix", appendix))
    checks.append(("circle", circle))
    checks.append(("gauge", gauge))
    checks.append(("properties", properties))
    return checks


def _random_expression(rng):
    atoms = ["x", "x", "pi", str(int(rng.integers(1, 9)))]
    funcs = ["sin", "cos", "exp"]
    expr = rng.choice(atoms)
    for _ in range(int(rng.integers(1, 4))):
        op = rng.choice(["+", "-", "*", "/"])
        term = rng.choice(atoms)
        if rng.random() < 0.5:
            term = f"{rng.choice(funcs)}({term})"
        if rng.random() < 0.3:
            term = f"{term}^{int(rng.integers(2, 4))}"
        expr = f"{expr} {op} ({term} + 2)" if op == "/" else f"{expr} {op} {term}"
    return expr


def cmd_verify_paper(args):
    seed = args.seed if args.seed is not None else default_seed()
    results = []
    for name, fn in verify_checks(seed=seed, perturb=args.perturb):
        if args.only and args.only not in name:
            continue
        results.append(_check(name, fn))
    if not results:
        raise UsageError(f"--only {args.only!r} matched no checks")
    all_passed = all(r["passed"] for r in results)
    if args.format == "json":
        emit(args, {"seed": seed, "passed": all_passed, "checks": results})
    else:
        width = max(len(r["name"]) for r in results)
        for r in results:
            status = "PASS" if r["passed"] else "FAIL"
            print(f"{r['name']:<{width}}  {status}  {r['seconds']:>6.2f}s  {r['detail']}")
        print(("all checks passed" if all_passed else "some checks FAILED"), file=sys.stderr)
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


# -- argument parsing --------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="asymptotica",
        description="Asymptotic lines of plane fields in R^3: classification, return maps, verification.",
    )
    parser.add_argument("--seed", type=int, default=None, help="random seed (default: $ASYMPTOTICA_SEED or 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, default_format="json"):
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        p.add_argument("--output", default=None, help="output file (default: stdout)")

    p = sub.add_parser("classify", help="classify a grid of tube points")
    p.add_argument("--field", default="t1")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--rings", type=int, default=3, help="offsets per transverse direction")
    p.add_argument("--offset", type=float, default=0.01, help="largest transverse offset")
    common(p, default_format="csv")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("poincare", help="return-map derivative over one period")
    p.add_argument("--field", default="t1")
    p.add_argument("--fd-check", action="store_true", help="cross-check with the finite-difference Jacobian")
    p.add_argument("--h", type=float, default=1e-5, help="finite-difference step")
    p.add_argument("--fd-rtol", type=float, default=1e-4)
    p.add_argument("--fd-atol", type=float, default=1e-8)
    common(p)
    p.set_defaults(fn=cmd_poincare)

    p = sub.add_parser("integrate", help="follow one asymptotic branch")
    p.add_argument("--field", default="t1")
    p.add_argument("--start", default="0,0,0", help="x,y,z chart start point")
    p.add_argument("--to", type=float, required=True, help="target x")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--svg", default=None, help="write an SVG polyline of the (x, y) projection")
    common(p, default_format="csv")
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("curvature", help="Gaussian curvature along the core curve")
    p.add_argument("--field", default="t1")
    p.add_argument("--samples", type=int, default=128)
    common(p, default_format="csv")
    p.set_defaults(fn=cmd_curvature)

    p = sub.add_parser("integrability", help="integrability defect of an ambient field")
    p.add_argument("--field", default="circle-example")
    p.add_argument("--point", default=None, help="ambient x,y,z (default: sample along the curve)")
    p.add_argument("--samples", type=int, default=32)
    common(p, default_format="csv")
    p.set_defaults(fn=cmd_integrability)

    p = sub.add_parser("starlike", help="starlike test for a closed curve's projection")
    p.add_argument("--curve", default="circle")
    common(p)
    p.set_defaults(fn=cmd_starlike)

    p = sub.add_parser("arnold-surface", help="appendix surface report for a local model")
    p.add_argument("--orders", default="2,3", help="arnold:m,n or m,n")
    p.add_argument("--samples", type=int, default=64)
    common(p)
    p.set_defaults(fn=cmd_arnold_surface)

    p = sub.add_parser("verify-paper", help="run the full verification suite")
    p.add_argument("--only", default=None, help="run only checks whose name contains this string")
    p.add_argument("--perturb", action="store_true", help=argparse.SUPPRESS)  # negative-control hook
    common(p, default_format="table")
    p.set_defaults(fn=cmd_verify_paper)
    # verify-paper defaults to a human-readable table; json still available
    for action in p._actions:
        if action.dest == "format":
            action.choices = ("table", "json")
            action.default = "table"
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except exprlang.ExprError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        flow.FlowError,
        tubular.ReductionSingular,
        monodromy.ParabolicOnCurve,
        construct.ConstructError,
        curves.CurveError,
        planefield.FieldError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
