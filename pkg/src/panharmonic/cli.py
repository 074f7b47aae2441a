"""Command-line front end.

Subcommands:

* solve               one field on one mesh, dumped as plain text
* varadhan            distance-recovery error over a mu sweep (CSV)
* check-convexity     margin sweep with verdict (JSON report + CSV)
* probe-superharmonic disc-average probes at reflex corners (CSV)
* validate            built-in analytic cross-checks, pass/fail per line

Exit status: 0 success, 1 pipeline failure (budget, solver), 2 bad
configuration (flags, malformed domain file).  Identical configurations
produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, geometry, mesh as meshing, solver, special

_EXIT_OK = 0
_EXIT_PIPELINE = 1
_EXIT_CONFIG = 2


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panharmonic",
        description="Screened-Poisson fields, distance recovery, and the "
                    "gradient-bound convexity check on planar domains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_domain(p):
        p.add_argument("--domain", required=True, metavar="FILE",
                       help="domain description JSON")
        p.add_argument("--output-dir", default=".", metavar="DIR")

    def add_mu_spec(p):
        p.add_argument("--mu", type=float, action="append", metavar="MU",
                       help="explicit mu value (repeatable, ascending)")
        p.add_argument("--mu-start", type=float, metavar="S")
        p.add_argument("--mu-factor", type=float, default=2.0, metavar="F")
        p.add_argument("--mu-count", type=int, metavar="N")
        p.add_argument("--target-h", default="auto", metavar="H",
                       help="mesh edge target, or 'auto' (0.5/mu_max)")

    p = sub.add_parser("solve", help="solve one field and dump it")
    add_domain(p)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--target-h", default="auto", metavar="H")
    p.add_argument("--neumann", action="store_true",
                   help="flux data dv/dn = mu instead of v = 1")

    p = sub.add_parser("varadhan", help="distance-recovery error sweep")
    add_domain(p)
    add_mu_spec(p)
    p.add_argument("--neumann", action="store_true",
                   help="exploratory: recover distance from the flux problem")
    p.add_argument("--rho", type=float, default=0.25,
                   help="envelope parameter in (0, 1/2)")

    p = sub.add_parser("check-convexity", help="margin sweep with verdict")
    add_domain(p)
    add_mu_spec(p)
    p.add_argument("--value-rule", choices=("centroid", "min-vertex"),
                   default="centroid")

    p = sub.add_parser("probe-superharmonic",
                       help="disc-average probes at reflex corners")
    add_domain(p)
    p.add_argument("--corner-scale", type=float, default=0.8, metavar="C",
                   help="probe scale as a fraction of the shorter adjacent edge")

    sub.add_parser("validate", help="run the built-in analytic cross-checks")
    return parser


def _load_domain(path: str):
    try:
        return geometry.load_domain(path)
    except FileNotFoundError:
        raise _ConfigError(f"domain file not found: {path}")
    except json.JSONDecodeError as e:
        raise _ConfigError(
            f"domain file {path} is not valid JSON "
            f"(line {e.lineno}, column {e.colno}: {e.msg})")
    except (ValueError, TypeError, KeyError) as e:
        raise _ConfigError(f"domain file {path}: {e}")


class _ConfigError(Exception):
    pass


def _mu_list(args) -> list[float]:
    explicit = args.mu or []
    sweep = args.mu_start is not None or args.mu_count is not None
    if explicit and sweep:
        raise _ConfigError("give either --mu values or a --mu-start sweep, not both")
    if explicit:
        if any(m <= 0 for m in explicit):
            raise _ConfigError("--mu values must be positive")
        if any(b <= a for a, b in zip(explicit, explicit[1:])):
            raise _ConfigError("--mu values must be strictly ascending")
        return explicit
    if not sweep:
        raise _ConfigError("need --mu values or --mu-start/--mu-count")
    if args.mu_start is None or args.mu_count is None:
        raise _ConfigError("a sweep needs both --mu-start and --mu-count")
    if args.mu_start <= 0 or args.mu_count < 1 or args.mu_factor <= 1.0:
        raise _ConfigError("sweep needs mu-start > 0, mu-factor > 1, mu-count >= 1")
    return [args.mu_start * args.mu_factor ** k for k in range(args.mu_count)]


def _target_h(args, mu_max: float, domain) -> float:
    if args.target_h == "auto":
        h = solver.RESOLUTION_LIMIT / mu_max
        # Clamp to the triangle budget by coarsening until a mesh fits.
        for _ in range(8):
            try:
                meshing.triangulate(domain, h)
                return h
            except meshing.MeshBudgetError:
                h *= 2.0
        raise meshing.MeshBudgetError(
            "no mesh within the triangle budget even after coarsening")
    try:
        h = float(args.target_h)
    except ValueError:
        raise _ConfigError(f"--target-h must be a number or 'auto', "
                           f"got {args.target_h!r}")
    if h <= 0:
        raise _ConfigError("--target-h must be positive")
    return h


def _resolve_mesh(m, domain, mu: float):
    while mu * m.h_max > solver.RESOLUTION_LIMIT:
        m = meshing.refine_uniform(m, domain)
    return m


def _out_dir(args) -> Path:
    d = Path(args.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _cmd_solve(args) -> int:
    domain = _load_domain(args.domain)
    h = _target_h(args, args.mu, domain)
    m = meshing.triangulate(domain, h)
    field = (solver.solve_neumann if args.neumann else
             solver.solve_dirichlet)(m, args.mu)
    out = _out_dir(args)
    solver.save_field_text(field, out / "field.txt")
    meshing.save_mesh_text(m, out / "mesh.txt")
    print(f"solved {field.boundary_condition} field: mu={args.mu:g}, "
          f"{m.n_nodes} nodes, h_max={m.h_max:.6g}, "
          f"resolution_ok={field.resolution_ok}")
    return _EXIT_OK


def _cmd_varadhan(args) -> int:
    domain = _load_domain(args.domain)
    if not (0.0 < args.rho < 0.5):
        raise _ConfigError("--rho must lie in (0, 1/2)")
    mus = _mu_list(args)
    m = meshing.triangulate(domain, _target_h(args, mus[-1], domain))
    rows = []
    completed = []
    for mu in mus:
        try:
            m = _resolve_mesh(m, domain, mu)
        except meshing.MeshBudgetError:
            largest = f"{completed[-1]:g}" if completed else "none"
            print(f"error: triangle budget exceeded before mu={mu:g}; "
                  f"largest completed mu: {largest}", file=sys.stderr)
            _write_varadhan_csv(_out_dir(args) / "varadhan.csv", rows)
            return _EXIT_PIPELINE
        if args.neumann:
            field = solver.solve_neumann(m, mu)
            estimate = analysis.varadhan_estimate(field)
            interior = ~m.boundary_node
            gap = np.abs(estimate[interior] -
                         geometry.boundary_distance_batch(domain, m.nodes[interior]))
            k = int(np.argmax(gap))
            loc = m.nodes[interior][k]
            rows.append((mu, float(gap[k]), float(loc[0]), float(loc[1]),
                         math.nan, field.resolution_ok))
        else:
            field = solver.solve_dirichlet(m, mu)
            res = analysis.varadhan_error(field, domain)
            envelope = analysis.decay_envelope_fit([field], domain, args.rho)
            rows.append((mu, res.sup_error, res.error_location.x1,
                         res.error_location.x2, envelope.constant,
                         field.resolution_ok))
        completed.append(mu)
    _write_varadhan_csv(_out_dir(args) / "varadhan.csv", rows)
    if args.neumann:
        print("note: flux-data distance recovery is exploratory; no "
              "convergence statement is attached to these numbers")
    print(f"wrote varadhan.csv with {len(rows)} rows")
    return _EXIT_OK


def _write_varadhan_csv(path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write("mu,sup_error,error_x,error_y,envelope_constant,resolution_ok\n")
        for mu, sup, x, y, env, ok in rows:
            f.write(",".join([_fmt(mu), _fmt(sup), _fmt(x), _fmt(y),
                              _fmt(env), str(int(ok))]) + "\n")


def _cmd_check_convexity(args) -> int:
    domain = _load_domain(args.domain)
    mus = _mu_list(args)
    h = _target_h(args, mus[-1], domain)
    report = analysis.convexity_sweep(domain, mus, h, args.value_rule)
    out = _out_dir(args)
    analysis.write_report_json(report, out / "report.json")
    analysis.write_margins_csv(report, out / "margins.csv")
    print(f"verdict: {report.verdict} "
          f"(largest verified mu: {report.largest_verified_mu})")
    truncated = len(report.mu_list) < len(mus)
    if truncated:
        print(f"error: sweep truncated by the triangle budget after "
              f"mu={report.mu_list[-1]:g}; see report notes", file=sys.stderr)
        return _EXIT_PIPELINE
    return _EXIT_OK


def _cmd_probe_superharmonic(args) -> int:
    domain = _load_domain(args.domain)
    if not (0.0 < args.corner_scale <= 1.0):
        raise _ConfigError("--corner-scale must lie in (0, 1]")
    probes = []
    if isinstance(domain, geometry.Polygon):
        v = domain.vertices
        n = len(domain)
        for i in domain.reflex_vertices():
            adjacent = min(
                float(np.hypot(*(v[(i - 1) % n] - v[i]))),
                float(np.hypot(*(v[(i + 1) % n] - v[i]))))
            probes.append(analysis.canonical_corner_probe(
                domain, i, args.corner_scale * adjacent))
    results = analysis.superharmonicity_probe(domain, probes)
    out = _out_dir(args)
    with open(out / "probes.csv", "w", encoding="utf-8", newline="") as f:
        f.write("center_x,center_y,radius,mean,center_value,violated\n")
        for r in results:
            f.write(",".join([
                _fmt(r.probe.center.x1), _fmt(r.probe.center.x2),
                _fmt(r.probe.radius), _fmt(r.mean), _fmt(r.center_value),
                str(int(r.violated)),
            ]) + "\n")
    if not probes:
        print("no reflex corners found; probes.csv has only a header")
    else:
        n_bad = sum(r.violated for r in results)
        print(f"probed {len(probes)} reflex corner(s); "
              f"{n_bad} violation(s) of the mean-value inequality")
    return _EXIT_OK


def _validation_checks():
    def bessel_branches():
        z = special.SERIES_ASYMPTOTIC_SWITCH
        i0s = special._series_i0(np.array([z]))[0]
        i0a = (np.exp(z) / np.sqrt(2 * np.pi * z)
               * special._asymptotic_factor(np.array([z]), special._C0))[0]
        i1s = special._series_i1(np.array([z]))[0]
        i1a = (np.exp(z) / np.sqrt(2 * np.pi * z)
               * special._asymptotic_factor(np.array([z]), special._C1))[0]
        r0 = abs(i0s - i0a) / i0s
        r1 = abs(i1s - i1a) / i1s
        return max(r0, r1) <= 1e-11, f"branch mismatch at z={z:g}: {max(r0, r1):.2e}"

    def bessel_derivative():
        z = np.linspace(0.5, 30.0, 60)
        h = 1e-5
        fd = (special.bessel_i1(z + h) - special.bessel_i1(z - h)) / (2 * h)
        exact = special.bessel_i0(z) - special.bessel_i1(z) / z
        worst = float(np.max(np.abs(fd - exact) / np.abs(exact)))
        return worst <= 1e-6, f"worst dI1/dz relative gap {worst:.2e}"

    def bessel_ratio():
        z = np.linspace(0.1, 100.0, 200)
        ratio = np.exp(special.log_bessel_i1(z) - special.log_bessel_i0(z))
        ok = bool(np.all(ratio < 1.0) and np.all(np.diff(ratio) > 0.0))
        return ok, f"I1/I0 in ({ratio[0]:.4f}, {ratio[-1]:.4f}), monotone={ok}"

    def disc_dirichlet():
        m = meshing.triangulate(geometry.unit_disc(), 0.02)
        field = solver.solve_dirichlet(m, 1.0)
        center = float(field.values[0])  # node 0 is the web center
        exact = 1.0 / special.bessel_i0(1.0)
        gap = abs(center - exact)
        return gap <= 2e-3, f"center value gap {gap:.2e} (limit 2e-3)"

    def disc_neumann():
        m = meshing.triangulate(geometry.unit_disc(), 0.02)
        field = solver.solve_neumann(m, 1.0)
        c_exact = 1.0 / special.bessel_i1(1.0)
        b_exact = special.bessel_i0(1.0) / special.bessel_i1(1.0)
        c_gap = abs(float(field.values[0]) - c_exact)
        b_node = int(np.flatnonzero(m.boundary_node)[0])
        b_gap = abs(float(field.values[b_node]) - b_exact)
        ok = c_gap <= 5e-3 and b_gap <= 1e-2
        return ok, f"center gap {c_gap:.2e} (5e-3), boundary gap {b_gap:.2e} (1e-2)"

    def halfplane_equality():
        worst = 0.0
        for mu in (0.5, 1.0, 7.0, 40.0):
            for x2 in (0.0, 0.3, 1.7, 5.0):
                value, grad = special.halfplane_solution_eval(mu, (1.3, x2))
                worst = max(worst, abs(mu * value - grad))
                # exp/log round trip of the transform, exact up to ulps
                worst = max(worst, abs(-math.log(value) / mu - x2))
        return worst <= 1e-12, f"half-plane margin/transform residue {worst:.2e}"

    def disc_margin_positive():
        sol = special.DiscSolution(1.0, 1.0)
        s = np.linspace(0.0, 1.0, 101)
        margins = sol.mu * sol.value_at_radius(s) - sol.gradient_magnitude_at_radius(s)
        return bool(np.all(margins > 0.0)), f"min analytic margin {margins.min():.6f}"

    return [
        ("bessel-branch-consistency", bessel_branches),
        ("bessel-derivative-identity", bessel_derivative),
        ("bessel-ratio-monotone", bessel_ratio),
        ("disc-dirichlet-fem", disc_dirichlet),
        ("disc-neumann-fem", disc_neumann),
        ("halfplane-margin-equality", halfplane_equality),
        ("disc-margin-positivity", disc_margin_positive),
    ]


def _cmd_validate(_args) -> int:
    failures = 0
    for name, check in _validation_checks():
        ok, detail = check()
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    print(f"{failures} failure(s)" if failures else "all checks passed")
    return _EXIT_OK if failures == 0 else _EXIT_PIPELINE


_COMMANDS = {
    "solve": _cmd_solve,
    "varadhan": _cmd_varadhan,
    "check-convexity": _cmd_check_convexity,
    "probe-superharmonic": _cmd_probe_superharmonic,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return _EXIT_CONFIG
    except (meshing.MeshBudgetError, solver.ConvergenceError,
            analysis.NonpositiveFieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_PIPELINE
    except ValueError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
