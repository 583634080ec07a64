"""Command-line front end: reproducible tables and verification runs.

    radial-uncertainty table --n-max 20 --format csv
    radial-uncertainty verify --n 10 --l 9
    radial-uncertainty weyl --n 1 --l 0 --alphas 41
    radial-uncertainty minstate --ratios 5,10,20
    radial-uncertainty solve --potential harmonic --l 0 --nodes 0 --bracket 1,2

Exit status: 0 when every embedded check passes, 1 when a check fails,
2 for usage errors, 3 for input or solver errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from . import hydrogen as hyd
from . import radial_numerics as rn
from .central_solver import (
    BRACKET_TOLERANCE,
    PotentialSpec,
    audit_uncertainty,
    solve_bound_state,
)
from .errors import (
    BracketError,
    DomainError,
    NoEigenvalueError,
    PotentialParseError,
    ResolutionError,
    ValidityError,
)
from .min_state import product_vs_ratio

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

DEFAULT_TOLERANCES = {
    "bound": 1e-9,
    "mean_pr": 1e-8,
    "ibp": 1e-5,
    "r3": 1e-6,
    "moments": 1e-8,
    "product": 1e-6,
    "norm": 1e-10,
    "weyl_nonneg": 1e-10,
    "weyl_gap": 1e-5,
    "weyl_linear": 1e-5,
    "weyl_vertex": 1e-4,
    "residual": 1e-6,
    "energy_consistency": 1e-5,
}

N_MAX_LIMIT = 200
DECIMAL_FORMAT = ".12g"


class Run:
    """Accumulates rows and checks for one command invocation."""

    def __init__(self, command: str, parameters: dict, tolerances: dict):
        self.command = command
        self.parameters = parameters
        self.tol = tolerances
        self.rows: list[dict] = []
        self.checks: list[dict] = []

    def check(self, name, value, limit, passed=None):
        if passed is None:
            passed = bool(abs(value) <= limit)
        self.checks.append({"name": name, "value": value, "limit": limit, "passed": bool(passed)})
        return passed

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def payload(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "rows": self.rows,
            "checks": self.checks,
            "versions": {
                "radial_uncertainty": __version__,
                "numpy": np.__version__,
                "python": platform.python_version(),
            },
        }


def frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _jsonable(v):
    if isinstance(v, Fraction):
        return frac(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    return v


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, DECIMAL_FORMAT)
    if isinstance(v, Fraction):
        return frac(v)
    return str(v)


def render(run: Run, fmt: str) -> str:
    if fmt == "json":
        data = json.loads(json.dumps(run.payload(), default=_jsonable))
        return json.dumps(data, indent=2, sort_keys=False) + "\n"
    columns = list(run.rows[0].keys()) if run.rows else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in run.rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
        return buf.getvalue()
    cells = [[_cell(row.get(c)) for c in columns] for row in run.rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines.append("")
    for c in run.checks:
        mark = "PASS" if c["passed"] else "FAIL"
        lines.append(f"[{mark}] {c['name']}: value={_cell(c['value'])} limit={_cell(c['limit'])}")
    lines.append(f"overall: {'PASS' if run.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _pmap(func, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------------------
# commands


def _table_rows_for_n(n: int) -> list[dict]:
    l_star, _ = hyd.min_product_over_l(n)
    rows = []
    for l in range(n):
        q = hyd.QuantumNumbers(n, l)
        var_r = hyd.coordinate_variance(q)
        var_pr = hyd.radial_momentum_variance(q)
        prod = hyd.uncertainty_product(q)
        rows.append(
            {
                "n": n,
                "l": l,
                "var_r": frac(var_r),
                "var_r_decimal": float(var_r),
                "var_pr": frac(var_pr),
                "var_pr_decimal": float(var_pr),
                "product": frac(prod),
                "product_decimal": float(prod),
                "is_argmin": l == l_star,
                "_identity_17": hyd.coordinate_variance_from_moments(q) == var_r,
                "_identity_pr": hyd.radial_momentum_variance_from_energy(q) == var_pr,
                "_factorization": var_r * var_pr == prod,
                "_above_bound": prod > hyd.QUARTER,
                "_argmin_circular": l_star == n - 1,
            }
        )
    return rows


def cmd_table(n_max: int, tol: dict, workers: int = 1) -> Run:
    if not 1 <= n_max <= N_MAX_LIMIT:
        raise UsageError(f"--n-max must lie in [1, {N_MAX_LIMIT}], got {n_max}")
    run = Run("table", {"n_max": n_max}, tol)
    per_n = _pmap(_table_rows_for_n, list(range(1, n_max + 1)), workers)
    rows = [r for block in per_n for r in block]
    for key, name in [
        ("_identity_17", "variance_equals_moment_difference"),
        ("_identity_pr", "momentum_variance_equals_energy_form"),
        ("_factorization", "product_factorizes"),
        ("_above_bound", "product_exceeds_quarter"),
        ("_argmin_circular", "argmin_is_circular"),
    ]:
        bad = sum(1 for r in rows if not r[key])
        run.check(name, bad, 0, passed=bad == 0)
    run.rows = [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows]
    return run


def _state(n, l) -> hyd.QuantumNumbers:
    try:
        return hyd.QuantumNumbers(n, l)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(n: int, l: int, tol: dict) -> Run:
    q = _state(n, l)
    f = rn.sample_hydrogen(q)
    rep = rn.uncertainty_report(f, q.label)
    r3 = rn.r3_rr_prime_integral(f)
    exact = {
        "mean_r": hyd.mean_r(q),
        "var_r": hyd.coordinate_variance(q),
        "mean_pr": Fraction(0),
        "var_pr_gradient": hyd.radial_momentum_variance(q),
        "var_pr_laplacian": hyd.radial_momentum_variance(q),
        "var_pr": hyd.radial_momentum_variance(q),
        "product": hyd.uncertainty_product(q),
        "r3_rr_prime": Fraction(-3, 2),
    }
    numeric = {
        "mean_r": rep.mean_r,
        "var_r": rep.var_r,
        "mean_pr": rep.mean_pr,
        "var_pr_gradient": rep.var_pr_gradient,
        "var_pr_laplacian": rep.var_pr_laplacian,
        "var_pr": rep.var_pr,
        "product": rep.product,
        "r3_rr_prime": r3,
    }
    run = Run("verify", {"n": n, "l": l, "grid_points": len(f.grid), "r_max": f.grid.r_max}, tol)
    for key, ex in exact.items():
        run.rows.append(
            {
                "quantity": key,
                "numerical": numeric[key],
                "exact": frac(ex),
                "exact_decimal": float(ex),
                "delta": numeric[key] - float(ex),
            }
        )
    run.check("norm_defect", f.norm_defect, tol["norm"])
    run.check("mean_r_relative", (rep.mean_r - float(exact["mean_r"])) / float(exact["mean_r"]), tol["moments"])
    run.check("var_r_relative", (rep.var_r - float(exact["var_r"])) / float(exact["var_r"]), tol["moments"])
    run.check("mean_pr_zero", rep.mean_pr, tol["mean_pr"])
    run.check("momentum_forms_agree", rep.form_disagreement, tol["ibp"])
    run.check("r3_rr_prime_integral", r3 + 1.5, tol["r3"])
    run.check("product_vs_exact", rep.product - float(exact["product"]), tol["product"])
    run.check("bound", rep.product - 0.25, tol["bound"], passed=rep.product >= 0.25 - tol["bound"])
    return run


def cmd_weyl(n: int, l: int, alpha_count: int, tol: dict) -> Run:
    q = _state(n, l)
    if alpha_count < 3:
        raise UsageError("--alphas must be at least 3")
    f = rn.sample_hydrogen(q)
    var = rn.variance_r(f)
    res = rn.weyl_scan(f, rn.default_alphas(var, alpha_count))
    run = Run("weyl", {"n": n, "l": l, "alphas": alpha_count}, tol)
    for a, d, qd in zip(res.alphas, res.I_direct, res.I_quadratic):
        run.rows.append({"alpha": float(a), "I_direct": float(d), "I_quadratic": float(qd), "gap": float(d - qd)})
    p2 = rn.variance_pr_gradient_form(f)
    m = float(np.min(res.I_direct))
    run.check("I_direct_nonnegative", m, tol["weyl_nonneg"], passed=m >= -tol["weyl_nonneg"])
    run.check("direct_vs_quadratic", res.max_form_gap, tol["weyl_gap"])
    run.check("I1_coeff_minus_var_r", res.I1_coeff - var, tol["weyl_gap"])
    run.check("I3_coeff_minus_1", res.I3_coeff - 1.0, tol["weyl_linear"])
    run.check("I2_coeff_minus_var_pr", res.I2_coeff - p2, tol["weyl_gap"])
    run.check("vertex_relative", (res.fitted_vertex - res.alpha_star) / res.alpha_star, tol["weyl_vertex"])
    return run


def cmd_minstate(ratios, tol: dict) -> Run:
    entries = product_vs_ratio(ratios)
    run = Run("minstate", {"ratios": [float(r) for r in ratios]}, tol)
    for e in entries:
        run.rows.append(
            {
                "ratio": float(e.ratio),
                "mean": e.mean,
                "var": e.var,
                "product": e.product,
                "residual": e.residual,
                "boundary_weight": e.boundary_weight,
                "bound_satisfied": e.bound_satisfied,
                "error": e.error,
            }
        )
        if e.ok:
            run.check(f"residual[ratio={e.ratio:g}]", e.residual, tol["residual"])
            run.check(
                f"bound[ratio={e.ratio:g}]",
                e.product - 0.25,
                tol["bound"],
                passed=e.product >= 0.25 - tol["bound"],
            )
    if not any(e.ok for e in entries):
        run.check("any_valid_ratio", 0, 1, passed=False)
    return run


def _potential(name: str, l: int, charge: float, omega: float) -> PotentialSpec:
    if name == "coulomb":
        return PotentialSpec.coulomb(charge, l)
    if name == "harmonic":
        return PotentialSpec.harmonic(omega, l)
    return PotentialSpec.from_file(name, l)


def cmd_solve(potential: str, l: int, nodes: int, bracket, tol: dict, charge=1.0, omega=1.0) -> Run:
    if l < 0 or nodes < 0:
        raise UsageError("--l and --nodes must be nonnegative")
    spec = _potential(potential, l, charge, omega)
    sol = solve_bound_state(spec, nodes, bracket)
    rep = audit_uncertainty(spec, sol)
    run = Run(
        "solve",
        {
            "potential": spec.description,
            "l": l,
            "nodes": nodes,
            "bracket": [float(b) for b in bracket],
            "grid_points": len(sol.wavefunction.grid),
            "r_max": sol.wavefunction.grid.r_max,
        },
        tol,
    )
    run.rows.append(
        {
            "energy": sol.energy,
            "nodes": sol.nodes,
            "iterations": sol.iterations,
            "bracket_width": sol.bracket_width,
            "mean_r": rep.mean_r,
            "var_r": rep.var_r,
            "mean_pr": rep.mean_pr,
            "var_pr": rep.var_pr,
            "product": rep.product,
            "bound_satisfied": rep.bound_satisfied,
            "energy_consistency": rep.diagnostics["energy_consistency"],
        }
    )
    run.check("converged", sol.bracket_width, BRACKET_TOLERANCE, passed=sol.bracket_width < BRACKET_TOLERANCE)
    run.check("bound", rep.product - 0.25, tol["bound"], passed=rep.product >= 0.25 - tol["bound"])
    run.check("energy_consistency", rep.diagnostics["energy_consistency"], tol["energy_consistency"])
    return run


# ---------------------------------------------------------------------------
# argument parsing


class UsageError(Exception):
    pass


def _tolerance_item(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    if name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"unknown tolerance {name!r}; choose from {', '.join(sorted(DEFAULT_TOLERANCES))}"
        )
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name} needs a number") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"tolerance {name} must be nonnegative")
    return name, v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _bracket(text: str):
    vals = _float_list(text)
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError("bracket must be LO,HI with LO < HI")
    return tuple(vals)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "csv", "json"], default="text")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--workers", type=_positive_int, default=1)
    common.add_argument(
        "--tol",
        action="append",
        type=_tolerance_item,
        default=[],
        metavar="NAME=VALUE",
        help="override a check tolerance (repeatable)",
    )
    parser = argparse.ArgumentParser(prog="radial-uncertainty", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="exact hydrogen variances and products")
    p.add_argument("--n-max", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="quadrature audit of one hydrogen state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)

    p = sub.add_parser("weyl", parents=[common], help="auxiliary-integral scan over alpha")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--alphas", type=int, default=rn.DEFAULT_ALPHA_COUNT)

    p = sub.add_parser("minstate", parents=[common], help="minimum-uncertainty state versus mean/sigma")
    p.add_argument("--ratios", type=_float_list, default=[5.0, 10.0, 20.0])

    p = sub.add_parser("solve", parents=[common], help="Numerov bound state of a central potential")
    p.add_argument("--potential", required=True, help="coulomb, harmonic, or a two-column file")
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--nodes", type=int, default=0)
    p.add_argument("--bracket", type=_bracket, required=True, metavar="LO,HI")
    p.add_argument("--charge", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    return parser


def run_command(args) -> Run:
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(dict(args.tol))
    if args.command == "table":
        return cmd_table(args.n_max, tol, args.workers)
    if args.command == "verify":
        return cmd_verify(args.n, args.l, tol)
    if args.command == "weyl":
        return cmd_weyl(args.n, args.l, args.alphas, tol)
    if args.command == "minstate":
        return cmd_minstate(args.ratios, tol)
    return cmd_solve(args.potential, args.l, args.nodes, args.bracket, tol, args.charge, args.omega)


def _glue_bracket(argv):
    # "--bracket -0.6,-0.4" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--bracket":
            out.append(f"--bracket={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_bracket(sys.argv[1:] if argv is None else argv))
    try:
        run = run_command(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        PotentialParseError,
        NoEigenvalueError,
        BracketError,
        ResolutionError,
        ValidityError,
        DomainError,
        OSError,
    ) as exc:
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(run, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if run.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
