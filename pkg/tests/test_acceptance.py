"""Acceptance criteria, one test each.

Every test appends a single PASS/FAIL line (with the measured worst case
and the runtime against its budget) to the terminal summary.
"""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from radial_uncertainty import hydrogen as H
from radial_uncertainty import radial_numerics as rn
from radial_uncertainty.central_solver import PotentialSpec, audit_uncertainty, scan_spectrum, solve_bound_state
from radial_uncertainty.min_state import build_min_state, product_vs_ratio, residual_eq15

from conftest import ACCEPTANCE_LINES

BOUND_TOL = 1e-9
MIN_STATE_RATIOS = (5.0, 10.0, 20.0)


def record(number, title, passed, detail, elapsed, budget):
    ok = passed and elapsed < budget
    line = (
        f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} | {detail} "
        f"| {elapsed:.2f}s / {budget:g}s"
    )
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line
    assert elapsed < budget, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def solver_matrix():
    """Hydrogen n <= 6 (all l) and the four lowest oscillator levels.

    Brackets come from scan_spectrum, so nothing is seeded with the
    analytic eigenvalues.  Entries are (label, expected E, solution, spec).
    """
    states = []
    for l in range(6):
        spec = PotentialSpec.coulomb(1.0, l)
        brackets = scan_spectrum(spec, (-0.6, -0.01), 500)
        for br in brackets:
            n = br.nodes + l + 1
            if n > 6:
                continue
            sol = solve_bound_state(spec, br.nodes, (br.lo, br.hi))
            states.append((f"coulomb n={n} l={l}", -0.5 / n**2, sol, spec))
    for l in range(4):
        spec = PotentialSpec.harmonic(1.0, l)
        for br in scan_spectrum(spec, (0.0, 4.75), 200):
            e = 2 * br.nodes + l + 1.5
            sol = solve_bound_state(spec, br.nodes, (br.lo, br.hi))
            states.append((f"harmonic k={br.nodes} l={l}", e, sol, spec))
    return states


def test_criterion_01_exact_identities():
    with Timer() as t:
        bad = []
        for q in H.all_states(50):
            var = H.coordinate_variance_from_moments(q)
            if var != H.coordinate_variance(q):
                bad.append((q.label, "variance"))
            if H.uncertainty_product(q) != var * H.radial_momentum_variance_from_energy(q):
                bad.append((q.label, "product"))
    record(1, "exact variance and product identities, n <= 50", not bad, f"mismatches={len(bad)}", t.elapsed, 5)


def test_criterion_02_circular_minimum():
    with Timer() as t:
        bad = []
        mins = []
        for n in range(1, 51):
            l_star, m = H.min_product_over_l(n)
            mins.append(m)
            if l_star != n - 1 or m != Fraction(2 * n + 1, 4 * (2 * n - 1)):
                bad.append(n)
            # the excess over 1/4 is exactly 1/(2(2n-1)), which tends to zero
            if m - Fraction(1, 4) != Fraction(1, 2 * (2 * n - 1)):
                bad.append(n)
        decreasing = all(b < a for a, b in zip(mins, mins[1:]))
    record(
        2,
        "min over l at l = n-1 equals (2n+1)/(4(2n-1)), strictly decreasing",
        not bad and decreasing,
        f"bad_n={bad} decreasing={decreasing} min(n=50)={float(mins[-1]):.12g}",
        t.elapsed,
        5,
    )


def test_criterion_03_bound():
    with Timer() as t:
        exact_bad = [q.label for q in H.all_states(50) if not H.uncertainty_product(q) > H.QUARTER]
        numeric = []
        for label, _, sol, spec in solver_matrix():
            numeric.append((label, audit_uncertainty(spec, sol).product))
        for e in product_vs_ratio(MIN_STATE_RATIOS):
            numeric.append((f"min-state ratio={e.ratio:g}", e.product))
        violations = [(lab, p) for lab, p in numeric if not p >= 0.25 - BOUND_TOL]
        worst = min(numeric, key=lambda x: x[1])
    record(
        3,
        "products > 1/4 exactly (n <= 50), >= 1/4 - 1e-9 numerically",
        not exact_bad and not violations,
        f"exact_violations={len(exact_bad)} numeric_violations={violations} "
        f"worst={worst[0]}:{worst[1] - 0.25:+.3e}",
        t.elapsed,
        120,
    )


def test_criterion_04_zero_mean_momentum():
    with Timer() as t:
        worst = max(abs(rn.mean_pr(rn.sample_hydrogen(q))) for q in H.all_states(8))
    record(4, "|<p_r>| <= 1e-8, hydrogen n <= 8", worst <= 1e-8, f"max|<p_r>|={worst:.3e}", t.elapsed, 30)


def test_criterion_05_weyl():
    with Timer() as t:
        neg = gap = lin = vtx = 0.0
        for q in H.all_states(8):
            f = rn.sample_hydrogen(q)
            res = rn.weyl_scan(f, rn.default_alphas(rn.variance_r(f), 41))
            neg = min(neg, float(np.min(res.I_direct)))
            gap = max(gap, res.max_form_gap)
            lin = max(lin, abs(res.I3_coeff - 1.0))
            exact_vertex = -1.0 / (2.0 * float(H.coordinate_variance(q)))
            vtx = max(vtx, abs(res.fitted_vertex - exact_vertex) / abs(exact_vertex))
        ok = neg >= -1e-10 and gap <= 1e-5 and lin <= 1e-5 and vtx <= 1e-4
    record(
        5,
        "Weyl integral scan, hydrogen n <= 8",
        ok,
        f"min I={neg:.3e} max gap={gap:.3e} |I3-1|={lin:.3e} vertex rel={vtx:.3e}",
        t.elapsed,
        60,
    )


def test_criterion_06_integration_by_parts():
    with Timer() as t:
        forms = r3 = 0.0
        for q in H.all_states(8):
            f = rn.sample_hydrogen(q)
            forms = max(forms, abs(rn.variance_pr_gradient_form(f) - rn.variance_pr_laplacian_form(f)))
            r3 = max(r3, abs(rn.r3_rr_prime_integral(f) + 1.5))
    record(
        6,
        "momentum forms agree 1e-5, r^3 R R' integral = -3/2 within 1e-6",
        forms <= 1e-5 and r3 <= 1e-6,
        f"max form gap={forms:.3e} max r3 error={r3:.3e}",
        t.elapsed,
        30,
    )


def test_criterion_07_min_state():
    with Timer() as t:
        residuals = []
        for ratio in MIN_STATE_RATIOS:
            state, f = build_min_state(ratio, 1.0)
            residuals.append(residual_eq15(state, f))
        entries = product_vs_ratio(MIN_STATE_RATIOS)
        products = [e.product for e in entries]
        near = abs(products[-1] - 0.25)
        decreasing = all(b < a for a, b in zip(products, products[1:]))
        state, f = build_min_state(10.0, 1.0)
        _, g = build_min_state(10.0, 1.0, cutoff=state.cutoff / 2)
        halving = abs(rn.uncertainty_report(f, "a").product - rn.uncertainty_report(g, "b").product)
        ok = max(residuals) <= 1e-6 and near <= 1e-3 and decreasing and halving <= 1e-9
    record(
        7,
        "min-state residual, product near 1/4, monotone decrease, cutoff insensitivity",
        ok,
        f"max residual={max(residuals):.3e} |P(20)-1/4|={near:.3e} "
        f"P-1/4={[f'{p - 0.25:+.3e}' for p in products]} decreasing={decreasing} "
        f"halving={halving:.3e}",
        t.elapsed,
        30,
    )


def test_criterion_08_asymptotics():
    with Timer() as t:
        mean_sq, var, _ = H.circular_asymptotics(100)
        a = float(var / Fraction(100**3, 2))
        b = float(mean_sq / Fraction(100**4))
    record(
        8,
        "n = 100 circular state against n^3/2 and n^4",
        abs(a - 1) <= 0.02 and abs(b - 1) <= 0.02,
        f"var/(n^3/2)={a:.6f} <r>^2/n^4={b:.6f}",
        t.elapsed,
        1,
    )


def test_criterion_09_solver():
    with Timer() as t:
        states = solver_matrix()
        labels = [s[0] for s in states]
        expected_coulomb = {f"coulomb n={n} l={l}" for n in range(1, 7) for l in range(n)}
        levels = {e for lab, e, _, _ in states if lab.startswith("harmonic")}
        complete = expected_coulomb <= set(labels) and levels == {1.5, 2.5, 3.5, 4.5}
        e_err = max(abs(sol.energy - e) for _, e, sol, _ in states)
        low = min(audit_uncertainty(spec, sol).product for _, _, sol, spec in states)
        ok = complete and e_err <= 1e-8 and low >= 0.25 - BOUND_TOL
    record(
        9,
        "Numerov eigenvalues (hydrogen n <= 6, oscillator 4 levels) and bound",
        ok,
        f"states={len(states)} complete={complete} max|dE|={e_err:.3e} min product={low:.6f}",
        t.elapsed,
        120,
    )


def test_criterion_10_cli_determinism():
    cmd = [sys.executable, "-m", "radial_uncertainty"]
    with Timer() as t:
        first = subprocess.run(cmd + ["table", "--n-max", "20", "--format", "csv"], capture_output=True, check=False)
        second = subprocess.run(cmd + ["table", "--n-max", "20", "--format", "csv"], capture_output=True, check=False)
        identical = first.returncode == 0 and first.stdout == second.stdout and len(first.stdout) > 0
        verify = subprocess.run(
            cmd + ["verify", "--n", "1", "--l", "0", "--format", "csv"], capture_output=True, text=True, check=False
        )
        product = next(
            float(line.split(",")[1]) for line in verify.stdout.splitlines() if line.startswith("product,")
        )
        ok = identical and verify.returncode == 0 and abs(product - 0.75) <= 1e-6
    record(
        10,
        "CLI table output byte-identical, verify (1,0) exits 0 with product 0.75",
        ok,
        f"identical={identical} verify_exit={verify.returncode} product={product!r}",
        t.elapsed,
        10,
    )
