import math

import numpy as np
import pytest

from radial_uncertainty import hydrogen as H
from radial_uncertainty.central_solver import (
    PotentialSpec,
    audit_uncertainty,
    effective_potential,
    find_state,
    read_potential_file,
    scan_spectrum,
    solve_bound_state,
)
from radial_uncertainty.errors import (
    BracketError,
    ContractError,
    DomainError,
    NoEigenvalueError,
    PotentialParseError,
)


def coulomb_bracket(n):
    e = -0.5 / n**2
    return e * 1.0005, e * 0.9995


class TestPotentialSpec:
    @pytest.mark.parametrize(
        "spec, r, expected",
        [
            (PotentialSpec.coulomb(1.0, 0), 2.0, -0.5),
            (PotentialSpec.coulomb(1.0, 1), 1.0, 0.0),
            (PotentialSpec.harmonic(1.0, 0), 2.0, 2.0),
            (PotentialSpec.harmonic(2.0, 2), 1.0, 2.0 + 3.0),
        ],
    )
    def test_effective_potential(self, spec, r, expected):
        assert effective_potential(spec, r) == pytest.approx(expected, abs=1e-15)

    def test_nonpositive_r(self):
        with pytest.raises(DomainError):
            effective_potential(PotentialSpec.coulomb(), 0.0)

    @pytest.mark.parametrize(
        "make",
        [
            lambda: PotentialSpec.coulomb(0.0),
            lambda: PotentialSpec.harmonic(-1.0),
            lambda: PotentialSpec.coulomb(1.0, -1),
            lambda: PotentialSpec.tabulated([0, 1, 1, 2], [0, 1, 2, 3]),
            lambda: PotentialSpec.tabulated([0, 1, 2, 3], [0, 1, np.nan, 3]),
            lambda: PotentialSpec("morse"),
        ],
    )
    def test_invariants(self, make):
        with pytest.raises(DomainError):
            make()

    def test_table_range(self):
        spec = PotentialSpec.tabulated(np.linspace(0.1, 5, 50), np.linspace(0, 1, 50))
        assert effective_potential(spec, 1.0) == pytest.approx(0.9 / 4.9, rel=1e-12)
        with pytest.raises(DomainError):
            effective_potential(spec, 6.0)

    def test_pchip_stays_monotone(self):
        r = np.array([0.0, 1.0, 2.0, 3.0, 10.0])
        u = np.array([0.0, 0.0, 1.0, 1.0, 1.0])
        spec = PotentialSpec.tabulated(r, u)
        fine = spec.potential(np.linspace(0, 10, 2001))
        assert np.all(np.diff(fine) >= -1e-15)


class TestPotentialFile:
    def test_read(self, tmp_path):
        p = tmp_path / "v.dat"
        p.write_text("# header\n0 0\n1 0.5   # trailing\n\n2 2\n3 4.5\n")
        r, u = read_potential_file(p)
        assert r.tolist() == [0, 1, 2, 3] and u.tolist() == [0, 0.5, 2, 4.5]

    @pytest.mark.parametrize(
        "text, line",
        [
            ("0 0\n1 1\n2 x\n3 3\n", 3),
            ("0 0\n1 1 1\n", 2),
            ("# c\n0 0\n1 1\n1 2\n3 3\n", 4),
            ("0 0\n1 inf\n", 2),
        ],
    )
    def test_parse_errors_name_the_line(self, tmp_path, text, line):
        p = tmp_path / "bad.dat"
        p.write_text(text)
        with pytest.raises(PotentialParseError, match=f"line {line}:") as info:
            read_potential_file(p)
        assert info.value.lineno == line

    def test_too_short(self, tmp_path):
        p = tmp_path / "short.dat"
        p.write_text("0 0\n1 1\n")
        with pytest.raises(PotentialParseError):
            read_potential_file(p)

    def test_tabulated_oscillator(self, tmp_path):
        r = np.linspace(0.0, 12.0, 2401)
        p = tmp_path / "osc.dat"
        p.write_text("".join(f"{x:.10f} {0.5 * x * x:.16e}\n" for x in r))
        spec = PotentialSpec.from_file(p, l=0)
        sol = find_state(spec, 0, (0.5, 2.5))
        assert sol.energy == pytest.approx(1.5, abs=1e-6)
        assert audit_uncertainty(spec, sol).product >= 0.25 - 1e-9


class TestSolve:
    @pytest.mark.parametrize(
        "spec, nodes, bracket, energy",
        [
            (PotentialSpec.coulomb(1.0, 0), 0, (-0.6, -0.4), -0.5),
            (PotentialSpec.coulomb(1.0, 1), 0, (-0.2, -0.1), -0.125),
            (PotentialSpec.harmonic(1.0, 0), 0, (1.0, 2.0), 1.5),
            (PotentialSpec.coulomb(2.0, 0), 1, (-0.6, -0.4), -0.5),
        ],
    )
    def test_examples(self, spec, nodes, bracket, energy):
        sol = solve_bound_state(spec, nodes, bracket)
        assert sol.energy == pytest.approx(energy, abs=1e-8)
        assert sol.nodes == nodes
        assert sol.bracket_width < 1e-11
        assert sol.wavefunction.norm_defect <= 1e-8

    def test_no_eigenvalue(self):
        with pytest.raises(NoEigenvalueError):
            solve_bound_state(PotentialSpec.coulomb(), 0, (-0.45, -0.2))

    def test_node_mismatch(self):
        with pytest.raises(BracketError):
            solve_bound_state(PotentialSpec.coulomb(), 1, (-0.6, -0.4))

    def test_bad_bracket(self):
        with pytest.raises(ContractError):
            solve_bound_state(PotentialSpec.coulomb(), 0, (-0.4, -0.6))

    @pytest.mark.parametrize("q", [q for q in H.all_states(4)])
    def test_wavefunction_matches_analytic(self, q):
        spec = PotentialSpec.coulomb(1.0, q.l)
        sol = solve_bound_state(spec, q.n - q.l - 1, coulomb_bracket(q.n))
        wf = sol.wavefunction
        exact = H.radial_wavefunction(q, wf.r)
        sign = np.sign(np.dot(exact, wf.values))
        assert np.max(np.abs(sign * wf.values - exact)) <= 1e-6

    def test_reported_nodes_are_sign_changes(self):
        spec = PotentialSpec.harmonic(1.0, 1)
        sol = solve_bound_state(spec, 2, (6.0, 7.0))
        u = sol.u[1:-1]
        nz = u[u != 0.0]
        assert int(np.sum(np.signbit(nz[1:]) != np.signbit(nz[:-1]))) == sol.nodes == 2


class TestScan:
    def test_coulomb(self):
        br = scan_spectrum(PotentialSpec.coulomb(), (-0.6, -0.01), 500)
        assert [b.nodes for b in br[:4]] == [0, 1, 2, 3]
        for b, n in zip(br, range(1, 5)):
            assert b.lo <= -0.5 / n**2 <= b.hi

    def test_harmonic(self):
        br = scan_spectrum(PotentialSpec.harmonic(), (0.0, 8.0), 200)
        assert len(br) == 4
        for b, e in zip(br, (1.5, 3.5, 5.5, 7.5)):
            assert b.lo <= e <= b.hi

    def test_empty_range(self):
        assert scan_spectrum(PotentialSpec.coulomb(), (-2.0, -0.6), 50) == []

    def test_too_few_samples(self):
        with pytest.raises(ContractError):
            scan_spectrum(PotentialSpec.coulomb(), (-0.6, -0.01), 1)

    def test_range_above_threshold(self):
        with pytest.raises(DomainError):
            scan_spectrum(PotentialSpec.coulomb(), (-0.6, 0.1), 50)


class TestAudit:
    def test_coulomb_ground(self):
        spec = PotentialSpec.coulomb()
        rep = audit_uncertainty(spec, solve_bound_state(spec, 0, (-0.6, -0.4)))
        assert rep.product == pytest.approx(0.75, abs=1e-5)
        assert rep.diagnostics["energy_consistent"]

    def test_harmonic_ground(self):
        spec = PotentialSpec.harmonic()
        rep = audit_uncertainty(spec, solve_bound_state(spec, 0, (1.0, 2.0)))
        # u ~ r exp(-r^2/2): <r^2> = 3/2, <r> = 2/sqrt(pi), <p_r^2> = 2 (E - <r^2>/2) = 3/2
        var_r = 1.5 - 4.0 / math.pi
        assert rep.var_r == pytest.approx(var_r, abs=1e-7)
        assert rep.var_pr == pytest.approx(1.5, abs=1e-7)
        assert rep.product >= 0.25

    @pytest.mark.parametrize("l", [0, 1, 2])
    @pytest.mark.parametrize("k", [0, 1, 2])
    def test_oscillator_matrix(self, l, k):
        spec = PotentialSpec.harmonic(1.0, l)
        e = 2 * k + l + 1.5
        sol = solve_bound_state(spec, k, (e - 0.5, e + 0.5))
        assert sol.energy == pytest.approx(e, abs=1e-8)
        rep = audit_uncertainty(spec, sol)
        assert rep.bound_satisfied and rep.product >= 0.25 - 1e-9
        assert abs(rep.diagnostics["energy_consistency"]) <= 1e-5

    @pytest.mark.parametrize("q", [(3, 0), (3, 2), (5, 1)])
    def test_coulomb_energy_consistency(self, q):
        q = H.QuantumNumbers(*q)
        spec = PotentialSpec.coulomb(1.0, q.l)
        sol = solve_bound_state(spec, q.n - q.l - 1, coulomb_bracket(q.n))
        rep = audit_uncertainty(spec, sol)
        assert abs(rep.diagnostics["energy_consistency"]) <= 1e-5
        assert rep.product == pytest.approx(float(H.uncertainty_product(q)), abs=1e-6)
