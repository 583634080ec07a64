"""Bound states of the radial equation for arbitrary central potentials.

The reduced function u = r R obeys u'' = 2 [U_eff(r) - E] u, which is
integrated with Numerov's method from both ends of a uniform grid and
matched at the outermost classical turning point.  Eigenvalues are
refined by bisection on the sign of the matching mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _numerov
from .errors import BracketError, ContractError, DomainError, NoEigenvalueError, PotentialParseError
from .grids import RadialGrid
from .radial_numerics import SampledRadialFunction, UncertaintyReport, derivative, uncertainty_report
from .special_math import quadrature_weights

BRACKET_TOLERANCE = 1e-11
TAIL_EXPONENT = 12.0
BASE_SPACING = 0.005
POINTS_PER_WAVELENGTH = 40
ENERGY_CONSISTENCY_TOLERANCE = 1e-5
_MAX_BISECTIONS = 200


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    """Central potential U(r) plus the orbital quantum number l.

    ``kind`` is ``"coulomb"`` (U = -Z/r), ``"harmonic"`` (U = w^2 r^2 / 2)
    or ``"tabulated"`` (monotone cubic interpolation of (r, U) samples).
    """

    kind: str
    l: int = 0
    charge: float = 1.0
    omega: float = 1.0
    table_r: np.ndarray | None = None
    table_u: np.ndarray | None = None
    description: str = ""
    _interp: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.l < 0 or int(self.l) != self.l:
            raise DomainError(f"l must be a nonnegative integer, got {self.l}")
        if self.kind == "coulomb":
            if not self.charge > 0:
                raise DomainError("Coulomb charge must be positive")
        elif self.kind == "harmonic":
            if not self.omega > 0:
                raise DomainError("oscillator frequency must be positive")
        elif self.kind == "tabulated":
            r = np.asarray(self.table_r, dtype=float)
            u = np.asarray(self.table_u, dtype=float)
            if r.ndim != 1 or r.shape != u.shape or r.size < 4:
                raise DomainError("tabulated potential needs at least 4 (r, U) pairs")
            if r[0] < 0 or not np.all(np.diff(r) > 0):
                raise DomainError("tabulated r must be nonnegative and strictly increasing")
            if not np.all(np.isfinite(u)):
                raise DomainError("tabulated U must be finite")
            object.__setattr__(self, "table_r", r)
            object.__setattr__(self, "table_u", u)
            object.__setattr__(self, "_interp", PchipInterpolator(r, u, extrapolate=False))
        else:
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if not self.description:
            object.__setattr__(self, "description", self._default_description())

    def _default_description(self):
        if self.kind == "coulomb":
            return f"coulomb Z={self.charge:g} l={self.l}"
        if self.kind == "harmonic":
            return f"harmonic omega={self.omega:g} l={self.l}"
        return f"tabulated ({self.table_r.size} points) l={self.l}"

    @classmethod
    def coulomb(cls, charge=1.0, l=0):
        return cls("coulomb", l=l, charge=float(charge))

    @classmethod
    def harmonic(cls, omega=1.0, l=0):
        return cls("harmonic", l=l, omega=float(omega))

    @classmethod
    def tabulated(cls, r, u, l=0, description=""):
        return cls("tabulated", l=l, table_r=r, table_u=u, description=description)

    @classmethod
    def from_file(cls, path, l=0):
        r, u = read_potential_file(path)
        return cls.tabulated(r, u, l=l, description=f"tabulated {Path(path).name} l={l}")

    def with_l(self, l):
        return PotentialSpec(
            self.kind, l, self.charge, self.omega, self.table_r, self.table_u, ""
        )

    @property
    def r_origin(self) -> float:
        """Inner end of the radial domain (hard wall when positive)."""
        return float(self.table_r[0]) if self.kind == "tabulated" else 0.0

    @property
    def r_limit(self) -> float:
        return float(self.table_r[-1]) if self.kind == "tabulated" else math.inf

    @property
    def coulomb_strength(self) -> float:
        """Z with U ~ -Z/r at the origin; zero for potentials finite there."""
        return self.charge if self.kind == "coulomb" else 0.0

    @property
    def threshold(self) -> float:
        """lim U_eff(r) as r -> infinity (or at the table end)."""
        if self.kind == "coulomb":
            return 0.0
        if self.kind == "harmonic":
            return math.inf
        return float(self.table_u[-1])

    def potential(self, r):
        r = np.asarray(r, dtype=float)
        if self.kind == "coulomb":
            with np.errstate(divide="ignore"):
                return -self.charge / r
        if self.kind == "harmonic":
            return 0.5 * self.omega**2 * r * r
        if np.any(r < self.table_r[0]) or np.any(r > self.table_r[-1]):
            raise DomainError(
                f"r outside tabulated range [{self.table_r[0]:g}, {self.table_r[-1]:g}]"
            )
        return self._interp(r)


def effective_potential(spec: PotentialSpec, r):
    """U(r) + l(l+1) / (2 r^2)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0.0):
        raise DomainError("effective potential needs r > 0")
    out = spec.potential(r_arr) + spec.l * (spec.l + 1) / (2.0 * r_arr * r_arr)
    return out if out.ndim else float(out)


def read_potential_file(path):
    """Two whitespace-separated columns (r, U); '#' starts a comment."""
    rs, us = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise PotentialParseError(f"expected 2 columns, found {len(parts)}", lineno)
            try:
                r, u = float(parts[0]), float(parts[1])
            except ValueError:
                raise PotentialParseError(f"non-numeric entry {line!r}", lineno) from None
            if not (math.isfinite(r) and math.isfinite(u)):
                raise PotentialParseError("non-finite value", lineno)
            if rs and r <= rs[-1]:
                raise PotentialParseError("r values must be strictly increasing", lineno)
            if r < 0:
                raise PotentialParseError("r must be nonnegative", lineno)
            rs.append(r)
            us.append(u)
    if len(rs) < 4:
        raise PotentialParseError(f"need at least 4 data rows, found {len(rs)}")
    return np.array(rs), np.array(us)


# ---------------------------------------------------------------------------
# grid construction


def _ueff_on(spec: PotentialSpec, r: np.ndarray) -> np.ndarray:
    """U_eff on grid points; the r = 0 entry (if any) is left at 0."""
    out = np.zeros_like(r)
    pos = r > 0.0
    out[pos] = effective_potential(spec, r[pos])
    return out


def outer_turning_point(spec: PotentialSpec, energy: float) -> float:
    """Largest r with U_eff(r) = E, located on a fine probe grid."""
    if not energy < spec.threshold:
        raise DomainError(f"E={energy:g} is not below the threshold {spec.threshold:g}")
    r0 = max(spec.r_origin, 1e-6)
    if spec.kind == "tabulated":
        reach = spec.r_limit
    else:
        # grow until U_eff is above E and still rising
        reach = 1.0
        while effective_potential(spec, reach) < energy or effective_potential(
            spec, 2.0 * reach
        ) < effective_potential(spec, reach):
            reach *= 2.0
            if reach > 1e9:
                raise DomainError("no outer classical turning point found")
        reach *= 2.0
    probe = np.geomspace(r0, reach, 20001)
    allowed = effective_potential(spec, probe) < energy
    if not np.any(allowed):
        raise DomainError(f"E={energy:g} lies below U_eff everywhere")
    return float(probe[np.nonzero(allowed)[0][-1]])


def solver_grid(spec: PotentialSpec, energy_top: float) -> RadialGrid:
    """Uniform grid reaching a tail suppression exp(-12) beyond the turning point at ``energy_top``."""
    r_turn = outer_turning_point(spec, energy_top)
    z = max(spec.coulomb_strength, 1.0)
    # de Broglie resolution, measured away from the Coulomb cusp
    probe = np.linspace(max(spec.r_origin, 0.5 / z), r_turn, 2001)
    k_max = math.sqrt(max(2.0 * float(np.max(energy_top - effective_potential(spec, probe))), 1e-12))
    spacing = min(BASE_SPACING / z, 2.0 * math.pi / k_max / POINTS_PER_WAVELENGTH)
    # walk outward accumulating the WKB decay exponent
    r, phase, step = r_turn, 0.0, max(spacing, r_turn / 2000.0)
    while phase < TAIL_EXPONENT and r + step <= spec.r_limit:
        kappa = math.sqrt(max(2.0 * (effective_potential(spec, r + 0.5 * step) - energy_top), 0.0))
        phase += kappa * step
        r += step
    r_max = min(r, spec.r_limit)
    return RadialGrid.uniform(spec.r_origin, r_max, spacing)


def _g_values(ueff: np.ndarray, energy: float) -> np.ndarray:
    return 2.0 * (ueff - energy)


def _outward_start(spec: PotentialSpec, h: float):
    """(u_1, lim_{r->0} g u) for the regular solution u = r^(l+1) (1 - Z r / (l+1))."""
    l = spec.l
    if spec.r_origin > 0.0:
        return h, 0.0
    z = spec.coulomb_strength
    u1 = h ** (l + 1) * (1.0 - z * h / (l + 1))
    if l == 0:
        g0u0 = -2.0 * z
    elif l == 1:
        g0u0 = 2.0
    else:
        g0u0 = 0.0
    return u1, g0u0


class _Shooter:
    def __init__(self, spec: PotentialSpec, grid: RadialGrid):
        self.spec = spec
        self.grid = grid
        self.h = grid.step
        self.ueff = _ueff_on(spec, grid.points)
        self.u1, self.g0u0 = _outward_start(spec, self.h)

    def g(self, energy):
        return _g_values(self.ueff, energy)

    def outward(self, energy, stop=None):
        n = len(self.grid)
        stop = n - 1 if stop is None else stop
        return _numerov.integrate_outward(self.g(energy), self.h, self.u1, self.g0u0, stop)

    def inward(self, energy, start):
        g = self.g(energy)
        kappa_last = math.sqrt(max(g[-1], 0.0))
        kappa_next = math.sqrt(max(g[-2], 0.0))
        ratio = math.exp(0.5 * (kappa_last + kappa_next) * self.h)
        return _numerov.integrate_inward(g, self.h, 1.0, ratio, start)

    def box_mismatch(self, energy):
        """(u_out(r_max), node count of u_out); changes sign at each eigenvalue."""
        u = self.outward(energy)
        return u[-1], int(_numerov.count_sign_changes(u, 1, u.size - 1))

    def matching_mismatch(self, energy, m):
        """Numerov kink at index m of the glued solution, scaled by u_in(m)."""
        g = self.g(energy)
        c = self.h * self.h / 12.0
        uo = self.outward(energy, m)
        ui = self.inward(energy, m)
        w_out_prev = (1.0 - c * g[m - 1]) * uo[m - 1]
        w_out = (1.0 - c * g[m]) * uo[m]
        w_in_next = (1.0 - c * g[m + 1]) * ui[m + 1]
        return uo[m] * w_in_next + ui[m] * (w_out_prev - 2.0 * w_out - self.h**2 * g[m] * uo[m])

    def glued(self, energy, m):
        uo = self.outward(energy, m)
        ui = self.inward(energy, m)
        u = np.empty(len(self.grid))
        u[: m + 1] = uo
        u[m:] = ui[m:] * (uo[m] / ui[m])
        return u


@dataclass(frozen=True)
class EnergyBracket:
    lo: float
    hi: float
    nodes: int


@dataclass
class BoundStateSolution:
    energy: float
    nodes: int
    wavefunction: SampledRadialFunction
    iterations: int
    bracket_width: float
    spec: PotentialSpec | None = None

    @property
    def u(self) -> np.ndarray:
        return self.wavefunction.u


def scan_spectrum(spec: PotentialSpec, energy_range, samples: int = 500) -> list[EnergyBracket]:
    """Brackets of the box-shooting mismatch u_out(r_max; E) over ``energy_range``.

    By the oscillation theorem the node count of the outward solution rises
    by one at each eigenvalue, so every sign change is labelled with the
    node count of the state it brackets.
    """
    if samples < 2:
        raise ContractError("need at least two energy samples")
    e_lo, e_hi = map(float, energy_range)
    if not e_lo < e_hi:
        raise ContractError("energy range must be increasing")
    if not e_hi < spec.threshold:
        raise DomainError(f"range top {e_hi:g} is not below the threshold {spec.threshold:g}")
    shooter = _Shooter(spec, solver_grid(spec, e_hi))
    energies = np.linspace(e_lo, e_hi, samples)
    counts = [shooter.box_mismatch(e)[1] for e in energies]
    brackets: list[EnergyBracket] = []

    def split(a, b, na, nb, depth=0):
        if nb == na:
            return
        if nb == na + 1 or depth > 60:
            brackets.append(EnergyBracket(float(a), float(b), na))
            return
        mid = 0.5 * (a + b)
        nm = shooter.box_mismatch(mid)[1]
        split(a, mid, na, nm, depth + 1)
        split(mid, b, nm, nb, depth + 1)

    for i in range(samples - 1):
        split(energies[i], energies[i + 1], counts[i], counts[i + 1])
    return brackets


def _matching_index(shooter: _Shooter, energy: float) -> int:
    r_turn = outer_turning_point(shooter.spec, energy)
    m = int(np.searchsorted(shooter.grid.points, r_turn))
    return int(min(max(m, 3), len(shooter.grid) - 4))


def _wavefunction_from_u(spec: PotentialSpec, grid: RadialGrid, u: np.ndarray) -> SampledRadialFunction:
    norm = float(np.dot(quadrature_weights(grid), u * u))
    u = u / math.sqrt(norm)
    r = grid.points
    values = np.empty_like(u)
    if r[0] == 0.0:
        values[1:] = u[1:] / r[1:]
        values[0] = derivative(u, grid)[0] if spec.l == 0 else 0.0
    else:
        values[:] = u / r
    return SampledRadialFunction(grid, values)


def solve_bound_state(spec: PotentialSpec, radial_nodes: int, energy_bracket) -> BoundStateSolution:
    """Eigenvalue and normalized eigenfunction with ``radial_nodes`` nodes inside ``energy_bracket``."""
    lo, hi = map(float, energy_bracket)
    if not lo < hi:
        raise ContractError("bracket must satisfy lo < hi")
    shooter = _Shooter(spec, solver_grid(spec, hi))
    m = _matching_index(shooter, 0.5 * (lo + hi))
    f_lo = shooter.matching_mismatch(lo, m)
    f_hi = shooter.matching_mismatch(hi, m)
    if f_lo == 0.0:
        hi = lo
    elif f_hi == 0.0:
        lo = hi
    elif (f_lo > 0.0) == (f_hi > 0.0):
        raise NoEigenvalueError(f"no sign change of the matching mismatch in [{lo:g}, {hi:g}]")
    iterations = 0
    while hi - lo >= BRACKET_TOLERANCE and iterations < _MAX_BISECTIONS:
        mid = 0.5 * (lo + hi)
        f_mid = shooter.matching_mismatch(mid, m)
        iterations += 1
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    energy = 0.5 * (lo + hi)
    u = shooter.glued(energy, m)
    nodes = int(_numerov.count_sign_changes(u, 1, u.size - 1))
    if nodes != radial_nodes:
        raise BracketError(
            f"converged state at E={energy:.12g} has {nodes} nodes, expected {radial_nodes}"
        )
    wf = _wavefunction_from_u(spec, shooter.grid, u)
    return BoundStateSolution(energy, nodes, wf, iterations, hi - lo, spec)


def find_state(spec: PotentialSpec, radial_nodes: int, energy_range, samples: int = 400) -> BoundStateSolution:
    """Scan ``energy_range`` and solve the state with the requested node count."""
    for br in scan_spectrum(spec, energy_range, samples):
        if br.nodes == radial_nodes:
            return solve_bound_state(spec, radial_nodes, (br.lo, br.hi))
    raise NoEigenvalueError(f"no state with {radial_nodes} nodes in {tuple(energy_range)}")


def mean_effective_potential(spec: PotentialSpec, wf: SampledRadialFunction) -> float:
    return wf.integrate(wf.u**2 * _ueff_on(spec, wf.r))


def audit_uncertainty(spec: PotentialSpec, solution: BoundStateSolution) -> UncertaintyReport:
    """Uncertainty report of a solved state plus the energy-consistency check.

    <p_r^2> must equal 2 (E - <U_eff>); the difference is stored in
    ``diagnostics["energy_consistency"]``.
    """
    rep = uncertainty_report(solution.wavefunction, f"{spec.description} nodes={solution.nodes}")
    kinetic = 2.0 * (solution.energy - mean_effective_potential(spec, solution.wavefunction))
    gap = rep.var_pr - kinetic
    rep.diagnostics.update(
        energy=solution.energy,
        nodes=solution.nodes,
        energy_consistency=gap,
        energy_consistent=bool(abs(gap) <= ENERGY_CONSISTENCY_TOLERANCE),
    )
    return rep
