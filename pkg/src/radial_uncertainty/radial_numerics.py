"""Grid numerics for normalized real radial functions.

All integrals are taken with the reduced function u = r R, so that the
radial momentum acts as ``p_r R = -i u' / r`` and no 1/r factor is ever
evaluated on the grid:

    <p_r>      ->  int u u' dr                (times -i)
    <p_r^2>    ->  int u'^2 dr  =  -int u u'' dr
    I(alpha)   ->  int (alpha (r - <r>) u - u')^2 dr
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import ContractError, ResolutionError
from .grids import RadialGrid
from .hydrogen import QuantumNumbers, radial_wavefunction, tail_mass
from .special_math import quadrature_weights

NORM_TOLERANCE = 1e-8
BOUND = 0.25
BOUND_TOLERANCE = 1e-9
TAIL_TOLERANCE = 1e-10
DEFAULT_ALPHA_COUNT = 41


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple, deriv: int) -> np.ndarray:
    """Finite-difference weights on integer ``offsets`` for the ``deriv``-th derivative (unit spacing)."""
    s = np.asarray(offsets, dtype=float)
    k = np.arange(len(s))
    vander = s[None, :] ** k[:, None]
    rhs = np.zeros(len(s))
    rhs[deriv] = float(np.prod(np.arange(1, deriv + 1)))
    return np.linalg.solve(vander, rhs)


_STENCILS = {
    1: ((-2, -1, 0, 1, 2), [(0, 1, 2, 3, 4), (-1, 0, 1, 2, 3)]),
    2: ((-2, -1, 0, 1, 2), [(0, 1, 2, 3, 4, 5), (-1, 0, 1, 2, 3, 4)]),
}


def derivative(values, grid: RadialGrid, deriv: int = 1) -> np.ndarray:
    """First or second derivative of tabulated values.

    Uniform grids: centered fourth-order stencils inside, one-sided
    fourth-order stencils on the two outermost points at each end.
    Other grids fall back to second-order ``np.gradient``.
    """
    f = np.asarray(values, dtype=float)
    if f.shape != grid.points.shape:
        raise ContractError("values and grid differ in length")
    if deriv not in (1, 2):
        raise ContractError("only first and second derivatives are supported")
    if grid.scheme != "uniform":
        d = np.gradient(f, grid.points, edge_order=2)
        return d if deriv == 1 else np.gradient(d, grid.points, edge_order=2)
    h = grid.step
    centre, edges = _STENCILS[deriv]
    out = np.empty_like(f)
    w = fd_weights(centre, deriv)
    out[2:-2] = sum(wi * f[2 + o : f.size - 2 + o] for wi, o in zip(w, centre))
    n = f.size
    for i, offs in enumerate(edges):
        w = fd_weights(offs, deriv)
        out[i] = sum(wi * f[i + o] for wi, o in zip(w, offs))
        out[n - 1 - i] = sum(-wi * f[n - 1 - i - o] if deriv == 1 else wi * f[n - 1 - i - o] for wi, o in zip(w, offs))
    return out / h**deriv


@dataclass(frozen=True, eq=False)
class SampledRadialFunction:
    grid: RadialGrid
    values: np.ndarray
    norm_defect: float = field(init=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise ContractError("values and grid differ in length")
        if not np.all(np.isfinite(vals)):
            raise ContractError("radial function has non-finite samples")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "norm_defect", abs(self.integrate(self.u**2) - 1.0))

    @classmethod
    def normalized(cls, grid: RadialGrid, values) -> "SampledRadialFunction":
        vals = np.asarray(values, dtype=float)
        norm = float(np.dot(quadrature_weights(grid), (grid.points * vals) ** 2))
        if not norm > 0.0:
            raise ContractError("cannot normalize a vanishing function")
        return cls(grid, vals / np.sqrt(norm))

    @property
    def r(self) -> np.ndarray:
        return self.grid.points

    @cached_property
    def weights(self) -> np.ndarray:
        return quadrature_weights(self.grid)

    @cached_property
    def u(self) -> np.ndarray:
        return self.grid.points * self.values

    @cached_property
    def du(self) -> np.ndarray:
        return derivative(self.u, self.grid, 1)

    @cached_property
    def d2u(self) -> np.ndarray:
        return derivative(self.u, self.grid, 2)

    def integrate(self, integrand) -> float:
        return float(np.dot(self.weights, integrand))

    def expect(self, func) -> float:
        """<func(r)> = int r^2 R^2 func(r) dr."""
        return self.integrate(self.u**2 * func(self.r))


def _require_normalized(f: SampledRadialFunction):
    if f.norm_defect > NORM_TOLERANCE:
        raise ContractError(f"radial function not normalized (defect {f.norm_defect:.3e})")


def hydrogen_grid(q: QuantumNumbers) -> RadialGrid:
    """Automatic uniform grid for state ``q``.

    r_max = 2 n^2 + 12 n sqrt(2n+1) + 10 covers the outer turning point plus
    twelve standard deviations of the tail; spacing n/200, capped so the
    near-origin structure of low-l states stays resolved.
    """
    n = q.n
    r_max = 2.0 * n * n + 12.0 * n * np.sqrt(2.0 * n + 1.0) + 10.0
    spacing = min(n / 200.0, 0.01)
    return RadialGrid.uniform(0.0, r_max, spacing)


def sample_hydrogen(q, grid_hint: RadialGrid | None = None) -> SampledRadialFunction:
    """Tabulate R_nl on a grid and renormalize it by quadrature."""
    q = q if isinstance(q, QuantumNumbers) else QuantumNumbers(*q)
    grid = grid_hint if grid_hint is not None else hydrogen_grid(q)
    tail = tail_mass(q, grid.r_max)
    if tail > TAIL_TOLERANCE:
        raise ResolutionError(
            f"grid with r_max={grid.r_max:g} leaves tail mass {tail:.2e} for {q.label}"
        )
    return SampledRadialFunction.normalized(grid, radial_wavefunction(q, grid.points))


def mean_r(f: SampledRadialFunction) -> float:
    _require_normalized(f)
    return f.expect(lambda r: r)


def variance_r(f: SampledRadialFunction) -> float:
    m = mean_r(f)
    return f.expect(lambda r: (r - m) ** 2)


def mean_pr(f: SampledRadialFunction) -> float:
    """i <p_r> = int r^2 R (R' + R/r) dr = int u u' dr; zero for admissible states."""
    _require_normalized(f)
    return f.integrate(f.u * f.du)


def variance_pr_gradient_form(f: SampledRadialFunction) -> float:
    """int r^2 (R' + R/r)^2 dr, evaluated as int u'^2 dr."""
    _require_normalized(f)
    return f.integrate(f.du**2)


def variance_pr_laplacian_form(f: SampledRadialFunction) -> float:
    """-int r^2 R (R'' + 2R'/r) dr, evaluated as -int u u'' dr."""
    _require_normalized(f)
    return -f.integrate(f.u * f.d2u)


def r3_rr_prime_integral(f: SampledRadialFunction) -> float:
    """int r^3 R R' dr = int (r u u' - u^2) dr; equals -3/2 for admissible states."""
    _require_normalized(f)
    return f.integrate(f.r * f.u * f.du - f.u**2)


def weyl_I3_check(f: SampledRadialFunction, alpha: float) -> float:
    """Cross term -2 alpha int r^2 R (r - <r>) (R' + R/r) dr by direct quadrature."""
    m = mean_r(f)
    return -2.0 * alpha * f.integrate((f.r - m) * f.u * f.du)


def weyl_integral(f: SampledRadialFunction, alpha: float, mean: float | None = None) -> float:
    """int r^2 |alpha R dr - R' - R/r|^2 dr, a sum of squares and hence >= 0."""
    m = mean_r(f) if mean is None else mean
    return f.integrate((alpha * (f.r - m) * f.u - f.du) ** 2)


@dataclass
class WeylScanResult:
    alphas: np.ndarray
    I_direct: np.ndarray
    I_quadratic: np.ndarray
    alpha_star: float
    I1_coeff: float
    I3_coeff: float
    I2_coeff: float

    @property
    def fitted_vertex(self) -> float:
        return -self.I3_coeff / (2.0 * self.I1_coeff)

    @property
    def max_form_gap(self) -> float:
        return float(np.max(np.abs(self.I_direct - self.I_quadratic)))


def default_alphas(var: float, count: int = DEFAULT_ALPHA_COUNT) -> np.ndarray:
    a_star = -0.5 / var
    return np.linspace(3.0 * a_star, -a_star, count)


def weyl_scan(f: SampledRadialFunction, alphas=None) -> WeylScanResult:
    """Direct auxiliary integral over an alpha scan against its quadratic form.

    I_quadratic = alpha^2 <dr^2> + alpha + <p_r^2>; the direct values are
    fitted by a quadratic whose coefficients estimate <dr^2>, the cross-term
    coefficient (1 analytically) and <p_r^2>.
    """
    m = mean_r(f)
    var = variance_r(f)
    if alphas is None:
        alphas = default_alphas(var)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size < 3:
        raise ContractError("a quadratic fit needs at least three alpha values")
    p2 = variance_pr_gradient_form(f)
    direct = np.array([weyl_integral(f, a, m) for a in alphas])
    quad = alphas**2 * var + alphas + p2
    c2, c1, c0 = np.polyfit(alphas, direct, 2)
    return WeylScanResult(alphas, direct, quad, -0.5 / var, float(c2), float(c1), float(c0))


@dataclass
class UncertaintyReport:
    label: str
    mean_r: float
    var_r: float
    mean_pr: float
    var_pr: float
    product: float
    bound_satisfied: bool
    var_pr_gradient: float
    var_pr_laplacian: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def form_disagreement(self) -> float:
        return abs(self.var_pr_gradient - self.var_pr_laplacian)

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "mean_r": self.mean_r,
            "var_r": self.var_r,
            "mean_pr": self.mean_pr,
            "var_pr": self.var_pr,
            "product": self.product,
            "bound_satisfied": self.bound_satisfied,
            "var_pr_gradient": self.var_pr_gradient,
            "var_pr_laplacian": self.var_pr_laplacian,
            "form_disagreement": self.form_disagreement,
            **self.diagnostics,
        }


def uncertainty_report(f: SampledRadialFunction, label) -> UncertaintyReport:
    """Coordinate and radial-momentum spreads, their product and the 1/4 bound verdict.

    The momentum variance is the mean of the gradient and Laplacian forms;
    their gap is kept as a discretization diagnostic.
    """
    grad = variance_pr_gradient_form(f)
    lap = variance_pr_laplacian_form(f)
    var_pr = 0.5 * (grad + lap)
    var_r = variance_r(f)
    product = var_r * var_pr
    return UncertaintyReport(
        label=str(label),
        mean_r=mean_r(f),
        var_r=var_r,
        mean_pr=mean_pr(f),
        var_pr=var_pr,
        product=product,
        bound_satisfied=bool(product >= BOUND - BOUND_TOLERANCE),
        var_pr_gradient=grad,
        var_pr_laplacian=lap,
    )
