"""Special functions and quadrature rules on the half line.

Associated Laguerre polynomials by upward three-term recurrence,
log-factorials, Gauss-Laguerre rules (Newton iteration on the roots) and
composite rules for tabulated integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ContractError, DomainError
from .grids import RadialGrid

# Beyond this order the smallest Gauss-Laguerre weights (~exp(-4*order))
# underflow float64 and the rule stops having strictly positive weights.
MAX_GAUSS_LAGUERRE_ORDER = 160

_NEWTON_TOL = 1e-14
_NEWTON_MAXITER = 100


def assoc_laguerre(k: int, alpha: float, x):
    """Generalized Laguerre polynomial L_k^alpha(x).

    Evaluated by the recurrence
    ``(j+1) L_{j+1} = (2j + 1 + alpha - x) L_j - (j + alpha) L_{j-1}``.
    ``x`` may be a scalar or an array; the result has the same shape.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"degree must be a nonnegative integer, got {k}")
    if alpha <= -1.0:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for j in range(1, int(k)):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def log_factorial(n: int) -> float:
    """ln(n!); exact integer factorial below the float overflow point."""
    if n < 0:
        raise DomainError("factorial of a negative integer")
    if n <= 170:
        return math.log(math.factorial(n))
    return math.lgamma(n + 1.0)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights for an integral over [0, inf).

    For ``kind == "gauss_laguerre"`` the weight function exp(-x/scale) is
    folded into the weights: ``sum(w * p(x))`` approximates
    ``int_0^inf exp(-x/scale) p(x) dx``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    order: int
    scale: float = 1.0

    def integrate(self, func) -> float:
        return float(np.dot(self.weights, func(self.nodes)))


def _laguerre_and_derivative(m: int, x: float):
    # L_m(x), L_m'(x) for alpha = 0, via x L_m' = m (L_m - L_{m-1})
    p_prev, p = 0.0, 1.0
    for j in range(m):
        p_prev, p = p, ((2 * j + 1 - x) * p - j * p_prev) / (j + 1)
    return p, m * (p - p_prev) / x


def build_gauss_laguerre(order: int, scale: float = 1.0) -> QuadratureRule:
    """Gauss-Laguerre rule exact for exp(-x/scale) times polynomials of degree < 2*order.

    Roots are polished by Newton iteration from the classical asymptotic
    initial guesses; weights are ``1 / (x L_m'(x)^2)``.
    """
    if order < 1 or int(order) != order:
        raise ContractError(f"order must be a positive integer, got {order}")
    if order > MAX_GAUSS_LAGUERRE_ORDER:
        raise CapabilityError(
            f"Gauss-Laguerre order {order} exceeds supported maximum {MAX_GAUSS_LAGUERRE_ORDER}"
        )
    if scale <= 0.0:
        raise DomainError("scale must be positive")
    m = int(order)
    nodes = np.empty(m)
    weights = np.empty(m)
    z = 0.0
    for i in range(m):
        if i == 0:
            z = 3.0 / (1.0 + 2.4 * m)
        elif i == 1:
            z += 15.0 / (1.0 + 2.5 * m)
        else:
            ai = i - 1
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
        for _ in range(_NEWTON_MAXITER):
            p, dp = _laguerre_and_derivative(m, z)
            dz = p / dp
            z -= dz
            if abs(dz) <= _NEWTON_TOL * max(1.0, z):
                break
        else:  # pragma: no cover - Newton always converges from these guesses for m <= 160
            raise RuntimeError(f"Newton iteration failed for root {i} of L_{m}")
        _, dp = _laguerre_and_derivative(m, z)
        nodes[i] = z
        weights[i] = 1.0 / (z * dp * dp)
    order_idx = np.argsort(nodes)
    nodes, weights = nodes[order_idx], weights[order_idx]
    return QuadratureRule(nodes * scale, weights * scale, "gauss_laguerre", m, float(scale))


# Gregory end weights (trapezoid plus Euler-Maclaurin corrections), exact
# through degree 5; the leading error is ~h^7 f^(6) at the two ends.
_GREGORY_END = np.array([19087.0, 84199.0, 37738.0, 75242.0, 55031.0, 61343.0]) / 60480.0


def gregory_weights(count: int, h: float) -> np.ndarray:
    """Gregory-corrected trapezoid weights for ``count`` equally spaced samples."""
    k = _GREGORY_END.size
    if count < 2 * k:
        raise ContractError(f"need at least {2 * k} samples, got {count}")
    w = np.ones(count)
    w[:k] = _GREGORY_END
    w[-k:] = _GREGORY_END[::-1]
    return w * h


def quadrature_weights(grid: RadialGrid) -> np.ndarray:
    """Weights of the composite rule used for tabulated integrands on ``grid``."""
    if grid.scheme == "uniform":
        return gregory_weights(len(grid), grid.step)
    d = np.diff(grid.points)
    w = np.zeros(len(grid))
    w[:-1] += 0.5 * d
    w[1:] += 0.5 * d
    return w


def integrate_sampled(values, grid: RadialGrid) -> float:
    """Integral of tabulated ``values`` over the span of ``grid``.

    Gregory-corrected trapezoid on uniform grids, plain trapezoid otherwise.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != grid.points.shape:
        raise ContractError(f"{values.size} values for a grid of {len(grid)} points")
    return float(np.dot(quadrature_weights(grid), values))


def build_composite_rule(grid: RadialGrid) -> QuadratureRule:
    return QuadratureRule(grid.points.copy(), quadrature_weights(grid), "composite_on_grid", len(grid))
