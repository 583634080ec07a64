"""Analytic hydrogen layer (hbar = m = e = 1).

Energies, normalized radial eigenfunctions, exact rational moments <r^k>
from the Kramers-Pasternack recursion, and the closed-form coordinate and
radial-momentum variances together with their product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .special_math import assoc_laguerre, build_gauss_laguerre, log_factorial

DEFAULT_MAX_MOMENT = 4
QUARTER = Fraction(1, 4)


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    n: int
    l: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.l) != self.l:
            raise DomainError("quantum numbers must be integers")
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise DomainError(f"l must satisfy 0 <= l <= n-1, got n={self.n}, l={self.l}")

    @property
    def label(self) -> str:
        return f"n={self.n},l={self.l}"

    @property
    def is_circular(self) -> bool:
        return self.l == self.n - 1


def _as_state(q) -> QuantumNumbers:
    return q if isinstance(q, QuantumNumbers) else QuantumNumbers(*q)


def all_states(n_max: int):
    """Every (n, l) with n <= n_max, ordered by n then l."""
    return [QuantumNumbers(n, l) for n in range(1, n_max + 1) for l in range(n)]


def energy(n: int) -> Fraction:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return Fraction(-1, 2 * n * n)


def normalization_constant(q) -> float:
    q = _as_state(q)
    n, l = q.n, q.l
    log_c = 1.5 * math.log(2.0 / n) + 0.5 * (
        log_factorial(n - l - 1) - math.log(2.0 * n) - log_factorial(n + l)
    )
    return math.exp(log_c)


def radial_wavefunction(q, r):
    """R_nl(r), normalized with measure r^2 dr and positive as r -> 0+."""
    q = _as_state(q)
    n, l = q.n, q.l
    r = np.asarray(r, dtype=float)
    x = 2.0 * r / n
    lag = assoc_laguerre(n - l - 1, 2 * l + 1, x)
    log_c = math.log(normalization_constant(q))
    with np.errstate(divide="ignore"):
        log_env = log_c - 0.5 * x + (l * np.log(x) if l else 0.0)
    out = np.exp(log_env) * lag
    return out if out.ndim else float(out)


def moment_kramers(q, k: int, table: dict | None = None) -> Fraction:
    """Exact <r^k> for k >= -2.

    Upward Kramers-Pasternack recursion from <r^0> = 1 and <r^-1> = 1/n^2;
    the k = -2 value is the separate analytic seed 2 / (n^3 (2l+1)).
    """
    q = _as_state(q)
    if k < -2:
        raise DomainError(f"moments below k = -2 are outside the recursion's support (k={k})")
    n, l = q.n, q.l
    if k == -2:
        return Fraction(2, n**3 * (2 * l + 1))
    moments = {-1: Fraction(1, n * n), 0: Fraction(1)}
    two_l1_sq = (2 * l + 1) ** 2
    for j in range(1, k + 1):
        moments[j] = Fraction(n * n, j + 1) * (
            (2 * j + 1) * moments[j - 1] - Fraction(j * (two_l1_sq - j * j), 4) * moments[j - 2]
        )
    return moments[k]


@dataclass(frozen=True)
class MomentTable:
    state: QuantumNumbers
    moments: dict = field(compare=False)

    @classmethod
    def build(cls, q, k_max: int = DEFAULT_MAX_MOMENT) -> "MomentTable":
        q = _as_state(q)
        return cls(q, {k: moment_kramers(q, k) for k in range(-2, k_max + 1)})

    def __getitem__(self, k):
        return self.moments[k]


def mean_r(q) -> Fraction:
    return moment_kramers(q, 1)


def coordinate_variance(q) -> Fraction:
    q = _as_state(q)
    n, l = q.n, q.l
    return Fraction(n * n * (n * n + 2) - l * l * (l + 1) ** 2, 4)


def coordinate_variance_from_moments(q) -> Fraction:
    return moment_kramers(q, 2) - moment_kramers(q, 1) ** 2


def radial_momentum_variance(q) -> Fraction:
    q = _as_state(q)
    n, l = q.n, q.l
    return Fraction(1, n * n) - Fraction(2 * l * (l + 1), n**3 * (2 * l + 1))


def radial_momentum_variance_from_energy(q) -> Fraction:
    """<p_r^2> = 2 E_n + 2 <1/r> - l(l+1) <1/r^2>."""
    q = _as_state(q)
    return (
        2 * energy(q.n)
        + 2 * moment_kramers(q, -1)
        - q.l * (q.l + 1) * moment_kramers(q, -2)
    )


def uncertainty_product(q) -> Fraction:
    """Closed-form product of the coordinate and radial-momentum variances."""
    q = _as_state(q)
    n, l = q.n, q.l
    ll = l * (l + 1)
    return (Fraction(n * n + 2, 4) - Fraction(ll * ll, 4 * n * n)) * (
        1 - Fraction(2 * ll, n * (2 * l + 1))
    )


def circular_min_product(n: int) -> Fraction:
    return Fraction(2 * n + 1, 4 * (2 * n - 1))


def min_product_over_l(n: int) -> tuple[int, Fraction]:
    """Scan l in [0, n-1]; return (argmin, min) of the uncertainty product."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    best_l, best = 0, None
    for l in range(n):
        p = uncertainty_product(QuantumNumbers(n, l))
        if best is None or p < best:
            best_l, best = l, p
    return best_l, best


def circular_asymptotics(n: int) -> tuple[Fraction, Fraction, float]:
    """(<r>^2, <dr^2>, ratio) for the circular state l = n - 1."""
    q = QuantumNumbers(n, n - 1)
    mean_sq = mean_r(q) ** 2
    var = coordinate_variance(q)
    return mean_sq, var, float(mean_sq / var)


def quadrature_moment(q, k: int, order: int | None = None) -> float:
    """<r^k> by Gauss-Laguerre quadrature in the weight exp(-2r/n).

    Independent of the recursion: r^(k+2) R^2 exp(2r/n) is a polynomial of
    degree k + 2n, integrated exactly once ``order > (k + 2n) / 2``.
    """
    q = _as_state(q)
    n, l = q.n, q.l
    if k + 2 * l + 2 < 0:
        raise DomainError("integrand singular at the origin")
    if order is None:
        order = n + max(k, 0) // 2 + 3
    rule = build_gauss_laguerre(order, scale=n / 2.0)
    c = normalization_constant(q)

    def poly(r):
        x = 2.0 * r / n
        return r ** (k + 2) * (c * x**l * assoc_laguerre(n - l - 1, 2 * l + 1, x)) ** 2

    return rule.integrate(poly)


def tail_mass(q, r_cut: float) -> float:
    """Probability beyond ``r_cut``: int_{r_cut}^inf r^2 R^2 dr.

    Shifted Gauss-Laguerre in the decay exp(-2r/n), exact for the
    polynomial factor.
    """
    q = _as_state(q)
    n, l = q.n, q.l
    rule = build_gauss_laguerre(n + 3, scale=n / 2.0)
    c = normalization_constant(q)
    x = 2.0 * (r_cut + rule.nodes) / n
    log_terms = (
        math.log(c) * 2.0
        + 2.0 * np.log(r_cut + rule.nodes)
        + 2 * l * np.log(x)
        - 2.0 * r_cut / n
    )
    lag = assoc_laguerre(n - l - 1, 2 * l + 1, x)
    return float(np.dot(rule.weights, np.exp(log_terms) * lag * lag))
