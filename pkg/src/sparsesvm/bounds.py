"""Closed-form theoretical quantities the experiments test against.

Gathers the Gaussian moment identities, the expected-loss and variance
bounds for the truncated subgaussian family, their Bernstein-style
finite-sample version, and the norm bounds for the hard- and
soft-margin training problems. All logarithms are natural; erf comes
from the standard library (exact to double precision).
"""

from __future__ import annotations

import math

__all__ = [
    "gauss_density",
    "gauss_moments",
    "risk_bound",
    "variance_bound",
    "bernstein_bound",
    "high_dim_risk_bound",
    "hard_margin_norm_bound",
    "soft_margin_norm_bounds",
    "tail_decay_product",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def gauss_density(x: float) -> float:
    """Standard normal density at x."""
    return math.exp(-0.5 * x * x) / _SQRT_2PI


def gauss_moments(x: float) -> tuple[float, float, float]:
    """Partial moments ∫_{−∞}^{x} t^k N₀(t) dt for k = 0, 1, 2.

    Closed forms: G₀(x) = ½[1 + erf(x/√2)], G₁(x) = −N₀(x),
    G₂(x) = G₀(x) − x·N₀(x).
    """
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    density = gauss_density(x)
    g0 = 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))
    g1 = -density
    g2 = g0 - x * density
    return g0, g1, g2


def _check_confidence(confidence_delta: float) -> None:
    if not 0.0 < confidence_delta < 1.0:
        raise ValueError("confidence_delta must lie in (0, 1)")


def risk_bound(mu: float) -> float:
    """Upper bound on E[max(0, 1 − v)] for v ~ N(μ, 1), μ > 1.

    Equals the normal density at the unit-margin point, N_μ(1); the
    derivation needs 1 − μ < 0, so μ ≤ 1 is out of domain.
    """
    if not mu > 1.0:
        raise ValueError("risk_bound requires mu > 1")
    return gauss_density(1.0 - mu)


def variance_bound(mu: float) -> float:
    """Upper bound on Var[max(0, 1 − v)] for v ~ N(μ, 1).

    Literal form [(1−μ)² + 1]·[1 + erf((1−μ)/√2)]; equals 1 at the
    μ = 1 boundary and decays monotonically beyond it.
    """
    if mu < 1.0:
        raise ValueError("variance_bound requires mu >= 1")
    shift = 1.0 - mu
    return (shift * shift + 1.0) * (1.0 + math.erf(shift / math.sqrt(2.0)))


def bernstein_bound(
    mu: float,
    delta_trunc: float,
    m: int,
    confidence_delta: float,
    middle_term: str = "variance",
) -> float:
    """High-probability bound on the empirical risk of the planted model.

    risk_bound(μ) + 4·V·√(ln(2/δ)/m) + 4·(Δ+1)·ln(2/δ)/m, where the
    middle factor V is variance_bound(μ) by default ("variance"). The
    textbook concentration argument would put the standard deviation
    there instead; ``middle_term="std"`` selects √variance_bound(μ) for
    comparisons.
    """
    if middle_term not in ("variance", "std"):
        raise ValueError(f"unknown middle_term: {middle_term!r}")
    if m < 1:
        raise ValueError("m must be at least 1")
    if not delta_trunc > 0:
        raise ValueError("delta_trunc must be positive")
    _check_confidence(confidence_delta)
    log_term = math.log(2.0 / confidence_delta)
    factor = variance_bound(mu)
    if middle_term == "std":
        factor = math.sqrt(factor)
    return (
        risk_bound(mu)
        + 4.0 * factor * math.sqrt(log_term / m)
        + 4.0 * (delta_trunc + 1.0) * log_term / m
    )


def high_dim_risk_bound(p: int, m: int, confidence_delta: float) -> float:
    """Empirical-risk bound at the canonical high-dimensional scaling.

    For the subgaussian family with mean μ = 1 + √(2 ln p) and
    truncation Δ = 2 ln p, the bound collapses to
    1/(√(2π)·p) + 4·(2 ln p + 1)·ln(2/δ)/m.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if m < 1:
        raise ValueError("m must be at least 1")
    _check_confidence(confidence_delta)
    log_term = math.log(2.0 / confidence_delta)
    return 1.0 / (_SQRT_2PI * p) + 4.0 * (2.0 * math.log(p) + 1.0) * log_term / m


def hard_margin_norm_bound(p_prime: int, nu: float) -> float:
    """L1-norm ceiling √p′/ν for the separable training problem."""
    if p_prime < 1:
        raise ValueError("p_prime must be at least 1")
    if not nu > 0:
        raise ValueError("nu must be positive")
    return math.sqrt(p_prime) / nu


def soft_margin_norm_bounds(
    p: int, m: int, lam: float, confidence_delta: float
) -> tuple[float, float]:
    """(R, r) ceilings for the soft-margin LP's solution norms.

    R bounds the primal vector's L1 norm (slack total plus ‖β‖₁), r the
    dual multiplier total. R carries the risk terms scaled by m where r
    averages them; both share the λ√(1+2 ln p) term.
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    if m < 1:
        raise ValueError("m must be at least 1")
    if not lam >= 0:
        raise ValueError("lam must be nonnegative")
    _check_confidence(confidence_delta)
    log_term = math.log(2.0 / confidence_delta)
    support_term = lam * math.sqrt(1.0 + 2.0 * math.log(p))
    slop = 4.0 * (1.0 + 2.0 * math.log(p)) * log_term
    r_bound = 1.0 / (_SQRT_2PI * p) + slop / m + support_term
    big_r_bound = (1.0 / _SQRT_2PI) * (m / p) + slop + support_term
    return big_r_bound, r_bound


def tail_decay_product(p: float) -> float:
    """[1 + erf(−√(2 ln p))]·p², the scaled tail mass at the margin.

    Monotonically decaying over p ∈ [10, 10⁶]; standing in for the
    asymptotic vanishing-tail argument.
    """
    if not p > 1:
        raise ValueError("p must exceed 1")
    return (1.0 + math.erf(-math.sqrt(2.0 * math.log(p)))) * p * p
