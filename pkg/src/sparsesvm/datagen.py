"""Seeded generators for the synthetic problem families under study.

Each generator plants a ground-truth direction β* and draws labeled
samples around it: a margin family with a sample-free band of half-width
ν, a truncated subgaussian family whose projection onto β* is N(μ, 1)
conditioned on staying above −Δ, the four-point XOR problem, and a
contradictory paired-samples family. Everything is deterministic given
(spec, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .core import Dataset, DatasetError, dataset_from_arrays

__all__ = [
    "MarginProblemSpec",
    "SubgaussianProblemSpec",
    "make_beta_star",
    "make_margin_spec",
    "make_subgaussian_spec",
    "gen_margin",
    "gen_subgaussian",
    "gen_xor",
    "gen_paired",
]

REJECTION_CAP_PER_SAMPLE = 1000
"""Total draw budget is this many attempts per requested sample."""


@dataclass(frozen=True)
class MarginProblemSpec:
    """Margin-separable family: no sample within ν of the boundary.

    Attributes:
        p: Ambient dimension.
        p_prime: Planted support size of β*.
        nu: Margin half-width; the band |β*ᵀx| < ν carries no samples.
        beta_star: Unit-L2 planted direction with exactly p_prime
            nonzero coordinates.
        box: Half-width of the uniform box the support coordinates are
            drawn from.
    """

    p: int
    p_prime: int
    nu: float
    beta_star: NDArray[np.float64]
    box: float

    def __post_init__(self) -> None:
        _check_beta_star(self.beta_star, self.p, self.p_prime)
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError("nu must be positive and finite")
        if not (self.box > 0 and math.isfinite(self.box)):
            raise ValueError("box must be positive and finite")


@dataclass(frozen=True)
class SubgaussianProblemSpec:
    """Truncated subgaussian family along a planted sparse direction.

    The projection v = y·β*ᵀx of an accepted sample is distributed as
    N(mu, 1) conditioned on v ≥ −delta_trunc.

    Attributes:
        p: Ambient dimension.
        p_prime: Planted support size of β*.
        c: Per-feature mean separation; the class means of each
            discriminative coordinate sit at ±c when mu = c·√p_prime.
        mu: Projected class mean.
        delta_trunc: Truncation depth Δ; no sample has v < −Δ.
        beta_star: Unit-L2 planted direction with exactly p_prime
            nonzero coordinates.
    """

    p: int
    p_prime: int
    c: float
    mu: float
    delta_trunc: float
    beta_star: NDArray[np.float64]

    def __post_init__(self) -> None:
        _check_beta_star(self.beta_star, self.p, self.p_prime)
        if not self.c > 1:
            raise ValueError("c must exceed 1")
        if self.mu < self.c * math.sqrt(self.p_prime) - 1e-12:
            raise ValueError("mu must be at least c·sqrt(p_prime)")
        if not self.mu > 1:
            raise ValueError("mu must exceed 1")
        if not self.delta_trunc > 0:
            raise ValueError("delta_trunc must be positive")


def _check_beta_star(beta_star: np.ndarray, p: int, p_prime: int) -> None:
    if beta_star.shape != (p,):
        raise ValueError(f"beta_star must have shape ({p},)")
    nnz = int(np.count_nonzero(beta_star))
    if nnz != p_prime:
        raise ValueError(f"beta_star has {nnz} nonzeros, expected {p_prime}")
    norm = float(np.linalg.norm(beta_star))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError("beta_star must have unit L2 norm")


def make_beta_star(
    p: int,
    p_prime: int,
    seed: int | None = None,
    random_support: bool = False,
    mixed_signs: bool = False,
) -> NDArray[np.float64]:
    """Planted direction: p_prime coordinates of magnitude 1/√p_prime.

    By default the support is the first p_prime indices with all-positive
    signs, the extremal case making ‖β*‖₁ = √p_prime tight. Random
    support placement and mixed coordinate signs are available behind
    flags; both need a seed.
    """
    if not 1 <= p_prime <= p:
        raise ValueError("need 1 <= p_prime <= p")
    if (random_support or mixed_signs) and seed is None:
        raise ValueError("random_support/mixed_signs require a seed")
    beta = np.zeros(p)
    value = 1.0 / math.sqrt(p_prime)
    rng = np.random.default_rng(seed)
    if random_support:
        support = np.sort(rng.choice(p, size=p_prime, replace=False))
    else:
        support = np.arange(p_prime)
    signs = rng.choice([-1.0, 1.0], size=p_prime) if mixed_signs else 1.0
    beta[support] = value * signs
    return beta


def make_margin_spec(
    p: int,
    p_prime: int,
    nu: float,
    box: float | None = None,
    beta_star: NDArray[np.float64] | None = None,
) -> MarginProblemSpec:
    """Margin spec with the default box radius 10/ν."""
    if beta_star is None:
        beta_star = make_beta_star(p, p_prime)
    if box is None:
        box = 10.0 / nu
    return MarginProblemSpec(
        p=p, p_prime=p_prime, nu=nu, beta_star=beta_star, box=box
    )


def make_subgaussian_spec(
    p: int,
    p_prime: int,
    c: float,
    delta_trunc: float,
    mu: float | None = None,
    beta_star: NDArray[np.float64] | None = None,
) -> SubgaussianProblemSpec:
    """Subgaussian spec with the default mean mu = c·√p_prime."""
    if beta_star is None:
        beta_star = make_beta_star(p, p_prime)
    if mu is None:
        mu = c * math.sqrt(p_prime)
    return SubgaussianProblemSpec(
        p=p,
        p_prime=p_prime,
        c=c,
        mu=mu,
        delta_trunc=delta_trunc,
        beta_star=beta_star,
    )


def _label_quotas(m: int) -> dict[float, int]:
    """Exactly ⌈m/2⌉ positive labels, the rest negative."""
    pos = (m + 1) // 2
    return {1.0: pos, -1.0: m - pos}


def gen_margin(
    spec: MarginProblemSpec,
    m: int,
    seed: int,
    stratified: bool = True,
) -> Dataset:
    """Margin-separable samples labeled by the side of the boundary.

    Support coordinates are uniform on [−box, box], the rest standard
    normal; draws with |β*ᵀx| < ν are rejected and y = sign(β*ᵀx). With
    ``stratified`` (default) drawing continues until exactly ⌈m/2⌉
    samples lie on the positive side; otherwise samples keep whatever
    side they fall on.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    support = np.flatnonzero(spec.beta_star)
    quotas = _label_quotas(m) if stratified else None
    features = np.empty((m, spec.p))
    labels = np.empty(m)
    filled = 0
    for _ in range(REJECTION_CAP_PER_SAMPLE * m):
        if filled == m:
            break
        x = rng.standard_normal(spec.p)
        x[support] = rng.uniform(-spec.box, spec.box, size=support.size)
        proj = float(spec.beta_star @ x)
        if abs(proj) < spec.nu:
            continue
        y = 1.0 if proj > 0 else -1.0
        if quotas is not None:
            if quotas[y] == 0:
                continue
            quotas[y] -= 1
        features[filled] = x
        labels[filled] = y
        filled += 1
    if filled < m:
        raise DatasetError(
            f"margin sampler rejected too often: {filled}/{m} accepted "
            f"within {REJECTION_CAP_PER_SAMPLE * m} draws"
        )
    return dataset_from_arrays(labels, features)


def gen_subgaussian(
    spec: SubgaussianProblemSpec,
    m: int,
    seed: int,
    stratified: bool = True,
) -> Dataset:
    """Truncated subgaussian samples around the planted direction.

    Each sample is x = z + y·mu·β* with z standard normal, redrawn until
    the projection v = y·β*ᵀx is at least −Δ. Labels are stratified to
    ⌈m/2⌉ positives by default, or Bernoulli(1/2) with
    ``stratified=False``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    pos = _label_quotas(m)[1.0]
    if stratified:
        labels = np.concatenate([np.ones(pos), -np.ones(m - pos)])
    else:
        labels = np.where(rng.random(m) < 0.5, 1.0, -1.0)
    features = np.empty((m, spec.p))
    budget = REJECTION_CAP_PER_SAMPLE * m
    for i in range(m):
        y = labels[i]
        accepted = False
        while budget > 0:
            budget -= 1
            x = rng.standard_normal(spec.p)
            x += y * spec.mu * spec.beta_star
            if y * float(spec.beta_star @ x) >= -spec.delta_trunc:
                accepted = True
                break
        if not accepted:
            raise DatasetError(
                f"subgaussian sampler rejected too often at sample {i}; "
                f"draw budget {REJECTION_CAP_PER_SAMPLE * m} exhausted"
            )
        features[i] = x
    return dataset_from_arrays(labels, features)


def gen_xor(seed: int = 0) -> Dataset:
    """The four-sample XOR problem; no linear separator exists.

    The seed is accepted for interface uniformity and ignored — the
    construction is fixed.
    """
    del seed
    features = np.array(
        [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]]
    )
    labels = np.array([1.0, 1.0, -1.0, -1.0])
    return dataset_from_arrays(labels, features)


def gen_paired(x: NDArray[np.float64], copies: int = 1) -> Dataset:
    """Contradictory pairs: (x, +1) and (x, −1), repeated.

    No classifier can separate a pair, which pins the soft-margin
    optimum at objective 1 with all slack.
    """
    if copies < 1:
        raise ValueError("copies must be at least 1")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0 or not np.all(np.isfinite(x)):
        raise ValueError("x must be a finite nonempty vector")
    features = np.repeat(x[None, :], 2 * copies, axis=0)
    labels = np.tile([1.0, -1.0], copies)
    return dataset_from_arrays(labels, features)
