"""Chaos-game optimizer: fractal-inspired population search.

Each iteration builds, for every member S_k, a temporary triangle out of
S_k, the global best G, and a mean-group vector M_k (the per-coordinate mean
of a random population subset). Four candidate seeds are generated from the
triangle, boundary-repaired, and the best ``population`` members of the
pooled old+new candidates survive (minimization).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import Agent, OptimizerConfig, RunResult
from .errors import ObjectiveNonFinite
from .fitness import binarize

SEEDS_PER_AGENT = 4


@dataclass(frozen=True)
class CgoConfig(OptimizerConfig):
    """Optimizer budget plus the integer range the attraction factors
    beta and gamma are drawn from (inclusive on both ends)."""

    beta_gamma_range: tuple[int, int] = (1, 2)

    def __post_init__(self):
        super().__post_init__()
        lo, hi = self.beta_gamma_range
        if lo > hi:
            raise ValueError(f"bad beta_gamma_range {self.beta_gamma_range}")


def init_population(config: OptimizerConfig, rng: np.random.Generator) -> list[Agent]:
    """Uniform initial positions: rand * (upper - lower) + lower, fitness unset."""
    b = config.bounds
    return [
        Agent(rng.random(b.dim) * b.span + b.lower)
        for _ in range(config.population)
    ]


def mean_group(
    population: list[Agent], k_index: int, rng: np.random.Generator
) -> np.ndarray:
    """Per-coordinate mean of a uniformly random non-empty population subset.

    Subset size is uniform on [1, D]; the draw does not depend on ``k_index``
    (the subset may include agent k itself).
    """
    d = len(population)
    size = int(rng.integers(1, d + 1))
    idx = rng.choice(d, size=size, replace=False)
    return np.mean([population[i].position for i in idx], axis=0)


def sample_alpha(rng: np.random.Generator) -> float:
    """Seed-mobility factor: one of four formulas, picked uniformly.

    (a) R   (b) 2R   (c) eps*R + 1   (d) eps*R + eps,
    with R and eps fresh uniforms in [0, 1). All values lie in [0, 2).
    """
    branch = int(rng.integers(0, 4))
    r = rng.random()
    if branch == 0:
        return r
    if branch == 1:
        return 2.0 * r
    eps = rng.random()
    if branch == 2:
        return eps * r + 1.0
    return eps * r + eps


def combine_triangle(
    s_k: np.ndarray,
    g: np.ndarray,
    m_k: np.ndarray,
    alphas: np.ndarray,
    betas: np.ndarray,
    gammas: np.ndarray,
) -> np.ndarray:
    """The three triangle-seed formulas, before boundary repair.

    P1 = S_k + a1*(b1*G   - c1*M_k)
    P2 = G   + a2*(b2*S_k - c2*M_k)
    P3 = M_k + a3*(b3*S_k - c3*G)
    """
    return np.stack(
        [
            s_k + alphas[0] * (betas[0] * g - gammas[0] * m_k),
            g + alphas[1] * (betas[1] * s_k - gammas[1] * m_k),
            m_k + alphas[2] * (betas[2] * s_k - gammas[2] * g),
        ]
    )


def generate_seeds(
    s_k: Agent,
    g: Agent,
    m_k: np.ndarray,
    rng: np.random.Generator,
    config: CgoConfig,
) -> np.ndarray:
    """Four boundary-repaired candidate positions for one temporary triangle.

    Draw order (fixed for reproducibility): alpha, beta, gamma per triangle
    seed; then the fourth seed's subset size, subset indices, and per-index
    uniform perturbations.
    """
    lo, hi = config.beta_gamma_range
    alphas = np.empty(3)
    betas = np.empty(3)
    gammas = np.empty(3)
    for i in range(3):
        alphas[i] = sample_alpha(rng)
        betas[i] = rng.integers(lo, hi + 1)
        gammas[i] = rng.integers(lo, hi + 1)
    seeds = np.empty((SEEDS_PER_AGENT, config.bounds.dim))
    seeds[:3] = combine_triangle(s_k.position, g.position, m_k, alphas, betas, gammas)
    # Fourth seed: random non-empty coordinate subset, each nudged by rand.
    dim = config.bounds.dim
    size = int(rng.integers(1, dim + 1))
    idx = rng.choice(dim, size=size, replace=False)
    fourth = s_k.position.copy()
    fourth[idx] += rng.random(size)
    seeds[3] = fourth
    return config.bounds.clip(seeds)


def _checked(objective, position: np.ndarray) -> float:
    value = float(objective(position))
    if not np.isfinite(value):
        raise ObjectiveNonFinite(f"objective returned {value}")
    return value


def optimize(
    objective,
    config: CgoConfig,
    rng: np.random.Generator,
    rng_seed: int = 0,
    mask_threshold: float = 0.5,
) -> RunResult:
    """Minimize ``objective`` over the search box for exactly
    ``config.iterations`` iterations.

    The objective must be deterministic in the position. Per iteration every
    agent contributes four seeds (4*D evaluations); survivors are the D
    lowest-fitness members of old population plus new seeds, ties broken by
    generation order (older first). ``fitness_trace[t]`` is the best fitness
    after iteration t and is non-increasing.

    ``rng_seed`` is recorded in the result for provenance only; the caller
    seeds ``rng``.
    """
    start = time.perf_counter()
    population = init_population(config, rng)
    for agent in population:
        agent.fitness = _checked(objective, agent.position)
    evaluations = config.population
    population.sort(key=lambda a: a.fitness)
    best = Agent(population[0].position.copy(), population[0].fitness)

    trace = np.empty(config.iterations)
    for t in range(config.iterations):
        seeds: list[Agent] = []
        for k in range(config.population):
            m_k = mean_group(population, k, rng)
            for position in generate_seeds(population[k], best, m_k, rng, config):
                seeds.append(Agent(position, _checked(objective, position)))
        evaluations += SEEDS_PER_AGENT * config.population
        pool = population + seeds
        pool.sort(key=lambda a: a.fitness)  # stable: older first on ties
        population = pool[: config.population]
        if population[0].fitness < best.fitness:
            best = Agent(population[0].position.copy(), population[0].fitness)
        trace[t] = best.fitness

    return RunResult(
        optimizer_name="CGO",
        best_mask=binarize(best.position, mask_threshold),
        best_fitness=best.fitness,
        best_position=best.position,
        fitness_trace=trace,
        evaluations=evaluations,
        wall_time=time.perf_counter() - start,
        rng_seed=rng_seed,
    )
