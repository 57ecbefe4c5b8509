"""Eight comparator optimizers behind the same optimize interface.

Update rules follow each algorithm's original publication (one source is
named per runner); parameter defaults follow the shared benchmark
configuration. All runners share the package RNG contract, clamp positions
to the search box, track the best-ever solution for the fitness trace, and
record evaluation counts exactly, so result differences are attributable to
search dynamics alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .cgo import _checked
from .core import OptimizerConfig, RunResult
from .errors import UnknownAlgorithm
from .fitness import binarize

ALGORITHMS = ("PSO", "MVO", "GWO", "MFO", "WOA", "FFA", "BAT", "HGS")


@dataclass(frozen=True)
class PsoParams:
    vmax: float = 6.0
    wmax: float = 0.9
    wmin: float = 0.2
    c1: float = 2.0
    c2: float = 2.0


@dataclass(frozen=True)
class MvoParams:
    wep_min: float = 0.2
    wep_max: float = 1.0
    tdr_power: float = 6.0


@dataclass(frozen=True)
class GwoParams:
    a_initial: float = 2.0


@dataclass(frozen=True)
class MfoParams:
    spiral_b: float = 1.0
    l_low: float = -1.0
    l_high: float = 1.0


@dataclass(frozen=True)
class WoaParams:
    a_initial: float = 2.0
    spiral_b: float = 1.0


@dataclass(frozen=True)
class FfaParams:
    alpha: float = 0.5
    beta_min: float = 0.2
    gamma: float = 1.0
    beta0: float = 1.0


@dataclass(frozen=True)
class BatParams:
    q_min: float = 0.0
    q_max: float = 2.0
    loudness: float = 0.5
    pulse_rate: float = 0.5


@dataclass(frozen=True)
class HgsParams:
    # vmax/wmax/wmin mirror the benchmark configuration table; the canonical
    # hunger-driven update only uses vc2 and the hunger floor.
    vc2: float = 0.03
    vmax: float = 6.0
    wmax: float = 0.9
    wmin: float = 0.2
    hunger_floor: float = 100.0


DEFAULT_PARAMS = {
    "PSO": PsoParams(),
    "MVO": MvoParams(),
    "GWO": GwoParams(),
    "MFO": MfoParams(),
    "WOA": WoaParams(),
    "FFA": FfaParams(),
    "BAT": BatParams(),
    "HGS": HgsParams(),
}


def _init_matrix(config: OptimizerConfig, rng: np.random.Generator) -> np.ndarray:
    b = config.bounds
    return rng.random((config.population, b.dim)) * b.span + b.lower


def _eval_rows(objective, x: np.ndarray) -> np.ndarray:
    return np.array([_checked(objective, row) for row in x])


def _sech(z: np.ndarray) -> np.ndarray:
    a = np.exp(-np.abs(z))
    return 2.0 * a / (1.0 + a * a)


def _run_pso(objective, config, rng, p: PsoParams):
    """Particle swarm (Eberhart & Kennedy 1995) with linearly decaying
    inertia and velocity clamping."""
    d, t_max = config.population, config.iterations
    x = _init_matrix(config, rng)
    v = np.zeros_like(x)
    fit = _eval_rows(objective, x)
    pbest, pbest_f = x.copy(), fit.copy()
    g = int(np.argmin(pbest_f))
    gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
    trace = np.empty(t_max)
    for t in range(t_max):
        w = p.wmax - (p.wmax - p.wmin) * t / max(t_max - 1, 1)
        r1 = rng.random(x.shape)
        r2 = rng.random(x.shape)
        v = w * v + p.c1 * r1 * (pbest - x) + p.c2 * r2 * (gbest - x)
        v = np.clip(v, -p.vmax, p.vmax)
        x = config.bounds.clip(x + v)
        fit = _eval_rows(objective, x)
        improved = fit < pbest_f
        pbest[improved] = x[improved]
        pbest_f[improved] = fit[improved]
        g = int(np.argmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest, gbest_f = pbest[g].copy(), float(pbest_f[g])
        trace[t] = gbest_f
    return gbest, gbest_f, trace, d * (t_max + 1)


def _roulette(weights: np.ndarray, rng) -> int:
    acc = np.cumsum(weights)
    pick = rng.random() * acc[-1]
    hits = np.flatnonzero(acc > pick)
    return int(hits[0]) if hits.size else 0


def _run_mvo(objective, config, rng, p: MvoParams):
    """Multi-verse optimizer (Mirjalili, Mirjalili & Hatamlou 2016):
    white/black-hole exchange plus wormhole travel around the best."""
    d, t_max = config.population, config.iterations
    b = config.bounds
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    best_i = int(np.argmin(fit))
    best, best_f = x[best_i].copy(), float(fit[best_i])
    trace = np.empty(t_max)
    for t in range(1, t_max + 1):
        wep = p.wep_min + t * (p.wep_max - p.wep_min) / t_max
        tdr = 1.0 - t ** (1.0 / p.tdr_power) / t_max ** (1.0 / p.tdr_power)
        order = np.argsort(fit, kind="stable")
        sorted_x, sorted_f = x[order], fit[order]
        norm = np.linalg.norm(sorted_f)
        ni = sorted_f / norm if norm > 0 else np.full(d, 1.0 / d)
        x = sorted_x.copy()
        for i in range(1, d):
            for j in range(b.dim):
                if rng.random() < ni[i]:
                    white = _roulette(-sorted_f, rng)
                    x[i, j] = sorted_x[white, j]
                if rng.random() < wep:
                    step = tdr * (b.span * rng.random() + b.lower)
                    if rng.random() < 0.5:
                        x[i, j] = best[j] + step
                    else:
                        x[i, j] = best[j] - step
        x = b.clip(x)
        fit = _eval_rows(objective, x)
        best_i = int(np.argmin(fit))
        if fit[best_i] < best_f:
            best, best_f = x[best_i].copy(), float(fit[best_i])
        trace[t - 1] = best_f
    return best, best_f, trace, d * (t_max + 1)


def _run_gwo(objective, config, rng, p: GwoParams):
    """Grey wolf optimizer (Mirjalili et al. 2014; continuous core of the
    binary variant): encircle the three best-ever wolves with decaying a."""
    d, t_max = config.population, config.iterations
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    leaders = [(np.inf, None), (np.inf, None), (np.inf, None)]  # alpha, beta, delta

    def absorb(fits, xs):
        nonlocal leaders
        for f, pos in zip(fits, xs):
            f = float(f)
            if f < leaders[0][0]:
                leaders = [(f, pos.copy()), leaders[0], leaders[1]]
            elif f < leaders[1][0]:
                leaders = [leaders[0], (f, pos.copy()), leaders[1]]
            elif f < leaders[2][0]:
                leaders = [leaders[0], leaders[1], (f, pos.copy())]

    absorb(fit, x)
    trace = np.empty(t_max)
    for t in range(t_max):
        a = p.a_initial - t * (p.a_initial / t_max)
        moved = np.zeros_like(x)
        for _, leader in leaders:
            r1 = rng.random(x.shape)
            r2 = rng.random(x.shape)
            coeff_a = 2.0 * a * r1 - a
            coeff_c = 2.0 * r2
            moved += leader - coeff_a * np.abs(coeff_c * leader - x)
        x = config.bounds.clip(moved / 3.0)
        fit = _eval_rows(objective, x)
        absorb(fit, x)
        trace[t] = leaders[0][0]
    return leaders[0][1], leaders[0][0], trace, d * (t_max + 1)


def _run_mfo(objective, config, rng, p: MfoParams):
    """Moth-flame optimization (Mirjalili 2015): log-spiral flight around a
    shrinking list of flames kept from the pooled best positions."""
    d, t_max = config.population, config.iterations
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    order = np.argsort(fit, kind="stable")
    flames, flame_f = x[order].copy(), fit[order].copy()
    trace = np.empty(t_max)
    for t in range(1, t_max + 1):
        flame_no = max(int(round(d - t * (d - 1) / t_max)), 1)
        for i in range(d):
            f_idx = min(i, flame_no - 1)
            l = rng.uniform(p.l_low, p.l_high, x.shape[1])
            dist = np.abs(flames[f_idx] - x[i])
            x[i] = dist * np.exp(p.spiral_b * l) * np.cos(2.0 * np.pi * l) + flames[f_idx]
        x = config.bounds.clip(x)
        fit = _eval_rows(objective, x)
        pool_x = np.vstack([flames, x])
        pool_f = np.concatenate([flame_f, fit])
        order = np.argsort(pool_f, kind="stable")[:d]
        flames, flame_f = pool_x[order].copy(), pool_f[order].copy()
        trace[t - 1] = flame_f[0]
    return flames[0], float(flame_f[0]), trace, d * (t_max + 1)


def _run_woa(objective, config, rng, p: WoaParams):
    """Whale optimization algorithm (Mirjalili & Lewis 2016): shrinking
    encircling, random search, and spiral bubble-net phases."""
    d, t_max = config.population, config.iterations
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    best_i = int(np.argmin(fit))
    best, best_f = x[best_i].copy(), float(fit[best_i])
    trace = np.empty(t_max)
    for t in range(t_max):
        a = p.a_initial - t * (p.a_initial / t_max)
        a2 = -1.0 - t / t_max  # spiral exponent range shrinks -1 -> -2
        for i in range(d):
            r1, r2 = rng.random(), rng.random()
            coeff_a = 2.0 * a * r1 - a
            coeff_c = 2.0 * r2
            prob = rng.random()
            l = (a2 - 1.0) * rng.random() + 1.0
            if prob < 0.5:
                if abs(coeff_a) >= 1.0:
                    ref = x[int(rng.integers(0, d))]
                else:
                    ref = best
                x[i] = ref - coeff_a * np.abs(coeff_c * ref - x[i])
            else:
                dist = np.abs(best - x[i])
                x[i] = dist * np.exp(p.spiral_b * l) * np.cos(2.0 * np.pi * l) + best
        x = config.bounds.clip(x)
        fit = _eval_rows(objective, x)
        best_i = int(np.argmin(fit))
        if fit[best_i] < best_f:
            best, best_f = x[best_i].copy(), float(fit[best_i])
        trace[t] = best_f
    return best, best_f, trace, d * (t_max + 1)


def _run_ffa(objective, config, rng, p: FfaParams):
    """Firefly algorithm (Yang 2010): attraction to brighter fireflies with
    distance-decayed beta and an annealed random walk."""
    d, t_max = config.population, config.iterations
    scale = config.bounds.span
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    best_i = int(np.argmin(fit))
    best, best_f = x[best_i].copy(), float(fit[best_i])
    alpha = p.alpha
    delta = 1.0 - (1e-4 / 0.9) ** (1.0 / t_max)
    trace = np.empty(t_max)
    for t in range(t_max):
        alpha *= 1.0 - delta
        prev_x, prev_f = x.copy(), fit.copy()
        for i in range(d):
            for j in range(d):
                if prev_f[j] < fit[i]:
                    r2 = float(np.sum((x[i] - prev_x[j]) ** 2))
                    beta = (p.beta0 - p.beta_min) * np.exp(-p.gamma * r2) + p.beta_min
                    step = alpha * (rng.random(x.shape[1]) - 0.5) * scale
                    x[i] = x[i] * (1.0 - beta) + prev_x[j] * beta + step
        x = config.bounds.clip(x)
        fit = _eval_rows(objective, x)
        best_i = int(np.argmin(fit))
        if fit[best_i] < best_f:
            best, best_f = x[best_i].copy(), float(fit[best_i])
        trace[t] = best_f
    return best, best_f, trace, d * (t_max + 1)


def _run_bat(objective, config, rng, p: BatParams):
    """Bat algorithm (Yang 2010): frequency-tuned velocities, loudness-gated
    greedy acceptance, and a local walk around the best."""
    d, t_max = config.population, config.iterations
    x = _init_matrix(config, rng)
    v = np.zeros_like(x)
    fit = _eval_rows(objective, x)
    best_i = int(np.argmin(fit))
    best, best_f = x[best_i].copy(), float(fit[best_i])
    trace = np.empty(t_max)
    for t in range(t_max):
        for i in range(d):
            q = p.q_min + (p.q_max - p.q_min) * rng.random()
            v[i] = v[i] + (x[i] - best) * q
            s = config.bounds.clip(x[i] + v[i])
            if rng.random() > p.pulse_rate:
                s = config.bounds.clip(best + 0.001 * rng.standard_normal(x.shape[1]))
            f_new = _checked(objective, s)
            if f_new <= fit[i] and rng.random() < p.loudness:
                x[i], fit[i] = s, f_new
            if f_new <= best_f:
                best, best_f = s.copy(), float(f_new)
        trace[t] = best_f
    return best, best_f, trace, d * (t_max + 1)


def _run_hgs(objective, config, rng, p: HgsParams):
    """Hunger games search (Yang, Chen, Heidari & Gandomi 2021): hunger
    weights steer agents toward copies of the current best positions."""
    d, t_max = config.population, config.iterations
    b = config.bounds
    x = _init_matrix(config, rng)
    fit = _eval_rows(objective, x)
    best_i = int(np.argmin(fit))
    best, best_f = x[best_i].copy(), float(fit[best_i])
    worst_f = float(np.max(fit))
    hungry = np.zeros(d)
    at_best: list[np.ndarray] = []
    trace = np.empty(t_max)
    for t in range(1, t_max + 1):
        if np.min(fit) < best_f:
            best_i = int(np.argmin(fit))
            best, best_f = x[best_i].copy(), float(fit[best_i])
            at_best.clear()
        worst_f = max(worst_f, float(np.max(fit)))
        vc1 = _sech(np.abs(fit - best_f))
        sum_hungry = 0.0
        for i in range(d):
            if fit[i] == best_f:
                hungry[i] = 0.0
                at_best.append(x[i].copy())
            else:
                tmp = rng.random()
                denom = max(worst_f - best_f, np.finfo(float).tiny)
                c = (fit[i] - best_f) / denom * tmp * 2.0 * b.span
                hungry[i] += p.hunger_floor * (1.0 + tmp) if c < p.hunger_floor else c
                sum_hungry += hungry[i]
        if not at_best:
            at_best.append(best.copy())
        w_hunger = np.empty((d, b.dim))
        w_pull = np.empty((d, b.dim))
        for i in range(d):
            for j in range(b.dim):
                w_hunger[i, j] = (1.0 - np.exp(-abs(hungry[i] - sum_hungry))) * rng.random() * 2.0
                if rng.random() < p.vc2 and sum_hungry > 0:
                    w_pull[i, j] = hungry[i] * d / sum_hungry * rng.random()
                else:
                    w_pull[i, j] = 1.0
        shrink = 2.0 * (1.0 - t / t_max)
        for i in range(d):
            if rng.random() < p.vc2:
                x[i] = x[i] * (1.0 + rng.standard_normal())
            else:
                anchor = at_best[int(rng.integers(0, len(at_best)))]
                for j in range(b.dim):
                    r = rng.random()
                    vb = 2.0 * shrink * r - shrink
                    pull = vb * w_hunger[i, j] * abs(anchor[j] - x[i, j])
                    if r > vc1[i]:
                        x[i, j] = w_pull[i, j] * anchor[j] + pull
                    else:
                        x[i, j] = w_pull[i, j] * anchor[j] - pull
        x = b.clip(x)
        fit = _eval_rows(objective, x)
        if np.min(fit) < best_f:
            best_i = int(np.argmin(fit))
            best, best_f = x[best_i].copy(), float(fit[best_i])
        trace[t - 1] = best_f
    return best, best_f, trace, d * (t_max + 1)


_RUNNERS = {
    "PSO": (_run_pso, PsoParams),
    "MVO": (_run_mvo, MvoParams),
    "GWO": (_run_gwo, GwoParams),
    "MFO": (_run_mfo, MfoParams),
    "WOA": (_run_woa, WoaParams),
    "FFA": (_run_ffa, FfaParams),
    "BAT": (_run_bat, BatParams),
    "HGS": (_run_hgs, HgsParams),
}


def optimize_baseline(
    name: str,
    objective,
    config: OptimizerConfig,
    rng: np.random.Generator,
    params=None,
    rng_seed: int = 0,
    mask_threshold: float = 0.5,
) -> RunResult:
    """Run one comparator optimizer under the shared budget and contracts."""
    key = name.upper()
    if key not in _RUNNERS:
        raise UnknownAlgorithm(f"{name!r}; expected one of {ALGORITHMS}")
    runner, params_cls = _RUNNERS[key]
    if params is None:
        params = DEFAULT_PARAMS[key]
    if not isinstance(params, params_cls):
        raise TypeError(f"{key} expects {params_cls.__name__}")
    start = time.perf_counter()
    best, best_f, trace, evaluations = runner(objective, config, rng, params)
    return RunResult(
        optimizer_name=key,
        best_mask=binarize(best, mask_threshold),
        best_fitness=best_f,
        best_position=best,
        fitness_trace=trace,
        evaluations=evaluations,
        wall_time=time.perf_counter() - start,
        rng_seed=rng_seed,
    )
