"""Clonal-selection engine over fixed-length bit strings.

Antibodies are 1-D uint8 arrays of 0/1. The engine keeps a pool split into a
memory section (one slot per antigen, the eventual output) and a remainder
group. Each generation exposes the pool to every antigen once, in random
order: the n highest-affinity antibodies are cloned in proportion to their
rank, clones are mutated (higher rank, i.e. better affinity, mutates less),
and the best clone replaces the antigen's memory slot when strictly better.
Affinity is Hamming distance, so lower is better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ClonalgParams:
    pop_size: int = 50          # N, antibodies in the pool
    select_count: int = 10      # n, best antibodies cloned per exposure
    clone_factor: float = 10.0  # beta, clone budget multiplier
    generations: int = 30       # G
    replace_count: int = 0      # d, worst remainder antibodies resampled
    memory_size: int = 1        # m, one slot per antigen
    string_length: int = 144    # L
    p_min: float = 0.01         # flip probability for rank 1 clones
    p_max: float = 0.3          # flip probability for rank n clones

    def validate(self) -> None:
        if not (1 <= self.select_count <= self.pop_size):
            raise ValueError("select_count must satisfy 1 <= n <= pop_size")
        if not (0 <= self.replace_count < self.pop_size):
            raise ValueError("replace_count must satisfy 0 <= d < pop_size")
        if self.clone_factor <= 0:
            raise ValueError("clone_factor must be positive")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not (1 <= self.memory_size <= self.pop_size):
            raise ValueError("memory_size must satisfy 1 <= m <= pop_size")
        if self.string_length < 1:
            raise ValueError("string_length must be >= 1")
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise ValueError("need 0 <= p_min <= p_max <= 1")


@dataclass
class AntibodyPool:
    memory: np.ndarray     # (m, L)
    remainder: np.ndarray  # (r, L)

    @property
    def size(self) -> int:
        return self.memory.shape[0] + self.remainder.shape[0]

    def all_antibodies(self) -> np.ndarray:
        return np.vstack([self.memory, self.remainder])

    def copy(self) -> "AntibodyPool":
        return AntibodyPool(self.memory.copy(), self.remainder.copy())


def random_bitstrings(count: int, length: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=(count, length), dtype=np.uint8)


def random_pool(params: ClonalgParams, rng: np.random.Generator) -> AntibodyPool:
    params.validate()
    strings = random_bitstrings(params.pop_size, params.string_length, rng)
    return AntibodyPool(strings[: params.memory_size], strings[params.memory_size :])


def hamming_affinity(ab: np.ndarray, ag: np.ndarray) -> int:
    """Number of differing positions; lower means higher affinity."""
    ab = np.asarray(ab)
    ag = np.asarray(ag)
    if ab.shape != ag.shape:
        raise ValueError(f"length mismatch: {ab.shape} vs {ag.shape}")
    return int(np.count_nonzero(ab != ag))


def _affinities(antibodies: np.ndarray, antigen: np.ndarray) -> np.ndarray:
    return np.count_nonzero(antibodies != antigen[np.newaxis, :], axis=1)


def clone_count(beta: float, pop_size: int, rank: int) -> int:
    """Clones granted to the antibody of a given 1-based rank: round(beta*N/rank)."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    return int(math.floor(beta * pop_size / rank + 0.5))  # round half up


def total_clones(beta: float, pop_size: int, select_count: int) -> int:
    """Clone budget per antigen exposure, summed over the n selected ranks."""
    return sum(clone_count(beta, pop_size, i) for i in range(1, select_count + 1))


def mutation_probability(rank: int, select_count: int, p_min: float, p_max: float) -> float:
    """Linear-in-rank flip probability: rank 1 gets p_min, rank n gets p_max."""
    return p_min + (p_max - p_min) * (rank - 1) / max(1, select_count - 1)


def mutate(
    clone: np.ndarray,
    rank: int,
    select_count: int,
    rng: np.random.Generator,
    p_min: float = 0.01,
    p_max: float = 0.3,
) -> np.ndarray:
    """Flip each bit independently with the rank's probability."""
    if not (1 <= rank <= select_count):
        raise ValueError(f"rank must lie in [1, {select_count}], got {rank}")
    p = mutation_probability(rank, select_count, p_min, p_max)
    flips = rng.random(clone.shape) < p
    return np.bitwise_xor(clone, flips.astype(np.uint8))


def _mutate_batch(clones: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    flips = rng.random(clones.shape) < p
    return np.bitwise_xor(clones, flips.astype(np.uint8))


def generation_step(
    pool: AntibodyPool,
    antigen: np.ndarray,
    params: ClonalgParams,
    rng: np.random.Generator,
    slot: int = 0,
) -> AntibodyPool:
    """One exposure of the pool to one antigen; returns the updated pool.

    ``slot`` is the memory row tracked for this antigen; it is replaced by the
    best mutated clone only on strict affinity improvement. The d worst
    remainder antibodies are then resampled uniformly at random.
    """
    params.validate()
    antigen = np.asarray(antigen, dtype=np.uint8)
    if antigen.size != params.string_length:
        raise ValueError("antigen length does not match params.string_length")
    pool = pool.copy()

    everyone = pool.all_antibodies()
    aff = _affinities(everyone, antigen)
    order = np.argsort(aff, kind="stable")  # ties broken by lower pool index

    best_clone = None
    best_clone_aff = None
    for i in range(1, params.select_count + 1):
        parent = everyone[order[i - 1]]
        count = clone_count(params.clone_factor, params.pop_size, i)
        if count == 0:
            continue
        clones = np.tile(parent, (count, 1))
        p = mutation_probability(i, params.select_count, params.p_min, params.p_max)
        clones = _mutate_batch(clones, p, rng)
        clone_aff = _affinities(clones, antigen)
        j = int(np.argmin(clone_aff))
        if best_clone_aff is None or clone_aff[j] < best_clone_aff:
            best_clone_aff = int(clone_aff[j])
            best_clone = clones[j]

    if best_clone is not None:
        slot_aff = hamming_affinity(pool.memory[slot], antigen)
        if best_clone_aff < slot_aff:
            pool.memory[slot] = best_clone

    d = min(params.replace_count, pool.remainder.shape[0])
    if d > 0:
        rem_aff = _affinities(pool.remainder, antigen)
        worst = np.argsort(-rem_aff, kind="stable")[:d]
        pool.remainder[worst] = random_bitstrings(d, params.string_length, rng)
    return pool


@dataclass
class TrainResult:
    memory: np.ndarray               # (k, L), one antibody per antigen
    final_affinities: np.ndarray     # memory[j] vs antigen j
    initial_best_affinities: np.ndarray  # best pool affinity per antigen before training
    history: list = field(default_factory=list)  # per-generation memory affinities


def train(
    antigens: np.ndarray,
    params: ClonalgParams,
    rng: np.random.Generator,
    initial: AntibodyPool | None = None,
) -> TrainResult:
    """Run G generations over the antigen set and return the memory cells.

    Each generation exposes the pool to every antigen exactly once, in random
    order without replacement. ``initial`` substitutes for the uniform-random
    starting pool (useful for seeded sanity checks).
    """
    antigens = np.atleast_2d(np.asarray(antigens, dtype=np.uint8))
    k = antigens.shape[0]
    if k == 0:
        raise ValueError("need at least one antigen")
    params.validate()
    if params.memory_size != k:
        raise ValueError(f"memory_size must equal the antigen count ({k})")
    if antigens.shape[1] != params.string_length:
        raise ValueError("antigen length does not match params.string_length")

    pool = initial.copy() if initial is not None else random_pool(params, rng)
    if pool.size != params.pop_size or pool.memory.shape[0] != k:
        raise ValueError("initial pool shape does not match params")

    everyone = pool.all_antibodies()
    initial_best = np.array(
        [int(_affinities(everyone, antigens[j]).min()) for j in range(k)]
    )

    history = []
    for _ in range(params.generations):
        for j in rng.permutation(k):
            pool = generation_step(pool, antigens[j], params, rng, slot=int(j))
        history.append(
            np.array([hamming_affinity(pool.memory[j], antigens[j]) for j in range(k)])
        )

    final = np.array([hamming_affinity(pool.memory[j], antigens[j]) for j in range(k)])
    return TrainResult(pool.memory.copy(), final, initial_best, history)
