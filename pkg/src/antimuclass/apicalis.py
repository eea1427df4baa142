"""Continuous black-box minimizer modeled on apicalis-ant foraging.

Ants keep a bounded memory of hunting sites created around a shared nest.
Each outing either provisions a new site (while memory has room) or locally
explores a remembered site: success moves the site to the better point and
the ant returns there next time; failure increments the site's counter and a
site failing ``patience`` times in a row is forgotten. Periodically the nest
relocates to the best point found so far and all ants drop their memories.
No pheromones are involved; communication happens only through the nest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=np.float64))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=np.float64))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("lower/upper must be 1-D and of equal length")
        if not np.all(lower < upper):
            raise ValueError("need lower < upper in every dimension")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def range(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, point: np.ndarray) -> bool:
        return bool(np.all(point >= self.lower) and np.all(point <= self.upper))

    @staticmethod
    def cube(dimension: int, lower: float = 0.0, upper: float = 1.0) -> "SearchSpace":
        return SearchSpace(np.full(dimension, lower), np.full(dimension, upper))


@dataclass
class HuntingSite:
    position: np.ndarray
    value: float
    failures: int = 0


@dataclass
class Ant:
    a_site: float               # amplitude for provisioning sites around the nest
    a_local: float              # amplitude for exploring around a site
    sites: list[HuntingSite] = field(default_factory=list)
    last_site: int | None = None  # index of the last successful site, if any

    def __post_init__(self):
        if not (0.0 < self.a_local <= self.a_site <= 1.0):
            raise ValueError("need 0 < a_local <= a_site <= 1")


@dataclass(frozen=True)
class ApiParams:
    """Colony configuration; amplitudes are fractions of each dimension's range."""

    nbr_ant: int = 24
    nbr_sit: int = 12            # p, hunting sites per ant
    patience: int = 15           # successive failures before a site is forgotten
    nbr_itr: int = 35            # iteration cap
    a_site: float = 0.1          # homogeneous base amplitudes
    a_local: float = 0.01
    heterogeneous: bool = True
    a_site_min: float = 0.01     # heterogeneous spread; a_local follows as a_site/10
    a_site_max: float = 0.5
    nest_period: int = 5         # iterations between nest relocations
    stagnation_window: int = 0   # stop after this many iterations without improvement; 0 disables
    max_evaluations: int = 0     # objective evaluation cap; 0 disables

    def validate(self) -> None:
        if min(self.nbr_ant, self.nbr_sit, self.patience, self.nbr_itr, self.nest_period) < 1:
            raise ValueError("counts must all be >= 1")
        if not (0.0 < self.a_local <= self.a_site <= 1.0):
            raise ValueError("need 0 < a_local <= a_site <= 1")
        if not (0.0 < self.a_site_min <= self.a_site_max <= 1.0):
            raise ValueError("need 0 < a_site_min <= a_site_max <= 1")
        if self.stagnation_window < 0 or self.max_evaluations < 0:
            raise ValueError("stop settings must be >= 0")


def o_rand(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    """Uniform point in the search space."""
    return rng.uniform(space.lower, space.upper)


def o_explo(
    center: np.ndarray, amplitude: float, space: SearchSpace, rng: np.random.Generator
) -> np.ndarray:
    """Uniform point in the box center +- amplitude*range/2, clamped to bounds."""
    half = amplitude * space.range / 2.0
    point = rng.uniform(center - half, center + half)
    return np.clip(point, space.lower, space.upper)


def make_population(params: ApiParams, rng: np.random.Generator) -> list[Ant]:
    """Colony of ants; heterogeneous mode spreads amplitudes geometrically.

    Ant i of A gets a_site = a_site_max * (a_site_min/a_site_max)^(i/(A-1)),
    so amplitudes decrease monotonically from the widest explorer to the
    finest, and a_local tracks a_site at a tenth.
    """
    params.validate()
    ants = []
    for i in range(params.nbr_ant):
        if params.heterogeneous:
            frac = i / (params.nbr_ant - 1) if params.nbr_ant > 1 else 0.0
            a_site = params.a_site_max * (params.a_site_min / params.a_site_max) ** frac
            a_local = a_site / 10.0
        else:
            a_site, a_local = params.a_site, params.a_local
        ants.append(Ant(a_site=a_site, a_local=a_local))
    return ants


def _evaluate(f, point: np.ndarray) -> float:
    value = float(f(point))
    if not np.isfinite(value):
        raise ValueError(f"objective returned non-finite value {value!r} at {point!r}")
    return value


def api_foraging(
    ant: Ant,
    nest: np.ndarray,
    f,
    params: ApiParams,
    space: SearchSpace,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float]:
    """One outing of one ant; returns the point evaluated and its value.

    While the ant has spare memory it provisions a new site around the nest;
    otherwise it explores around the last successful site if there is one,
    else around a site picked uniformly at random. A site reaching
    ``patience`` successive failures is forgotten, freeing a slot.
    """
    if len(ant.sites) < params.nbr_sit:
        position = o_explo(nest, ant.a_site, space, rng)
        value = _evaluate(f, position)
        ant.sites.append(HuntingSite(position, value))
        return position, value

    idx = ant.last_site if ant.last_site is not None else int(rng.integers(len(ant.sites)))
    site = ant.sites[idx]
    position = o_explo(site.position, ant.a_local, space, rng)
    value = _evaluate(f, position)
    if value < site.value:
        site.position = position
        site.value = value
        site.failures = 0
        ant.last_site = idx
    else:
        site.failures += 1
        ant.last_site = None
        if site.failures >= params.patience:
            del ant.sites[idx]
    return position, value


@dataclass
class ApiResult:
    best_point: np.ndarray
    best_value: float
    trace: np.ndarray      # best-so-far value after each iteration
    evaluations: int
    iterations: int
    stop_reason: str       # "iterations" | "stagnation" | "evaluations"


def run(
    f,
    space: SearchSpace,
    params: ApiParams,
    rng: np.random.Generator,
    x0: np.ndarray | None = None,
    observer=None,
) -> ApiResult:
    """Minimize f over the space; returns the best point, value and trace.

    The nest starts at ``x0`` when given (clamped to bounds), else at a
    uniform-random point; its objective value seeds the best-so-far record.
    Every ``nest_period`` iterations the nest relocates to the best point and
    all ant memories are cleared. ``observer(t, nest, ants, best_point,
    best_value)``, when given, is called at the end of each iteration.
    """
    params.validate()
    evaluations = 0
    budget = params.max_evaluations

    def counted(point):
        nonlocal evaluations
        evaluations += 1
        return _evaluate(f, point)

    if x0 is not None:
        nest = np.clip(np.asarray(x0, dtype=np.float64), space.lower, space.upper)
    else:
        nest = o_rand(space, rng)
    best_point = nest.copy()
    best_value = counted(nest)

    ants = make_population(params, rng)
    trace = []
    stop_reason = "iterations"
    since_improvement = 0
    t = 0
    while t < params.nbr_itr:
        out_of_budget = False
        improved = False
        for ant in ants:
            if budget and evaluations >= budget:
                out_of_budget = True
                break
            point, value = api_foraging(ant, nest, counted, params, space, rng)
            if value < best_value:
                best_point, best_value = point.copy(), value
                improved = True
        t += 1
        trace.append(best_value)
        since_improvement = 0 if improved else since_improvement + 1
        if t % params.nest_period == 0:
            nest = best_point.copy()
            for ant in ants:
                ant.sites.clear()
                ant.last_site = None
        if observer is not None:
            observer(t, nest, ants, best_point, best_value)
        if out_of_budget:
            stop_reason = "evaluations"
            break
        if params.stagnation_window and since_improvement >= params.stagnation_window:
            stop_reason = "stagnation"
            break
    return ApiResult(best_point, best_value, np.asarray(trace), evaluations, t, stop_reason)
