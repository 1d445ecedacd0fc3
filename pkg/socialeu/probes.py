import logging
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List

import numpy as np

from shared.errors import InvalidParameter, ParseError
from .config import DEFAULT_N_RANDOM, DEFAULT_SEED, DEFAULT_TOLERANCE
from .game import Game, MixedStrategy, Profile, make_mixed, parse_number

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


def check_seed(seed: int) -> int:
    """Seeds are unsigned 64-bit integers."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidParameter(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidParameter(f"seed must be in [0, 2**64), got {seed}")
    return int(seed)


@dataclass(frozen=True)
class ProbeConfig:
    tolerance: float = DEFAULT_TOLERANCE
    n_random: int = DEFAULT_N_RANDOM
    seed: int = DEFAULT_SEED
    include_structured: bool = True
    force_sampling: bool = False

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidParameter(f"tolerance must be > 0, got {self.tolerance}")
        if self.n_random < 0:
            raise InvalidParameter(f"n_random must be >= 0, got {self.n_random}")
        check_seed(self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: 'ProbeConfig' = None, source: str = 'config') -> 'ProbeConfig':
        """Overrides from a JSON object on top of `defaults`; unknown keys are ignored."""
        if not isinstance(data, dict):
            raise ParseError("probe config must be an object", source)
        values = asdict(defaults or cls())
        for f in fields(cls):
            if f.name not in data:
                continue
            raw = data[f.name]
            if f.type is bool:
                if not isinstance(raw, bool):
                    raise ParseError(f"'{f.name}' must be true or false", source)
                values[f.name] = raw
            elif f.type is int:
                if isinstance(raw, bool) or not isinstance(raw, int):
                    raise ParseError(f"'{f.name}' must be an integer", source)
                values[f.name] = raw
            else:
                values[f.name] = parse_number(raw, f"'{f.name}'", source)
        try:
            return cls(**values)
        except InvalidParameter as e:
            raise ParseError(e.reason, source)


def structured_probes(game: Game) -> List[Profile]:
    """
    Vertices first (row-major), then row-side edge midpoints against every
    column vertex, then column-side edge midpoints against every row vertex,
    then the centroid. Duplicates keep their first position.
    """
    m, n = game.shape
    row_vertices = [MixedStrategy.pure(m, i, 'row') for i in range(m)]
    col_vertices = [MixedStrategy.pure(n, j, 'col') for j in range(n)]
    row_mids = [_midpoint(m, i, k) for i in range(m) for k in range(i + 1, m)]
    col_mids = [_midpoint(n, j, l) for j in range(n) for l in range(j + 1, n)]

    probes = [Profile(r, c) for r in row_vertices for c in col_vertices]
    probes += [Profile(r, c) for r in row_mids for c in col_vertices]
    probes += [Profile(r, c) for r in row_vertices for c in col_mids]
    probes.append(Profile(MixedStrategy.uniform(m), MixedStrategy.uniform(n)))

    seen = set()
    unique = []
    for p in probes:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return unique


def random_probes(game: Game, count: int, seed: int) -> List[Profile]:
    """Profiles drawn from a uniform Dirichlet on each simplex."""
    if count <= 0:
        return []
    m, n = game.shape
    rng = np.random.default_rng(check_seed(seed))
    rows = rng.dirichlet(np.ones(m), size=count)
    cols = rng.dirichlet(np.ones(n), size=count)
    return [Profile(make_mixed(r), make_mixed(c)) for r, c in zip(rows, cols)]


def probe_set(game: Game, cfg: ProbeConfig) -> List[Profile]:
    probes = structured_probes(game) if cfg.include_structured else []
    probes += random_probes(game, cfg.n_random, cfg.seed)
    logger.debug(f"Probe set for {game.shape[0]}x{game.shape[1]} game: {len(probes)} profiles")
    return probes


def budget_probes(game: Game, budget: int, seed: int) -> List[Profile]:
    """Structured probes first, then seeded random ones, `budget` in total."""
    if budget < 1:
        raise InvalidParameter(f"budget must be >= 1, got {budget}")
    structured = structured_probes(game)[:budget]
    return structured + random_probes(game, budget - len(structured), seed)


def _midpoint(size: int, a: int, b: int) -> MixedStrategy:
    weights = [0.0] * size
    weights[a] = weights[b] = 1.0
    return make_mixed(weights)
