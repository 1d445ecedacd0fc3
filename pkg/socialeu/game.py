"""
Finite two-player games in mixed extension.

Alice picks rows, Bob picks columns. A game carries both players' material
payoffs (m1, m2) and optionally Bob's utils (v), which are stored only.
"""
import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from shared.errors import (
    DimensionMismatch,
    EmptyVector,
    IndexOutOfRange,
    InvalidParameter,
    NegativeWeight,
    ParseError,
    ZeroMass,
)

logger = logging.getLogger(__name__)

PROB_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MixedStrategy:
    """A point on a probability simplex. Build it with `make_mixed`."""

    probs: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, 'probs', tuple(float(p) for p in self.probs))
        if not self.probs:
            raise EmptyVector()
        for index, p in enumerate(self.probs):
            if not math.isfinite(p):
                raise InvalidParameter(f"probability {index} is not finite")
            if p < 0:
                raise NegativeWeight(index, p)
        if abs(math.fsum(self.probs) - 1.0) > PROB_SUM_TOLERANCE:
            raise InvalidParameter(f"probabilities sum to {math.fsum(self.probs)!r}, not 1")

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @classmethod
    def pure(cls, size: int, index: int, side: str = 'row') -> 'MixedStrategy':
        if not 0 <= index < size:
            raise IndexOutOfRange(index, size, side)
        weights = [0.0] * size
        weights[index] = 1.0
        return cls(tuple(weights))

    @classmethod
    def uniform(cls, size: int) -> 'MixedStrategy':
        return make_mixed([1.0] * size)

    def mix(self, other: 'MixedStrategy', weight: float) -> 'MixedStrategy':
        """Return weight * self + (1 - weight) * other."""
        if len(other) != len(self):
            raise DimensionMismatch(len(self), len(other), what='mixed strategy')
        if not 0.0 <= weight <= 1.0:
            raise InvalidParameter(f"mixing weight {weight} outside [0, 1]")
        return make_mixed(weight * self.vector + (1.0 - weight) * other.vector)

    def to_list(self) -> List[float]:
        return list(self.probs)


def make_mixed(weights: Iterable[float]) -> MixedStrategy:
    """Normalize non-negative weights into a mixed strategy."""
    w = np.asarray(list(weights), dtype=float)
    if w.ndim != 1:
        raise InvalidParameter(f"weights must be a flat vector, got shape {w.shape}")
    if w.size == 0:
        raise EmptyVector()
    if not np.all(np.isfinite(w)):
        raise InvalidParameter("weights must be finite")
    negative = np.flatnonzero(w < 0)
    if negative.size:
        raise NegativeWeight(int(negative[0]), float(w[negative[0]]))
    peak = w.max()
    if peak == 0:
        raise ZeroMass()
    with np.errstate(over='ignore'):
        total = w.sum()
    if not np.isfinite(total):
        w = w / peak
        total = w.sum()
    return MixedStrategy(tuple(float(x) for x in w / total))


@dataclass(frozen=True)
class Profile:
    """A mixed-strategy profile (sigma, tau)."""

    row: MixedStrategy
    col: MixedStrategy

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.row), len(self.col))

    @classmethod
    def of(cls, row_weights: Sequence[float], col_weights: Sequence[float]) -> 'Profile':
        return cls(make_mixed(row_weights), make_mixed(col_weights))

    def to_dict(self) -> Dict[str, List[float]]:
        return {'row': self.row.to_list(), 'col': self.col.to_list()}


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    """Alice's side of a game played against Nature: same strategies, same m1."""

    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    m1: np.ndarray

    def expected_payoff(self, p: Profile) -> float:
        if p.shape != self.m1.shape:
            raise DimensionMismatch(self.m1.shape, p.shape)
        return float(bilinear_values(p.row.vector[None, :], self.m1, p.col.vector[None, :])[0])


@dataclass(frozen=True, eq=False)
class Game:
    row_labels: Tuple[str, ...]
    col_labels: Tuple[str, ...]
    m1: np.ndarray
    m2: np.ndarray
    v: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, 'row_labels', _labels(self.row_labels, 'row'))
        object.__setattr__(self, 'col_labels', _labels(self.col_labels, 'col'))
        shape = (len(self.row_labels), len(self.col_labels))
        for name in ('m1', 'm2', 'v'):
            value = getattr(self, name)
            if value is None:
                continue
            matrix = np.array(value, dtype=float)
            if matrix.shape != shape:
                raise DimensionMismatch(shape, matrix.shape, what=name)
            if not np.all(np.isfinite(matrix)):
                raise InvalidParameter(f"{name} has non-finite entries")
            matrix.setflags(write=False)
            object.__setattr__(self, name, matrix)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.row_labels), len(self.col_labels))

    def check_profile(self, p: Profile):
        if p.shape != self.shape:
            raise DimensionMismatch(self.shape, p.shape)

    def decision_problem(self) -> DecisionProblem:
        """The associated decision problem: Bob replaced by Nature, m1 kept."""
        return DecisionProblem(self.row_labels, self.col_labels, self.m1)

    def against_column(self, tau: MixedStrategy, label: str = 'uniform') -> 'Game':
        """Collapse Bob to a single fixed mixed strategy `tau`."""
        if len(tau) != self.shape[1]:
            raise DimensionMismatch(self.shape[1], len(tau), what='column strategy')
        t = tau.vector
        return Game(
            row_labels=self.row_labels,
            col_labels=(label,),
            m1=(self.m1 @ t)[:, None],
            m2=(self.m2 @ t)[:, None],
            v=None if self.v is None else (self.v @ t)[:, None],
        )

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> 'Game':
        """Relabel strategies, moving payoff rows and columns with them."""
        rows, cols = list(row_order), list(col_order)
        if sorted(rows) != list(range(self.shape[0])) or sorted(cols) != list(range(self.shape[1])):
            raise InvalidParameter("orders must be permutations of the strategy indices")
        return Game(
            row_labels=tuple(self.row_labels[i] for i in rows),
            col_labels=tuple(self.col_labels[j] for j in cols),
            m1=self.m1[np.ix_(rows, cols)],
            m2=self.m2[np.ix_(rows, cols)],
            v=None if self.v is None else self.v[np.ix_(rows, cols)],
        )

    def with_payoffs_swapped(self) -> 'Game':
        return Game(self.row_labels, self.col_labels, self.m2, self.m1, self.v)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'rows': list(self.row_labels),
            'cols': list(self.col_labels),
            'm1': self.m1.tolist(),
            'm2': self.m2.tolist(),
        }
        if self.v is not None:
            data['v'] = self.v.tolist()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], source: str = None) -> 'Game':
        if not isinstance(data, dict):
            raise ParseError("game must be a JSON object", source)
        missing = [k for k in ('rows', 'cols', 'm1', 'm2') if k not in data]
        if missing:
            raise ParseError(f"game is missing keys: {', '.join(missing)}", source)
        m1 = parse_matrix(data['m1'], 'm1', source)
        shape = m1.shape
        m2 = parse_matrix(data['m2'], 'm2', source)
        if m2.shape != shape:
            raise ParseError(f"m2 has shape {m2.shape}, m1 has {shape}", source)
        v = None
        if data.get('v') is not None:
            v = parse_matrix(data['v'], 'v', source)
            if v.shape != shape:
                raise ParseError(f"v has shape {v.shape}, m1 has {shape}", source)
        rows, cols = data['rows'], data['cols']
        if not isinstance(rows, list) or not isinstance(cols, list):
            raise ParseError("'rows' and 'cols' must be arrays of strings", source)
        if (len(rows), len(cols)) != shape:
            raise ParseError(f"labels describe a {len(rows)}x{len(cols)} game, payoffs are {shape[0]}x{shape[1]}", source)
        try:
            return cls(rows, cols, m1, m2, v)
        except InvalidParameter as e:
            raise ParseError(e.reason, source)


def parse_matrix(rows: Any, name: str, source: str = None) -> np.ndarray:
    """Parse a row-major array of arrays of numbers, rejecting ragged input."""
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{name} must be a non-empty array of arrays", source)
    width = None
    values = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{name} row {r} must be a non-empty array", source)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{name} is ragged: row {r} has {len(row)} entries, expected {width}", source)
        values.append([parse_number(x, f"{name}[{r}][{c}]", source) for c, x in enumerate(row)])
    return np.array(values, dtype=float)


def parse_number(value: Any, what: str, source: str = None) -> float:
    """A finite JSON number as a float. Booleans are not numbers here."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} is not a number", source)
    try:
        x = float(value)
    except OverflowError:
        raise ParseError(f"{what} is not finite", source)
    if not math.isfinite(x):
        raise ParseError(f"{what} is not finite", source)
    return x


def load_json(path: str) -> Any:
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read file ({e.strerror})", path)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON at line {e.lineno} column {e.colno}", path)


def load_game(path: str) -> Game:
    game = Game.from_dict(load_json(path), source=path)
    logger.debug(f"Loaded {game.shape[0]}x{game.shape[1]} game from {path}")
    return game


def pure_profile(game: Game, i: int, j: int) -> Profile:
    m, n = game.shape
    return Profile(MixedStrategy.pure(m, i, 'row'), MixedStrategy.pure(n, j, 'col'))


def centroid_profile(game: Game) -> Profile:
    m, n = game.shape
    return Profile(MixedStrategy.uniform(m), MixedStrategy.uniform(n))


def bilinear_values(rows: np.ndarray, matrix: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """sum_i sum_j rows[p, i] * cols[p, j] * matrix[i, j] for every probe p."""
    return np.einsum('pi,ij,pj->p', rows, matrix, cols)


def profile_arrays(profiles: Sequence[Profile]) -> Tuple[np.ndarray, np.ndarray]:
    rows = np.array([p.row.probs for p in profiles], dtype=float)
    cols = np.array([p.col.probs for p in profiles], dtype=float)
    return rows, cols


def expected_material_payoffs(game: Game, rows: np.ndarray, cols: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Batched expected material payoffs for stacked row/column strategies."""
    if rows.shape[1] != game.shape[0] or cols.shape[1] != game.shape[1]:
        raise DimensionMismatch(game.shape, (rows.shape[1], cols.shape[1]))
    return bilinear_values(rows, game.m1, cols), bilinear_values(rows, game.m2, cols)


def expected_material_payoff(game: Game, p: Profile) -> Tuple[float, float]:
    game.check_profile(p)
    e1, e2 = expected_material_payoffs(game, p.row.vector[None, :], p.col.vector[None, :])
    return float(e1[0]), float(e2[0])


def _labels(labels: Sequence[str], side: str) -> Tuple[str, ...]:
    labels = tuple(labels)
    if not labels:
        raise InvalidParameter(f"{side} labels must not be empty")
    for label in labels:
        if not isinstance(label, str) or not label:
            raise InvalidParameter(f"{side} labels must be non-empty strings")
    if len(set(labels)) != len(labels):
        raise InvalidParameter(f"{side} labels must be distinct")
    return labels
