"""
Utility functionals over mixed-strategy profiles.

Two representations: tables evaluated through their multilinear extension
(bilinear by construction) and black-box social functionals. Affine, Sum and
Difference compose them pointwise.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Sequence

import numpy as np

from shared.errors import DimensionMismatch, NonPositiveScale, ParseError, SocialEUError
from .game import Game, Profile, bilinear_values, load_json, parse_matrix, parse_number, profile_arrays, pure_profile
from .social import SocialFunctional, eval_social_many, social_from_dict

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UtilityTable:
    """Utils assigned to pure profiles (a_i, b_j)."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or 0 in values.shape:
            raise ParseError(f"utility table must be a non-empty matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ParseError("utility table has non-finite entries")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def shape(self):
        return self.values.shape

    def __eq__(self, other) -> bool:
        return isinstance(other, UtilityTable) and np.array_equal(self.values, other.values)

    def __getitem__(self, index):
        return float(self.values[index])

    def to_rows(self):
        return self.values.tolist()


class UtilitySpec:
    """A functional evaluable on any profile of a conforming game."""

    type_name: str = ''

    def evaluate_many(self, game: Game, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> Sequence['UtilitySpec']:
        return ()

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class EUTable(UtilitySpec):
    table: UtilityTable
    type_name = 'eu_table'

    @classmethod
    def of(cls, values) -> 'EUTable':
        return cls(UtilityTable(values))

    def evaluate_many(self, game, rows, cols):
        return bilinear_values(rows, self.table.values, cols)

    def to_dict(self):
        return {'type': self.type_name, 'values': self.table.to_rows()}


@dataclass(frozen=True, eq=False)
class SocialSpec(UtilitySpec):
    functional: SocialFunctional
    type_name = 'social'

    def evaluate_many(self, game, rows, cols):
        return eval_social_many(self.functional, game, rows, cols)

    def to_dict(self):
        return {'type': self.type_name, 'kind': self.functional.kind.value, 'params': self.functional.params()}


@dataclass(frozen=True, eq=False)
class Affine(UtilitySpec):
    """scale * base + shift, scale > 0."""

    base: UtilitySpec
    scale: float
    shift: float = 0.0
    type_name = 'affine'

    def __post_init__(self):
        if not self.scale > 0:
            raise NonPositiveScale(self.scale)

    def evaluate_many(self, game, rows, cols):
        return self.scale * self.base.evaluate_many(game, rows, cols) + self.shift

    def children(self):
        return (self.base,)

    def to_dict(self):
        return {'type': self.type_name, 'base': self.base.to_dict(),
                'scale': float(self.scale), 'shift': float(self.shift)}


@dataclass(frozen=True, eq=False)
class Sum(UtilitySpec):
    left: UtilitySpec
    right: UtilitySpec
    type_name = 'sum'

    def evaluate_many(self, game, rows, cols):
        return self.left.evaluate_many(game, rows, cols) + self.right.evaluate_many(game, rows, cols)

    def children(self):
        return (self.left, self.right)

    def to_dict(self):
        return {'type': self.type_name, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


@dataclass(frozen=True, eq=False)
class Difference(UtilitySpec):
    left: UtilitySpec
    right: UtilitySpec
    type_name = 'difference'

    def evaluate_many(self, game, rows, cols):
        return self.left.evaluate_many(game, rows, cols) - self.right.evaluate_many(game, rows, cols)

    def children(self):
        return (self.left, self.right)

    def to_dict(self):
        return {'type': self.type_name, 'left': self.left.to_dict(), 'right': self.right.to_dict()}


def validate_spec(spec: UtilitySpec, game: Game, source: str = None):
    """Raise DimensionMismatch if any embedded table does not fit the game."""
    if isinstance(spec, EUTable) and spec.table.shape != game.shape:
        raise DimensionMismatch(game.shape, spec.table.shape, what='utility table', source=source)
    for child in spec.children():
        validate_spec(child, game, source)


def is_structurally_bilinear(spec: UtilitySpec) -> bool:
    """True when every leaf is a table; affine shifts stay bilinear since probabilities sum to 1."""
    if isinstance(spec, EUTable):
        return True
    if isinstance(spec, (Affine, Sum, Difference)):
        return all(is_structurally_bilinear(c) for c in spec.children())
    return False


def evaluate_many(spec: UtilitySpec, game: Game, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    if rows.shape[1] != game.shape[0] or cols.shape[1] != game.shape[1]:
        raise DimensionMismatch(game.shape, (rows.shape[1], cols.shape[1]))
    validate_spec(spec, game)
    return np.asarray(spec.evaluate_many(game, rows, cols), dtype=float)


def evaluate_profiles(spec: UtilitySpec, game: Game, profiles: Sequence[Profile]) -> np.ndarray:
    for p in profiles:
        game.check_profile(p)
    rows, cols = profile_arrays(profiles)
    return evaluate_many(spec, game, rows, cols)


def evaluate(spec: UtilitySpec, game: Game, p: Profile) -> float:
    game.check_profile(p)
    return float(evaluate_many(spec, game, p.row.vector[None, :], p.col.vector[None, :])[0])


def multilinear_extension(table: UtilityTable, p: Profile) -> float:
    if p.shape != table.shape:
        raise DimensionMismatch(table.shape, p.shape)
    return float(bilinear_values(p.row.vector[None, :], table.values, p.col.vector[None, :])[0])


def restrict_to_pure(spec: UtilitySpec, game: Game) -> UtilityTable:
    m, n = game.shape
    profiles = [pure_profile(game, i, j) for i in range(m) for j in range(n)]
    values = evaluate_profiles(spec, game, profiles)
    return UtilityTable(values.reshape(m, n))


def induced_social(u_g: UtilitySpec, u_d: UtilitySpec) -> UtilitySpec:
    """s = u_g - u_d."""
    return Difference(u_g, u_d)


def spec_from_dict(data: Dict[str, Any], source: str = None) -> UtilitySpec:
    if not isinstance(data, dict) or 'type' not in data:
        raise ParseError("utility spec must be an object with a 'type'", source)
    kind = data['type']
    try:
        if kind == 'eu_table':
            if 'values' not in data:
                raise ParseError("eu_table needs 'values'", source)
            return EUTable(UtilityTable(parse_matrix(data['values'], 'values', source)))
        if kind == 'social':
            return SocialSpec(social_from_dict(data, source))
        if kind == 'affine':
            scale = parse_number(data.get('scale'), "affine 'scale'", source)
            shift = parse_number(data.get('shift', 0.0), "affine 'shift'", source)
            return Affine(spec_from_dict(data.get('base'), source), scale, shift)
        if kind in ('sum', 'difference'):
            cls = Sum if kind == 'sum' else Difference
            return cls(spec_from_dict(data.get('left'), source), spec_from_dict(data.get('right'), source))
    except SocialEUError as e:
        if isinstance(e, ParseError):
            raise e.with_source(source) if source else e
        raise ParseError(e.reason, source)
    raise ParseError(f"unknown utility spec type '{kind}'", source)


def spec_to_dict(spec: UtilitySpec) -> Dict[str, Any]:
    return spec.to_dict()


def load_spec(path: str) -> UtilitySpec:
    spec = spec_from_dict(load_json(path), source=path)
    logger.debug(f"Loaded {spec.type_name} utility spec from {path}")
    return spec
