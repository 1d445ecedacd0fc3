"""
Social-preference functionals over expected material payoffs.

Every functional reads only (E[m1], E[m2]) at a profile, i.e. ex ante payoffs.
Disutility is returned as negative utils.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

import numpy as np

from shared.errors import InvalidParameter, ParseError
from .config import EQUALITY_TOLERANCE
from .game import Game, Profile, expected_material_payoffs, parse_number

logger = logging.getLogger(__name__)


class SocialKind(str, Enum):
    STEP = "step"
    LINEAR = "linear"
    ZERO = "zero"


class SocialFunctional:
    kind: SocialKind

    def from_payoffs(self, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def params(self) -> Dict[str, float]:
        return {}

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, **self.params()}


@dataclass(frozen=True)
class StepInequalityAversion(SocialFunctional):
    """Costs `penalty` utils whenever expected payoffs differ."""

    penalty: float = 1.0
    equality_tolerance: float = EQUALITY_TOLERANCE
    kind = SocialKind.STEP

    def __post_init__(self):
        if not self.penalty >= 0:
            raise InvalidParameter(f"penalty must be >= 0, got {self.penalty}")
        if not self.equality_tolerance > 0:
            raise InvalidParameter(f"equality_tolerance must be > 0, got {self.equality_tolerance}")

    def from_payoffs(self, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
        unequal = np.abs(e1 - e2) > self.equality_tolerance
        return np.where(unequal, -float(self.penalty), 0.0)

    def params(self) -> Dict[str, float]:
        return {'penalty': float(self.penalty), 'equality_tolerance': float(self.equality_tolerance)}


@dataclass(frozen=True)
class LinearInequalityAversion(SocialFunctional):
    """Piecewise-linear aversion: alpha weighs Alice's disadvantage, beta her advantage."""

    alpha: float = 0.0
    beta: float = 0.0
    kind = SocialKind.LINEAR

    def __post_init__(self):
        if not self.alpha >= 0 or not self.beta >= 0:
            raise InvalidParameter(f"alpha and beta must be >= 0, got {self.alpha}, {self.beta}")

    def from_payoffs(self, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
        disadvantage = np.maximum(e2 - e1, 0.0)
        advantage = np.maximum(e1 - e2, 0.0)
        return -self.alpha * disadvantage - self.beta * advantage

    def params(self) -> Dict[str, float]:
        return {'alpha': float(self.alpha), 'beta': float(self.beta)}


@dataclass(frozen=True)
class ZeroSocial(SocialFunctional):
    kind = SocialKind.ZERO

    def from_payoffs(self, e1: np.ndarray, e2: np.ndarray) -> np.ndarray:
        return np.zeros_like(e1, dtype=float)


_BUILDERS = {
    SocialKind.STEP: StepInequalityAversion,
    SocialKind.LINEAR: LinearInequalityAversion,
    SocialKind.ZERO: ZeroSocial,
}


def build_social(kind: str, **params) -> SocialFunctional:
    try:
        cls = _BUILDERS[SocialKind(kind)]
    except ValueError:
        raise InvalidParameter(f"unknown social kind '{kind}'")
    try:
        return cls(**params)
    except TypeError as e:
        raise InvalidParameter(f"bad parameters for '{kind}': {e}")


def social_from_dict(data: Dict[str, Any], source: str = None) -> SocialFunctional:
    """
    Parse {"kind": ..., <params>}. A wrapped utility spec
    {"type": "social", "kind": ..., "params": {...}} is accepted too.
    """
    if not isinstance(data, dict) or 'kind' not in data:
        raise ParseError("social spec must be an object with a 'kind'", source)
    if data.get('type') == 'social':
        params = data.get('params') or {}
    else:
        params = {k: v for k, v in data.items() if k != 'kind'}
    if not isinstance(params, dict):
        raise ParseError("social 'params' must be an object", source)
    params = {key: parse_number(value, f"social parameter '{key}'", source) for key, value in params.items()}
    try:
        return build_social(data['kind'], **params)
    except InvalidParameter as e:
        raise ParseError(e.reason, source)


def eval_social_many(f: SocialFunctional, game: Game, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    e1, e2 = expected_material_payoffs(game, rows, cols)
    return f.from_payoffs(e1, e2)


def eval_social(f: SocialFunctional, game: Game, p: Profile) -> float:
    game.check_profile(p)
    return float(eval_social_many(f, game, p.row.vector[None, :], p.col.vector[None, :])[0])
