"""
Bilinearity and expected-utility checks, the counterbalancing construction,
the decomposition theorem and positive affine transformations.

A spec is judged bilinear when it agrees with the multilinear extension of its
own pure-profile restriction. Table-only trees are accepted structurally;
anything else is probed, so a sampled pass means "no violation found within
the probe budget".
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from shared.errors import GameUtilityNotEU, InvalidParameter, NonPositiveScale
from shared.status import VerdictMethod
from .config import DEFAULT_TOLERANCE, TRIAL_N_RANDOM
from .game import Game, Profile, bilinear_values, profile_arrays
from .probes import ProbeConfig, budget_probes, check_seed, probe_set, structured_probes
from .utility import (
    Affine,
    Difference,
    EUTable,
    UtilitySpec,
    UtilityTable,
    evaluate_many,
    evaluate_profiles,
    induced_social,
    is_structurally_bilinear,
    restrict_to_pure,
    validate_spec,
)

logger = logging.getLogger(__name__)

# Pairwise ordering checks run in row blocks of this many probes.
_PAIR_BLOCK = 256


@dataclass(frozen=True, eq=False)
class BilinearityVerdict:
    passed: bool
    max_deviation: float
    witness: Optional[Profile]
    probes_used: int
    method: VerdictMethod
    config: ProbeConfig
    restriction: Optional[UtilityTable] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'max_deviation': self.max_deviation,
            'witness': self.witness.to_dict() if self.witness is not None else None,
            'method': self.method.value,
            'probes_used': self.probes_used,
            'tolerance': self.config.tolerance,
            'config': self.config.to_dict(),
            'restriction': self.restriction.to_rows() if self.restriction is not None else None,
        }


@dataclass(frozen=True)
class ProbeRow:
    profile: Profile
    u_g: float
    u_d: float
    s: float

    def to_dict(self) -> Dict[str, Any]:
        return {'profile': self.profile.to_dict(), 'u_g': self.u_g, 'u_d': self.u_d, 's': self.s}


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    mode: str
    u_g_spec: UtilitySpec
    u_d_spec: UtilitySpec
    s_spec: UtilitySpec
    u_g_verdict: BilinearityVerdict
    u_d_verdict: BilinearityVerdict
    s_verdict: BilinearityVerdict
    theorem_consistent: bool
    probe_values: List[ProbeRow]
    notes: List[str] = field(default_factory=list)

    @property
    def tolerance_artifact(self) -> bool:
        """Disagreeing verdicts can only come from the numerical tolerance."""
        return not self.theorem_consistent

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode,
            'theorem_consistent': self.theorem_consistent,
            'tolerance_artifact': self.tolerance_artifact,
            'u_g_verdict': self.u_g_verdict.to_dict(),
            'u_d_verdict': self.u_d_verdict.to_dict(),
            's_verdict': self.s_verdict.to_dict(),
            'u_d_spec': self.u_d_spec.to_dict(),
            's_spec': self.s_spec.to_dict(),
            'probes': [row.to_dict() for row in self.probe_values],
            'notes': list(self.notes),
        }


def _deviations(spec: UtilitySpec, game: Game, probes: Sequence[Profile]) -> Tuple[np.ndarray, UtilityTable]:
    restriction = restrict_to_pure(spec, game)
    if not probes:
        return np.zeros(0), restriction
    rows, cols = profile_arrays(probes)
    values = evaluate_many(spec, game, rows, cols)
    extension = bilinear_values(rows, restriction.values, cols)
    return np.abs(values - extension), restriction


def _check(spec: UtilitySpec, game: Game, cfg: Optional[ProbeConfig], label: str) -> BilinearityVerdict:
    cfg = cfg or ProbeConfig()
    validate_spec(spec, game)
    if is_structurally_bilinear(spec) and not cfg.force_sampling:
        logger.debug(f"{label}: {spec.type_name} spec is bilinear by construction")
        return BilinearityVerdict(True, 0.0, None, 0, VerdictMethod.STRUCTURAL, cfg, restrict_to_pure(spec, game))

    probes = probe_set(game, cfg)
    deviations, restriction = _deviations(spec, game, probes)
    if deviations.size == 0:
        return BilinearityVerdict(True, 0.0, None, 0, VerdictMethod.SAMPLED, cfg, restriction)

    # argmax keeps the first maximum, so ties resolve in probe order
    worst = int(np.argmax(deviations))
    max_deviation = float(deviations[worst])
    passed = max_deviation <= cfg.tolerance
    logger.info(f"{label}: {'pass' if passed else 'fail'} over {len(probes)} probes, max deviation {max_deviation:.3e}")
    return BilinearityVerdict(passed, max_deviation, probes[worst], len(probes), VerdictMethod.SAMPLED, cfg, restriction)


def check_bilinear(spec: UtilitySpec, game: Game, cfg: ProbeConfig = None) -> BilinearityVerdict:
    return _check(spec, game, cfg, 'bilinearity')


def check_vnm(spec: UtilitySpec, game: Game, cfg: ProbeConfig = None) -> BilinearityVerdict:
    """Expected utility on profiles is exactly the double-sum form, so this is the bilinearity test."""
    return _check(spec, game, cfg, 'expected utility')


def find_witness(spec: UtilitySpec, game: Game, budget: int, seed: int) -> Tuple[Profile, float]:
    probes = budget_probes(game, budget, seed)
    deviations, _ = _deviations(spec, game, probes)
    worst = int(np.argmax(deviations))
    return probes[worst], float(deviations[worst])


def _require_eu(u_g: UtilitySpec, game: Game, cfg: ProbeConfig) -> BilinearityVerdict:
    verdict = check_vnm(u_g, game, cfg)
    if not verdict.passed:
        raise GameUtilityNotEU(verdict)
    return verdict


def _report(mode: str, u_g: UtilitySpec, u_d: UtilitySpec, s: UtilitySpec, game: Game,
            cfg: ProbeConfig, u_g_verdict: BilinearityVerdict) -> DecompositionReport:
    u_d_verdict = check_vnm(u_d, game, cfg)
    s_verdict = check_bilinear(s, game, cfg)
    consistent = u_d_verdict.passed == s_verdict.passed

    probes = structured_probes(game)
    if s_verdict.witness is not None and s_verdict.witness not in probes:
        probes.append(s_verdict.witness)
    g_values = evaluate_profiles(u_g, game, probes)
    d_values = evaluate_profiles(u_d, game, probes)
    s_values = evaluate_profiles(s, game, probes)
    rows = [ProbeRow(p, float(g), float(d), float(v)) for p, g, d, v in zip(probes, g_values, d_values, s_values)]

    notes = []
    if not consistent:
        notes.append(
            "selfish-utility and social-utility verdicts disagree; the theorem is exact, "
            "so this is a numerical tolerance artifact, not a counterexample"
        )
        logger.warning(f"Inconsistent verdicts: u_d deviation {u_d_verdict.max_deviation:.3e}, "
                       f"s deviation {s_verdict.max_deviation:.3e}, tolerance {cfg.tolerance:.1e}")
    for name, verdict in (('u_d', u_d_verdict), ('s', s_verdict)):
        if verdict.method == VerdictMethod.SAMPLED and verdict.passed:
            notes.append(f"{name}: no violation found within {verdict.probes_used} probes")

    return DecompositionReport(mode, u_g, u_d, s, u_g_verdict, u_d_verdict, s_verdict, consistent, rows, notes)


def counterbalance(u_g: UtilitySpec, s: UtilitySpec, game: Game,
                   cfg: ProbeConfig = None) -> Tuple[UtilitySpec, DecompositionReport]:
    """Choose u_d = u_g - s so that the game utility stays expected utility."""
    cfg = cfg or ProbeConfig()
    u_g_verdict = _require_eu(u_g, game, cfg)
    u_d = Difference(u_g, s)
    return u_d, _report('counterbalance', u_g, u_d, s, game, cfg, u_g_verdict)


def verify_theorem(u_g: UtilitySpec, u_d: UtilitySpec, game: Game, cfg: ProbeConfig = None) -> DecompositionReport:
    """With u_g expected utility: u_d is expected utility iff s = u_g - u_d is bilinear."""
    cfg = cfg or ProbeConfig()
    u_g_verdict = _require_eu(u_g, game, cfg)
    return _report('verify', u_g, u_d, induced_social(u_g, u_d), game, cfg, u_g_verdict)


def affine_transform(spec: UtilitySpec, scale: float, shift: float) -> UtilitySpec:
    if not scale > 0:
        raise NonPositiveScale(scale)
    return Affine(spec, float(scale), float(shift))


@dataclass(frozen=True)
class OrderingViolation:
    """s(first) < s(second), yet the transformed values rank first at least as high."""

    first: Profile
    second: Profile
    s_gap: float
    transformed_gap: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'first': self.first.to_dict(),
            'second': self.second.to_dict(),
            's_gap': self.s_gap,
            'transformed_gap': self.transformed_gap,
        }


@dataclass(frozen=True, eq=False)
class AffineInvarianceReport:
    scale: float
    shift: float
    mismatched_scale: float
    probes_used: int
    tolerance: float
    max_scaling_error: float
    common_scaling_holds: bool
    common_ordering_preserved: bool
    direct_ordering_preserved: bool
    mismatched_violation: Optional[OrderingViolation]
    separate_scaling_theorem_consistent: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.common_scaling_holds and self.common_ordering_preserved and self.direct_ordering_preserved

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scale': self.scale,
            'shift': self.shift,
            'mismatched_scale': self.mismatched_scale,
            'probes_used': self.probes_used,
            'tolerance': self.tolerance,
            'max_scaling_error': self.max_scaling_error,
            'common_scaling_holds': self.common_scaling_holds,
            'common_ordering_preserved': self.common_ordering_preserved,
            'direct_ordering_preserved': self.direct_ordering_preserved,
            'mismatched_violation': self.mismatched_violation.to_dict() if self.mismatched_violation else None,
            'separate_scaling_theorem_consistent': self.separate_scaling_theorem_consistent,
            'passed': self.passed,
        }


def first_ordering_violation(s: np.ndarray, transformed: np.ndarray, tolerance: float) -> Optional[Tuple[int, int]]:
    """First (p, q) in row-major order with s[p] < s[q] - tol but transformed[p] >= transformed[q]."""
    n = len(s)
    for start in range(0, n, _PAIR_BLOCK):
        stop = min(start + _PAIR_BLOCK, n)
        s_gap = s[start:stop, None] - s[None, :]
        t_gap = transformed[start:stop, None] - transformed[None, :]
        mask = (s_gap < -tolerance) & (t_gap >= 0)
        if mask.any():
            flat = int(np.argmax(mask))
            return start + flat // n, flat % n
    return None


def check_affine_invariance(u_g: UtilitySpec, u_d: UtilitySpec, scale: float, shift: float, game: Game,
                            cfg: ProbeConfig = None, mismatched_scale: float = None) -> AffineInvarianceReport:
    """
    A common positive affine map of u_g and u_d scales s by `scale` and keeps
    every pairwise social ranking. Scaling u_d by `mismatched_scale` instead
    (default 2 * scale) is searched for a ranking it breaks.
    """
    cfg = cfg or ProbeConfig()
    if not scale > 0:
        raise NonPositiveScale(scale)
    mismatched = 2.0 * scale if mismatched_scale is None else mismatched_scale
    if not mismatched > 0:
        raise NonPositiveScale(mismatched)
    if mismatched == scale:
        raise InvalidParameter("mismatched_scale must differ from scale")

    probes = probe_set(game, cfg)
    rows, cols = profile_arrays(probes)
    s_spec = induced_social(u_g, u_d)
    s = evaluate_many(s_spec, game, rows, cols)

    u_g_hat = affine_transform(u_g, scale, shift)
    s_hat = evaluate_many(induced_social(u_g_hat, affine_transform(u_d, scale, shift)), game, rows, cols)
    max_error = float(np.max(np.abs(s_hat - scale * s))) if len(probes) else 0.0
    common_order = first_ordering_violation(s, s_hat, cfg.tolerance) is None

    direct = evaluate_many(affine_transform(s_spec, scale, shift), game, rows, cols)
    direct_order = first_ordering_violation(s, direct, cfg.tolerance) is None

    u_d_mismatched = affine_transform(u_d, mismatched, shift)
    s_mismatched = evaluate_many(induced_social(u_g_hat, u_d_mismatched), game, rows, cols)
    violation = None
    pair = first_ordering_violation(s, s_mismatched, cfg.tolerance)
    if pair is not None:
        p, q = pair
        violation = OrderingViolation(probes[p], probes[q], float(s[p] - s[q]),
                                      float(s_mismatched[p] - s_mismatched[q]))

    # Separately scaled expected utilities still satisfy the theorem.
    separate = None
    if check_vnm(u_g, game, cfg).passed:
        try:
            separate = verify_theorem(u_g_hat, u_d_mismatched, game, cfg).theorem_consistent
        except GameUtilityNotEU:
            logger.warning("Scaled game utility no longer passes the expected-utility check")

    logger.info(f"Affine check scale={scale} shift={shift}: scaling error {max_error:.3e}, "
                f"mismatch violation {'found' if violation else 'not found'}")
    return AffineInvarianceReport(
        scale=float(scale),
        shift=float(shift),
        mismatched_scale=float(mismatched),
        probes_used=len(probes),
        tolerance=cfg.tolerance,
        max_scaling_error=max_error,
        common_scaling_holds=max_error <= cfg.tolerance,
        common_ordering_preserved=common_order,
        direct_ordering_preserved=direct_order,
        mismatched_violation=violation,
        separate_scaling_theorem_consistent=separate,
    )


# ==================== Randomized theorem suites ====================

@dataclass(frozen=True)
class TrialOutcome:
    index: int
    shape: Tuple[int, int]
    consistent: bool
    max_deviation: float
    oracle_gap: float


@dataclass(frozen=True, eq=False)
class TrialSummary:
    direction: str
    trials: int
    outcomes: List[TrialOutcome]

    @property
    def consistent_count(self) -> int:
        return sum(1 for o in self.outcomes if o.consistent)

    @property
    def all_consistent(self) -> bool:
        return self.consistent_count == self.trials

    @property
    def worst_deviation(self) -> float:
        return max((o.max_deviation for o in self.outcomes), default=0.0)

    @property
    def worst_oracle_gap(self) -> float:
        return max((o.oracle_gap for o in self.outcomes), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'direction': self.direction,
            'trials': self.trials,
            'consistent': self.consistent_count,
            'worst_deviation': self.worst_deviation,
            'worst_oracle_gap': self.worst_oracle_gap,
        }


def random_game(rng: np.random.Generator, m: int, n: int, low: float = -10.0, high: float = 10.0) -> Game:
    return Game(
        row_labels=tuple(f"a{i + 1}" for i in range(m)),
        col_labels=tuple(f"b{j + 1}" for j in range(n)),
        m1=rng.uniform(low, high, size=(m, n)),
        m2=rng.uniform(low, high, size=(m, n)),
    )


def random_eu_table(rng: np.random.Generator, m: int, n: int, low: float = -10.0, high: float = 10.0) -> EUTable:
    return EUTable(UtilityTable(rng.uniform(low, high, size=(m, n))))


def double_sum(values: Sequence[Sequence[float]], p: Profile) -> float:
    """Plain double loop over pure profiles, independent of the numpy kernel."""
    total = 0.0
    for i, sigma_i in enumerate(p.row.probs):
        for j, tau_j in enumerate(p.col.probs):
            total += sigma_i * tau_j * values[i][j]
    return total


def _oracle_gap(spec: UtilitySpec, game: Game, values: Sequence[Sequence[float]],
                probes: Sequence[Profile], limit: int = 25) -> float:
    sample = list(probes[:limit])
    if not sample:
        return 0.0
    computed = evaluate_profiles(spec, game, sample)
    return max(abs(float(c) - double_sum(values, p)) for c, p in zip(computed, sample))


def _trial_setup(rng: np.random.Generator, max_m: int, max_n: int, n_random: int, tolerance: float):
    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    game = random_game(rng, m, n)
    first = random_eu_table(rng, m, n)
    second = random_eu_table(rng, m, n)
    cfg = ProbeConfig(tolerance=tolerance, n_random=n_random,
                      seed=int(rng.integers(0, 2 ** 63 - 1)), force_sampling=True)
    return game, first, second, cfg


def _validate_trial_args(trials: int, max_m: int, max_n: int, seed: int):
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials}")
    if max_m < 1 or max_n < 1:
        raise InvalidParameter(f"max_m and max_n must be >= 1, got {max_m}, {max_n}")
    check_seed(seed)


def forward_trials(trials: int, max_m: int, max_n: int, seed: int,
                   n_random: int = TRIAL_N_RANDOM, tolerance: float = DEFAULT_TOLERANCE) -> TrialSummary:
    """Expected-utility u_g and u_d: the induced s must be bilinear."""
    _validate_trial_args(trials, max_m, max_n, seed)
    rng = np.random.default_rng(seed)
    outcomes = []
    for index in range(trials):
        game, u_g, u_d, cfg = _trial_setup(rng, max_m, max_n, n_random, tolerance)
        report = verify_theorem(u_g, u_d, game, cfg)
        oracle = (u_g.table.values - u_d.table.values).tolist()
        gap = _oracle_gap(report.s_spec, game, oracle, probe_set(game, cfg))
        consistent = report.theorem_consistent and report.s_verdict.passed and report.u_d_verdict.passed
        outcomes.append(TrialOutcome(index, game.shape, consistent, report.s_verdict.max_deviation, gap))
    summary = TrialSummary('forward', trials, outcomes)
    logger.info(f"Forward suite: {summary.consistent_count}/{trials} consistent")
    return summary


def reverse_trials(trials: int, max_m: int, max_n: int, seed: int,
                   n_random: int = TRIAL_N_RANDOM, tolerance: float = DEFAULT_TOLERANCE) -> TrialSummary:
    """Expected-utility u_g and bilinear s: u_d = u_g - s must be expected utility."""
    _validate_trial_args(trials, max_m, max_n, seed)
    rng = np.random.default_rng(seed)
    outcomes = []
    for index in range(trials):
        game, u_g, s, cfg = _trial_setup(rng, max_m, max_n, n_random, tolerance)
        u_d, report = counterbalance(u_g, s, game, cfg)
        oracle = (u_g.table.values - s.table.values).tolist()
        gap = _oracle_gap(u_d, game, oracle, probe_set(game, cfg))
        consistent = report.theorem_consistent and report.u_d_verdict.passed
        outcomes.append(TrialOutcome(index, game.shape, consistent, report.u_d_verdict.max_deviation, gap))
    summary = TrialSummary('reverse', trials, outcomes)
    logger.info(f"Reverse suite: {summary.consistent_count}/{trials} consistent")
    return summary
