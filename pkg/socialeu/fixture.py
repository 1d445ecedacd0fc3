"""
The illustrative two-by-two example, rebuilt from its data and checked step by step.

Alice's utilities are only pinned against Bob's uniform mix, so they live on the
game collapsed to that single column (`decision_view`), not on a full table.
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from shared.errors import FixtureAssertionFailed
from .config import FIXTURE_TOLERANCE
from .analysis import check_bilinear, check_vnm, counterbalance
from .game import Game, MixedStrategy, Profile, centroid_profile, expected_material_payoff, pure_profile
from .probes import ProbeConfig
from .social import StepInequalityAversion
from .utility import EUTable, SocialSpec, UtilityTable, evaluate, restrict_to_pure

logger = logging.getLogger(__name__)

ROWS = ('L', 'R')
COLS = ('L', 'R')
ALICE_PAYOFFS = [[0.0, 10.0], [30.0, 0.0]]
BOB_PAYOFFS = [[20.0, 0.0], [0.0, 20.0]]
SELFISH_PURE_VALUES = (5.0, 15.0)
PENALTY = 1.0
OPPONENT_LABEL = 'uniform'


def illustrative_game() -> Game:
    return Game(ROWS, COLS, ALICE_PAYOFFS, BOB_PAYOFFS)


def opponent_mix() -> MixedStrategy:
    return MixedStrategy.uniform(len(COLS))


def decision_view() -> Game:
    """Rows L and R against Bob's uniform mix as the only column."""
    return illustrative_game().against_column(opponent_mix(), OPPONENT_LABEL)


def step_social() -> SocialSpec:
    return SocialSpec(StepInequalityAversion(penalty=PENALTY))


def game_utility() -> EUTable:
    """u_g at pure rows is s + u_d there; expected utility fixes the rest."""
    view = decision_view()
    s = restrict_to_pure(step_social(), view).values
    values = [[s[i][0] + SELFISH_PURE_VALUES[i]] for i in range(len(ROWS))]
    return EUTable(UtilityTable(values))


def selfish_eu_utility() -> EUTable:
    return EUTable(UtilityTable([[v] for v in SELFISH_PURE_VALUES]))


@dataclass(frozen=True)
class FixtureCheck:
    quantity: str
    expected: float
    actual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.actual - self.expected) <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {'quantity': self.quantity, 'expected': self.expected, 'actual': self.actual, 'passed': self.passed}


@dataclass
class FixtureSection:
    title: str
    checks: List[FixtureCheck] = field(default_factory=list)

    def expect(self, quantity: str, expected: float, actual: float, tolerance: float):
        self.checks.append(FixtureCheck(quantity, float(expected), float(actual), tolerance))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class FixtureResult:
    tolerance: float
    sections: List[FixtureSection]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    @property
    def first_failure(self) -> Optional[FixtureCheck]:
        for section in self.sections:
            for check in section.checks:
                if not check.passed:
                    return check
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tolerance': self.tolerance,
            'passed': self.passed,
            'sections': [
                {'title': s.title, 'passed': s.passed, 'checks': [c.to_dict() for c in s.checks]}
                for s in self.sections
            ],
        }


def run_fixture(tolerance: float = FIXTURE_TOLERANCE, cfg: ProbeConfig = None) -> FixtureResult:
    """Recompute every quantity of the example in derivation order."""
    cfg = cfg or ProbeConfig()
    game = illustrative_game()
    view = decision_view()
    tau = opponent_mix()
    at_left = Profile(MixedStrategy.pure(2, 0), tau)
    at_right = Profile(MixedStrategy.pure(2, 1), tau)
    at_mix = Profile(MixedStrategy.uniform(2), tau)
    view_mix = centroid_profile(view)
    s = step_social()

    problem = game.decision_problem()
    payoffs = FixtureSection('Expected material payoffs')
    for name, profile, expected in (('(L, uniform)', at_left, (5, 10)),
                                    ('(R, uniform)', at_right, (15, 10)),
                                    ('(uniform, uniform)', at_mix, (10, 10))):
        alice, bob = expected_material_payoff(game, profile)
        payoffs.expect(f"Alice's expected payoff at {name}", expected[0], alice, tolerance)
        payoffs.expect(f"Bob's expected payoff at {name}", expected[1], bob, tolerance)
        payoffs.expect(f"Alice's payoff in the decision problem at {name}", expected[0],
                       problem.expected_payoff(profile), tolerance)

    social = FixtureSection('Social utility')
    social.expect('s(L, uniform)', -1, evaluate(s, game, at_left), tolerance)
    social.expect('s(R, uniform)', -1, evaluate(s, game, at_right), tolerance)
    social.expect('s(uniform, uniform)', 0, evaluate(s, game, at_mix), tolerance)

    u_g = game_utility()
    game_util = FixtureSection('Game utility')
    game_util.expect('u_g(L, uniform) = s + u_d', 4, evaluate(u_g, view, pure_profile(view, 0, 0)), tolerance)
    game_util.expect('u_g(R, uniform) = s + u_d', 14, evaluate(u_g, view, pure_profile(view, 1, 0)), tolerance)
    game_util.expect('u_g(uniform, uniform) as expected utility', 9, evaluate(u_g, view, view_mix), tolerance)

    u_d, report = counterbalance(u_g, s, view, cfg)
    balanced = FixtureSection('Counterbalanced selfish utility')
    balanced.expect('x = u_d(uniform, uniform)', 9, evaluate(u_d, view, view_mix), tolerance)
    balanced.expect('s bilinearity deviation', 1, report.s_verdict.max_deviation, tolerance)
    balanced.expect('u_d expected-utility deviation', 1, report.u_d_verdict.max_deviation, tolerance)
    balanced.expect('verdicts consistent (1 = yes)', 1, float(report.theorem_consistent), tolerance)

    u_d_eu = selfish_eu_utility()
    forced_mid = evaluate(u_d_eu, view, view_mix)
    implied_game = evaluate(s, view, view_mix) + forced_mid
    full_verdict = check_bilinear(s, game, cfg)
    eu_forced = FixtureSection('Expected-utility selfish utility')
    eu_forced.expect('u_d(uniform, uniform) as expected utility', 10, forced_mid, tolerance)
    eu_forced.expect('implied u_g(uniform, uniform)', 10, implied_game, tolerance)
    eu_forced.expect('gap to expected-utility u_g', 1, abs(implied_game - evaluate(u_g, view, view_mix)), tolerance)
    eu_forced.expect('s deviation on the full game', 1, full_verdict.max_deviation, tolerance)
    eu_forced.expect('witness is the centroid (1 = yes)', 1,
                     float(full_verdict.witness == centroid_profile(game)), tolerance)
    eu_forced.expect('u_g - s expected-utility deviation', 1,
                     check_vnm(u_d, view, cfg).max_deviation, tolerance)

    result = FixtureResult(tolerance, [payoffs, social, game_util, balanced, eu_forced])
    logger.info(f"Illustrative fixture: {'all checks hold' if result.passed else 'checks failed'}")
    return result


def assert_fixture(tolerance: float = FIXTURE_TOLERANCE) -> FixtureResult:
    result = run_fixture(tolerance)
    failure = result.first_failure
    if failure is not None:
        raise FixtureAssertionFailed(failure.quantity, failure.expected, failure.actual)
    return result


def fixture_files() -> Dict[str, Dict[str, Any]]:
    return {
        'game.json': decision_view().to_dict(),
        'full_game.json': illustrative_game().to_dict(),
        'ug.json': game_utility().to_dict(),
        'ud_eu.json': selfish_eu_utility().to_dict(),
        'social_step.json': step_social().functional.to_dict(),
    }


def export_fixture(out_dir: str) -> List[str]:
    """Write the example as game and utility files for tutorial use."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, payload in fixture_files().items():
        path = os.path.join(out_dir, name)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2)
            f.write('\n')
        written.append(path)
        logger.debug(f"Wrote {path}")
    return written
