import json
from typing import Any, Dict, List

from .analysis import AffineInvarianceReport, BilinearityVerdict, DecompositionReport, TrialSummary
from .fixture import FixtureResult
from .game import Game, MixedStrategy, Profile
from .utility import evaluate


def to_json(payload: Dict[str, Any]) -> str:
    """Stable JSON: re-parsing and re-serializing gives the same bytes."""
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)


def _num(x: float) -> str:
    return f"{x:.6g}"


def _probs(strategy: MixedStrategy) -> str:
    return '[' + ', '.join(_num(p) for p in strategy.probs) + ']'


def describe_profile(profile: Profile) -> str:
    return f"row {_probs(profile.row)} col {_probs(profile.col)}"


def describe_verdict(name: str, verdict: BilinearityVerdict) -> str:
    status = 'pass' if verdict.passed else 'FAIL'
    line = f"{name}: {status} ({verdict.method.value})"
    if verdict.probes_used:
        line += f", max deviation {verdict.max_deviation:.3e} over {verdict.probes_used} probes"
        if verdict.witness is not None and not verdict.passed:
            line += f", witness {describe_profile(verdict.witness)}"
    return line


def comparison_table(report: DecompositionReport, game: Game) -> List[str]:
    """
    s, u_g and u_d for each pure row and the uniform row mix, all against the
    uniform column mix. The uniform row sits in the middle, so a two-row game
    reads L / uniform / R.
    """
    m, n = game.shape
    tau = MixedStrategy.uniform(n)
    rows = [(label, MixedStrategy.pure(m, i)) for i, label in enumerate(game.row_labels)]
    if m > 1:
        rows.insert(m // 2, ('uniform', MixedStrategy.uniform(m)))

    width = max(len(label) for label, _ in rows) + 2
    lines = [f"  {'row':<{width}}{'s':>12}{'u_g':>12}{'u_d':>12}"]
    for label, sigma in rows:
        p = Profile(sigma, tau)
        s = evaluate(report.s_spec, game, p)
        g = evaluate(report.u_g_spec, game, p)
        d = evaluate(report.u_d_spec, game, p)
        lines.append(f"  {label:<{width}}{_num(s):>12}{_num(g):>12}{_num(d):>12}")
    return lines


def render_report_text(report: DecompositionReport, game: Game) -> str:
    m, n = game.shape
    lines = [
        f"Decomposition report ({report.mode})",
        f"  game: {m}x{n}, rows {', '.join(game.row_labels)}; cols {', '.join(game.col_labels)}",
        "",
        "Against the uniform column mix:",
        *comparison_table(report, game),
        "",
        describe_verdict('u_g expected utility', report.u_g_verdict),
        describe_verdict('u_d expected utility', report.u_d_verdict),
        describe_verdict('s bilinear', report.s_verdict),
        f"theorem consistent: {'yes' if report.theorem_consistent else 'NO'}",
    ]
    for note in report.notes:
        lines.append(f"note: {note}")
    return '\n'.join(lines)


def render_fixture_text(result: FixtureResult) -> str:
    lines = []
    for number, section in enumerate(result.sections, start=1):
        lines.append(f"[{number}] {section.title}")
        for check in section.checks:
            status = 'ok  ' if check.passed else 'FAIL'
            lines.append(f"  {status} {check.quantity}: {_num(check.actual)} (expected {_num(check.expected)})")
    total = sum(len(s.checks) for s in result.sections)
    if result.passed:
        lines.append(f"all {total} checks hold within {result.tolerance:g}")
    else:
        lines.append(f"first failure: {result.first_failure.quantity}")
    return '\n'.join(lines)


def render_trials_text(summaries: List[TrialSummary]) -> str:
    lines = []
    for summary in summaries:
        lines.append(
            f"{summary.direction}: {summary.consistent_count}/{summary.trials} consistent, "
            f"worst deviation {summary.worst_deviation:.3e}, "
            f"worst oracle gap {summary.worst_oracle_gap:.3e}"
        )
    return '\n'.join(lines)


def render_affine_text(report: AffineInvarianceReport) -> str:
    lines = [
        f"common transform scale={_num(report.scale)} shift={_num(report.shift)} over {report.probes_used} probes",
        f"  max |s_hat - scale * s|: {report.max_scaling_error:.3e} "
        f"({'ok' if report.common_scaling_holds else 'FAIL'})",
        f"  social ordering preserved: {'yes' if report.common_ordering_preserved else 'NO'}",
        f"  direct transform of s preserves ordering: {'yes' if report.direct_ordering_preserved else 'NO'}",
        f"mismatched scale on u_d: {_num(report.mismatched_scale)}",
    ]
    violation = report.mismatched_violation
    if violation is None:
        lines.append("  no ordering violation found within the probe budget")
    else:
        lines.append(f"  ordering violation: {describe_profile(violation.first)} vs {describe_profile(violation.second)}")
        lines.append(f"    s gap {violation.s_gap:.6g}, transformed gap {violation.transformed_gap:.6g}")
    if report.separate_scaling_theorem_consistent is not None:
        lines.append(f"  theorem verdicts under separate scaling consistent: "
                     f"{'yes' if report.separate_scaling_theorem_consistent else 'NO'}")
    return '\n'.join(lines)
