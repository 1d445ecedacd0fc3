"""
Command-line front end.

Standard output carries the report, standard error carries diagnostics.
Exit status: 0 consistent, 1 input error, 2 inconsistent verdicts or failed
fixture checks.
"""
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Optional

import click

from shared.errors import FixtureAssertionFailed, GameUtilityNotEU, InvalidParameter, SocialEUError
from shared.status import ExitStatus, OutputFormat
from .analysis import check_affine_invariance, counterbalance, forward_trials, reverse_trials, verify_theorem
from .config import DEFAULT_N_RANDOM, DEFAULT_SEED, DEFAULT_TOLERANCE, FIXTURE_TOLERANCE, TRIAL_N_RANDOM
from .fixture import export_fixture, run_fixture
from .game import load_game, load_json
from .probes import ProbeConfig
from .reporting import render_affine_text, render_fixture_text, render_report_text, render_trials_text, to_json
from .social import social_from_dict
from .utility import SocialSpec, UtilitySpec, load_spec, spec_from_dict, validate_spec

logger = logging.getLogger(__name__)

Printer = Callable[[str], None]


def _stdout(text: str):
    click.echo(text)


def _stderr(text: str):
    click.echo(text, err=True)


@dataclass(frozen=True)
class AuditRequest:
    game_path: str
    ug_path: str
    ud_path: Optional[str] = None
    social_path: Optional[str] = None
    tolerance: float = DEFAULT_TOLERANCE
    n_random: int = DEFAULT_N_RANDOM
    seed: int = DEFAULT_SEED
    output_format: OutputFormat = OutputFormat.TEXT

    def __post_init__(self):
        if (self.ud_path is None) == (self.social_path is None):
            raise InvalidParameter("exactly one of --ud or --social is required", "audit")

    def probe_config(self) -> ProbeConfig:
        try:
            return ProbeConfig(tolerance=self.tolerance, n_random=self.n_random, seed=self.seed)
        except InvalidParameter as e:
            raise e.with_source('options')


def load_social_spec(path: str) -> UtilitySpec:
    """A social file is a functional {"kind": ...}; full utility specs are accepted too."""
    data = load_json(path)
    if isinstance(data, dict) and 'type' in data and data['type'] != 'social':
        return spec_from_dict(data, source=path)
    return SocialSpec(social_from_dict(data, source=path))


def _load_checked(path: str, game, loader=load_spec) -> UtilitySpec:
    spec = loader(path)
    validate_spec(spec, game, source=path)
    return spec


def cmd_audit(req: AuditRequest, out: Printer = _stdout, err: Printer = _stderr) -> ExitStatus:
    try:
        game = load_game(req.game_path)
        u_g = _load_checked(req.ug_path, game)
        cfg = req.probe_config()
        try:
            if req.ud_path is not None:
                u_d = _load_checked(req.ud_path, game)
                report = verify_theorem(u_g, u_d, game, cfg)
            else:
                s = _load_checked(req.social_path, game, load_social_spec)
                _, report = counterbalance(u_g, s, game, cfg)
        except GameUtilityNotEU as e:
            raise e.with_source(req.ug_path)
    except SocialEUError as e:
        err(e.diagnostic())
        return ExitStatus.INPUT_ERROR

    if req.output_format == OutputFormat.JSON:
        out(to_json(report.to_dict()))
    else:
        out(render_report_text(report, game))
    return ExitStatus.for_report(report.theorem_consistent)


def cmd_paper_fixture(tolerance: float = FIXTURE_TOLERANCE, output_format: OutputFormat = OutputFormat.TEXT,
                      out: Printer = _stdout, err: Printer = _stderr) -> ExitStatus:
    if tolerance < 0:
        err(InvalidParameter(f"tolerance must be >= 0, got {tolerance}", 'options').diagnostic())
        return ExitStatus.INPUT_ERROR
    result = run_fixture(tolerance)
    if output_format == OutputFormat.JSON:
        out(to_json(result.to_dict()))
    else:
        out(render_fixture_text(result))
    failure = result.first_failure
    if failure is not None:
        err(FixtureAssertionFailed(failure.quantity, failure.expected, failure.actual).diagnostic())
        return ExitStatus.INCONSISTENT
    return ExitStatus.OK


def cmd_randomized_verify(trials: int, max_m: int, max_n: int, seed: int, n_random: int = TRIAL_N_RANDOM,
                          tolerance: float = DEFAULT_TOLERANCE, output_format: OutputFormat = OutputFormat.TEXT,
                          out: Printer = _stdout, err: Printer = _stderr) -> ExitStatus:
    try:
        summaries = [
            forward_trials(trials, max_m, max_n, seed, n_random=n_random, tolerance=tolerance),
            reverse_trials(trials, max_m, max_n, seed, n_random=n_random, tolerance=tolerance),
        ]
    except SocialEUError as e:
        err(e.with_source('options').diagnostic())
        return ExitStatus.INPUT_ERROR
    if output_format == OutputFormat.JSON:
        out(to_json({'seed': seed, 'suites': [s.to_dict() for s in summaries]}))
    else:
        out(render_trials_text(summaries))
    return ExitStatus.OK if all(s.all_consistent for s in summaries) else ExitStatus.INCONSISTENT


def cmd_affine(game_path: str, ug_path: str, ud_path: str, scale: float, shift: float,
               mismatched_scale: Optional[float], cfg: ProbeConfig, output_format: OutputFormat = OutputFormat.TEXT,
               out: Printer = _stdout, err: Printer = _stderr) -> ExitStatus:
    try:
        game = load_game(game_path)
        u_g = _load_checked(ug_path, game)
        u_d = _load_checked(ud_path, game)
        report = check_affine_invariance(u_g, u_d, scale, shift, game, cfg, mismatched_scale)
    except SocialEUError as e:
        err(e.diagnostic())
        return ExitStatus.INPUT_ERROR
    if output_format == OutputFormat.JSON:
        out(to_json(report.to_dict()))
    else:
        out(render_affine_text(report))
    return ExitStatus.OK if report.passed else ExitStatus.INCONSISTENT


class SocialEUGroup(click.Group):
    """Usage errors are input errors: exit status 1 instead of click's 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = int(ExitStatus.INPUT_ERROR)
            raise


_format_option = click.option('--format', 'output_format', type=click.Choice([f.value for f in OutputFormat]),
                              default=OutputFormat.TEXT.value, show_default=True)


@click.group(cls=SocialEUGroup)
@click.option('--verbose', '-v', is_flag=True, help='Log debug detail to standard error.')
def cli(verbose: bool):
    """Audit game, selfish and social utilities for expected-utility consistency."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )


@cli.command()
@click.option('--game', 'game_path', required=True, help='Game JSON file.')
@click.option('--ug', 'ug_path', required=True, help='Game utility spec (must be expected utility).')
@click.option('--ud', 'ud_path', help='Selfish utility spec; runs the theorem check.')
@click.option('--social', 'social_path', help='Social functional spec; runs the counterbalancing construction.')
@click.option('--tolerance', type=float, default=DEFAULT_TOLERANCE, show_default=True)
@click.option('--samples', type=int, default=DEFAULT_N_RANDOM, show_default=True, help='Random probe profiles.')
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@_format_option
@click.pass_context
def audit(ctx, game_path, ug_path, ud_path, social_path, tolerance, samples, seed, output_format):
    """Decompose u_g into selfish and social parts and check both."""
    try:
        req = AuditRequest(game_path, ug_path, ud_path, social_path, tolerance, samples, seed,
                           OutputFormat(output_format))
    except SocialEUError as e:
        _stderr(e.diagnostic())
        ctx.exit(int(ExitStatus.INPUT_ERROR))
    ctx.exit(int(cmd_audit(req)))


@cli.command('paper-fixture')
@click.option('--tolerance', type=float, default=FIXTURE_TOLERANCE, show_default=True)
@_format_option
@click.pass_context
def paper_fixture(ctx, tolerance, output_format):
    """Rebuild the two-by-two inequality-aversion example and check every quantity."""
    ctx.exit(int(cmd_paper_fixture(tolerance, OutputFormat(output_format))))


cli.add_command(paper_fixture, 'illustrative-fixture')


@cli.command('verify-theorem')
@click.option('--trials', type=int, default=100, show_default=True)
@click.option('--max-m', type=int, default=5, show_default=True)
@click.option('--max-n', type=int, default=5, show_default=True)
@click.option('--seed', type=int, default=42, show_default=True)
@click.option('--samples', type=int, default=TRIAL_N_RANDOM, show_default=True, help='Random probes per trial.')
@click.option('--tolerance', type=float, default=DEFAULT_TOLERANCE, show_default=True)
@_format_option
@click.pass_context
def verify_theorem_command(ctx, trials, max_m, max_n, seed, samples, tolerance, output_format):
    """Run both randomized directions of the decomposition theorem."""
    ctx.exit(int(cmd_randomized_verify(trials, max_m, max_n, seed, samples, tolerance, OutputFormat(output_format))))


@cli.command('export-fixture')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Directory to write into.')
@click.pass_context
def export_fixture_command(ctx, out_dir):
    """Write the illustrative example as game and spec files."""
    try:
        paths = export_fixture(out_dir)
    except OSError as e:
        _stderr(f"error: {out_dir}: {e.strerror}")
        ctx.exit(int(ExitStatus.INPUT_ERROR))
    for path in paths:
        _stdout(path)


@cli.command()
@click.option('--game', 'game_path', required=True)
@click.option('--ug', 'ug_path', required=True)
@click.option('--ud', 'ud_path', required=True)
@click.option('--scale', type=float, default=1.0, show_default=True)
@click.option('--shift', type=float, default=0.0, show_default=True)
@click.option('--mismatched-scale', type=float, default=None, help='Scale applied to u_d alone (default 2 * scale).')
@click.option('--tolerance', type=float, default=DEFAULT_TOLERANCE, show_default=True)
@click.option('--samples', type=int, default=DEFAULT_N_RANDOM, show_default=True)
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@_format_option
@click.pass_context
def affine(ctx, game_path, ug_path, ud_path, scale, shift, mismatched_scale, tolerance, samples, seed, output_format):
    """Check that a common positive affine transform leaves social rankings unchanged."""
    try:
        cfg = ProbeConfig(tolerance=tolerance, n_random=samples, seed=seed)
    except SocialEUError as e:
        _stderr(e.with_source('options').diagnostic())
        ctx.exit(int(ExitStatus.INPUT_ERROR))
    ctx.exit(int(cmd_affine(game_path, ug_path, ud_path, scale, shift, mismatched_scale, cfg,
                            OutputFormat(output_format))))


def main():
    cli(prog_name='socialeu')
