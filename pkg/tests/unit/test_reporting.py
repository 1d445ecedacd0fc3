"""
Unit tests for text and JSON rendering.
"""
import json

from socialeu.analysis import check_affine_invariance, counterbalance, forward_trials, reverse_trials
from socialeu.fixture import run_fixture
from socialeu.reporting import (
    comparison_table,
    describe_profile,
    describe_verdict,
    render_affine_text,
    render_fixture_text,
    render_report_text,
    render_trials_text,
    to_json,
)
from socialeu.game import centroid_profile
from socialeu.utility import EUTable


class TestToJson:
    """Tests for stable JSON output."""

    def test_stable(self):
        """Re-serializing parsed output gives the same text."""
        text = to_json({'b': [1.5, 2], 'a': {'z': None, 'y': True}})
        assert to_json(json.loads(text)) == text
        assert text.index('"a"') < text.index('"b"')

    def test_emitted_report_round_trips(self, view, u_g, step, cfg):
        """A real decomposition report survives parse and re-serialize unchanged."""
        _, report = counterbalance(u_g, step, view, cfg)
        text = to_json(report.to_dict())
        parsed = json.loads(text)
        assert to_json(parsed) == text
        assert parsed['s_verdict']['witness'] == report.s_verdict.witness.to_dict()
        assert len(parsed['probes']) == len(report.probe_values)

    def test_emitted_affine_report_round_trips(self, game, cfg):
        """An affine report survives parse and re-serialize unchanged."""
        report = check_affine_invariance(EUTable.of([[1, 3], [0, 0]]), EUTable.of([[0, 3], [0, 0]]),
                                         2.0, 1.0, game, cfg)
        text = to_json(report.to_dict())
        assert to_json(json.loads(text)) == text


class TestDescribe:
    """Tests for profile and verdict descriptions."""

    def test_profile(self, game):
        """Profiles print both strategies."""
        assert describe_profile(centroid_profile(game)) == "row [0.5, 0.5] col [0.5, 0.5]"

    def test_failed_verdict_names_witness(self, view, u_g, step, cfg):
        """A failed sampled verdict shows its deviation and witness."""
        _, report = counterbalance(u_g, step, view, cfg)
        line = describe_verdict('s bilinear', report.s_verdict)
        assert line.startswith('s bilinear: FAIL (sampled)')
        assert 'max deviation 1.000e+00' in line
        assert 'witness row [0.5, 0.5] col [1]' in line

    def test_structural_verdict(self, view, u_g, step, cfg):
        """A structural pass has no probe detail."""
        _, report = counterbalance(u_g, step, view, cfg)
        assert describe_verdict('u_g', report.u_g_verdict) == 'u_g: pass (structural)'


class TestReportText:
    """Tests for the decomposition report."""

    def test_comparison_table(self, view, u_g, step, cfg):
        """Rows read L, uniform, R with s, u_g and u_d."""
        _, report = counterbalance(u_g, step, view, cfg)
        lines = comparison_table(report, view)
        assert len(lines) == 4
        assert lines[1].split() == ['L', '-1', '4', '5']
        assert lines[2].split() == ['uniform', '0', '9', '9']
        assert lines[3].split() == ['R', '-1', '14', '15']

    def test_single_row_game(self, cfg):
        """A one-row game has no uniform row."""
        from socialeu.game import Game
        game = Game(('a',), ('b', 'c'), [[1.0, 2.0]], [[0.0, 0.0]])
        u = EUTable.of([[1.0, 3.0]])
        _, report = counterbalance(u, EUTable.of([[0.0, 0.0]]), game, cfg)
        lines = comparison_table(report, game)
        assert [line.split()[0] for line in lines[1:]] == ['a']

    def test_render(self, view, u_g, step, cfg):
        """The text report ends with the consistency line."""
        _, report = counterbalance(u_g, step, view, cfg)
        text = render_report_text(report, view)
        assert text.startswith('Decomposition report (counterbalance)')
        assert 'theorem consistent: yes' in text


class TestFixtureText:
    """Tests for the fixture rendering."""

    def test_render(self):
        """Sections are numbered and the summary counts every check."""
        result = run_fixture()
        text = render_fixture_text(result)
        total = sum(len(s.checks) for s in result.sections)
        assert text.startswith('[1] Expected material payoffs')
        assert text.endswith(f'all {total} checks hold within 1e-12')
        assert 'FAIL' not in text


class TestTrialsText:
    """Tests for the trial summary rendering."""

    def test_render(self):
        """One line per suite."""
        text = render_trials_text([forward_trials(3, 2, 2, seed=1, n_random=10),
                                   reverse_trials(3, 2, 2, seed=1, n_random=10)])
        lines = text.splitlines()
        assert lines[0].startswith('forward: 3/3 consistent')
        assert lines[1].startswith('reverse: 3/3 consistent')


class TestAffineText:
    """Tests for the affine report rendering."""

    def test_render(self, game, cfg):
        """The rendering states the scale and the ordering verdicts."""
        report = check_affine_invariance(EUTable.of([[1, 3], [0, 0]]), EUTable.of([[0, 3], [0, 0]]),
                                         1.0, 0.0, game, cfg, mismatched_scale=0.5)
        text = render_affine_text(report)
        assert text.startswith('common transform scale=1 shift=0')
        assert 'social ordering preserved: yes' in text
        assert 'ordering violation:' in text
