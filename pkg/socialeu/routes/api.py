from typing import Any, Dict, Optional

from flask import Blueprint, current_app, jsonify, request

from shared.errors import InvalidParameter, ParseError
from socialeu.analysis import check_affine_invariance, counterbalance, forward_trials, reverse_trials, verify_theorem
from socialeu.config import FIXTURE_TOLERANCE
from socialeu.fixture import run_fixture
from socialeu.game import Game, parse_number
from socialeu.probes import ProbeConfig
from socialeu.social import social_from_dict
from socialeu.utility import SocialSpec, spec_from_dict, validate_spec

bp = Blueprint('api', __name__, url_prefix='/api/v1')


def _body(required: bool = True) -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if data is None and not required:
        return {}
    if not isinstance(data, dict):
        raise ParseError("request body must be a JSON object", 'body')
    return data


def _field(data: Dict[str, Any], key: str, default, integer: bool = False):
    """Optional numeric field; null and wrong types are parse errors."""
    if key not in data:
        return default
    value = data[key]
    if integer:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"'{key}' must be an integer", key)
        return value
    return parse_number(value, f"'{key}'", key)


def _within_limit(value: int, limit_key: str, what: str, source: str):
    limit = current_app.config[limit_key]
    if value > limit:
        raise InvalidParameter(f"{what} above the limit of {limit}", source)


def _probe_config(data: Dict[str, Any]) -> ProbeConfig:
    """Request overrides on top of the service defaults."""
    defaults = ProbeConfig(
        tolerance=current_app.config['PROBE_TOLERANCE'],
        n_random=current_app.config['PROBE_SAMPLES'],
        seed=current_app.config['PROBE_SEED'],
    )
    overrides = data.get('config')
    cfg = ProbeConfig.from_dict({} if overrides is None else overrides, defaults, source='config')
    _within_limit(cfg.n_random, 'MAX_PROBES', 'n_random', 'config')
    return cfg


def _game(data: Dict[str, Any]) -> Game:
    game = Game.from_dict(data.get('game'), source='game')
    _within_limit(max(game.shape), 'MAX_STRATEGIES', 'strategy count', 'game')
    return game


def _spec(data: Dict[str, Any], key: str, game: Game):
    if key not in data:
        raise ParseError(f"'{key}' is required", key)
    spec = spec_from_dict(data[key], source=key)
    validate_spec(spec, game, source=key)
    return spec


@bp.route('/health')
def health_check():
    """Liveness probe."""
    return jsonify({'status': 'healthy'})


@bp.route('/fixture', methods=['GET'])
def api_fixture():
    """Run the illustrative example checks."""
    tolerance = request.args.get('tolerance', FIXTURE_TOLERANCE, type=float)
    if tolerance < 0:
        raise InvalidParameter(f"tolerance must be >= 0, got {tolerance}", 'tolerance')
    result = run_fixture(tolerance)
    return jsonify(result.to_dict()), 200 if result.passed else 409


@bp.route('/audit', methods=['POST'])
def api_audit():
    """Audit a game utility against a selfish utility ('ud') or a social functional ('social')."""
    data = _body()
    if ('ud' in data) == ('social' in data):
        raise ParseError("exactly one of 'ud' or 'social' is required", 'body')
    game = _game(data)
    u_g = _spec(data, 'ug', game)
    cfg = _probe_config(data)

    if 'ud' in data:
        report = verify_theorem(u_g, _spec(data, 'ud', game), game, cfg)
    else:
        social = data['social']
        if isinstance(social, dict) and social.get('type') not in (None, 'social'):
            s = _spec(data, 'social', game)
        else:
            s = SocialSpec(social_from_dict(social, source='social'))
        _, report = counterbalance(u_g, s, game, cfg)

    return jsonify(report.to_dict())


@bp.route('/affine', methods=['POST'])
def api_affine():
    """Check social rankings under common and mismatched positive affine transforms."""
    data = _body()
    game = _game(data)
    mismatched: Optional[float] = _field(data, 'mismatched_scale', None)
    report = check_affine_invariance(
        _spec(data, 'ug', game),
        _spec(data, 'ud', game),
        _field(data, 'scale', 1.0),
        _field(data, 'shift', 0.0),
        game,
        _probe_config(data),
        mismatched,
    )
    return jsonify(report.to_dict())


@bp.route('/verify-theorem', methods=['POST'])
def api_verify_theorem():
    """Run both randomized theorem suites."""
    data = _body(required=False)
    trials = _field(data, 'trials', 10, integer=True)
    max_m = _field(data, 'max_m', 5, integer=True)
    max_n = _field(data, 'max_n', 5, integer=True)
    seed = _field(data, 'seed', 42, integer=True)
    n_random = _field(data, 'n_random', current_app.config['PROBE_SAMPLES'], integer=True)
    _within_limit(trials, 'MAX_TRIALS', 'trials', 'trials')
    _within_limit(max(max_m, max_n), 'MAX_STRATEGIES', 'strategy count', 'max_m')
    _within_limit(n_random, 'MAX_PROBES', 'n_random', 'n_random')

    args = (trials, max_m, max_n, seed)
    suites = [forward_trials(*args, n_random=n_random), reverse_trials(*args, n_random=n_random)]
    consistent = all(s.all_consistent for s in suites)
    return jsonify({'consistent': consistent, 'suites': [s.to_dict() for s in suites]})
