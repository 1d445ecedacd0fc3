import logging
import os

from flask import Flask, jsonify

from shared.errors import GameUtilityNotEU, SocialEUError
from .config import config


def create_app(config_name: str = None) -> Flask:
    """Application factory for the JSON audit service."""
    if config_name is None:
        config_name = os.getenv('FLASK_ENV', 'development')

    app = Flask(__name__)
    app.config.from_object(config[config_name])
    logging.getLogger('socialeu').setLevel(app.config['LOG_LEVEL'])

    register_error_handlers(app)

    from .routes import api
    app.register_blueprint(api.bp)

    return app


def register_error_handlers(app: Flask):
    """Map library errors onto JSON error responses."""

    @app.errorhandler(GameUtilityNotEU)
    def handle_not_eu(e: GameUtilityNotEU):
        body = {'error': e.reason, 'source': e.source}
        if e.verdict is not None:
            body['verdict'] = e.verdict.to_dict()
        return jsonify(body), 422

    @app.errorhandler(ValueError)
    def handle_bad_value(e: ValueError):
        return jsonify({'error': f"invalid request value: {e}", 'source': None}), 400

    @app.errorhandler(SocialEUError)
    def handle_input_error(e: SocialEUError):
        app.logger.info(f"Rejected request: {e.diagnostic()}")
        return jsonify({'error': e.reason, 'source': e.source}), 400
