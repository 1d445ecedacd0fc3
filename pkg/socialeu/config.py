import os

# Probe defaults shared by the library, the CLI and the service.
DEFAULT_TOLERANCE = 1e-9
DEFAULT_N_RANDOM = 1000
DEFAULT_SEED = 0
FIXTURE_TOLERANCE = 1e-12
EQUALITY_TOLERANCE = 1e-9
TRIAL_N_RANDOM = 200


def env_float(name: str, default: float) -> float:
    """Read a float from the environment, falling back to the default."""
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    return float(raw)


def env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == '':
        return default
    return int(raw)


class Config:
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    
    # Probing
    PROBE_TOLERANCE = env_float('PROBE_TOLERANCE', DEFAULT_TOLERANCE)
    PROBE_SAMPLES = env_int('PROBE_SAMPLES', DEFAULT_N_RANDOM)
    PROBE_SEED = env_int('PROBE_SEED', DEFAULT_SEED)
    
    # Request limits for the HTTP front end
    MAX_PROBES = env_int('MAX_PROBES', 20000)
    MAX_TRIALS = env_int('MAX_TRIALS', 500)
    MAX_STRATEGIES = env_int('MAX_STRATEGIES', 20)


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG')


class ProductionConfig(Config):
    DEBUG = False


class TestingConfig(Config):
    TESTING = True
    DEBUG = True
    PROBE_SAMPLES = env_int('PROBE_SAMPLES', 100)
    MAX_TRIALS = 20


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}
