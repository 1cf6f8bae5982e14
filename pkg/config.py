# File: config.py
# Configuration settings for the LOREC toolkit

import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()


def _env_int(name, default):
    raw = (os.environ.get(name) or '').strip()
    return int(raw) if raw else default


class Config:
    """Base configuration"""
    # Worker processes for replication / CV-fold fan-out. --jobs overrides.
    JOBS = _env_int('LOREC_JOBS', 1)
    LOG_LEVEL = os.environ.get('LOREC_LOG_LEVEL') or 'DEBUG'

    # Solver
    EPSILON = 1e-4
    MAX_ITER = 5000
    STEP_L = 2.0

    # Cross-validation
    FOLDS = 5
    GRID_SIZE = 10

    # Simulation protocol
    N_OBS = 100
    REPS = 100

    @classmethod
    def init_logging(cls):
        """Send the package's log records to stdout at LOG_LEVEL."""
        logger = logging.getLogger('lorec')
        if not any(getattr(h, '_lorec_handler', False) for h in logger.handlers):
            handler = logging.StreamHandler(sys.stdout)
            handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
            handler._lorec_handler = True
            logger.addHandler(handler)
        logger.setLevel(cls.LOG_LEVEL.upper())
        return logger


class DevelopmentConfig(Config):
    DEBUG = True


class ProductionConfig(Config):
    DEBUG = False
    LOG_LEVEL = os.environ.get('LOREC_LOG_LEVEL') or 'INFO'

    @classmethod
    def init_logging(cls):
        # A zero or negative worker count would make joblib fan out to every core.
        if cls.JOBS < 1:
            raise RuntimeError(f'LOREC_JOBS must be at least 1 in production, got {cls.JOBS}')
        return super().init_logging()


# Map env name -> config class
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig,
}


def get_config():
    env = os.environ.get('LOREC_ENV', 'development')
    return config.get(env, config['default'])
