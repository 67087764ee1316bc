"""
gammaq - Configuration
"""
import os

from dotenv import load_dotenv

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

load_dotenv(os.path.join(BASE_DIR, ".env"))


def _flag(name, default="off"):
    return os.environ.get(name, default).strip().lower() in ("1", "on", "true", "yes")


class Config:
    DEBUG = False
    TESTING = False

    # Solve cache
    CACHE_DIR = os.environ.get("GAMMAQ_CACHE_DIR") or None
    CACHE_FILE = "gammaq_cache.db"

    # Quantization
    DEFAULT_ORDER = int(os.environ.get("GAMMAQ_DEFAULT_ORDER", 2))
    CAP_SLACK = int(os.environ.get("GAMMAQ_CAP_SLACK", 0))

    # Classical checks
    DEGREE_WINDOW = int(os.environ.get("GAMMAQ_DEGREE_WINDOW", 6))
    CHECK_DEGREE = int(os.environ.get("GAMMAQ_CHECK_DEGREE", 2))

    # Output
    LOG_LEVEL = os.environ.get("GAMMAQ_LOG_LEVEL", "WARNING").upper()
    TIMESTAMPS = _flag("GAMMAQ_TIMESTAMPS")
    LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

    @classmethod
    def cache_url(cls):
        if not cls.CACHE_DIR:
            return None
        return f"sqlite:///{os.path.join(cls.CACHE_DIR, cls.CACHE_FILE)}"


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.environ.get("GAMMAQ_LOG_LEVEL", "INFO").upper()


class TestingConfig(Config):
    TESTING = True
    TIMESTAMPS = False
    CACHE_DIR = None
    DEFAULT_ORDER = 1
    CHECK_DEGREE = 1


class ProductionConfig(Config):
    DEBUG = False


config = {
    "development": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "default": ProductionConfig,
}
