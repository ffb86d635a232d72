from pathlib import Path
from dotenv import load_dotenv
import os
import logging
import dj_database_url
import sentry_sdk
from sentry_sdk.integrations.django import DjangoIntegration

load_dotenv()

logger = logging.getLogger(__name__)

SENTRY_DSN = os.getenv('SENTRY_DSN')
if SENTRY_DSN:
    sentry_sdk.init(
        dsn=SENTRY_DSN,
        integrations=[DjangoIntegration()],
        traces_sample_rate=float(os.getenv('SENTRY_TRACES_SAMPLE_RATE', '0.0')),
        send_default_pii=False,
    )

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'spiderweb-lab-local-only')
DEBUG = os.getenv('DJANGO_DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

USE_TZ = True
TIME_ZONE = 'UTC'

USER_APPS = [
    'function_core',
    'escape_classify',
    'loop_extract',
    'itinerary',
    'orbit_construct',
    'periodic_probe',
    'runs',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

DJANGO_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
]

INSTALLED_APPS = THIRD_PARTY_APPS + DJANGO_APPS + USER_APPS

DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'spiderweb.sqlite3'}",
        conn_max_age=0,
    )
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'COERCE_DECIMAL_TO_STRING': False,
    'UNAUTHENTICATED_USER': None,
}

# =======================================================
# NUMERICS
# Every value below can be overridden from the environment (.env).
# =======================================================
SPIDERWEB_EVAL_TOLERANCE = float(os.getenv('SPIDERWEB_EVAL_TOLERANCE', '1e-12'))
SPIDERWEB_CIRCLE_SAMPLES = int(os.getenv('SPIDERWEB_CIRCLE_SAMPLES', '4096'))
SPIDERWEB_REFINE_ARCS = int(os.getenv('SPIDERWEB_REFINE_ARCS', '8'))
SPIDERWEB_MODULUS_RTOL = float(os.getenv('SPIDERWEB_MODULUS_RTOL', '1e-9'))
SPIDERWEB_OVERFLOW_THRESHOLD = float(os.getenv('SPIDERWEB_OVERFLOW_THRESHOLD', '1e300'))
SPIDERWEB_RADIUS_GRID_POINTS = int(os.getenv('SPIDERWEB_RADIUS_GRID_POINTS', '64'))
SPIDERWEB_NEWTON_SEEDS = int(os.getenv('SPIDERWEB_NEWTON_SEEDS', '64'))
SPIDERWEB_NEWTON_MAX_ITER = int(os.getenv('SPIDERWEB_NEWTON_MAX_ITER', '80'))
SPIDERWEB_ROOT_TOLERANCE = float(os.getenv('SPIDERWEB_ROOT_TOLERANCE', '1e-10'))
SPIDERWEB_FORWARD_MAP_CELLS = float(os.getenv('SPIDERWEB_FORWARD_MAP_CELLS', '2.0'))
SPIDERWEB_THREADS = int(os.getenv('SPIDERWEB_THREADS', '1'))
SPIDERWEB_OUTPUT_DIR = os.getenv('SPIDERWEB_OUTPUT_DIR', str(BASE_DIR / 'output'))

SPIDERWEB_EVIDENCE_BANNER = 'evidence, not proof: truncated-depth, finite-resolution verdict'

SPIDERWEB_LOG_LEVEL = os.getenv('SPIDERWEB_LOG_LEVEL', 'INFO')
SPIDERWEB_LOG_FILE = os.getenv('SPIDERWEB_LOG_FILE', str(BASE_DIR / 'spiderweb.log'))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': SPIDERWEB_LOG_LEVEL,
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': SPIDERWEB_LOG_FILE,
            'formatter': 'plain',
            'delay': True,
        },
    },
    'loggers': {
        app: {
            'handlers': ['console', 'file'],
            'level': SPIDERWEB_LOG_LEVEL,
            'propagate': False,
        }
        for app in USER_APPS + ['core', 'utils']
    },
}
