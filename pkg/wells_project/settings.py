"""
Django settings for the wells project.

The project has no web surface: it exists to host the ``wells`` app, its
management commands (solve, sweep, wavefunction, verify) and the test runner.
Every tunable can be overridden from the environment or a ``.env`` file.
"""

import os

from dotenv import load_dotenv

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

load_dotenv(os.path.join(BASE_DIR, '.env'))

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'wells-insecure-default-key')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = os.environ.get('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

# Application definition

INSTALLED_APPS = [
    'wells',
]

# No models, no database.
DATABASES = {}

# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Solver defaults used by the management commands. Library functions take
# explicit arguments; only the command layer reads this dict.
WELLS = {
    'KAPPA_MIN': float(os.environ.get('WELLS_KAPPA_MIN', '1e-6')),
    'STATES': int(os.environ.get('WELLS_STATES', '4')),
    'LOG_POINTS_PER_DECADE': int(os.environ.get('WELLS_LOG_POINTS_PER_DECADE', '400')),
    'LINEAR_SCAN_POINTS': int(os.environ.get('WELLS_LINEAR_SCAN_POINTS', '2000')),
    'GRID_SAMPLES': int(os.environ.get('WELLS_GRID_SAMPLES', '4001')),
    'ORACLE_HALF_WIDTH': float(os.environ.get('WELLS_ORACLE_HALF_WIDTH', '60')),
    'ORACLE_POINTS': int(os.environ.get('WELLS_ORACLE_POINTS', '24001')),
    'VERIFY_TOLERANCE': float(os.environ.get('WELLS_VERIFY_TOLERANCE', '1e-3')),
    'SWEEP_JOBS': int(os.environ.get('WELLS_SWEEP_JOBS', '1')),
}


# Logging goes to stderr so that command payloads on stdout stay
# byte-for-byte reproducible.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'tagged': {
            'format': '[%(name)s] %(levelname)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'tagged',
        },
    },
    'loggers': {
        'wells': {
            'handlers': ['console'],
            'level': os.environ.get('WELLS_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
