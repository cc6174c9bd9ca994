from pathlib import Path
from decouple import config


BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-lcs-local-only-7q!m2v9x#k4w8z0c5r1t6y3u')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',

    # Third party apps
    'rest_framework',

    # Local apps
    'synthesis',
]

# Synthesis
# Enumeration refuses constraint systems with more solutions than this
LCS_SOLUTION_CEILING = config('LCS_SOLUTION_CEILING', default=1 << 20, cast=int)
LCS_WORKERS = config('LCS_WORKERS', default=1, cast=int)
LCS_LOG_LEVEL = config('LCS_LOG_LEVEL', default='WARNING')

# No models; sqlite only satisfies the test runner
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'synthesis': {
            'handlers': ['console'],
            'level': LCS_LOG_LEVEL,
            'propagate': False,
        },
    },
}
