import os
from dotenv import load_dotenv

# Resolve project root and load .env reliably
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.abspath(os.path.join(BASE_DIR, '..'))
ENV_PATH = os.path.join(PROJECT_ROOT, '.env')
if os.path.exists(ENV_PATH):
    load_dotenv(ENV_PATH)
else:
    # Fallback to current working directory .env if present
    load_dotenv('.env')


def _env_float(key, default):
    return float(os.getenv(f'VISICONE_{key.upper()}', default))


def _env_int(key, default):
    return int(os.getenv(f'VISICONE_{key.upper()}', default))


# Numerical tolerances
TOLERANCES = {
    'pivot_rel': _env_float('pivot_rel', 1e-12),        # relative to largest Gram diagonal
    'in_aff_rel': _env_float('in_aff_rel', 1e-8),       # times (1 + |x|)
    'membership': _env_float('membership', 1e-9),
    'visibility': _env_float('visibility', 1e-7),
    'bary': _env_float('bary', 1e-10),
    'cone_rel': _env_float('cone_rel', 1e-8),           # times (1 + |x - v|)
    'separation_gap': _env_float('separation_gap', 1e-9),
    'separation_stall': _env_float('separation_stall', 1e-12),
    'boundary_probe': _env_float('boundary_probe', 1e-6),
    'support_weight': _env_float('support_weight', 1e-7),
    'same_point': _env_float('same_point', 1e-12),
}

# Work budgets guarding exponential or slow paths
BUDGETS = {
    'max_subsets': _env_int('max_subsets', 2 ** 20),
    'lattice_points': _env_int('lattice_points', 10 ** 7),
    'nnls_iterations_per_vertex': _env_int('nnls_iterations_per_vertex', 50),
    'bisection_steps': _env_int('bisection_steps', 60),
    'separation_rounds': _env_int('separation_rounds', 10000),
    'sample_attempts': _env_int('sample_attempts', 1000),
}

# Command line defaults
CLI_DEFAULTS = {
    'instances': _env_int('instances', 100),
    'seed': _env_int('seed', 0),
    'workers': _env_int('workers', 1),
}

# Logging Configuration
LOGGING_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'detailed': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'detailed',
            'stream': 'ext://sys.stderr',
        },
    },
    'root': {
        'level': 'INFO',
        'handlers': ['console'],
    },
}

LOG_FILE = os.getenv('VISICONE_LOG_FILE')
if LOG_FILE:
    LOGGING_CONFIG['handlers']['file'] = {
        'level': 'DEBUG',
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'formatter': 'detailed',
    }
    LOGGING_CONFIG['root']['handlers'].append('file')
