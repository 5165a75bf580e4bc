import os
from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, '') else default


def _env_flag(name: str, default: bool = False) -> bool:
    value = os.getenv(name)
    if value in (None, ''):
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    # Certificate search
    MAX_DEGREE = _env_int('POSATE_MAX_DEGREE', 8)
    BASIS_CAP = _env_int('POSATE_BASIS_CAP', 20000)
    N_MAX = _env_int('POSATE_N_MAX', 50)

    # Linear algebra caps
    SYSTEM_CAP = _env_int('POSATE_SYSTEM_CAP', 5000)
    RAY_DIMENSION_CAP = _env_int('POSATE_RAY_DIMENSION_CAP', 10)

    # Sampling
    GRID_DENSITY = _env_int('POSATE_GRID_DENSITY', 5)
    GRID_RADIUS = _env_int('POSATE_GRID_RADIUS', 2)
    SAMPLE_CAP = _env_int('POSATE_SAMPLE_CAP', 400)

    # Witnesses
    RADIUS_STEPS = _env_int('POSATE_RADIUS_STEPS', 64)

    # Batch mode
    BATCH_WORKERS = _env_int('POSATE_BATCH_WORKERS', 4)

    # Console output
    VERBOSE = _env_flag('POSATE_VERBOSE')
    DEBUG_TABLEAU = _env_flag('POSATE_DEBUG_TABLEAU')

    # Files
    CERTIFICATE_SUFFIX = '.cert'
    REPORT_SUFFIX = '.report'
