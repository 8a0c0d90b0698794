#!/usr/bin/env python3
"""
Configuration file for the shifted difference set simulator
This file contains default settings that can be overridden by environment
variables (or a .env file) and by command line arguments
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Directory paths
PROJECT_ROOT = Path(__file__).parent.absolute()
DATA_DIR = PROJECT_ROOT / "data"
LOGS_DIR = PROJECT_ROOT / "logs"

load_dotenv(PROJECT_ROOT / ".env")

# Reproducibility: all randomness flows from this seed unless --seed is given
DEFAULT_SEED = int(os.getenv("DIFFSET_SEED", "0"))

# Desk-scale caps (enumeration-based operations refuse anything larger)
GROUP_ORDER_CAP = int(os.getenv("DIFFSET_GROUP_CAP", str(2**20)))
FIELD_SIZE_CAP = int(os.getenv("DIFFSET_FIELD_CAP", str(2**20)))

# Cyclic factors up to this size are transformed with a dense DFT matrix,
# larger ones go through numpy.fft along the same axis
DENSE_DFT_MAX = int(os.getenv("DIFFSET_DENSE_DFT_MAX", "1024"))

# Dense-matrix oracle (full v x v operators) limit
ORACLE_MATRIX_MAX = 256

# Difference counting processes this many rows of D at a time
DIFFERENCE_CHUNK = 256

# Tolerances
UNIT_TOL = 1e-12
MULTIPLICATIVITY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-8
NORM_TOL = 1e-9
MEASURE_NORM_TOL = 1e-6
TURYN_TOL = 1e-8
GAUSS_TOL = 1e-8
DIAGONAL_TOL = 1e-10

# Shift recovery and injectivization
VERIFY_POINTS = 64
INJECTIVIZE_ATTEMPTS = 8
MONTE_CARLO_DRAWS = 200
MONTE_CARLO_SLACK = 0.05

# Logging configuration
LOG_LEVEL = os.getenv("DIFFSET_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_TO_FILE = os.getenv("DIFFSET_LOG_TO_FILE", "0").lower() in ("1", "true", "yes")

# Data export configuration
EXPORT_FILE_PREFIX = "diffset"
EXPORT_TIMESTAMP_FORMAT = "%Y%m%d_%H%M%S"

# Resource monitoring during sweeps (seconds, 0 disables)
MONITOR_INTERVAL = int(os.getenv("DIFFSET_MONITOR_INTERVAL", "0"))
