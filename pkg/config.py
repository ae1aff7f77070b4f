"""
Configuration management for cantor-forge
Handles numeric tolerances, search budgets, oracle resolution and output settings
"""
import os
import logging
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Logging
    LOG_LEVEL = os.getenv('CANTOR_LOG_LEVEL', 'WARNING')

    # Numeric model
    FLOAT_TOLERANCE = float(os.getenv('CANTOR_FLOAT_TOLERANCE', '1e-12'))
    FIXED_POINT_MAX_ITER = int(os.getenv('CANTOR_FIXED_POINT_MAX_ITER', '10000'))

    # Constructions
    EXPLICIT_DEPTH_LIMIT = int(os.getenv('CANTOR_EXPLICIT_DEPTH_LIMIT', '24'))
    CERTIFICATE_DEPTH = int(os.getenv('CANTOR_CERTIFICATE_DEPTH', '10'))
    SAMPLE_POINTS = int(os.getenv('CANTOR_SAMPLE_POINTS', '10000'))

    # Second-generation pipeline
    DEFAULT_DEPTH = int(os.getenv('CANTOR_DEFAULT_DEPTH', '8'))
    MAX_DEPTH = int(os.getenv('CANTOR_MAX_DEPTH', '20'))
    DEFAULT_TOLERANCE = float(os.getenv('CANTOR_DEFAULT_TOLERANCE', '1e-9'))
    MAX_TERMS = int(os.getenv('CANTOR_MAX_TERMS', '40'))
    MAX_ITERATIONS = int(os.getenv('CANTOR_MAX_ITERATIONS', '200'))
    INTERVAL_BUDGET = int(os.getenv('CANTOR_INTERVAL_BUDGET', '500000'))
    COMBINATION_BUDGET = int(os.getenv('CANTOR_COMBINATION_BUDGET', '20000'))

    # Grid oracle
    BETA_DEPTH = int(os.getenv('CANTOR_BETA_DEPTH', '8'))
    GRID_STEP = float(os.getenv('CANTOR_GRID_STEP', '1e-4'))
    ORACLE_TOLERANCE = float(os.getenv('CANTOR_ORACLE_TOLERANCE', '5e-3'))

    # Output
    OUTPUT_DIR = os.getenv('CANTOR_OUTPUT_DIR', 'out')
    SVG_WIDTH = int(os.getenv('CANTOR_SVG_WIDTH', '1000'))


def configure_logging(level=None):
    """Configure root logging once for command-line use"""
    logging.basicConfig(
        level=level or Config.LOG_LEVEL,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
    )
    if level:
        logging.getLogger().setLevel(level)
