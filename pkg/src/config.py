class Config:
    DEBUG = False

    # Fixed point iteration
    TOL_Z = 1e-13
    MAX_ITER_PER_ZERO = 100
    MAX_ZEROS = 10**6
    STEP_POLICY = 'improved'
    RESIDUAL_LIMIT = 1e-8

    # Series and recurrence evaluation
    SERIES_TERM_CAP = 10000
    SERIES_STAGNATION_TERMS = 3
    CANCELLATION_BUDGET = 1e8
    MILLER_THRESHOLD = 1e3

    # DDE construction and selection
    DEGENERACY_TOL = 1e-8
    SCAN_GRID_POINTS = 256
    NU_SWITCH = 100
    VERIFY_DDES = False

    # Brute force oracle
    ORACLE_GRID_POINTS = 20000
    ORACLE_BISECTION_TOL = 1e-14
    ORACLE_MAX_REFINEMENTS = 4

    # Output
    FLOAT_DIGITS = 17
    LOG_LEVEL = 'WARNING'

class DevelopmentConfig(Config):
    DEBUG = True
    VERIFY_DDES = True
    LOG_LEVEL = 'DEBUG'

class TestingConfig(Config):
    DEBUG = True
    LOG_LEVEL = 'DEBUG'

class ProductionConfig(Config):
    DEBUG = False
    LOG_LEVEL = 'WARNING'

config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': ProductionConfig
}
