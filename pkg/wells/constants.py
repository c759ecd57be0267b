"""
Numeric defaults shared across the wells app, kept in one place so the
special-function routes, the root scan, the quadrature and the oracle agree.
All quantities are dimensionless: lengths in units of d, energies in
units of hbar^2 / (2 m d^2).
"""

# --- Series summation ---
# A series stops once a term falls below SERIES_RTOL * |partial sum| for
# SERIES_STREAK consecutive terms, or after SERIES_MAX_TERMS terms.
SERIES_RTOL = 1e-17
SERIES_STREAK = 3
SERIES_MAX_TERMS = 500

# --- Modified Bessel K of imaginary order ---
# Complex series of I_{+-i nu} on [K_SERIES_MIN_X, K_SERIES_MAX_X]; integral
# representation outside. Orders outside [K_SERIES_MIN_ORDER, K_SERIES_MAX_ORDER]
# always integrate, the I_{+-i nu} cancellation being ill conditioned there.
K_SERIES_MIN_X = 0.1
K_SERIES_MAX_X = 2.0
K_SERIES_MIN_ORDER = 1e-2
K_SERIES_MAX_ORDER = 3.0
K_TRAPEZOID_STEP = 0.05
K_TRAPEZOID_MIN_NODES = 64

# --- Whittaker W ---
W_SERIES_MAX_Z = 4.0
# The 1F1 series cancels like exp(2 sqrt(|a| z)); beyond this product use the integral.
W_SERIES_MAX_AZ = 24.0
INTEGER_ORDER_GAP = 1e-6
LAPLACE_STEP = 0.04

# Integrands are truncated where they have dropped by exp(-TAIL_LOG_DROP)
# relative to their peak.
TAIL_LOG_DROP = 45.0

# --- Spectrum scan ---
KAPPA_MIN = 1e-6
LOG_POINTS_PER_DECADE = 400
LINEAR_SCAN_POINTS = 2000
SCAN_CHUNK = 128
ROOT_RTOL = 1e-12
RESIDUAL_RTOL = 1e-8
DEFAULT_STATES = 4

# --- Wavefunctions ---
GRID_SAMPLES = 4001
EXTENT_DECAY_LENGTHS = 40.0
TAIL_FRACTION_LIMIT = 0.01
TAIL_FRACTION_WARNING = 1e-6

# --- Finite-difference oracle ---
ORACLE_HALF_WIDTH = 60.0
ORACLE_POINTS = 24001
ORACLE_DECAY_LIMIT = 1e-8
CERTIFY_KAPPA_L = 10.0
OVERLAP_FLOOR = 0.999

# --- Output ---
SCHEMA_VERSION = "1"
SIGNIFICANT_DIGITS = 12
