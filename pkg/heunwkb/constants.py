from fractions import Fraction

# Formal parameters of the Heun potentials
PARAMETERS = ('nu', 'hbar', 'th0', 'th1', 'tht', 'thi')

# Auxiliary symbols: G is the outstanding accessory unknown, lam = nu/hbar + 1/2
AUXILIARY = ('lam', 'G')

# Gauge-theory side of the conformal blocks
BLOCK_PARAMETERS = ('eps1', 'eps2', 'a', 'm', 'm1', 'm3', 'e1', 'e2', 'e3', 'w2', 'w4',
                    'dsig', 'd0', 'd1', 'dt', 'dinf')

# Default truncation orders (hbar^(2k), Lambda^l)
DEFAULT_K = 3
DEFAULT_L = 6

# Initial depth in the local coordinate is BASE + SLOPE * (K + 1) + L, doubled on demand
DEPTH_BASE = 4
DEPTH_SLOPE = 2
MAX_DEPTH_RETRIES = 4

# Numeric oracle
DEFAULT_PRECISION = 60  # decimal digits
PRECISION_ENV_VAR = 'HEUNWKB_PRECISION'
DEFAULT_QUADRATURE_POINTS = 4096
BRANCH_JUMP_TOLERANCE = Fraction(1, 4)  # relative to the root's magnitude
NUMERIC_TOLERANCE_DIGITS = 30  # relative, Lambda > 0
CLOSED_FORM_TOLERANCE_DIGITS = 40  # relative, Lambda = 0
CONVERGENCE_SLACK = Fraction(1, 4)  # allowed shortfall of the observed order below levels + 1

# JSON artifacts
SCHEMA_VERSION = 1

# Exit codes of the command line interface
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3
