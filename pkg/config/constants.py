"""
Constants for the discrete homotopy toolkit
"""

# Numeric policy
TOLERANCE = 1e-9
QUANTIZATION = 1e9
FLOAT_DIGITS = 12
FORMAT_VERSION = 1

# Exit codes
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_UNRESOLVED = 2

# Search budgets
BUDGET_FACTOR = 4
DEFAULT_MAX_STATES = 1_000_000
DEFAULT_WORKERS = 4
WORD_LENGTH_CAP = 96
COSET_TABLE_LIMIT = 20_000
CONJUGATOR_SEARCH_LIMIT = 6

# Gromov-Hausdorff
EXACT_GH_MAX_POINTS = 8

# Spectrum
COVERING_SPECTRUM_FACTOR = 1.5
DEFAULT_ETA_FACTOR = 2.0
DEFAULT_EPS_MIN_FACTOR = 3.0

# Diameter estimate: number of net segments spread over the total length
DIAMETER_PROBE_SEGMENTS = 512

# Pipeline status values
STATUS_PENDING = "pending"
STATUS_IN_PROGRESS = "in_progress"
STATUS_COMPLETED = "completed"
STATUS_ERROR = "error"

# Log prefixes
EMOJI_COMPLETE = "✅"
EMOJI_INCOMPLETE = "❌"
EMOJI_PROCESSING = "🔄"
EMOJI_SUCCESS = "🎉"
EMOJI_WARNING = "⚠️"
