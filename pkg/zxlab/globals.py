"""Global values used throughout zxlab."""
STDOUT = "/dev/stdout"

# Largest intermediate tensor (in entries) a contraction may build
DEFAULT_SIZE_CAP = 2**20
SIZE_CAP_ENV = "ZXLAB_SIZE_CAP"

BRUTE_FORCE_MAX_VARS = 24
AUX_QUBIT_BOUND = 8

FLOAT_TOLERANCE = 1e-9
SAMPLING_TOLERANCE = 1e-6

DEFAULT_TRIALS = 25
DEFAULT_SAMPLES = 100
VV_ROUNDS_PER_VAR = 8

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2
EXIT_SIZE_CAP = 3
