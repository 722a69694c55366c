import logging
from extensions.utilities import env
from extensions.utilities.logging import LoggingConfigurationBuilder


# General settings

# Nothing here is served or signed; the key only satisfies Django's configuration checks.
SECRET_KEY = env.as_string("SECRET_KEY", "sequential-povm-local-key")
DEBUG = env.as_bool("DEBUG", False)
ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    # Our apps here
    "linalg",
    "povm",
    "dilation",
    "sequential",
    "usd",
    "core",
]


# Logging configuration

LOG_LEVEL = env.as_int("LOG_LEVEL", logging.WARNING)
# File logging is opt-in
LOG_FOLDER = env.as_path("LOG_FOLDER")

# Use our custom log configuration builder to setup the logger
LOGGING = (
    LoggingConfigurationBuilder()
    # Setup the default formatter
    .add_formatter("default", "[{levelname}] {asctime} {name}: {message}")
    .set_default_formatter("default")
    # Setup the root logger
    .add_console_handler("console_handler")
    .modify_root_logger(handlers=["console_handler"], level=LOG_LEVEL)
    # Add our app-specific loggers
    .add_app_loggers(
        ["linalg", "povm", "dilation", "sequential", "usd", "core"],
        ["console_handler"],
        log_folder=LOG_FOLDER,
        level=LOG_LEVEL,
    )
).build()


# Database

# The simulator keeps no persistent state.
DATABASES: dict[str, dict] = {}


# Rest framework settings

# Only serializers are used; there are no views, so authentication is switched off entirely.
REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [],
    "UNAUTHENTICATED_USER": None,
    "COERCE_DECIMAL_TO_STRING": False,
}


# Numerical tolerances

# Hermiticity / positivity / identity-sum checks (Frobenius norm)
LINALG_TOLERANCE = env.as_float("LINALG_TOLERANCE", 1e-10)
# Eigenvalues at or below this fraction of the largest one are treated as zero (ranks, ranges, pseudoinverses)
LINALG_RANK_TOLERANCE = env.as_float("LINALG_RANK_TOLERANCE", 1e-10)
# Eigenvector phase convention: the first component with a larger modulus is made real and positive
LINALG_PHASE_TOLERANCE = env.as_float("LINALG_PHASE_TOLERANCE", 1e-8)
LINALG_JACOBI_MAX_SWEEPS = env.as_int("LINALG_JACOBI_MAX_SWEEPS", 100)
LINALG_JACOBI_RELATIVE_OFF_NORM = env.as_float("LINALG_JACOBI_RELATIVE_OFF_NORM", 1e-14)
# Branches with a smaller probability carry no post-measurement state
POVM_NULL_TOLERANCE = env.as_float("POVM_NULL_TOLERANCE", 1e-12)


# Sampling and verification

SAMPLING_BLOCK_SIZE = env.as_int("SAMPLING_BLOCK_SIZE", 4096)
SAMPLING_WORKERS = env.as_int("SAMPLING_WORKERS", 1)
VERIFY_TRIALS = env.as_int("VERIFY_TRIALS", 20)
VERIFY_SEED = env.as_int("VERIFY_SEED", 0)


# Miscellaneous Settings

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = False
USE_TZ = True
