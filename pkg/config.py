import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

TOOL_VERSION = "1.0.0"


def _getenv_int(name: str, default: str):
    """Integer setting, or None when the variable is not an integer (reported by validate_config)."""
    try:
        return int(os.getenv(name, default))
    except ValueError:
        return None


# --- Fixture Configuration ---
FIXTURES_DIR = os.getenv("CERT_FIXTURES", "fixtures")
FIXTURE_FILES = {
    'ring': "kr.fring",
    'figure3': "figure3.tsv",
    'figure2': "figure2.tsv",
    'orbit45': "orbit45.tsv",
    'constants': "constants.tsv",
}

# --- Output Configuration ---
OUTPUT_DIR = os.getenv("CERT_OUTPUT_DIR", "certificates")
REPORT_FORMAT = os.getenv("CERT_REPORT_FORMAT", "both")  # text, markdown or both
REPORT_FORMATS = ("text", "markdown", "both")

# --- Search Configuration ---
JOBS = _getenv_int("CERT_JOBS", "1")
# Orbit vectors used by --smoke: the rank-24 and rank-36 candidates
SMOKE_ORBITS = os.getenv("CERT_SMOKE_ORBITS", "1,0,0,2,3,6,0,2,0;1,6,2,0,3,6,0,0,0")
RANK24_TARGET = os.getenv("CERT_RANK24_TARGET", "display")  # display or derived
RANK24_TARGETS = ("display", "derived")

# --- Certified Sign Configuration ---
INITIAL_PRECISION = _getenv_int("CERT_INITIAL_PRECISION", "64")  # bits, doubled on each refinement

STAGES = ("cyclotomic", "ring", "obstruction", "census", "center", "subcat")


def parse_orbit_list(text: str):
    """'1,0,0,2,3,6,0,2,0;...' -> list of 9-tuples."""
    orbits = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        values = tuple(int(v) for v in chunk.split(','))
        if len(values) != 9:
            raise ValueError(f"orbit vector '{chunk}' must have 9 entries")
        orbits.append(values)
    return orbits


# --- Validation ---
def validate_config():
    """Basic validation of the environment-driven settings."""
    if JOBS is None or JOBS < 1:
        raise ValueError("Configuration Error: CERT_JOBS must be an integer >= 1.")
    if INITIAL_PRECISION is None or INITIAL_PRECISION < 8:
        raise ValueError("Configuration Error: CERT_INITIAL_PRECISION must be an integer >= 8 (bits).")
    if REPORT_FORMAT not in REPORT_FORMATS:
        raise ValueError(f"Configuration Error: CERT_REPORT_FORMAT must be one of {REPORT_FORMATS}, got '{REPORT_FORMAT}'.")
    if RANK24_TARGET not in RANK24_TARGETS:
        raise ValueError(f"Configuration Error: CERT_RANK24_TARGET must be one of {RANK24_TARGETS}, got '{RANK24_TARGET}'.")
    try:
        parse_orbit_list(SMOKE_ORBITS)
    except ValueError as e:
        raise ValueError(f"Configuration Error: CERT_SMOKE_ORBITS is malformed ({e}).")
    print("[INFO] Configuration loaded and validated.")
