import os
from dotenv import load_dotenv

load_dotenv()

# Environment configuration (use .get() so imports work without a .env file)
ORDER_CAP = int(os.environ.get("ORBITS_ORDER_CAP", "2000"))
ASSOC_FULL_CAP = int(os.environ.get("ORBITS_ASSOC_FULL_CAP", "2000"))
ASSOC_SAMPLES = int(os.environ.get("ORBITS_ASSOC_SAMPLES", "5000"))

# Exhaustive pair sweeps (involutions, homomorphism checks) run up to this many pairs
PAIR_SWEEP_CAP = int(os.environ.get("ORBITS_PAIR_SWEEP_CAP", "250000"))

SEED = int(os.environ.get("ORBITS_SEED", "7"))
DEPTH = int(os.environ.get("ORBITS_DEPTH", "3"))
QUOTIENT_LEVEL = int(os.environ.get("ORBITS_QUOTIENT_LEVEL", "1"))
SAMPLES = int(os.environ.get("ORBITS_SAMPLES", "1000"))
MAX_SHIFT = int(os.environ.get("ORBITS_MAX_SHIFT", "8"))

LOG_LEVEL = os.environ.get("ORBITS_LOG_LEVEL", "INFO")
