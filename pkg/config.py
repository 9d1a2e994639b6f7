import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

LOG_LEVEL = os.getenv("CLIQUELAB_LOG_LEVEL", "INFO").upper()
OUTPUT_DIR = os.getenv("CLIQUELAB_OUTPUT_DIR", "report-output")

# Unset leaves the report store disabled
DATABASE_URL = os.getenv("CLIQUELAB_DATABASE_URL") or None

MAX_CLIQUES = int(os.getenv("CLIQUELAB_MAX_CLIQUES", "200000"))
MAX_NODES = int(os.getenv("CLIQUELAB_MAX_NODES", "100000000"))
WORKERS = int(os.getenv("CLIQUELAB_WORKERS", "4"))
SEED = int(os.getenv("CLIQUELAB_SEED", "0"))


def env_defaults() -> dict:
    """Lowest-precedence values for an ExperimentConfig."""
    return {
        "seed": SEED,
        "guard_nodes": MAX_NODES,
        "guard_cliques": MAX_CLIQUES,
        "workers": WORKERS,
    }
