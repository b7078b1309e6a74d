"""
Configuration module for the mediated persuasion solver
"""
import os
import logging

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

LOG_LEVEL = os.getenv("PERSUASION_LOG_LEVEL", "WARNING").upper()

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.WARNING),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={raw!r}, using {default}")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


class SolverSettings(BaseModel):
    """Tolerances and caps shared by every solver module"""
    model_config = ConfigDict(frozen=True)

    feasibility_tol: float = Field(1e-9, ge=0, description="Absolute LP feasibility and mean-matching tolerance")
    belief_sum_tol: float = Field(1e-12, ge=0, description="Tolerance on belief and weight sums")
    membership_slack: float = Field(1e-9, ge=0, description="Slack added to eps in feasible-set comparisons")
    lp_max_iterations: int = Field(10_000, ge=1, description="Pivot budget per simplex phase")
    lattice_cap: int = Field(200_000, ge=1, description="Maximum number of lattice elements")
    clique_cap: int = Field(10_000, ge=1, description="Maximum number of maximal cliques")
    verifier_cap: int = Field(5_000, ge=1, description="Maximum poset size for backward induction")
    domination_step: float = Field(1e-3, gt=0, description="Sampling step for chord-versus-function checks")
    domination_tol: float = Field(1e-9, ge=0, description="Allowed dip of a chord below the function")


settings = SolverSettings(
    feasibility_tol=_env_float("PERSUASION_FEASIBILITY_TOL", 1e-9),
    membership_slack=_env_float("PERSUASION_MEMBERSHIP_SLACK", 1e-9),
    lp_max_iterations=_env_int("PERSUASION_LP_MAX_ITERATIONS", 10_000),
    lattice_cap=_env_int("PERSUASION_LATTICE_CAP", 200_000),
    clique_cap=_env_int("PERSUASION_CLIQUE_CAP", 10_000),
    verifier_cap=_env_int("PERSUASION_VERIFIER_CAP", 5_000),
    domination_step=_env_float("PERSUASION_DOMINATION_STEP", 1e-3),
    domination_tol=_env_float("PERSUASION_DOMINATION_TOL", 1e-9),
)
