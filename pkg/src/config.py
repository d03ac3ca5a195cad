"""
Configuration settings for the circle-graph / isotropic-matroid toolkit.
"""

import os
from pathlib import Path
try:
    from dotenv import load_dotenv
except ImportError:
    # Fallback no-op if python-dotenv is not installed
    def load_dotenv(*args, **kwargs):  # type: ignore
        return False

# Load environment variables - check parent directory for .env file
env_path = Path(__file__).parent.parent / '.env'
if env_path.exists():
    load_dotenv(env_path)
else:
    load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


class Config:
    """Enumeration bounds, search budgets and runtime settings."""

    # Search budgets
    ORBIT_BUDGET: int = int(os.getenv("ORBIT_BUDGET", "200000"))
    VERTEX_MINOR_BUDGET: int = int(os.getenv("VERTEX_MINOR_BUDGET", "2000000"))

    # Size bounds for exhaustive procedures
    GRAPH_VERTEX_BOUND: int = int(os.getenv("GRAPH_VERTEX_BOUND", "10"))
    ISOMORPHISM_VERTEX_BOUND: int = int(os.getenv("ISOMORPHISM_VERTEX_BOUND", "12"))
    TRANSVERSAL_SWEEP_BOUND: int = int(os.getenv("TRANSVERSAL_SWEEP_BOUND", "12"))
    SHELTER_VERTEX_BOUND: int = int(os.getenv("SHELTER_VERTEX_BOUND", "10"))
    REALIZE_VERTEX_BOUND: int = int(os.getenv("REALIZE_VERTEX_BOUND", "6"))
    THREE_CIRCUIT_BOUND: int = int(os.getenv("THREE_CIRCUIT_BOUND", "8"))
    CLASSIFY_TRANSVERSAL_BOUND: int = int(os.getenv("CLASSIFY_TRANSVERSAL_BOUND", str(3 ** 10)))
    MM_ISOMORPHISM_ORDER_BOUND: int = int(os.getenv("MM_ISOMORPHISM_ORDER_BOUND", "7"))
    REFUTATION_ORDER_BOUND: int = int(os.getenv("REFUTATION_ORDER_BOUND", "8"))
    LIFT_VERIFY_ORDER_BOUND: int = int(os.getenv("LIFT_VERIFY_ORDER_BOUND", "7"))

    # Arithmetic
    DEFAULT_FIELD: str = os.getenv("DEFAULT_FIELD", "rational")

    # Logging
    LOGS_DIR: str = os.getenv("LOGS_DIR", str(Path(__file__).parent / "logs"))
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    ENABLE_LOGFIRE: bool = _env_bool("ENABLE_LOGFIRE", "false")
    SEND_TO_LOGFIRE: bool = _env_bool("SEND_TO_LOGFIRE", "false")

    @classmethod
    def validate(cls) -> list[str]:
        """Return a list of configuration problems (empty when valid)."""
        problems = []
        for name in ("ORBIT_BUDGET", "VERTEX_MINOR_BUDGET", "GRAPH_VERTEX_BOUND",
                     "ISOMORPHISM_VERTEX_BOUND", "TRANSVERSAL_SWEEP_BOUND",
                     "SHELTER_VERTEX_BOUND", "REALIZE_VERTEX_BOUND",
                     "THREE_CIRCUIT_BOUND", "CLASSIFY_TRANSVERSAL_BOUND",
                     "MM_ISOMORPHISM_ORDER_BOUND", "REFUTATION_ORDER_BOUND",
                     "LIFT_VERIFY_ORDER_BOUND"):
            if getattr(cls, name) <= 0:
                problems.append(f"{name} must be positive")

        from exactalg import FieldSpec  # local import: exactalg imports config
        try:
            FieldSpec.parse(cls.DEFAULT_FIELD)
        except ValueError as e:
            problems.append(f"DEFAULT_FIELD: {e}")
        return problems

    @classmethod
    def get_bounds(cls) -> dict:
        """Bounds echoed into run reports."""
        return {
            "orbit_budget": cls.ORBIT_BUDGET,
            "vertex_minor_budget": cls.VERTEX_MINOR_BUDGET,
            "graph_vertex_bound": cls.GRAPH_VERTEX_BOUND,
            "isomorphism_vertex_bound": cls.ISOMORPHISM_VERTEX_BOUND,
            "transversal_sweep_bound": cls.TRANSVERSAL_SWEEP_BOUND,
            "shelter_vertex_bound": cls.SHELTER_VERTEX_BOUND,
            "realize_vertex_bound": cls.REALIZE_VERTEX_BOUND,
            "three_circuit_bound": cls.THREE_CIRCUIT_BOUND,
            "classify_transversal_bound": cls.CLASSIFY_TRANSVERSAL_BOUND,
        }


# Global config instance
config = Config()
