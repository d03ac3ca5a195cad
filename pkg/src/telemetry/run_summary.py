"""
Counters for one CLI run: how much exact linear algebra and search work was
done. A single `run_summary` event is emitted at the end of the run, to
Logfire when it is installed and to the Python log either way.
"""
from __future__ import annotations

import logging
import threading
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict

try:
    import logfire  # type: ignore
    _LOGFIRE = True
except Exception:
    _LOGFIRE = False

logger = logging.getLogger(__name__)


@dataclass
class _Counters:
    rank_calls: int = 0
    determinants: int = 0
    subtransversals_checked: int = 0
    circuit_partitions: int = 0
    orbit_states: int = 0
    vertex_minor_states: int = 0
    naji_equations: int = 0
    budget_truncations: int = 0
    errors: list[str] = field(default_factory=list)


class RunSummary:
    """Process-wide counters, safe to bump from worker threads."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._counters = _Counters()
        self._started = time.perf_counter()

    def reset(self) -> None:
        with self._lock:
            self._counters = _Counters()
            self._started = time.perf_counter()

    def _bump(self, **deltas: int) -> None:
        with self._lock:
            for name, n in deltas.items():
                setattr(self._counters, name, getattr(self._counters, name) + n)

    def add_error(self, msg: str) -> None:
        with self._lock:
            self._counters.errors.append(msg)

    def observe_ranks(self, n: int = 1) -> None:
        self._bump(rank_calls=n)

    def observe_determinants(self, n: int) -> None:
        self._bump(determinants=n)

    def observe_subtransversals(self, n: int) -> None:
        self._bump(subtransversals_checked=n)

    def observe_partitions(self, n: int) -> None:
        self._bump(circuit_partitions=n)

    def observe_search(self, orbit_states: int = 0, vertex_minor_states: int = 0,
                       truncated: bool = False) -> None:
        self._bump(orbit_states=orbit_states, vertex_minor_states=vertex_minor_states,
                   budget_truncations=int(truncated))

    def observe_naji(self, equations: int) -> None:
        self._bump(naji_equations=equations)

    def snapshot(self) -> Dict[str, Any]:
        with self._lock:
            data = asdict(self._counters)
            data["duration_seconds"] = round(time.perf_counter() - self._started, 2)
        return data

    def emit(self, attributes: Dict[str, Any] | None = None) -> Dict[str, Any]:
        payload = {**self.snapshot(), **(attributes or {})}
        logger.info("run summary", extra={"event_type": "run_summary", **payload})
        if _LOGFIRE:
            try:
                logfire.info("run_summary", **payload)
            except Exception as e:
                logger.debug("logfire run_summary failed: %s", e)
        return payload


run_summary = RunSummary()
