"""
Logging configuration for the toolkit.
Structured JSON logs to rotating files, terse console output on stderr, and
optional Logfire spans around the exhaustive sweeps (transversal
determinants, sheltering checks, multimatroid classification).
"""

import json
import logging
import logging.handlers
import sys
import time
import traceback
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

try:
    import logfire
    LOGFIRE_AVAILABLE = True
except ImportError:
    LOGFIRE_AVAILABLE = False


# Attributes every LogRecord carries; anything else came in through `extra`
_RECORD_FIELDS = frozenset(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}


class StructuredFormatter(logging.Formatter):
    """One JSON object per line; extras that do not serialize are stringified."""

    def __init__(self, include_extra: bool = True):
        super().__init__()
        self.include_extra = include_extra

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'where': f"{record.module}.{record.funcName}:{record.lineno}",
        }
        if record.exc_info and record.exc_info[0] is not None:
            entry['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': traceback.format_exception(*record.exc_info),
            }
        if self.include_extra:
            extra = {k: _jsonable(v) for k, v in vars(record).items() if k not in _RECORD_FIELDS}
            if extra:
                entry['extra'] = extra
        return json.dumps(entry, ensure_ascii=False)


def _jsonable(value: Any) -> Any:
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return str(value)


class SweepLoggerAdapter(logging.LoggerAdapter):
    """Adapter for one exhaustive sweep.

    Every record is tagged with the operation and the number of cases the
    sweep ranges over. The sweep body reports progress with `advance` and
    its outcome with `conclude`; both end up in the completion record and
    on the Logfire span.
    """

    def __init__(self, logger: logging.Logger, operation: str, size: int):
        super().__init__(logger, {'operation': operation, 'size': size})
        self.operation = operation
        self.size = size
        self.checked = 0
        self.verdict: Optional[bool] = None
        self.details: Dict[str, Any] = {}

    def process(self, msg: Any, kwargs: Dict[str, Any]) -> tuple[Any, Dict[str, Any]]:
        kwargs['extra'] = {**self.extra, **kwargs.get('extra', {})}
        return msg, kwargs

    def advance(self, n: int = 1) -> None:
        self.checked += n

    def conclude(self, verdict: bool, **details: Any) -> None:
        self.verdict = verdict
        self.details.update(details)

    def outcome(self) -> Dict[str, Any]:
        return {'checked': self.checked, 'verdict': self.verdict, **self.details}


class LoggingManager:
    """Owns the root handlers and opens sweep contexts."""

    def __init__(self, logs_dir: Optional[str] = None, enable_logfire: bool = False,
                 send_to_logfire: bool = False, console_level: str = "INFO",
                 write_files: bool = True):
        self.logs_dir = Path(logs_dir) if logs_dir else Path(__file__).parent / "logs"
        self.write_files = write_files
        self.enable_logfire = enable_logfire and LOGFIRE_AVAILABLE
        self.send_to_logfire = send_to_logfire
        self.log_file: Optional[Path] = None

        self._install_handlers(console_level)
        if self.enable_logfire:
            self._configure_logfire()

    def _install_handlers(self, console_level: str) -> None:
        root = logging.getLogger()
        root.setLevel(logging.DEBUG)
        root.handlers.clear()

        # stdout is reserved for reports
        console = logging.StreamHandler(sys.stderr)
        console.setLevel(getattr(logging, console_level.upper(), logging.INFO))
        console.setFormatter(logging.Formatter('%(asctime)s %(levelname)-7s %(name)s: %(message)s',
                                               datefmt='%H:%M:%S'))
        root.addHandler(console)

        if self.write_files:
            self.logs_dir.mkdir(parents=True, exist_ok=True)
            self.log_file = self.logs_dir / f"circle_{datetime.now():%Y%m%d_%H%M%S}.log"
            handler = logging.handlers.RotatingFileHandler(
                self.log_file, maxBytes=20 * 1024 * 1024, backupCount=3, encoding='utf-8', delay=True)
            handler.setLevel(logging.DEBUG)
            handler.setFormatter(StructuredFormatter())
            root.addHandler(handler)

    def _configure_logfire(self) -> None:
        try:
            logfire.configure(send_to_logfire=self.send_to_logfire, console=False,
                              service_name="circle-isotropic", inspect_arguments=False)
        except Exception as e:
            logging.getLogger(__name__).warning("Logfire configuration failed: %s", e)
            self.enable_logfire = False

    def get_logger(self, name: str) -> logging.Logger:
        return logging.getLogger(name)

    def sweep_logger(self, operation: str, size: int) -> SweepLoggerAdapter:
        return SweepLoggerAdapter(self.get_logger(f"sweep.{operation}"), operation, size)

    @contextmanager
    def log_sweep(self, operation: str, size: int, **attributes: Any) -> Iterator[SweepLoggerAdapter]:
        """Time a sweep; log its start, and its outcome or failure."""
        sweep = self.sweep_logger(operation, size)
        sweep.info("%s over %d cases", operation, size, extra={'event_type': 'sweep_start', **attributes})
        start = time.perf_counter()
        try:
            if self.enable_logfire:
                with logfire.span(operation, size=size, **attributes) as span:
                    yield sweep
                    for key, value in sweep.outcome().items():
                        span.set_attribute(key, _jsonable(value))
            else:
                yield sweep
        except Exception as e:
            sweep.error("%s failed after %d cases: %s", operation, sweep.checked, e,
                        extra={'event_type': 'sweep_failed', 'checked': sweep.checked})
            raise
        sweep.info("%s done: %s", operation, sweep.verdict,
                   extra={'event_type': 'sweep_complete',
                          'duration_seconds': round(time.perf_counter() - start, 4), **sweep.outcome()})


_logging_manager: Optional[LoggingManager] = None


def initialize_logging(logs_dir: Optional[str] = None, enable_logfire: bool = False,
                       send_to_logfire: bool = False, console_level: str = "INFO",
                       write_files: bool = True) -> LoggingManager:
    """Initialize the global logging manager."""
    global _logging_manager
    _logging_manager = LoggingManager(logs_dir, enable_logfire, send_to_logfire,
                                      console_level, write_files)
    return _logging_manager


def get_logging_manager() -> LoggingManager:
    if _logging_manager is None:
        raise RuntimeError("Logging not initialized. Call initialize_logging() first.")
    return _logging_manager


def get_logger(name: str) -> logging.Logger:
    return get_logging_manager().get_logger(name)


@contextmanager
def log_sweep(operation: str, size: int, **attributes: Any) -> Iterator[SweepLoggerAdapter]:
    """Sweep context on the global manager; a bare adapter when logging was never initialized."""
    if _logging_manager is None:
        yield SweepLoggerAdapter(logging.getLogger(f"sweep.{operation}"), operation, size)
        return
    with _logging_manager.log_sweep(operation, size, **attributes) as sweep:
        yield sweep
