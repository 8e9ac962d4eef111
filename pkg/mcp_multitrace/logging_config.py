"""Queue-based logging for the CLI and the MCP server

Records from the numerical library (which only calls logging.getLogger) are
handed to a background listener, so path tracking never blocks on stderr.
Nothing is written to stdout: it carries JSON reports and the MCP stdio stream.
"""

import logging
import logging.handlers
import os
import sys
from pathlib import Path
from queue import Queue

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(name)s: %(message)s"
LOG_FILE_ENV = "MULTITRACE_LOG_FILE"


class AsyncLoggingManager:
    """Owns the queue, its handler and the listener thread"""

    def __init__(self) -> None:
        self.log_queue: Queue[logging.LogRecord] = Queue(-1)
        self.queue_handler: logging.handlers.QueueHandler | None = None
        self.listener: logging.handlers.QueueListener | None = None

    def setup(self, log_file: Path | None = None, level: int = logging.INFO) -> None:
        """Route the root logger through the queue to stderr (and log_file, if given).

        Calling setup again replaces the previous listener.
        """
        if self.listener is not None:
            self.shutdown()

        formatter = logging.Formatter(LOG_FORMAT)
        handlers: list[logging.Handler] = []

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        handlers.append(console_handler)

        if log_file is None and os.environ.get(LOG_FILE_ENV):
            log_file = Path(os.environ[LOG_FILE_ENV])
        if log_file is not None:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            handlers.append(file_handler)

        self.listener = logging.handlers.QueueListener(
            self.log_queue, *handlers, respect_handler_level=True
        )
        self.listener.start()
        self.queue_handler = logging.handlers.QueueHandler(self.log_queue)

        root = logging.getLogger()
        root.setLevel(level)
        root.handlers.clear()
        root.addHandler(self.queue_handler)

        # per-path DEBUG records are for the library only
        if level < logging.INFO:
            logging.getLogger("mcp").setLevel(logging.INFO)
            logging.getLogger("asyncio").setLevel(logging.INFO)

    def shutdown(self) -> None:
        """Flush queued records and stop the listener"""
        if self.listener is not None:
            self.listener.stop()
            self.listener = None
        if self.queue_handler is not None:
            logging.getLogger().removeHandler(self.queue_handler)
            self.queue_handler = None


_manager = AsyncLoggingManager()


def setup_async_logging(log_file: Path | None = None, level: int = logging.INFO) -> None:
    _manager.setup(log_file, level)


def shutdown_async_logging() -> None:
    _manager.shutdown()


def level_for(verbose: bool) -> int:
    return logging.DEBUG if verbose else logging.INFO


def get_logger(name: str) -> logging.Logger:
    """Front-end logger (usually called with __name__)"""
    return logging.getLogger(name)
