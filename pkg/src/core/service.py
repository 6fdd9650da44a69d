import time
from abc import ABC, abstractmethod
from contextlib import contextmanager
from typing import Iterator

from loguru import logger


class BaseService(ABC):
    @property
    @abstractmethod
    def service_signature(self) -> str:
        """Each service must define its unique signature."""
        ...


class Service(BaseService):
    """Concrete base service with a bound logger and stage timing."""

    def __init__(self):
        self.logger = logger.bind(service=self.service_signature)

    @contextmanager
    def stage(self, name: str, **extra) -> Iterator[None]:
        """Log the start and elapsed wall time of a pipeline stage."""
        started = time.perf_counter()
        self.logger.debug("{} started", name, **extra)
        try:
            yield
        finally:
            elapsed = time.perf_counter() - started
            self.logger.bind(elapsed=round(elapsed, 3), **extra).info(
                "{} finished in {:.3f}s", name, elapsed
            )
