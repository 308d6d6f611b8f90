from __future__ import annotations

import asyncio
from typing import Any, Awaitable, Callable, TypeVar, cast

from two_photon_cqed.logging import get_logger

logger = get_logger(__name__)

T = TypeVar("T")
Handler = Callable[[Any], Awaitable[None]]


class EventBus:
    """Typed async publish/subscribe; handler failures are logged, never raised."""

    def __init__(self) -> None:
        self._handlers: dict[type, list[Handler]] = {}

    def subscribe(
        self, event_type: type[T], handler: Callable[[T], Awaitable[None]]
    ) -> None:
        self._handlers.setdefault(event_type, []).append(cast(Handler, handler))

    def has_subscribers(self, event_type: type[Any]) -> bool:
        return bool(self._handlers.get(event_type))

    async def publish(self, event: T) -> None:
        handlers = list(self._handlers.get(type(event), []))
        if not handlers:
            return

        results = await asyncio.gather(
            *(handler(event) for handler in handlers), return_exceptions=True
        )
        for result in results:
            if isinstance(result, BaseException):
                logger.warning(
                    "event_handler_failed",
                    event_type=type(event).__name__,
                    error=str(result),
                )
