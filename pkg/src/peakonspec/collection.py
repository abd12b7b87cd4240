"""Asynchronous, lazily evaluated collection of results."""

import asyncio
from typing import AsyncIterable, AsyncIterator, Callable, Iterable, List, \
    Sequence, TypeVar, Union

from aiostream import pipe, stream

__all__ = ('Collection',)

T = TypeVar('T')
U = TypeVar('U')


class Collection(AsyncIterable[T]):
    """Asynchronous, lazy and read-only collection of objects.

    `Collection` is an async iterable (can be iterated over using ``async for``
    loop). Nothing is computed until it is iterated.

    :param collection: Either a sequence or an async iterable which will be
        used as a source of items for this collection.
    """

    def __init__(
        self,
        collection: Union[Sequence[T], AsyncIterable[T]] = (),
    ) -> None:
        self._source = collection

    @classmethod
    def map(
        cls,
        func: Callable[[U], T],
        items: Iterable[U],
        task_limit: int = 1,
    ) -> 'Collection[T]':
        """Apply a blocking *func* to *items* in worker threads.

        Results keep the order of *items* whatever order they finish in.

        :param func:
        :param items:
        :param task_limit: Maximum number of concurrent calls.
        """
        async def call(item: U) -> T:
            loop = asyncio.get_running_loop()
            return await loop.run_in_executor(None, func, item)

        return cls(
            stream.iterate(list(items))
            | pipe.map(call, ordered=True, task_limit=task_limit),
        )

    async def to_list(self) -> List[T]:
        """Convert to list."""
        return await stream.list(stream.iterate(self._source))

    async def __aiter__(self) -> AsyncIterator[T]:
        async with stream.iterate(self._source).stream() as s:
            async for item in s:
                yield item
