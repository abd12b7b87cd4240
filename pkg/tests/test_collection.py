import asyncio
import time

import pytest

from peakonspec.collection import Collection


@pytest.mark.asyncio
class TestCollection:

    async def arange(self, n=3):
        for i in range(1, n + 1):
            yield i

    async def test_create_from_list(self):
        coll = Collection([1, 2, 3])
        assert await coll.to_list() == [1, 2, 3]

    async def test_create_from_async_iter(self):
        coll = Collection(self.arange())
        assert await coll.to_list() == [1, 2, 3]

    async def test_aiter(self):
        coll = Collection(self.arange())
        res = []
        async for i in coll:
            res.append(i)
        assert res == [1, 2, 3]

    async def test_aiter_from_list(self):
        coll = Collection([1, 2, 3])
        res = []
        async for i in coll:
            res.append(i)
        assert res == [1, 2, 3]

    async def test_map_keeps_order(self):
        def slow(i):
            time.sleep(0.01 * (4 - i))
            return i * i

        coll = Collection.map(slow, [1, 2, 3], task_limit=3)
        assert await coll.to_list() == [1, 4, 9]

    async def test_map_is_lazy(self):
        calls = []
        coll = Collection.map(calls.append, range(3))
        await asyncio.sleep(0)
        assert calls == []
        await coll.to_list()
        assert calls == [0, 1, 2]

    async def test_map_single_task(self):
        coll = Collection.map(str, range(3))
        assert await coll.to_list() == ['0', '1', '2']

    async def test_map_raises(self):
        def fail(i):
            raise ValueError(i)

        coll = Collection.map(fail, [1])
        with pytest.raises(ValueError):
            await coll.to_list()
