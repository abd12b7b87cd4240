"""Records embedded in other records."""

import importlib
from functools import lru_cache
from typing import TYPE_CHECKING, Any, List, Type, TypeVar, Union, cast

from .hydrator import Descriptor, HydrationTypeError, Serializer
from .record import Record

if TYPE_CHECKING:
    from .store import RecordStore  # noqa: F401

__all__ = ('Nested', 'NestedSerializer')

R = TypeVar('R', bound=Record)
S = TypeVar('S', bound=Record)


class Nested(Descriptor[Union[R, List[R]]]):
    """A record, or a list of records, stored inline.

    Example::

        class NodeRecord(Record):
            x: float

        class PairRecord(Record):
            nodes = Nested('NodeRecord', many=True)

    :param target_class: Target class or its name (useful for forward
        references within a module).
    :param many: The field holds a list.
    """

    def __init__(
        self,
        target_class: Union[Type[R], str],
        *, many: bool = False,
        name: str = None,
    ) -> None:
        super().__init__(name=name)
        self._target_class = target_class
        self.many = many

    @lru_cache(maxsize=256)
    def target_class(self, owner: Type[S]) -> Type[R]:
        """Get class of the embedded records."""
        if isinstance(self._target_class, str):
            module = importlib.import_module(owner.__module__)
            cls = cast(Type[R], getattr(module, self._target_class, None))
            if cls is None:
                raise NameError(
                    f"Class '{owner.__module__}.{self._target_class}' "
                    f'is not defined',
                )
            self._target_class = cls
        return self._target_class


class NestedSerializer(Serializer[Nested]):
    """`Nested` serializer.

    :param store: Used to build and dump embedded records.
    """

    supported_descriptors = {Nested}

    def __init__(self, store: 'RecordStore') -> None:
        self._store = store

    def load(self, descr: Nested, value: Any, record: Any) -> None:
        if value is None:
            descr.set(record, [] if descr.many else None)
            return
        target_cls = descr.target_class(type(record))
        if descr.many:
            if not isinstance(value, list):
                raise HydrationTypeError(list, value)
            loaded: Any = [self._store.build(target_cls, e) for e in value]
        else:
            if not isinstance(value, dict):
                raise HydrationTypeError(dict, value)
            loaded = self._store.build(target_cls, value)
        descr.set(record, loaded)

    def dump(self, descr: Nested, record: Any) -> Any:
        value = descr.__get__(record, None)
        if value is None:
            return None
        if descr.many:
            return [self._store.to_dict(e) for e in value]
        return self._store.to_dict(value)
