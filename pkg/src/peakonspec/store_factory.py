"""`.RecordStore` factory."""

from typing import List, Sequence  # noqa: F401

from .hydrator import ExtendedRealSerializer, Hydrator, RationalSerializer, \
    RealListSerializer, ScalarSerializer, Serializer
from .nested import NestedSerializer
from .store import RecordStore

__all__ = ('create_store',)


def create_store(
    custom_serializers: Sequence[Serializer] = (),
    indent: int = 2,
) -> RecordStore:
    """Create new `.RecordStore`.

    :param custom_serializers: Additional serializers to register with
        the `.Hydrator`.
    :param indent: Indentation of whole-file documents.
    """
    hydrator = Hydrator()
    store = RecordStore(hydrator, indent=indent)
    serializers: List[Serializer] = [
        ScalarSerializer(),
        RationalSerializer(),
        ExtendedRealSerializer(),
        RealListSerializer(),
        NestedSerializer(store),
    ]
    serializers.extend(custom_serializers)
    for serializer in serializers:
        hydrator.add_serializer(serializer)
    return store
