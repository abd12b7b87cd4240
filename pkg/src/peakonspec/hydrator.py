"""Serialization and deserialization of records to and from JSON."""

from abc import ABC, abstractmethod
from fractions import Fraction
from functools import lru_cache
from typing import AbstractSet, Any, ClassVar, Dict, Generic, List, \
    Sequence, Tuple, Type, TypeVar, Union, cast

from ._util import extended_str, full_name, parse_extended
from .record import RecordError

__all__ = (
    'Hydrator',
    'HydrationTypeError',
    'BaseDescriptor',
    'Descriptor',
    'ExtendedReal',
    'RealList',
    'annotation_descriptor',
    'BaseAnnotationDescriptor',
    'Serializer',
    'ScalarSerializer',
    'RationalSerializer',
    'ExtendedRealSerializer',
    'RealListSerializer',
)

Types = Union[Type, Tuple[Type, ...]]
T = TypeVar('T')
U = TypeVar('U')
D = TypeVar('D', bound='BaseDescriptor')


class HydrationTypeError(RecordError):
    """Field can't be (de-)serialized because of wrong type of its value."""

    def __init__(
        self,
        expected_types: Types,
        actual_value: Any,
        cls: Type = None,
        attr: str = None,
        msg: str = 'Wrong type',
    ) -> None:
        if not isinstance(expected_types, Sequence):
            expected_types = (expected_types,)
        self.expected_types = expected_types
        self.actual_value = actual_value
        self.cls = cls
        self.attr = attr
        self.msg = msg

    def __str__(self) -> str:
        attr_desc = ''
        if self.cls and self.attr:
            attr_desc = f' for {full_name(self.cls, self.attr)}'
        expected_types = ' or '.join(t.__name__ for t in self.expected_types)
        return f'{self.msg}{attr_desc}: expected {expected_types}, ' \
            f'got {self.actual_value!r:.50s}'


class BaseDescriptor(Generic[T]):
    """Base descriptor used to declare a field on a record class.

    :param name: Attribute name, the variable name this descriptor is
        assigned to by default.
    """

    def __init__(self, *, name: str = None) -> None:
        self.name = name

    def __set_name__(self, owner: Type[U], name: str) -> None:
        if self.name is None:
            self.name = name


class Descriptor(BaseDescriptor[T]):
    """Simple eager field.

    Example::

        class Model:
            foo = Descriptor()

        m = Model()
        m.foo = 3
        print(m.foo)
    """

    def __get__(self, instance: U, owner: Type[U]) -> T:
        if instance is None:
            return self  # type: ignore
        return cast(T, instance.__dict__.get(self.name, None))

    def __set__(self, instance: U, value: T) -> None:
        self.set(instance, value)

    def set(self, instance: U, value: T) -> None:
        """Store the field value.

        :param instance: Record instance to set the field on.
        :param value:
        """
        instance.__dict__[self.name] = value


class ExtendedReal(Descriptor[float]):
    """A float that may be infinite, stored as ``'inf'``/``'-inf'``."""

    pass


class RealList(Descriptor[List[float]]):
    """A list of floats.

    :param extended: Allow infinities (as strings).
    """

    def __init__(self, *, extended: bool = False, **kwargs: Any) -> None:
        super().__init__(**kwargs)
        self.extended = extended


class Serializer(ABC, Generic[D]):
    """Abstract serializer.

    :ivar supported_descriptors: Set of descriptor types processable
        by this serializer.
    """

    supported_descriptors: AbstractSet[Type[D]] = set()

    @abstractmethod
    def load(self, descr: D, value: Any, record: Any) -> None:
        """Deserialize value and set field on a record.

        :param descr: Descriptor instance.
        :param value: Serialized value.
        :param record: Record instance.
        :raises HydrationTypeError:
        """
        pass

    @abstractmethod
    def dump(self, descr: D, record: Any) -> Any:
        """Serialize field value.

        :param descr: Descriptor instance.
        :param record: Record instance to retrieve field value from.
        :raises HydrationTypeError:
        """
        pass


class BaseAnnotationDescriptor(Descriptor[T]):

    typ: ClassVar[Type[T]]
    """Annotation type."""


@lru_cache(maxsize=None)
def annotation_descriptor(typ: Type[T]) -> Type[BaseAnnotationDescriptor[T]]:
    r"""Return a `Descriptor` class for given annotation type.

    Returned class can be used to register a serializer for a type annotated
    field (by including it in `Serializer`.\ ``supported_descriptors``).

    :param typ:
    """
    return type(
        'AnnotationDescriptor',
        (BaseAnnotationDescriptor,),
        {'typ': typ, '__module__': __name__},
    )


Scalar = Union[None, float, bool]


class ScalarSerializer(Serializer[BaseAnnotationDescriptor]):
    """Serializer for annotated scalar fields.

    Supports `float` and `bool` annotations. Integers are accepted for
    `float` fields and loaded as floats.
    """

    _supported_types: Dict[Type[Scalar], Tuple[Type[Scalar], ...]] = {
        float: (float, int),
        bool: (bool,),
    }

    supported_descriptors = {
        annotation_descriptor(typ)
        for typ in _supported_types
    }

    def load(
        self,
        descr: BaseAnnotationDescriptor[Scalar],
        value: Any,
        record: Any,
    ) -> None:
        types = self._supported_types[descr.typ]
        if value is not None and type(value) not in types:
            raise HydrationTypeError(types, value)
        if value is not None and descr.typ is float:
            value = float(value)
        descr.set(record, value)

    def dump(
        self,
        descr: BaseAnnotationDescriptor[Scalar],
        record: Any,
    ) -> Any:
        value = descr.__get__(record, None)
        types = self._supported_types[descr.typ]
        if value is not None and type(value) not in types:
            raise HydrationTypeError(types, value)
        return value


class RationalSerializer(Serializer[BaseAnnotationDescriptor]):
    """Serializer for `~fractions.Fraction` fields, written as ``'p/q'``."""

    supported_descriptors = {annotation_descriptor(Fraction)}

    def load(
        self,
        descr: BaseAnnotationDescriptor[Fraction],
        value: Any,
        record: Any,
    ) -> None:
        if value is not None:
            if isinstance(value, bool) or not isinstance(value, (str, int)):
                raise HydrationTypeError((str, int), value)
            try:
                value = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise HydrationTypeError(Fraction, value, msg='Bad format')
        descr.set(record, value)

    def dump(
        self,
        descr: BaseAnnotationDescriptor[Fraction],
        record: Any,
    ) -> Any:
        value = descr.__get__(record, None)
        if value is None:
            return None
        if not isinstance(value, (Fraction, int)):
            raise HydrationTypeError(Fraction, value)
        return str(value)


def _load_real(value: Any, extended: bool) -> float:
    if isinstance(value, bool):
        raise HydrationTypeError((float, int), value)
    if isinstance(value, (int, float)):
        return float(value)
    if extended and isinstance(value, str):
        try:
            return parse_extended(value)
        except ValueError:
            raise HydrationTypeError(float, value, msg='Bad format')
    types = (float, int, str) if extended else (float, int)
    raise HydrationTypeError(types, value)


def _dump_real(value: Any, extended: bool) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise HydrationTypeError(float, value)
    if extended:
        return extended_str(value)
    if value != value or value in (float('inf'), float('-inf')):
        raise HydrationTypeError(float, value, msg='Not finite')
    return float(value)


class ExtendedRealSerializer(Serializer[ExtendedReal]):
    """Serializer for `ExtendedReal` fields."""

    supported_descriptors = {ExtendedReal}

    def load(self, descr: ExtendedReal, value: Any, record: Any) -> None:
        if value is not None:
            value = _load_real(value, extended=True)
        descr.set(record, value)

    def dump(self, descr: ExtendedReal, record: Any) -> Any:
        value = descr.__get__(record, None)
        return None if value is None else _dump_real(value, extended=True)


class RealListSerializer(Serializer[RealList]):
    """Serializer for `RealList` fields."""

    supported_descriptors = {RealList}

    def load(self, descr: RealList, value: Any, record: Any) -> None:
        if value is not None:
            if not isinstance(value, list):
                raise HydrationTypeError(list, value)
            value = [_load_real(v, descr.extended) for v in value]
        descr.set(record, value)

    def dump(self, descr: RealList, record: Any) -> Any:
        value = descr.__get__(record, None)
        if value is None:
            return None
        return [_dump_real(v, descr.extended) for v in value]


class Hydrator:
    """Load and dump records from and to JSON dicts."""

    def __init__(self) -> None:
        self._serializers: Dict[Type, Serializer] = {}

    def add_serializer(self, serializer: Serializer) -> None:
        """Register a field serializer."""
        for typ in serializer.supported_descriptors:
            self._serializers[typ] = serializer

    def hydrate(
        self,
        record: Any,
        data: Dict[str, Any],
        force_clear: bool = False,
    ) -> None:
        """Deserialize data and set fields on record.

        :param record: Record instance to set fields on.
        :param data: A JSON dict with serialized fields.
        :param force_clear: If `True`, reset fields missing from data as well.
        """
        cls = type(record)
        fields = self._get_fields(cls)
        for k, descr in fields.items():
            try:
                if k in data or force_clear:
                    serializer = self._serializers[type(descr)]
                    serializer.load(descr, data.get(k), record)
            except HydrationTypeError as e:
                e.cls = type(record)
                e.attr = k
                raise

    def dehydrate(self, record: Any) -> Dict[str, Any]:
        """Serialize a record.

        :param record: Record instance to serialize.
        """
        data: Dict[str, Any] = {}
        cls = type(record)
        fields = self._get_fields(cls)
        for k, descr in fields.items():
            try:
                serializer = self._serializers[type(descr)]
                data[k] = serializer.dump(descr, record)
            except HydrationTypeError as e:
                e.cls = type(record)
                e.attr = k
                raise
        return data

    @lru_cache(maxsize=64)
    def _get_fields(self, cls: Type) -> Dict[str, BaseDescriptor]:
        """Get field definitions from class, annotated fields first."""
        fields: Dict[str, BaseDescriptor] = {}
        descr: BaseDescriptor
        for klass in reversed(cls.__mro__):
            for k, typ in vars(klass).get('__annotations__', {}).items():
                descr = annotation_descriptor(typ)(name=k)
                if k and k[0] != '_':
                    if type(descr) in self._serializers:
                        fields[k] = descr
            for k, descr in vars(klass).items():
                if k and k[0] != '_' and isinstance(descr, BaseDescriptor):
                    if type(descr) in self._serializers:
                        fields[k] = descr
        return fields
