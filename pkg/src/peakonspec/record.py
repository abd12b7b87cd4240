from typing import Any, ClassVar

from ._util import full_name

__all__ = ('Record', 'RecordError')


class RecordError(Exception):
    """Base error of the file layer."""

    pass


class Record:
    """Base class of everything read from or written to a file.

    Subclasses may define an inner ``_Meta`` class with ``required``, the
    tuple of keys that must be present when loading.
    """

    _Meta: ClassVar[Any]

    @classmethod
    def required_fields(cls) -> tuple:
        return tuple(getattr(getattr(cls, '_Meta', None), 'required', ()))

    def __repr__(self) -> str:
        cls = type(self)
        shown = ', '.join(
            f'{k}={self.__dict__[k]!r}' for k in cls.required_fields()
            if k in self.__dict__
        )
        return f'<{full_name(cls)} {shown}>'
