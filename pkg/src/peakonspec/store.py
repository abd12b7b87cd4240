"""Reading records from JSON files and writing them as JSON text."""

import json
import logging
from typing import Any, Dict, Iterable, Type, TypeVar, Union

from .hydrator import Hydrator
from .record import Record, RecordError

__all__ = ('RecordStore',)

logger = logging.getLogger(__name__)

R = TypeVar('R', bound=Record)


class RecordStore:
    """Turns JSON documents into records and back.

    Output is deterministic: keys keep the field order of the record class
    and floats use their shortest round-trip representation.

    :param hydrator:
    :param indent: Indentation of whole-file documents.
    """

    def __init__(self, hydrator: Hydrator, indent: int = 2) -> None:
        self._hydrator = hydrator
        self.indent = indent

    def new(self, record_class: Type[R]) -> R:
        """Create an instance with every field reset.

        :param record_class:
        """
        record = record_class()
        self._hydrator.hydrate(record, {}, force_clear=True)
        return record

    def build(self, record_class: Type[R], data: Dict[str, Any]) -> R:
        """Return a record hydrated with *data*.

        :param record_class:
        :param data:
        :raises RecordError: on a non-dict or a missing required key.
        """
        if not isinstance(data, dict):
            raise RecordError(f'Expected a dict, got {type(data)!r}')
        missing = [k for k in record_class.required_fields() if k not in data]
        if missing:
            raise RecordError(
                f'{record_class.__name__} is missing {", ".join(missing)}',
            )
        record = self.new(record_class)
        self._hydrator.hydrate(record, data)
        return record

    def to_dict(self, record: Record) -> Dict[str, Any]:
        return self._hydrator.dehydrate(record)

    def loads(self, record_class: Type[R], text: str) -> R:
        try:
            data = json.loads(text)
        except ValueError as e:
            raise RecordError(f'Malformed JSON: {e}') from e
        return self.build(record_class, data)

    def load(self, record_class: Type[R], path: str) -> R:
        """Read a record from a JSON file.

        :param record_class:
        :param path:
        :raises RecordError:
        """
        logger.debug('Loading %s from %s', record_class.__name__, path)
        try:
            with open(path, encoding='utf8') as f:
                text = f.read()
        except OSError as e:
            raise RecordError(f'Cannot read {path}: {e.strerror}') from e
        return self.loads(record_class, text)

    def dumps(self, record: Record, indent: Union[int, None] = -1) -> str:
        if indent == -1:
            indent = self.indent
        return json.dumps(self.to_dict(record), indent=indent,
                          allow_nan=False)

    def dump_lines(self, records: Iterable[Record]) -> Iterable[str]:
        """One compact JSON document per record."""
        for record in records:
            yield self.dumps(record, indent=None)

