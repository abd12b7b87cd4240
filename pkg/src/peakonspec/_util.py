from fractions import Fraction
from typing import Iterable, Type, Union

__all__ = ('Real', 'SpectralError', 'full_name', 'relative_error',
           'max_relative_error', 'extended_str', 'parse_extended')

Real = Union[float, Fraction]

INF_STRINGS = {'inf': float('inf'), '-inf': float('-inf')}


class SpectralError(Exception):
    """Base error of every spectral computation."""

    pass


def full_name(cls: Type, attr: str = None) -> str:
    """Get full name of a class or its attribute.

    :param cls:
    :param attr:
    """
    s = f'{cls.__module__}.{cls.__qualname__}'
    if attr:
        s += f'.{attr}'
    return s


def relative_error(expected: complex, actual: complex) -> float:
    """Return ``|expected - actual| / max(1, |expected|)``.

    Infinite values compare equal only to themselves.

    :param expected:
    :param actual:
    """
    if expected == actual:
        return 0.0
    diff = abs(complex(expected) - complex(actual))
    if diff != diff or diff == float('inf'):
        return float('inf')
    return float(diff / max(1.0, abs(complex(expected))))


def max_relative_error(
    expected: Iterable[complex],
    actual: Iterable[complex],
) -> float:
    """Largest `relative_error` over paired values, inf on length mismatch.

    :param expected:
    :param actual:
    """
    expected = list(expected)
    actual = list(actual)
    if len(expected) != len(actual):
        return float('inf')
    return max(
        (relative_error(e, a) for e, a in zip(expected, actual)),
        default=0.0,
    )


def extended_str(value: float) -> Union[str, float]:
    """Serialize an extended real, infinities become ``'inf'``/``'-inf'``."""
    if value == float('inf'):
        return 'inf'
    if value == float('-inf'):
        return '-inf'
    return float(value)


def parse_extended(value: Union[str, float, int]) -> float:
    """Inverse of `extended_str`; numeric strings are accepted too.

    :raises ValueError: on anything else.
    """
    if isinstance(value, str):
        if value in INF_STRINGS:
            return INF_STRINGS[value]
        return float(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f'Not an extended real: {value!r}')
    return float(value)
