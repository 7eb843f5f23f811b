"""General Utilities - written in support of the rest of the code."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import MISSING, Field, fields
import enum
from fractions import Fraction
import inspect
import json
import math
from pathlib import Path
import types
from typing import Any, Callable, ClassVar, Iterable, Iterator, Sequence, TypeVar, Union, get_args, get_origin

import numpy as np

T = TypeVar("T")
R = TypeVar("R")


def chunk_sizes(total: int, chunk_size: int) -> Iterator[int]:
    """
    Split a total count into consecutive chunk sizes.

    The final chunk will be smaller than chunk_size unless total is a multiple
    of chunk_size. The number of chunks depends on total and chunk_size only.

    :param total: The total number of items to split up.
    :param chunk_size: The size that each chunk should be.
    """
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be positive, not {chunk_size}")
    full, rest = divmod(total, chunk_size)
    for _ in range(full):
        yield chunk_size
    if rest:
        yield rest


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """
    Map func over items, optionally on a thread pool, preserving input order.

    The result list is always in the order of items, so merges done by callers
    are independent of the number of workers.

    :param func: The callable to apply.
    :param items: The inputs.
    :param workers: (optional) Number of worker threads. 1 (the default) runs inline.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def ceil_power(base: int, exponent: float) -> int:
    """
    Return the smallest integer n with n >= base**exponent.

    Guards against floating point results like 1000.0000000000001 for
    (10**6)**0.5.
    """
    value = float(base) ** exponent
    nearest = round(value)
    if math.isclose(value, nearest, rel_tol=1e-12, abs_tol=1e-12):
        return int(nearest)
    return math.ceil(value)


def floor_power(base: int, exponent: float) -> int:
    """Return the largest integer n with n <= base**exponent (see ceil_power)."""
    value = float(base) ** exponent
    nearest = round(value)
    if math.isclose(value, nearest, rel_tol=1e-12, abs_tol=1e-12):
        return int(nearest)
    return math.floor(value)


def ceil_sqrt(n: int) -> int:
    """Return the smallest integer s with s*s >= n."""
    if n <= 0:
        return 0
    return math.isqrt(n - 1) + 1


def round_floats(value: Any, digits: int = 15) -> Any:
    """
    Recursively round floats to a number of significant digits for stable output.

    Non-finite floats become the strings "inf", "-inf" and "nan".
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {str(key): round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(item, digits) for item in value]
    return value


def dumps_report(report: dict, digits: int = 15) -> str:
    """Serialize a report to JSON with sorted keys and rounded floats."""
    return json.dumps(round_floats(report, digits), sort_keys=True, indent=2)


class Namespace(dict):
    """A simple wrapper around dict that allows accessing items as attributes."""

    def __getattr__(self, name):
        """Return items via __getitem__ if it's not a pre-existing attribute on self."""
        if name in self:
            return self[name]
        raise AttributeError(f"'{self.__class__.__name__}' object has no attribute {name!r}")

    def __setattr__(self, name, value):
        """Allow setting of attributes to be handled via __setitem__."""
        self[name] = value


def _to_bool(value: Any) -> bool:
    if isinstance(value, str):
        return value.strip().lower() not in ("0", "", "false", "no", "none", "null", "off")
    return bool(value)


class DataclassSerializationMixin:
    """A Mixin to add to_dict/from_dict to dataclasses."""

    #: When initializing from a dictionary, ignore any fields that don't
    #: correspond with fields on the dataclass. If this is set to false, then the
    #: conversion will raise an exception.
    ignore_unknown_fields: ClassVar[bool] = True

    #: A mapping of type to a callable that takes a single value an returns a
    #: value. This allows specific classes/types to be mapped to a function that
    #: converts it into what this dataclass needs it to be.
    import_type_map: ClassVar[dict[type, Callable[[Any], Any]]] = {}

    #: Types that need special handling on import (config files hand us strings).
    default_type_map: ClassVar[dict[type, Callable[[Any], Any]]] = {
        bool: _to_bool,
        Fraction: Fraction,
        Path: lambda value: Path(value).expanduser(),
    }

    @classmethod
    def get_required_fields(cls) -> set[str]:
        """Return a set of the field names that are required to convert a dict into an instance."""
        return {
            field.name
            for field in fields(cls)
            if field.init and field.default is MISSING and field.default_factory is MISSING
        }

    @classmethod
    def from_dict(cls: type[T], data: dict) -> T:
        """
        Intialize an instance from a dictionary.

        :params data: dictionary of data to parse.
        """
        field_types_map = {field.name: field.type for field in fields(cls) if field.init}
        unknown_fields = set(data.keys()) - set(field_types_map.keys())

        if unknown_fields and not cls.ignore_unknown_fields:
            fields_str = ", ".join(map(repr, sorted(unknown_fields)))
            raise ValueError(
                f"Cannot convert dict to {cls.__name__}: Following unknown fields encountered: {fields_str}"
            )

        missing_required_fields = cls.get_required_fields() - set(data.keys())
        if missing_required_fields:
            fields_str = ", ".join(map(repr, sorted(missing_required_fields)))
            raise ValueError(f"Cannot convert dict to {cls.__name__}: Missing required fields: {fields_str}")

        kwargs = {
            key: cls._parse_field_value(value, field_type)
            for key, value in data.items()
            if (field_type := field_types_map.get(key))
        }
        return cls(**kwargs)

    @classmethod
    def _parse_field_value(cls, value, field_type: type[T]) -> T:
        """
        Convert a field value into a field_type.

        :params value: The value to convert.
        :params field_type: The type of the field.
        """
        # Optional[X] / X | None: parse as X unless the value is None.
        if get_origin(field_type) is Union or isinstance(field_type, types.UnionType):
            if value is None:
                return None
            options = [arg for arg in get_args(field_type) if arg is not type(None)]
            field_type = options[0] if len(options) == 1 else field_type

        if isinstance(field_type, types.GenericAlias):
            container_type = get_origin(field_type)
            items_type = get_args(field_type)[0]
            if issubclass(container_type, (Sequence, set, frozenset)):
                generator = (cls._parse_field_value(val, items_type) for val in value)
                return container_type(generator)

        if field_type in cls.import_type_map:
            return cls.import_type_map[field_type](value)

        # Allow for nesting of dataclasses.
        if inspect.isclass(field_type) and issubclass(field_type, DataclassSerializationMixin):
            return value if isinstance(value, field_type) else field_type.from_dict(value)

        if field_type in cls.default_type_map:
            return cls.default_type_map[field_type](value)

        return field_type(value) if inspect.isclass(field_type) else value

    @classmethod
    def _export_field_value(cls, value) -> Any:
        """
        Serialize the field value.

        Based on the type of `value`, convert it into an easy to JSON-ify
        format, e.g. numpy scalars into Python numbers and Fractions into
        strings.

        :params value: The value to serialize
        """
        export_mapping = {
            DataclassSerializationMixin: lambda value: value.to_dict(),
            enum.Enum: lambda value: value.value,
            Fraction: str,
            Path: str,
            np.integer: int,
            np.floating: float,
            np.bool_: bool,
            np.ndarray: lambda value: value.tolist(),
            (list, tuple, set, frozenset): lambda value: [cls._export_field_value(v) for v in value],
            dict: lambda value: {str(k): cls._export_field_value(v) for k, v in value.items()},
        }

        for type_, callable in export_mapping.items():
            if isinstance(value, type_):
                return callable(value)

        return value

    def to_dict(self) -> dict:
        """
        Convert dataclass instance to a dictionary.

        ..note::
            Unlike dataclasses.asdict this converts numpy values and Fractions
            into JSON-friendly values and does not deepcopy anything.
        """
        return {field.name: self._export_field_value(getattr(self, field.name)) for field in fields(self)}

    def to_json(self, **kwargs) -> str:
        """Convert dataclass instance to a JSON string."""
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls: type[T], data: str) -> T:
        """
        Load dataclass instance from a JSON string.

        :param data: The JSON string to parse.
        """
        return cls.from_dict(json.loads(data))
