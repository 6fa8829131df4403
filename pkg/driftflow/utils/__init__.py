import json
from functools import wraps
from typing import Any, Callable, Dict, List, TypeVar

import numpy as np
import pandas as pd

from ..common.errors import Nonfinite

# decorated callable
F = TypeVar('F')


def as_vector(x: Any) -> np.ndarray:
    """
    Turn scalars, lists and arrays into a 1-D numpy array.

    Integer input is promoted to float so that updates never truncate.
    """
    arr = np.atleast_1d(np.asarray(x))
    if arr.ndim != 1:
        arr = arr.ravel()
    if not np.issubdtype(arr.dtype, np.inexact):
        arr = arr.astype(float)
    return arr


def is_real(x: Any, tol: float = 0.0) -> bool:
    """``True`` when every imaginary part of ``x`` is at most ``tol``."""
    arr = np.asarray(x)
    if not np.iscomplexobj(arr):
        return True
    return bool(np.all(np.abs(arr.imag) <= tol))


def _all_finite(values: Any) -> bool:
    if isinstance(values, (tuple, list)):
        return all(_all_finite(v) for v in values)
    if isinstance(values, (np.ndarray, float, complex, int, np.number)):
        return bool(np.all(np.isfinite(values)))
    return True


def check_finite(func: F) -> F:
    """
    Raise ``Nonfinite`` when the wrapped function returns NaN or Inf

    Parameters
    ----------
    func : Callable
        function returning an array, a scalar or a tuple of those

    Returns
    -------
    Callable

    """

    @wraps(func)
    def run(*args, **kwargs):
        values = func(*args, **kwargs)
        if not _all_finite(values):
            raise Nonfinite(f'{func.__name__} produced a non-finite value')
        return values

    return run


def rename_dataframe_and_series(
    fields: Dict[str, str], to_be_removed: List[str] = [], keep_all: bool = True
):
    """
    Decorator renaming the columns of a returned DataFrame (index of a Series)

    Parameters
    ----------
    fields : dict
        internal name -> public column name
    to_be_removed : List[str], optional
        public columns to drop, by default []
    keep_all : bool, optional
        keep the columns that are not listed in ``fields``, by default True
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            values = func(*args, **kwargs)
            if isinstance(values, pd.DataFrame):
                attrs = dict(values.attrs)
                present = {k: v for k, v in fields.items() if k in values.columns}
                columns = list(present.values())
                if keep_all:
                    for column in values.columns:
                        if column not in fields and column not in columns:
                            columns.append(column)
                values = values.rename(columns=present)[columns]
                for column in list(values.columns):
                    if column in to_be_removed:
                        del values[column]
                values.attrs.update(attrs)
            elif isinstance(values, pd.Series):
                values = values.rename(fields)
            return values

        return wrapper

    return decorator


def split_complex_columns(func: F) -> F:
    """
    Decorator replacing every complex column ``c`` of a returned DataFrame
    by the pair ``re(c)``, ``im(c)``
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        values = func(*args, **kwargs)
        if not isinstance(values, pd.DataFrame):
            return values
        columns = {}
        for column in values.columns:
            series = values[column]
            if np.iscomplexobj(series.to_numpy()):
                data = series.to_numpy().astype(complex)
                columns[f're({column})'] = data.real
                columns[f'im({column})'] = data.imag
            else:
                columns[column] = series.to_numpy()
        frame = pd.DataFrame(columns, index=values.index)
        frame.attrs.update(values.attrs)
        return frame

    return wrapper


T = TypeVar('T')


def to_type(f: Callable[[str], T], value: Any, default: T = None) -> T:
    """
    Type conversion that never raises

    Parameters
    ----------
    f : Callable[[str], T]
        conversion function
    value : Any
        value to convert
    default : T, optional
        returned when the conversion fails, ``None`` means return
        ``value`` unchanged

    Returns
    -------
    T
        converted value
    """
    try:
        value = f(value)
        return value
    except Exception:
        if default is None:
            return value
        return default


def parse_scalar(text: str) -> Any:
    """
    Best-effort conversion of a config value

    ``'3'`` -> 3, ``'0.5'`` -> 0.5, ``'true'`` -> True, ``'[1, 2]'`` -> [1, 2],
    anything else stays a string.
    """
    text = text.strip()
    lowered = text.lower()
    if lowered in ('true', 'yes', 'on'):
        return True
    if lowered in ('false', 'no', 'off'):
        return False
    if lowered in ('none', 'null'):
        return None
    for f in (int, float):
        value = to_type(f, text, default=_MISSING)
        if value is not _MISSING:
            return value
    if text[:1] in '[{':
        return to_type(json.loads, text)
    return text.strip('\'"')


_MISSING = object()


def to_jsonable(value: Any) -> Any:
    """Recursively convert numpy / complex values into JSON friendly ones."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if hasattr(value, 'value') and hasattr(value, 'name'):
        # enums
        return value.value
    return value


__all__ = [
    'as_vector',
    'is_real',
    'check_finite',
    'rename_dataframe_and_series',
    'split_complex_columns',
    'to_type',
    'parse_scalar',
    'to_jsonable',
]
