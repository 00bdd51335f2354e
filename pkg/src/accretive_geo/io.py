"""Matrix file format.

A matrix file is a JSON object::

    {"n": 2, "data": [[1, 0], [0, 0], [0, 0], [1, 0]], "label": "I2"}

``data`` holds the ``n^2`` entries row-major as ``[re, im]`` pairs.  Any
other keys are metadata and are preserved by :func:`read_matrix_file`.
Floats are written with the shortest representation that round-trips, so
serialize/parse is bit-exact.
"""

import json
import math
import numbers

import numpy as np

from .errors import ParseError

METADATA_ORDER = ("label", "seed")


def _is_number(x):
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def matrix_from_dict(obj, source="<matrix>"):
    """Validate a decoded matrix object; return ``(M, metadata)``."""
    if not isinstance(obj, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "n" not in obj:
        raise ParseError(f"{source}: missing field 'n'")
    if "data" not in obj:
        raise ParseError(f"{source}: missing field 'data'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{source}: field 'n' must be a positive integer, got {n!r}")
    data = obj["data"]
    if not isinstance(data, list):
        raise ParseError(f"{source}: field 'data' must be an array")
    if len(data) != n * n:
        raise ParseError(f"{source}: field 'data' has {len(data)} entries, expected n^2 = {n * n}")
    M = np.empty(n * n, dtype=complex)
    for k, entry in enumerate(data):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(_is_number(v) for v in entry)):
            raise ParseError(f"{source}: data[{k}] must be a [re, im] pair of numbers, got {entry!r}")
        re, im = float(entry[0]), float(entry[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"{source}: data[{k}] is not finite")
        M[k] = complex(re, im)
    meta = {k: v for k, v in obj.items() if k not in ("n", "data")}
    return M.reshape(n, n), meta


def loads_matrix(text, source="<string>"):
    """Parse matrix JSON text; return ``(M, metadata)``."""
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return matrix_from_dict(obj, source)


def _reject_constant(name):
    raise ValueError(f"non-finite constant {name} is not allowed")


def read_matrix_file(path):
    """Read a matrix file; return ``(M, metadata)``.  ``OSError`` propagates."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads_matrix(text, str(path))


def parse_matrix(path):
    """Read the matrix stored at ``path``."""
    return read_matrix_file(path)[0]


def matrix_to_dict(M, **metadata):
    """JSON-ready dict for ``M``; ``metadata`` keys are appended."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParseError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ParseError("matrix has non-finite entries")
    out = {"n": int(M.shape[0]),
           "data": [[float(z.real), float(z.imag)] for z in M.ravel()]}
    for key in METADATA_ORDER:
        if key in metadata:
            out[key] = metadata[key]
    for key, value in metadata.items():
        if key not in out:
            out[key] = value
    return out


def dumps_matrix(M, **metadata):
    return json.dumps(matrix_to_dict(M, **metadata), allow_nan=False)


def serialize_matrix(M, path=None, **metadata):
    """Serialize ``M``; write to ``path`` if given.  Returns the JSON text."""
    text = dumps_matrix(M, **metadata)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
