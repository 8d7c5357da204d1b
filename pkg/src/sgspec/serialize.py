"""JSON wire formats.

Complex numbers are always serialized as two-element arrays [re, im].
Generator files are either dense, {"dim": n, "matrix": [[[re,im],...],...]}
row-major, or catalog references {"catalog": "<id>", "params": {...}}.
"""

from __future__ import annotations

import json
from typing import Tuple

import numpy as np

from .errors import ConfigError
from .operators import (GeneratorSpec, SemigroupEvaluator, as_complex_matrix,
                        catalog_build)


def complex_to_pair(z: complex):
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ConfigError(f"complex values must be [re, im] pairs, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_json(A) -> dict:
    A = as_complex_matrix(A)
    return {"dim": A.shape[0],
            "matrix": [[complex_to_pair(z) for z in row] for row in A]}


def matrix_from_json(data: dict) -> np.ndarray:
    try:
        dim = int(data["dim"])
        rows = data["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed generator JSON: {exc}")
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ConfigError(f"matrix shape does not match dim = {dim}")
    A = np.array([[pair_to_complex(z) for z in row] for row in rows], dtype=complex)
    return as_complex_matrix(A)


def evaluator_from_json(data: dict) -> Tuple[GeneratorSpec, SemigroupEvaluator]:
    """Build (GeneratorSpec, SemigroupEvaluator) from either file schema."""
    if "catalog" in data:
        try:
            return catalog_build(str(data["catalog"]), data.get("params") or {})
        except ConfigError:
            raise
    if "matrix" in data:
        A = matrix_from_json(data)
        S = SemigroupEvaluator.from_dense(A)
        return S.spec, S
    raise ConfigError("generator JSON needs either a 'matrix' or a 'catalog' key")


def load_generator_file(path: str) -> Tuple[GeneratorSpec, SemigroupEvaluator]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read generator file {path!r}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"generator file {path!r} is not valid JSON: {exc}")
    return evaluator_from_json(data)


def parse_catalog_uri(uri: str) -> Tuple[GeneratorSpec, SemigroupEvaluator]:
    """Parse inline catalog references of the form catalog:id?key=value&...

    Parameter values are parsed as JSON where possible (so complex entries
    can be written as [re,im] pairs), falling back to plain strings.
    """
    body = uri[len("catalog:"):]
    if "?" in body:
        cat_id, _, query = body.partition("?")
        params = {}
        for item in query.split("&"):
            if not item:
                continue
            key, _, raw = item.partition("=")
            if not key or not raw:
                raise ConfigError(f"malformed catalog parameter {item!r}")
            try:
                params[key] = json.loads(raw)
            except json.JSONDecodeError:
                params[key] = raw
    else:
        cat_id, params = body, {}
    return catalog_build(cat_id, params)


def load_generator_source(source: str) -> Tuple[GeneratorSpec, SemigroupEvaluator]:
    """Dispatch on a CLI -i argument: a catalog URI or a JSON file path."""
    if source.startswith("catalog:"):
        return parse_catalog_uri(source)
    return load_generator_file(source)
