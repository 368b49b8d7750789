"""
Problem files in, result documents out.

A problem file is a JSON object

    {"dim": 2,
     "body": {"tag": "simplex", "vertices": [[0, 0], [1, 0], [0, 1]]},
     "query": {"project": [1, 1]}}

Body tags: segment (vertices, exactly two), simplex and polytope (vertices),
flat (base, directions), disk_cone (no fields, dim 3) and ball (center,
radius). Query kinds: project, visible {from, candidate}, raycast {from,
toward}, sample {from, count, seed} and separate {x, y}.
"""

import csv
import json
import logging
import re
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from visicone.bodies import AffineFlat, Ball, ConvexBody, DiskCone, Polytope, Segment, Simplex
from visicone.errors import DimensionMismatch, InputError, ProblemFormatError
from visicone.vectorspace import as_points, as_vector

logger = logging.getLogger(__name__)

BODY_TAGS = ('segment', 'simplex', 'polytope', 'flat', 'disk_cone', 'ball')
QUERY_KINDS = ('project', 'visible', 'raycast', 'sample', 'separate')


@dataclass(frozen=True, eq=False)
class ProblemFile:
    dim: int
    body: ConvexBody
    kind: str
    query: Dict[str, Any]


def _require(doc: dict, key: str, field: str):
    if not isinstance(doc, dict):
        raise ProblemFormatError(field or "<document>", "expected a JSON object")
    if key not in doc:
        raise ProblemFormatError(f"{field}.{key}" if field else key, "missing field")
    return doc[key]


def _vector(value, dim: int, field: str) -> np.ndarray:
    try:
        return as_vector(value, dim, name=field)
    except DimensionMismatch:
        raise
    except InputError as e:
        raise ProblemFormatError(field, str(e))


def _points(value, dim: int, field: str) -> np.ndarray:
    if not isinstance(value, list):
        raise ProblemFormatError(field, "expected a list of points")
    try:
        return as_points(value, dim, name=field)
    except DimensionMismatch:
        raise
    except InputError as e:
        raise ProblemFormatError(field, str(e))


def _integer(value, field: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFormatError(field, "expected an integer")
    if value < minimum:
        raise ProblemFormatError(field, f"must be at least {minimum}")
    return value


def parse_body(doc: dict, dim: int) -> ConvexBody:
    tag = _require(doc, 'tag', 'body')
    if tag not in BODY_TAGS:
        raise ProblemFormatError('body.tag', f"unknown body tag {tag!r}")

    if tag == 'disk_cone':
        if dim != 3:
            raise ProblemFormatError('dim', "disk_cone requires dim = 3")
        return DiskCone()
    if tag == 'ball':
        center = _vector(_require(doc, 'center', 'body'), dim, 'body.center')
        radius = _require(doc, 'radius', 'body')
        if isinstance(radius, bool) or not isinstance(radius, (int, float)):
            raise ProblemFormatError('body.radius', "expected a number")
        return Ball(center, float(radius))
    if tag == 'flat':
        base = _vector(_require(doc, 'base', 'body'), dim, 'body.base')
        directions = doc.get('directions', [])
        dirs = _points(directions, dim, 'body.directions') if directions else None
        return AffineFlat(base, dirs)

    vertices = _points(_require(doc, 'vertices', 'body'), dim, 'body.vertices')
    if tag == 'segment':
        if vertices.shape[0] != 2:
            raise ProblemFormatError('body.vertices', "a segment has exactly two vertices")
        return Segment(vertices[0], vertices[1])
    if tag == 'simplex':
        return Simplex(vertices)
    return Polytope(vertices)


def parse_query(doc: dict, dim: int):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ProblemFormatError('query', "expected an object with exactly one query kind")
    kind, params = next(iter(doc.items()))
    if kind not in QUERY_KINDS:
        raise ProblemFormatError('query', f"unknown query kind {kind!r}")
    field = f"query.{kind}"

    if kind == 'project':
        return kind, {'point': _vector(params, dim, field)}
    if kind == 'visible':
        return kind, {
            'from': _vector(_require(params, 'from', field), dim, f"{field}.from"),
            'candidate': _vector(_require(params, 'candidate', field), dim, f"{field}.candidate"),
        }
    if kind == 'raycast':
        return kind, {
            'from': _vector(_require(params, 'from', field), dim, f"{field}.from"),
            'toward': _vector(_require(params, 'toward', field), dim, f"{field}.toward"),
        }
    if kind == 'sample':
        return kind, {
            'from': _vector(_require(params, 'from', field), dim, f"{field}.from"),
            'count': _integer(_require(params, 'count', field), f"{field}.count"),
            'seed': None if params.get('seed') is None else _integer(params['seed'], f"{field}.seed"),
        }
    return kind, {
        'x': _vector(_require(params, 'x', field), dim, f"{field}.x"),
        'y': _vector(_require(params, 'y', field), dim, f"{field}.y"),
    }


def parse_problem(doc) -> ProblemFile:
    dim = _integer(_require(doc, 'dim', ''), 'dim', minimum=1)
    body = parse_body(_require(doc, 'body', ''), dim)
    kind, query = parse_query(_require(doc, 'query', ''), dim)
    logger.debug(f"Parsed {kind} problem on a {body.tag} in dimension {dim}")
    return ProblemFile(dim, body, kind, query)


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            doc = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read problem file {path}: {e}")
    except json.JSONDecodeError as e:
        raise ProblemFormatError('<document>', f"invalid JSON: {e}")
    return parse_problem(doc)


# floats travel through json.dumps as tagged strings and are spliced back in
_FLOAT_TAG = '__visicone_float__'
_FLOAT_TOKEN = re.compile(r'"' + _FLOAT_TAG + r'([^"]*)"')


def _float_repr(value: float) -> str:
    if value != value or value in (float('inf'), float('-inf')):
        raise ValueError(f"non-finite value {value} in result document")
    return format(value, '.17g')


def _preformat(o):
    """Copy of a result document with numpy values unwrapped and floats tagged"""
    if isinstance(o, np.ndarray):
        return [_preformat(item) for item in o.tolist()]
    if isinstance(o, np.generic):
        o = o.item()
    if isinstance(o, float):
        return _FLOAT_TAG + _float_repr(o)
    if isinstance(o, dict):
        return {key: _preformat(value) for key, value in o.items()}
    if isinstance(o, (list, tuple)):
        return [_preformat(item) for item in o]
    return o


def dumps(document) -> str:
    """Indented JSON with every float written to 17 significant digits"""
    text = json.dumps(_preformat(document), indent=2)
    return _FLOAT_TOKEN.sub(lambda match: match.group(1), text)


def write_document(document, stream):
    stream.write(dumps(document))
    stream.write('\n')


def write_samples(points, lambdas, dim: int, stream):
    """CSV rows index,coord_0,...,coord_{d-1},lambda_star"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(['index'] + [f"coord_{i}" for i in range(dim)] + ['lambda_star'])
    for index, (point, lam) in enumerate(zip(points, lambdas)):
        writer.writerow([index] + [_float_repr(float(c)) for c in point] + [_float_repr(float(lam))])
