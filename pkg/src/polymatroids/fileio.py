"""Text formats for set functions and ray lists.

Set-function files are JSON objects::

    {"format": "setfn", "version": 1, "n": 2,
     "elements": ["a", "b"], "values": ["0", "1", "1/2", "3/2"]}

``values[m]`` is the value on the subset whose bit ``i`` selects
``elements[i]``.  Values are written as canonical reduced integers or
``p/q`` strings; readers also accept JSON integers.

Ray files are line oriented: a header ``# rays n=<n> count=<c>`` followed by
one ray per line as ``2**n`` space-separated integers.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .setfn import GroundSet, SetFunction

SETFN_FORMAT = "setfn"
SETFN_VERSION = 1


class FormatError(ValueError):
    """A file does not follow the expected layout."""


def dumps_setfn(f: SetFunction) -> str:
    doc = {
        "format": SETFN_FORMAT,
        "version": SETFN_VERSION,
        "n": f.n,
        "elements": list(f.ground.labels),
        "values": [str(v) for v in f.values],
    }
    return json.dumps(doc) + "\n"


def loads_setfn(text: str) -> SetFunction:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"set-function file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("set-function file must hold a JSON object")
    for key in ("n", "elements", "values"):
        if key not in doc:
            raise FormatError(f"set-function file is missing field {key!r}")
    n, elements, values = doc["n"], doc["elements"], doc["values"]
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"field 'n' must be a positive integer, got {n!r}")
    if not isinstance(elements, list) or len(elements) != n:
        raise FormatError(f"field 'elements' must list {n} names")
    if not isinstance(values, list) or len(values) != 1 << n:
        raise FormatError(f"field 'values' must hold {1 << n} entries")
    parsed = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise FormatError(f"value #{i} must be an integer or a 'p/q' string, got {v!r}")
        try:
            parsed.append(Fraction(v))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"value #{i} is not a rational: {v!r}") from None
    try:
        ground = GroundSet(tuple(elements))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return SetFunction(ground, parsed)


def read_setfn(path) -> SetFunction:
    return loads_setfn(Path(path).read_text())


def write_setfn(f: SetFunction, path) -> None:
    Path(path).write_text(dumps_setfn(f))


def dumps_rays(n: int, rays: Sequence[Sequence[int]]) -> str:
    lines = [f"# rays n={n} count={len(rays)}"]
    lines.extend(" ".join(str(int(x)) for x in r) for r in rays)
    return "\n".join(lines) + "\n"


def loads_rays(text: str) -> tuple[int, list[tuple[int, ...]]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise FormatError("ray file must start with a '# rays n=<n> count=<c>' header")
    fields = dict(tok.split("=", 1) for tok in lines[0][1:].split() if "=" in tok)
    try:
        n, count = int(fields["n"]), int(fields["count"])
    except (KeyError, ValueError):
        raise FormatError(f"malformed ray header: {lines[0]!r}") from None
    rays = []
    for lineno, ln in enumerate(lines[1:], start=2):
        try:
            r = tuple(int(t) for t in ln.split())
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer entry") from None
        if len(r) != 1 << n:
            raise FormatError(f"line {lineno}: expected {1 << n} integers, got {len(r)}")
        rays.append(r)
    if len(rays) != count:
        raise FormatError(f"header announces {count} rays but file holds {len(rays)}")
    return n, rays


def read_rays(path) -> tuple[int, list[tuple[int, ...]]]:
    return loads_rays(Path(path).read_text())


def write_rays(n: int, rays, path) -> None:
    Path(path).write_text(dumps_rays(n, rays))
