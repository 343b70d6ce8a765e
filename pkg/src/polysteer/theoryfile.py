"""Self-describing text format for spaces, bipartite states, and ensembles.

A theory file is a UTF-8 JSON document:

    {
      "format": "theoryfile/1",
      "spaces": {
        "<name>": {
          "ambient_dim": <int>,
          "rays": [["p/q" | "p" | <int>, ...], ...],
          "facets": [[...], ...],        # optional, checked when present
          "unit": [...]
        }, ...
      },
      "states": {
        "<name>": {"space_a": "<name>", "space_b": "<name>",
                   "matrix": [[...], ...]}, ...
      },
      "ensembles": {
        "<name>": {"space": "<name>", "parts": [[...], ...]}, ...
      }
    }

Rationals are written as "p/q" or integer strings (bare JSON integers are
accepted too). Serialization is canonical: two-space indent, sorted keys,
trailing newline, every rational rendered "p/q" or "p". Parsing failures
raise TheoryFileError with the offending line when it can be located.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .composite import BipartiteState
from .cone import cone_from_rays
from .ratlin import as_vector
from .space import StateSpace
from .steering import Ensemble

FORMAT = "theoryfile/1"


class TheoryFileError(ValueError):
    """A parse or validation failure, anchored to a line where possible."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TheoryFileError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise TheoryFileError(f"not a rational: {value!r} ({exc})") from None
    raise TheoryFileError(f"not a rational: {value!r}")


def rational_str(value) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _vector(values, context: str) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise TheoryFileError(f"{context}: expected an array of rationals")
    return tuple(parse_rational(v) for v in values)


def _matrix(values, context: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(values, list) or not values:
        raise TheoryFileError(f"{context}: expected a nonempty array of rows")
    return tuple(_vector(row, context) for row in values)


@dataclass
class TheoryFile:
    """Named spaces, states, and ensembles, parsed and validated."""

    spaces: dict[str, StateSpace] = field(default_factory=dict)
    states: dict[str, BipartiteState] = field(default_factory=dict)
    ensembles: dict[str, Ensemble] = field(default_factory=dict)

    def space(self, name: str) -> StateSpace:
        if name not in self.spaces:
            raise TheoryFileError(f"unknown space {name!r}")
        return self.spaces[name]

    def state(self, name: str) -> BipartiteState:
        if name not in self.states:
            raise TheoryFileError(f"unknown state {name!r}")
        return self.states[name]

    def ensemble(self, name: str) -> Ensemble:
        if name not in self.ensembles:
            raise TheoryFileError(f"unknown ensemble {name!r}")
        return self.ensembles[name]


def _line_of(text: str, token: str) -> int | None:
    pos = text.find(f'"{token}"')
    if pos < 0:
        return None
    return text.count("\n", 0, pos) + 1


def _anchored(text: str, token: str, message: str) -> TheoryFileError:
    line = _line_of(text, token)
    prefix = f"line {line}: " if line is not None else ""
    return TheoryFileError(f"{prefix}{message}")


def _space_from_entry(name: str, entry, text: str) -> StateSpace:
    if not isinstance(entry, dict):
        raise _anchored(text, name, f"space {name!r}: expected an object")
    unknown = set(entry) - {"ambient_dim", "rays", "facets", "unit"}
    if unknown:
        raise _anchored(
            text, name, f"space {name!r}: unknown keys {sorted(unknown)}"
        )
    try:
        dim = entry["ambient_dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
            raise TheoryFileError("ambient_dim must be a positive integer")
        rays = _matrix(entry["rays"], "rays")
        unit = _vector(entry["unit"], "unit")
        cone = cone_from_rays(rays, dim)
        if "facets" in entry:
            given = sorted(_matrix(entry["facets"], "facets"))
            actual = sorted(as_vector(g) for g in cone.facets)
            if given != actual:
                raise TheoryFileError(
                    "facets do not match the facets computed from the rays"
                )
        return StateSpace(cone, unit)
    except KeyError as exc:
        raise _anchored(text, name, f"space {name!r}: missing key {exc}") from None
    except TheoryFileError as exc:
        raise _anchored(text, name, f"space {name!r}: {exc}") from None
    except ValueError as exc:
        raise _anchored(text, name, f"space {name!r}: {exc}") from None


def _state_from_entry(
    name: str, entry, spaces: dict[str, StateSpace], text: str
) -> BipartiteState:
    if not isinstance(entry, dict):
        raise _anchored(text, name, f"state {name!r}: expected an object")
    unknown = set(entry) - {"space_a", "space_b", "matrix"}
    if unknown:
        raise _anchored(
            text, name, f"state {name!r}: unknown keys {sorted(unknown)}"
        )
    try:
        for key in ("space_a", "space_b"):
            if entry[key] not in spaces:
                raise TheoryFileError(f"unknown space {entry[key]!r}")
        matrix = _matrix(entry["matrix"], "matrix")
        return BipartiteState(
            spaces[entry["space_a"]], spaces[entry["space_b"]], matrix
        )
    except KeyError as exc:
        raise _anchored(text, name, f"state {name!r}: missing key {exc}") from None
    except TheoryFileError as exc:
        raise _anchored(text, name, f"state {name!r}: {exc}") from None
    except ValueError as exc:
        raise _anchored(text, name, f"state {name!r}: {exc}") from None


def _ensemble_from_entry(
    name: str, entry, spaces: dict[str, StateSpace], text: str
) -> Ensemble:
    if not isinstance(entry, dict):
        raise _anchored(text, name, f"ensemble {name!r}: expected an object")
    unknown = set(entry) - {"space", "parts"}
    if unknown:
        raise _anchored(
            text, name, f"ensemble {name!r}: unknown keys {sorted(unknown)}"
        )
    try:
        if entry["space"] not in spaces:
            raise TheoryFileError(f"unknown space {entry['space']!r}")
        parts = _matrix(entry["parts"], "parts")
        return Ensemble(spaces[entry["space"]], parts)
    except KeyError as exc:
        raise _anchored(
            text, name, f"ensemble {name!r}: missing key {exc}"
        ) from None
    except TheoryFileError as exc:
        raise _anchored(text, name, f"ensemble {name!r}: {exc}") from None
    except ValueError as exc:
        raise _anchored(text, name, f"ensemble {name!r}: {exc}") from None


def loads(text: str) -> TheoryFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TheoryFileError(f"line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise TheoryFileError("the top level must be an object")
    if doc.get("format") != FORMAT:
        raise TheoryFileError(
            f"unsupported format {doc.get('format')!r}; expected {FORMAT!r}"
        )
    unknown = set(doc) - {"format", "spaces", "states", "ensembles"}
    if unknown:
        raise TheoryFileError(f"unknown top-level keys {sorted(unknown)}")
    tf = TheoryFile()
    for name, entry in (doc.get("spaces") or {}).items():
        tf.spaces[name] = _space_from_entry(name, entry, text)
    for name, entry in (doc.get("states") or {}).items():
        tf.states[name] = _state_from_entry(name, entry, tf.spaces, text)
    for name, entry in (doc.get("ensembles") or {}).items():
        tf.ensembles[name] = _ensemble_from_entry(name, entry, tf.spaces, text)
    return tf


def space_to_entry(space: StateSpace) -> dict:
    return {
        "ambient_dim": space.cone.ambient_dim,
        "rays": [[rational_str(x) for x in r] for r in space.cone.rays],
        "facets": [[rational_str(x) for x in g] for g in space.cone.facets],
        "unit": [rational_str(x) for x in space.unit],
    }


def to_document(tf: TheoryFile) -> dict:
    doc: dict = {"format": FORMAT}
    if tf.spaces:
        doc["spaces"] = {
            name: space_to_entry(space) for name, space in tf.spaces.items()
        }
    if tf.states:
        doc["states"] = {}
        for name, st in tf.states.items():
            doc["states"][name] = {
                "space_a": _space_name(tf, st.space_a),
                "space_b": _space_name(tf, st.space_b),
                "matrix": [[rational_str(x) for x in row] for row in st.matrix],
            }
    if tf.ensembles:
        doc["ensembles"] = {
            name: {
                "space": _space_name(tf, e.space),
                "parts": [[rational_str(x) for x in p] for p in e.parts],
            }
            for name, e in tf.ensembles.items()
        }
    return doc


def _space_name(tf: TheoryFile, space: StateSpace) -> str:
    for name, candidate in tf.spaces.items():
        if candidate == space:
            return name
    raise TheoryFileError("state references a space that is not in the file")


def dumps(tf: TheoryFile) -> str:
    return json.dumps(to_document(tf), indent=2, sort_keys=True) + "\n"


def load(path) -> TheoryFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def dump(tf: TheoryFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(tf))
