"""Reading subgroup/partition files and writing exact values as JSON."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .partition import CosetPartition, Part
from .schreier import SchreierGraph, build_schreier
from .words import Alphabet, parse_word, parse_words


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from e


def _alphabet(obj: dict) -> Alphabet:
    if "alphabet" not in obj:
        raise ParseError("missing 'alphabet'")
    names = obj["alphabet"]
    if isinstance(names, int):
        return Alphabet.of_rank(names)
    try:
        return Alphabet(tuple(names))
    except ValueError as e:
        raise ParseError(str(e)) from e


def subgroup_from_json(obj: dict) -> tuple[Alphabet, SchreierGraph]:
    alphabet = _alphabet(obj)
    if "generators" not in obj:
        raise ParseError("missing 'generators'")
    return alphabet, build_schreier(parse_words(obj["generators"], alphabet), alphabet)


def partition_from_json(obj: dict) -> CosetPartition:
    alphabet = _alphabet(obj)
    graphs = {}
    for sub in obj.get("subgroups", []):
        name = sub.get("name")
        if not name or name in graphs:
            raise ParseError(f"subgroup needs a unique name, got {name!r}")
        graphs[name] = build_schreier(parse_words(sub["generators"], alphabet), alphabet)
    parts = []
    for entry in obj.get("parts", []):
        name = entry.get("subgroup")
        if name not in graphs:
            raise ParseError(f"part refers to unknown subgroup {name!r}")
        g = graphs[name]
        rep = parse_word(entry.get("rep", ""), alphabet)
        parts.append(Part(g, g.walk(0, rep), name, rep))
    if not parts:
        raise ParseError("partition has no parts")
    return CosetPartition(parts)


def exact(x):
    """Recursively turn Fractions into {"num", "den"} pairs."""
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, dict):
        return {k: exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(exact(obj), indent=2, sort_keys=True)
