"""Brute-force reference implementations for validating the fast paths.

Nothing here calls into the optimized routines: borders are found by direct
comparison, factorizations by exhaustive recursion, and colorings are
re-evaluated from their rule data with a separate interpreter.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any, Optional, Sequence

from .errors import PrefalError

BORDER_CAP = 14
ENUM_CAP = 24


def oracle_borders(w: Sequence) -> list:
    """All proper borders of ``w``, shortest first, by quadratic scan."""
    if len(w) == 0:
        raise PrefalError("empty word has no border status")
    return [w[:k] for k in range(1, len(w)) if list(w[:k]) == list(w[len(w) - k:])]


def oracle_unbordered_prefixes(w: Sequence) -> list:
    """Every non-empty unbordered prefix of ``w``."""
    return [w[:k] for k in range(1, len(w) + 1) if not oracle_borders(w[:k])]


def oracle_up_factorizations(p: Sequence, up: Sequence[Sequence], cap: int = ENUM_CAP) -> list[tuple]:
    """Every way to write ``p`` as a concatenation of members of ``up``."""
    p = tuple(p)
    if len(p) > cap:
        raise PrefalError("oracle size cap")
    members = sorted({tuple(u) for u in up}, key=len)
    out: list[tuple] = []

    def walk(pos: int, acc: list) -> None:
        if pos == len(p):
            out.append(tuple(acc))
            return
        for u in members:
            if p[pos:pos + len(u)] == u:
                walk(pos + len(u), acc + [u])

    walk(0, [])
    return out


def oracle_extendable_factorizations(w: Sequence, up: Sequence[Sequence], p: int,
                                     horizon: int, cap: int = ENUM_CAP) -> list[tuple]:
    """Factorizations of ``w[:p]`` over ``up`` that continue (within ``w``)
    to some cut point at or beyond ``p + horizon``."""
    w = tuple(w)
    longest = max(len(u) for u in up)
    if p + horizon + longest > len(w):
        raise PrefalError("word too short for the requested horizon")
    found = set()
    for end in range(p + horizon, p + horizon + longest):
        for fact in oracle_up_factorizations(w[:end], up, cap):
            cut, head = 0, []
            for piece in fact:
                if cut == p:
                    break
                head.append(piece)
                cut += len(piece)
            if cut == p:
                found.add(tuple(head))
    return sorted(found)


def _oracle_color(rules: Sequence, u: tuple, parent: tuple) -> str:
    for pred, c in rules:
        kind = type(pred).__name__
        is_pre = parent[:len(u)] == u and len(parent) >= len(u)
        if kind == "IsPrefix":
            ok = is_pre
        elif kind == "NotPrefix":
            ok = not is_pre
        elif kind == "EndsWith":
            ok = u[-1] == pred.letter
        elif kind == "IsPrefixEndingWith":
            ok = is_pre and u[-1] == pred.letter
        elif kind == "LengthLessThan":
            ok = len(u) < pred.k
        elif kind == "MatchesWord":
            ok = u == tuple(pred.word)
        elif kind == "Otherwise":
            ok = True
        else:
            raise PrefalError(f"oracle does not know predicate {kind}")
        if ok:
            return c
    raise PrefalError("coloring is not total")


def oracle_mono_factorizations(p: Sequence[int], coloring: Any, c: str, parent: Sequence[int],
                               max_piece: Optional[int] = None) -> bool:
    """Whether ``p`` splits into non-empty pieces all colored ``c``.

    Prefix predicates are judged against ``parent``, a prefix of the context
    word at least as long as ``p``.
    """
    p, parent = tuple(p), tuple(parent)
    if len(p) > ENUM_CAP:
        raise PrefalError("oracle size cap")
    if len(parent) < len(p):
        raise PrefalError("context prefix shorter than the word")
    limit = max_piece or len(p)

    def walk(pos: int) -> bool:
        if pos == len(p):
            return True
        for end in range(pos + 1, min(len(p), pos + limit) + 1):
            if _oracle_color(coloring.rules, p[pos:end], parent) == c and walk(end):
                return True
        return False

    return walk(0)


@dataclass
class OracleReport:
    operation: str
    input: str
    oracle_output: Any
    fast_output: Any
    agree: bool

    @classmethod
    def compare(cls, operation: str, input: str, oracle_output: Any, fast_output: Any) -> "OracleReport":
        return cls(operation, input, oracle_output, fast_output, oracle_output == fast_output)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=str)
