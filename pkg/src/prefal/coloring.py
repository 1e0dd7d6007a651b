"""Prefix-predicate colorings and bounded search for monochromatic factorizations.

A coloring is an ordered rule list; the first rule whose predicate holds
gives the color.  :func:`frontier` runs a reachability DP over cut points of
a prefix.  A finite prefix always has the trivial one-piece factorization,
so a color is only declared dead relative to a piece-length window ``W``: no
factorization into pieces of length at most ``W`` reaches past ``n - W``.
That is bounded evidence, never a proof.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import PrefalError, SpecError
from .words import InfiniteWord, Word


@dataclass(frozen=True)
class IsPrefix:
    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return x.raw(len(u)) == bytes(u)

    def render(self, glyphs: Sequence[str]) -> str:
        return "prefix"


@dataclass(frozen=True)
class NotPrefix:
    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return x.raw(len(u)) != bytes(u)

    def render(self, glyphs: Sequence[str]) -> str:
        return "not_prefix"


@dataclass(frozen=True)
class EndsWith:
    letter: int

    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return u[-1] == self.letter

    def render(self, glyphs: Sequence[str]) -> str:
        return f"ends({glyphs[self.letter]})"


@dataclass(frozen=True)
class IsPrefixEndingWith:
    letter: int

    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return u[-1] == self.letter and x.raw(len(u)) == bytes(u)

    def render(self, glyphs: Sequence[str]) -> str:
        return f"prefix_end({glyphs[self.letter]})"


@dataclass(frozen=True)
class LengthLessThan:
    k: int

    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return len(u) < self.k

    def render(self, glyphs: Sequence[str]) -> str:
        return f"len_lt({self.k})"


@dataclass(frozen=True)
class MatchesWord:
    word: Word

    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return tuple(u) == self.word

    def render(self, glyphs: Sequence[str]) -> str:
        return f"word({''.join(glyphs[a] for a in self.word)})"


@dataclass(frozen=True)
class Otherwise:
    def holds(self, u: Word, x: InfiniteWord) -> bool:
        return True

    def render(self, glyphs: Sequence[str]) -> str:
        return "otherwise"


Predicate = Union[IsPrefix, NotPrefix, EndsWith, IsPrefixEndingWith, LengthLessThan,
                  MatchesWord, Otherwise]


@dataclass(frozen=True)
class Coloring:
    rules: tuple[tuple[Predicate, str], ...]

    def __post_init__(self):
        rules = tuple((p, str(c)) for p, c in self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules or not isinstance(rules[-1][0], Otherwise):
            raise SpecError("coloring must end with an otherwise rule")

    @property
    def colors(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(c for _, c in self.rules))

    def render(self, glyphs: Sequence[str]) -> str:
        body = "; ".join(f"{p.render(glyphs)}->{c}" for p, c in self.rules)
        return f"coloring{{ {body} }}"


PREFIX_COLORING = Coloring(((IsPrefix(), "prefix"), (Otherwise(), "nonprefix")))


def color(coloring: Coloring, u: Sequence[int], x: InfiniteWord) -> str:
    u = tuple(u)
    if not u:
        raise PrefalError("colorings are defined on non-empty words")
    for pred, c in coloring.rules:
        if pred.holds(u, x):
            return c
    raise AssertionError("unreachable: last rule is otherwise")


_RULE = re.compile(r"^(prefix|not_prefix|otherwise|prefix_end|ends|len_lt|word)(?:\((.*)\))?$")


def parse_coloring(text: str, glyphs: Sequence[str]) -> Coloring:
    """Parse ``coloring{ pred->color; ... }`` with letters given as glyphs."""
    m = re.fullmatch(r"\s*coloring\s*\{(.*)\}\s*", text, re.S)
    if not m:
        raise SpecError("coloring must look like coloring{ pred->color; ... }")
    index = {g: i for i, g in enumerate(glyphs)}

    def letter(arg: str) -> int:
        if arg not in index:
            raise SpecError(f"unknown letter {arg!r} in coloring")
        return index[arg]

    rules = []
    for part in filter(None, (p.strip() for p in m.group(1).split(";"))):
        if "->" not in part:
            raise SpecError(f"coloring rule {part!r} lacks '->'")
        lhs, rhs = (s.strip() for s in part.split("->", 1))
        r = _RULE.match(lhs)
        if not r or not rhs:
            raise SpecError(f"bad coloring rule {part!r}")
        name, arg = r.group(1), (r.group(2) or "").strip()
        needs_arg = name in ("prefix_end", "ends", "len_lt", "word")
        if needs_arg != bool(arg):
            raise SpecError(f"bad argument in coloring rule {part!r}")
        if name == "prefix":
            pred = IsPrefix()
        elif name == "not_prefix":
            pred = NotPrefix()
        elif name == "otherwise":
            pred = Otherwise()
        elif name == "prefix_end":
            pred = IsPrefixEndingWith(letter(arg))
        elif name == "ends":
            pred = EndsWith(letter(arg))
        elif name == "len_lt":
            if not arg.isdigit():
                raise SpecError(f"len_lt needs an integer, got {arg!r}")
            pred = LengthLessThan(int(arg))
        else:
            pred = MatchesWord(tuple(letter(g) for g in arg))
        rules.append((pred, rhs))
    return Coloring(tuple(rules))


def z_array(w: bytes) -> np.ndarray:
    """``z[i]`` = length of the longest common prefix of ``w`` and ``w[i:]``."""
    n = len(w)
    z = np.zeros(n + 1, dtype=np.int64)
    if n:
        z[0] = n
    left = right = 0
    for i in range(1, n):
        k = 0
        if i < right:
            k = min(right - i, int(z[i - left]))
        while i + k < n and w[k] == w[i + k]:
            k += 1
        z[i] = k
        if i + k > right:
            left, right = i, i + k
    return z


def _piece_colors(coloring: Coloring, w: bytes, z: np.ndarray, p: int) -> np.ndarray:
    """Color index of every piece ``w[q:p]`` for ``q < p``."""
    q = np.arange(p)
    length = p - q
    is_prefix = z[:p] >= length
    last = w[p - 1]
    out = np.full(p, -1, dtype=np.int64)
    index = {c: i for i, c in enumerate(coloring.colors)}
    for pred, c in coloring.rules:
        if isinstance(pred, IsPrefix):
            mask = is_prefix
        elif isinstance(pred, NotPrefix):
            mask = ~is_prefix
        elif isinstance(pred, EndsWith):
            mask = np.full(p, last == pred.letter)
        elif isinstance(pred, IsPrefixEndingWith):
            mask = is_prefix & (last == pred.letter)
        elif isinstance(pred, LengthLessThan):
            mask = length < pred.k
        elif isinstance(pred, MatchesWord):
            mask = np.zeros(p, dtype=bool)
            k = len(pred.word)
            if k <= p and w[p - k:p] == bytes(pred.word):
                mask[p - k] = True
        else:
            mask = np.ones(p, dtype=bool)
        out = np.where((out < 0) & mask, index[c], out)
    return out


@dataclass
class ColorFrontier:
    color: str
    reachable: list[int]
    reachable_windowed: list[int]
    dead_at: Optional[int]

    @property
    def alive(self) -> bool:
        return self.dead_at is None

    def to_json(self, full: bool) -> dict:
        out = {"status": "FrontierAlive" if self.alive else "FrontierDead",
               "dead_at": self.dead_at,
               "last_reachable": self.reachable[-1],
               "last_reachable_windowed": self.reachable_windowed[-1]}
        if full:
            out["reachable"] = self.reachable
            out["reachable_windowed"] = self.reachable_windowed
        else:
            out["reachable_count"] = len(self.reachable)
        return out


@dataclass
class FrontierReport:
    n: int
    window: int
    colors: dict[str, ColorFrontier]
    note: Optional[str] = None
    evidence: str = field(default="bounded")

    @property
    def all_dead(self) -> bool:
        return all(not f.alive for f in self.colors.values())

    def to_json(self) -> dict:
        full = self.n <= 256
        return {"n": self.n, "window": self.window, "evidence": self.evidence,
                "note": self.note,
                "colors": {c: f.to_json(full) for c, f in self.colors.items()}}


def frontier(x: InfiniteWord, coloring: Coloring, n: int,
             window: Optional[int] = None) -> FrontierReport:
    """Cut points of ``prefix(n)`` reachable by monochromatic factorizations.

    ``reachable`` uses pieces of any length; ``reachable_windowed`` only
    pieces of length ≤ ``window`` (default ``n // 4``), and a color is dead
    at ``m`` when ``m``, its last windowed cut point, satisfies ``m < n - window``.
    """
    if n < 1:
        raise PrefalError("frontier length must be at least 1")
    window = max(n // 4, 1) if window is None else window
    if not 1 <= window <= n:
        raise PrefalError("frontier window must lie in 1..n")
    w = x.raw(n)
    z = z_array(w)
    colors = coloring.colors
    reach = np.zeros((len(colors), n + 1), dtype=bool)
    capped = np.zeros((len(colors), n + 1), dtype=bool)
    reach[:, 0] = capped[:, 0] = True
    for p in range(1, n + 1):
        piece = _piece_colors(coloring, w, z, p)
        near = np.arange(p) >= p - window
        for i in range(len(colors)):
            hit = piece == i
            reach[i, p] = bool(np.any(reach[i, :p] & hit))
            capped[i, p] = bool(np.any(capped[i, :p] & hit & near))
    out = {}
    for i, c in enumerate(colors):
        full = [int(p) for p in np.flatnonzero(reach[i])]
        win = [int(p) for p in np.flatnonzero(capped[i])]
        dead = win[-1] if win[-1] < n - window else None
        out[c] = ColorFrontier(c, full, win, dead)
    return FrontierReport(n, window, out)


def refute_via_P1(x: InfiniteWord, verdict, n: int = 128,
                  window: Optional[int] = None) -> tuple[Coloring, FrontierReport]:
    """Prefix/non-prefix coloring for a word certified outside P1.

    Any monochromatic factorization for it would be a prefixal factorization
    (the first piece is always a prefix), so a word outside P1 has none.
    """
    from .prefactor import Status

    if getattr(verdict, "status", None) is not Status.NOT_IN_P_N or verdict.n != 1:
        raise PrefalError("verdict does not certify that the word is outside P1")
    report = frontier(x, PREFIX_COLORING, n, window)
    report.note = f"word certified outside P1 ({getattr(verdict, 'reason', None) or 'sturmian-aS'})"
    return PREFIX_COLORING, report
