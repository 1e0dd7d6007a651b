"""Finite-word algorithms and the lazy infinite-word abstraction.

Letters are dense integer indices ``0..k-1``; every infinite word carries a
tuple of glyphs used only for rendering.  Finite words are plain sequences
(tuples of ints internally, but the border routines accept any sequence,
including ``str``).

An :class:`InfiniteWord` owns an append-only ``bytearray`` buffer.  Reading an
already materialized prefix is safe from any thread; extending the buffer is
single-writer, so callers sharing a word across threads must synchronize
extension themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import GenerationError, PrefalError

Word = tuple[int, ...]


def failure_table(w: Sequence) -> list[int]:
    """Border table: ``table[i]`` is the longest proper border of ``w[:i+1]``."""
    table = [0] * len(w)
    k = 0
    for i in range(1, len(w)):
        while k and w[i] != w[k]:
            k = table[k - 1]
        if w[i] == w[k]:
            k += 1
        table[i] = k
    return table


def shortest_border(w: Sequence) -> Optional[Sequence]:
    """Shortest non-empty proper border of ``w``, or ``None`` if unbordered.

    The borders of ``w`` are exactly the iterates of the failure function
    from the last position, so the shortest one is the last non-zero iterate.
    """
    if len(w) == 0:
        raise PrefalError("empty word has no border status")
    table = failure_table(w)
    k = table[-1]
    if k == 0:
        return None
    while table[k - 1]:
        k = table[k - 1]
    return w[:k]


def is_unbordered(w: Sequence) -> bool:
    if len(w) == 0:
        raise PrefalError("empty word has no border status")
    return failure_table(w)[-1] == 0


def word_isomorphic(x: Sequence, y: Sequence) -> Optional[dict]:
    """Letter bijection ``m`` with ``m[x[i]] == y[i]`` for all i, if one exists."""
    if len(x) != len(y):
        return None
    forward: dict = {}
    backward: dict = {}
    for a, b in zip(x, y):
        if forward.setdefault(a, b) != b or backward.setdefault(b, a) != a:
            return None
    return forward


def find_square(w: Sequence) -> Optional[tuple[int, int]]:
    """First ``(position, period)`` such that ``w`` has a square ``uu`` there."""
    n = len(w)
    for i in range(n):
        for p in range(1, (n - i) // 2 + 1):
            if w[i:i + p] == w[i + p:i + 2 * p]:
                return i, p
    return None


def render(word: Iterable[int], glyphs: Sequence[str]) -> str:
    return "".join(glyphs[a] for a in word)


def default_glyphs(k: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(k))


class InfiniteWord:
    """A deterministic, lazily materialized one-sided infinite word.

    Subclasses implement :meth:`_extend`, which must append at least one
    symbol to ``self._buf`` per call (or raise :class:`GenerationError`).
    """

    def __init__(self, alphabet_size: int, glyphs: Optional[Sequence[str]] = None):
        if not 1 <= alphabet_size <= 256:
            raise PrefalError(f"alphabet size {alphabet_size} out of range")
        self.alphabet_size = alphabet_size
        self.glyphs = tuple(glyphs) if glyphs is not None else default_glyphs(alphabet_size)
        if len(self.glyphs) != alphabet_size:
            raise PrefalError("glyph table does not match alphabet size")
        self._buf = bytearray()

    def _extend(self, n: int) -> None:
        raise NotImplementedError

    def _materialize(self, n: int) -> None:
        while len(self._buf) < n:
            before = len(self._buf)
            self._extend(n)
            if len(self._buf) == before:
                raise GenerationError(f"{self.describe()} stopped producing symbols at {before}")

    def raw(self, n: int) -> bytes:
        """First ``n`` symbols as ``bytes`` (fast path for matching)."""
        if n < 0:
            raise PrefalError("negative prefix length")
        self._materialize(n)
        return bytes(self._buf[:n])

    def prefix(self, n: int) -> Word:
        return tuple(self.raw(n))

    def text(self, n: int) -> str:
        return render(self.raw(n), self.glyphs)

    def __getitem__(self, i: int) -> int:
        self._materialize(i + 1)
        return self._buf[i]

    def describe(self) -> str:
        return type(self).__name__

    def __repr__(self) -> str:
        return f"<{self.describe()}>"


class Periodic(InfiniteWord):
    def __init__(self, period: Sequence[int], alphabet_size: Optional[int] = None,
                 glyphs: Optional[Sequence[str]] = None):
        if not period:
            raise PrefalError("periodic word needs a non-empty period")
        self.period = tuple(period)
        super().__init__(alphabet_size or max(self.period) + 1, glyphs)

    def _extend(self, n: int) -> None:
        reps = -(-(n - len(self._buf)) // len(self.period))
        self._buf.extend(bytes(self.period) * max(reps, 1))

    def describe(self) -> str:
        return f"periodic({render(self.period, self.glyphs)})"


class Concat(InfiniteWord):
    """A finite word followed by an infinite word (same letter indices)."""

    def __init__(self, head: Sequence[int], tail: InfiniteWord,
                 glyphs: Optional[Sequence[str]] = None):
        self.head = tuple(head)
        self.tail = tail
        size = max([tail.alphabet_size, *(a + 1 for a in self.head)])
        if glyphs is None:
            glyphs = tail.glyphs + default_glyphs(size)[tail.alphabet_size:]
        super().__init__(size, glyphs)
        self._buf.extend(bytes(self.head))

    def _extend(self, n: int) -> None:
        need = n - len(self.head)
        self._buf[len(self.head):] = self.tail.raw(max(need, 2 * (len(self._buf) - len(self.head)), 16))

    def describe(self) -> str:
        return f"concat({render(self.head, self.glyphs)};{self.tail.describe()})"


class Shift(InfiniteWord):
    """The suffix of ``word`` starting at position ``offset``."""

    def __init__(self, offset: int, word: InfiniteWord):
        self.offset = offset
        self.word = word
        super().__init__(word.alphabet_size, word.glyphs)

    def _extend(self, n: int) -> None:
        self._buf[:] = self.word.raw(self.offset + max(n, 2 * len(self._buf), 16))[self.offset:]

    def describe(self) -> str:
        return f"shift({self.offset};{self.word.describe()})"


class Relabel(InfiniteWord):
    """Letter-by-letter image of ``word`` under an injective letter map."""

    def __init__(self, word: InfiniteWord, mapping: Sequence[int],
                 glyphs: Optional[Sequence[str]] = None, alphabet_size: Optional[int] = None):
        self.word = word
        self.mapping = tuple(mapping)
        if len(set(self.mapping)) != len(self.mapping):
            raise PrefalError("relabeling must be injective")
        size = alphabet_size or max(self.mapping) + 1
        super().__init__(size, glyphs)
        self._table = bytes(self.mapping) + bytes(256 - len(self.mapping))

    def _extend(self, n: int) -> None:
        src = self.word.raw(max(n, 2 * len(self._buf), 16))
        self._buf[:] = src.translate(self._table)

    def describe(self) -> str:
        return f"relabel({self.word.describe()})"


class SequenceWord(InfiniteWord):
    """Word backed by a Python iterator factory (used for ad hoc test words)."""

    def __init__(self, factory: Callable[[], Iterator[int]], alphabet_size: int,
                 glyphs: Optional[Sequence[str]] = None, name: str = "sequence"):
        super().__init__(alphabet_size, glyphs)
        self._it = factory()
        self.name = name

    def _extend(self, n: int) -> None:
        for _ in range(max(n - len(self._buf), 1)):
            try:
                self._buf.append(next(self._it))
            except StopIteration:
                return

    def describe(self) -> str:
        return self.name


@dataclass(frozen=True)
class FactorStats:
    n: int
    window: int
    count: int
    factors: frozenset = field(repr=False)
    left_special: frozenset = field(repr=False)
    right_special: frozenset = field(repr=False)

    @property
    def bispecial(self) -> frozenset:
        return self.left_special & self.right_special


def _factor_set(w: bytes, n: int) -> set:
    return {w[i:i + n] for i in range(len(w) - n + 1)}


def factor_stats(x: InfiniteWord, n: int, window: int) -> FactorStats:
    """Factors of length ``n`` in ``prefix(window)``.

    Counts are lower bounds on the true factor complexity; they are exact once
    the window holds every length-``n`` factor (for Sturmian and Tribonacci
    words, ``64 * n`` comfortably suffices for ``n <= 12``).
    """
    if window < n:
        raise PrefalError(f"window {window} shorter than factor length {n}")
    w = x.raw(window)
    facts = _factor_set(w, n)
    longer = _factor_set(w, n + 1)
    left: dict = {}
    right: dict = {}
    for f in longer:
        left.setdefault(f[1:], set()).add(f[0])
        right.setdefault(f[:-1], set()).add(f[-1])
    ls = frozenset(tuple(u) for u, s in left.items() if len(s) > 1)
    rs = frozenset(tuple(u) for u, s in right.items() if len(s) > 1)
    return FactorStats(n, window, len(facts), frozenset(tuple(f) for f in facts), ls, rs)


def is_balanced(x: InfiniteWord, bound: int) -> tuple[bool, Optional[tuple[Word, Word]]]:
    """Balance test over all pairs of equal-length factors of ``prefix(bound)``.

    Returns ``(True, None)`` or ``(False, (u, v))`` where ``u`` has the fewest
    and ``v`` the most occurrences of letter 1 among factors of the shortest
    unbalanced length.
    """
    if x.alphabet_size != 2:
        raise PrefalError("balance is defined for binary words only")
    if bound < 2:
        raise PrefalError("bound must be at least 2")
    w = np.frombuffer(x.raw(bound), dtype=np.uint8)
    cs = np.concatenate(([0], np.cumsum(w, dtype=np.int64)))
    for length in range(1, bound + 1):
        counts = cs[length:] - cs[:-length]
        lo, hi = int(counts.argmin()), int(counts.argmax())
        if counts[hi] - counts[lo] > 1:
            return False, (tuple(int(a) for a in w[lo:lo + length]),
                           tuple(int(a) for a in w[hi:hi + length]))
    return True, None


def uniform_recurrence_gap(x: InfiniteWord, u: Sequence[int], bound: int) -> Optional[int]:
    """Largest distance between consecutive occurrence starts of ``u`` in
    ``prefix(bound)``, counting the distance from 0 to the first occurrence.

    ``None`` when ``u`` occurs fewer than twice.
    """
    if not u:
        raise PrefalError("pattern must be non-empty")
    if bound < len(u):
        raise PrefalError("bound shorter than pattern")
    w = x.raw(bound)
    pat = bytes(u)
    starts = []
    i = w.find(pat)
    while i != -1:
        starts.append(i)
        i = w.find(pat, i + 1)
    if len(starts) < 2:
        return None
    return max([starts[0]] + [b - a for a, b in zip(starts, starts[1:])])
