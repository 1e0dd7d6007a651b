"""Morphisms, their fixed points and images, and decoding over code tables.

A :class:`CodeTable` lists codewords in code-letter order; code letter ``i``
(0-based internally, rendered ``i + 1``) stands for ``table.codewords[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import DecodeError, GenerationError, PrefalError, SpecError
from .words import InfiniteWord, Word, default_glyphs, is_unbordered


def code_glyphs(n: int) -> tuple[str, ...]:
    """Glyphs ``1..n`` used for derived (code-letter) alphabets."""
    return tuple(str(i + 1) for i in range(n))


@dataclass(frozen=True)
class Morphism:
    images: tuple[Word, ...]
    codomain_size: int = 0

    def __post_init__(self):
        images = tuple(tuple(img) for img in self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise PrefalError("morphism needs at least one letter")
        if any(len(img) == 0 for img in images):
            raise PrefalError("erasing morphisms are not supported")
        top = max(max(img) for img in images) + 1
        if self.codomain_size == 0:
            object.__setattr__(self, "codomain_size", max(top, len(images)))
        elif top > self.codomain_size:
            raise PrefalError("image letter outside codomain")

    @classmethod
    def from_rules(cls, rules: Mapping[int, Sequence[int]], codomain_size: int = 0) -> "Morphism":
        return cls(tuple(tuple(rules[a]) for a in range(len(rules))), codomain_size)

    @property
    def domain_size(self) -> int:
        return len(self.images)

    def __call__(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for a in w:
            out.extend(self.images[a])
        return tuple(out)

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self ∘ inner``."""
        return Morphism(tuple(self(img) for img in inner.images), self.codomain_size)

    def is_prolongable(self, seed: int) -> bool:
        img = self.images[seed]
        return img[0] == seed and len(img) >= 2

    def render(self, src: Optional[Sequence[str]] = None, dst: Optional[Sequence[str]] = None) -> str:
        src = src or default_glyphs(self.domain_size)
        dst = dst or default_glyphs(self.codomain_size)
        return ",".join(f"{src[a]}->{''.join(dst[b] for b in img)}"
                        for a, img in enumerate(self.images))


class MorphicFixedPoint(InfiniteWord):
    """The fixed point of a prolongable morphism, generated from a work queue."""

    def __init__(self, morphism: Morphism, seed: int, glyphs: Optional[Sequence[str]] = None):
        if morphism.domain_size != morphism.codomain_size:
            raise GenerationError("fixed points need an endomorphism")
        if not morphism.is_prolongable(seed):
            raise GenerationError(f"morphism not prolongable on letter {seed}")
        self.morphism = morphism
        self.seed = seed
        super().__init__(morphism.domain_size, glyphs)
        self._images = [bytes(img) for img in morphism.images]
        self._buf.extend(self._images[seed])
        self._pos = 1

    def _extend(self, n: int) -> None:
        buf, images = self._buf, self._images
        while len(buf) < n:
            buf.extend(images[buf[self._pos]])
            self._pos += 1

    def describe(self) -> str:
        return f"morphic({self.morphism.render(self.glyphs, self.glyphs)};{self.glyphs[self.seed]})"


class MorphismImage(InfiniteWord):
    """Lazy image ``m(x)``."""

    def __init__(self, morphism: Morphism, word: InfiniteWord, glyphs: Optional[Sequence[str]] = None):
        if morphism.domain_size < word.alphabet_size:
            raise PrefalError("morphism domain does not cover the word's alphabet")
        self.morphism = morphism
        self.word = word
        super().__init__(morphism.codomain_size, glyphs)
        self._images = [bytes(img) for img in morphism.images]
        self._pos = 0

    def _extend(self, n: int) -> None:
        buf, images = self._buf, self._images
        while len(buf) < n:
            chunk = max(n - len(buf), 16)
            src = self.word.raw(self._pos + chunk)
            for a in src[self._pos:]:
                buf.extend(images[a])
            self._pos += chunk

    def describe(self) -> str:
        return f"image({self.morphism.render(self.word.glyphs, self.glyphs)};{self.word.describe()})"


def fixed_point(m: Morphism, seed: int, glyphs: Optional[Sequence[str]] = None) -> MorphicFixedPoint:
    return MorphicFixedPoint(m, seed, glyphs)


def apply(m: Morphism, x: InfiniteWord, glyphs: Optional[Sequence[str]] = None) -> MorphismImage:
    return MorphismImage(m, x, glyphs)


@dataclass(frozen=True)
class CodeTable:
    """Ordered codewords; the unique order-preserving bijection onto UP'(x)."""

    codewords: tuple[Word, ...]

    def __post_init__(self):
        cws = tuple(tuple(c) for c in self.codewords)
        object.__setattr__(self, "codewords", cws)
        if len(set(cws)) != len(cws):
            raise PrefalError("codewords must be pairwise distinct")
        if any(not c for c in cws):
            raise PrefalError("codewords must be non-empty")

    def __len__(self) -> int:
        return len(self.codewords)

    def encode(self, codes: Sequence[int]) -> Word:
        out: list[int] = []
        for c in codes:
            out.extend(self.codewords[c])
        return tuple(out)

    def as_morphism(self, codomain_size: int = 0) -> Morphism:
        return Morphism(self.codewords, codomain_size)


def decode(table: CodeTable, w: Sequence[int]) -> Optional[Word]:
    """Unique parse of ``w`` over the table, as code letters; ``None`` if no parse.

    Dynamic programming over cut positions, counting parses (saturating at 2)
    so that an ambiguous table is reported instead of silently resolved.
    """
    w = tuple(w)
    n = len(w)
    ways = [0] * (n + 1)
    back: list[Optional[tuple[int, int]]] = [None] * (n + 1)
    ways[0] = 1
    for p in range(n):
        if not ways[p]:
            continue
        for i, cw in enumerate(table.codewords):
            q = p + len(cw)
            if q <= n and w[p:q] == cw:
                ways[q] = min(2, ways[q] + ways[p])
                back[q] = (p, i)
    if ways[n] == 0:
        return None
    if ways[n] > 1:
        raise DecodeError("code table not uniquely decodable")
    codes = []
    q = n
    while q:
        p, i = back[q]
        codes.append(i)
        q = p
    return tuple(reversed(codes))


def derived_morphism(m: Morphism, table: CodeTable) -> Morphism:
    """The morphism ``i -> decode(m(table[i]))`` conjugating ``m`` through the table."""
    images = []
    for i, cw in enumerate(table.codewords):
        codes = decode(table, m(cw))
        if codes is None:
            raise DecodeError(f"derived morphism does not close (letter {i + 1})")
        images.append(codes)
    return Morphism(tuple(images), len(table))


def gamma_fixed_point(chain: Sequence[Sequence[int] | str]) -> MorphicFixedPoint:
    """Fixed point of ``i -> u_i`` for unbordered ``u_k <_p ... <_p u_1``.

    Words are given over letters ``1..k``, either as digit strings or as
    1-based integer sequences.
    """
    k = len(chain)
    words = []
    for u in chain:
        letters = [int(c) for c in u] if isinstance(u, str) else list(u)
        if not letters or any(not 1 <= a <= k for a in letters):
            raise SpecError(f"chain word {u!r} must be non-empty over 1..{k}")
        words.append(tuple(a - 1 for a in letters))
    if words[0][0] != 0:
        raise SpecError("first chain word must begin with letter 1")
    for u in words:
        if not is_unbordered(u):
            raise SpecError(f"chain word {''.join(str(a + 1) for a in u)} is bordered")
    for longer, shorter in zip(words, words[1:]):
        if not (len(shorter) < len(longer) and longer[:len(shorter)] == shorter):
            raise SpecError("chain words must be proper prefixes of their predecessors")
    return MorphicFixedPoint(Morphism(tuple(words), k), 0, code_glyphs(k))
