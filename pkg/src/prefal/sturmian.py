"""Sturmian words given structurally, and their exact classification.

Every spec (directive sequence, finite prepend, chain of L/R morphisms) is
reduced to a *normal form* ``u · σ^k(S_d)``: a finite word ``u`` followed by
the ``k``-th shift of the standard word ``S_d`` with directive ``d``, where at
most one of ``u`` and ``k`` is non-trivial.  Two facts make this exact:

* ``L_a(S_d) = S_{ad}`` and ``L_a(S_d) = a R_a(S_d)``, so morphisms can be
  pushed through to the directive;
* a word ``u S_d`` with ``u`` non-empty is singular, a shift ``σ^k(S_d)`` is
  not (its intercept differs from every ``-|u|`` multiple of the slope).

Realized streams (literal morphism images of a prepended standard word) are
kept separate and are only used to cross-check the normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .errors import CrossCheckError, DecodeError, NotSturmianError, PrefalError, SpecError
from .morphic import MorphicFixedPoint, Morphism, MorphismImage, code_glyphs
from .prefactor import Status, UPAnalysis, scan_up
from .words import (Concat, InfiniteWord, Relabel, Word, factor_stats, is_balanced,
                    render)

REDUCTION_CAP = 64
GATE_BALANCE = 512
GATE_COMPLEXITY = 12
GATE_WINDOW = 4096

TAGS = ("L0", "L1", "R0", "R1")


def lr_morphism(tag: str) -> Morphism:
    """``L_a``: a↦a, b↦ab and ``R_a``: a↦a, b↦ba over letters {0, 1}."""
    if tag not in TAGS:
        raise SpecError(f"unknown Sturmian morphism {tag!r}")
    a = int(tag[1])
    b = 1 - a
    images = [None, None]
    images[a] = (a,)
    images[b] = (a, b) if tag[0] == "L" else (b, a)
    return Morphism(tuple(images), 2)


def _exchange(w: Sequence[int]) -> Word:
    return tuple(1 - c for c in w)


@dataclass(frozen=True)
class Directive:
    """Eventually periodic directive ``pre · period^ω`` in canonical form.

    Canonical: the period is primitive and the preperiod is as short as
    possible (rolled into the period).
    """

    pre: Word
    period: Word

    def __post_init__(self):
        pre, period = tuple(self.pre), tuple(self.period)
        if not period:
            raise SpecError("directive period must be non-empty")
        if any(c not in (0, 1) for c in pre + period):
            raise SpecError("directive letters must be 0 or 1")
        if len(set(period)) < 2:
            raise NotSturmianError("ultimately periodic word, not Sturmian")
        for p in range(1, len(period) + 1):
            if len(period) % p == 0 and period[:p] * (len(period) // p) == period:
                period = period[:p]
                break
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "Directive":
        m = re.fullmatch(r"\s*([01]*)\(([01]+)\)\*\s*", text)
        if not m:
            raise SpecError(f"bad directive {text!r}; expected e.g. 01(01)*")
        return cls(tuple(int(c) for c in m.group(1)), tuple(int(c) for c in m.group(2)))

    def __getitem__(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def head(self) -> int:
        return self[0]

    def push(self, a: int) -> "Directive":
        return Directive((a,) + self.pre, self.period)

    def tail(self) -> "Directive":
        if self.pre:
            return Directive(self.pre[1:], self.period)
        return Directive((), self.period[1:] + self.period[:1])

    def exchange(self) -> "Directive":
        return Directive(_exchange(self.pre), _exchange(self.period))

    def render(self) -> str:
        return f"{render(self.pre, '01')}({render(self.period, '01')})*"


def _apply_L(a: int, w: bytes) -> bytes:
    b = 1 - a
    return w.replace(bytes([b]), bytes([a, b]))


class StandardSturmian(InfiniteWord):
    """``S_d``, realized as ``L_{d_0} ∘ ... ∘ L_{d_{m-1}}(d_m)`` for growing m.

    ``S_{d_m ...}`` begins with ``d_m``, so each of these words is a prefix of
    the limit.
    """

    def __init__(self, directive: Directive, glyphs: Optional[Sequence[str]] = None):
        self.directive = directive
        super().__init__(2, glyphs)
        self._depth = 0

    def _extend(self, n: int) -> None:
        depth = max(self._depth, 1)
        while True:
            w = bytes([self.directive[depth]])
            for i in range(depth - 1, -1, -1):
                w = _apply_L(self.directive[i], w)
            if len(w) >= n:
                break
            depth += 1
        self._depth = depth
        self._buf[:] = w

    def describe(self) -> str:
        return f"sturm_std({self.directive.render()})"


_STANDARD_CACHE: dict = {}


def standard_word(directive: Union[Directive, str]) -> StandardSturmian:
    if isinstance(directive, str):
        directive = Directive.parse(directive)
    if directive not in _STANDARD_CACHE:
        _STANDARD_CACHE[directive] = StandardSturmian(directive)
    return _STANDARD_CACHE[directive]


def structural_standard(directive: Directive) -> InfiniteWord:
    """``S_d`` as ``L_pre(fixed point of L_period)``, an independent realization
    that the generic prefactor certification rules can work with."""
    period = directive.period
    inner = lr_morphism(f"L{period[-1]}")
    for a in reversed(period[:-1]):
        inner = lr_morphism(f"L{a}").compose(inner)
    word: InfiniteWord = MorphicFixedPoint(inner, period[0])
    if directive.pre:
        outer = lr_morphism(f"L{directive.pre[-1]}")
        for a in reversed(directive.pre[:-1]):
            outer = lr_morphism(f"L{a}").compose(outer)
        word = MorphismImage(outer, word)
    return word


@dataclass(frozen=True)
class SturmianSpec:
    directive: Directive
    prepend: Word = ()
    chain: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prepend", tuple(self.prepend))
        object.__setattr__(self, "chain", tuple(self.chain))
        if any(c not in (0, 1) for c in self.prepend):
            raise SpecError("prepend must be a binary word")
        for tag in self.chain:
            lr_morphism(tag)

    def render(self) -> str:
        return (f"sturm(dir={self.directive.render()};pre={render(self.prepend, '01')};"
                f"chain={' '.join(self.chain)})")


@dataclass(frozen=True)
class NormalForm:
    """``prefix · σ^shift(S_directive)`` with ``prefix`` empty or ``shift`` zero."""

    prefix: Word
    shift: int
    directive: Directive

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.prefix and self.shift:
            raise PrefalError("normal form has both a prefix and a shift")

    @property
    def singular(self) -> bool:
        return bool(self.prefix)

    @property
    def type_letter(self) -> int:
        return self.directive.head()

    def head(self, n: int) -> Word:
        core = standard_word(self.directive).prefix(self.shift + n)[self.shift:]
        return (self.prefix + core)[:n]

    def exchange(self) -> "NormalForm":
        return NormalForm(_exchange(self.prefix), self.shift, self.directive.exchange())

    def to_json(self) -> dict:
        return {"prefix": render(self.prefix, "01"), "shift": self.shift,
                "directive": self.directive.render()}


def _push(tag: str, nf: NormalForm) -> NormalForm:
    a = int(tag[1])
    m = lr_morphism(tag)
    d = nf.directive.push(a)
    if nf.prefix:
        image = m(nf.prefix)
        if tag[0] == "L":
            return NormalForm(image, 0, d)
        return NormalForm(image[:-1], 0, d)
    head = standard_word(nf.directive).prefix(nf.shift)
    if tag[0] == "L":
        return NormalForm((), len(m(head)), d)
    return NormalForm((), len(m(head)) + 1, d)


def normalize(spec: SturmianSpec) -> NormalForm:
    nf = NormalForm(spec.prepend, 0, spec.directive)
    for tag in reversed(spec.chain):
        nf = _push(tag, nf)
    return nf


def nf_in_p1(nf: NormalForm) -> bool:
    """Not of the form ``aS`` with a single letter ``a``."""
    return len(nf.prefix) != 1


def _decode_blocks(w: Sequence[int], a: int, left: bool) -> Word:
    """Inverse of ``L_a`` (``left``) or ``R_a`` on a finite word."""
    b = 1 - a
    out = []
    i = 0
    while i < len(w):
        if left:
            if w[i] != a:
                raise DecodeError("word is not an L-image")
            if i + 1 < len(w) and w[i + 1] == b:
                out.append(b)
                i += 2
            else:
                out.append(a)
                i += 1
        else:
            if w[i] == a:
                out.append(a)
                i += 1
            elif i + 1 < len(w) and w[i + 1] == a:
                out.append(b)
                i += 2
            else:
                raise DecodeError("word is not an R-image")
    return tuple(out)


def _invert(nf: NormalForm) -> tuple[str, NormalForm]:
    """One desubstitution step on a normal form whose word does not begin
    with ``ab`` (``a`` the type letter)."""
    a = nf.type_letter
    d = nf.directive.tail()
    first = nf.head(1)[0]
    core = standard_word(nf.directive)
    if first == a:
        tag = f"L{a}"
        if nf.prefix:
            return tag, NormalForm(_decode_blocks(nf.prefix, a, True), 0, d)
        return tag, NormalForm((), core.prefix(nf.shift).count(a), d)
    tag = f"R{a}"
    if nf.prefix:
        return tag, NormalForm(_decode_blocks(nf.prefix + (a,), a, False), 0, d)
    if nf.shift == 0:
        raise PrefalError("standard word cannot begin with the non-type letter")
    return tag, NormalForm((), core.prefix(nf.shift)[1:].count(a), d)


def _begins_with_ab(nf: NormalForm) -> bool:
    a = nf.type_letter
    return nf.head(2) == (a, 1 - a)


def reduction_path(nf: NormalForm) -> list[tuple[str, NormalForm]]:
    """Desubstitution steps until the word begins with ``ab`` (N = 2)."""
    if not nf_in_p1(nf):
        raise PrefalError("word of the form aS has no derived word")
    path = []
    while not _begins_with_ab(nf):
        if len(path) == REDUCTION_CAP:
            raise PrefalError("reduction did not terminate")
        tag, nf = _invert(nf)
        if not nf_in_p1(nf):
            raise CrossCheckError("desubstitution reached a word of the form aS")
        path.append((tag, nf))
    return path


def delta_nf(nf: NormalForm) -> NormalForm:
    """Normal form of δ(x) over letters {0, 1} (code letters 1, 2)."""
    path = reduction_path(nf)
    base = path[-1][1] if path else nf
    a = base.type_letter
    _, y = _invert(base)
    # the block ab (coding b) occurs first, so b takes code 0
    return y.exchange() if a == 0 else y


def up_structure(nf: NormalForm) -> tuple[list[Word], tuple[Word, Word]]:
    """Exact UP(x) and the pair (U, V) for a word in P1.

    Base ``{a, ab}``; ``UP(L_a(y)) = L_a(UP(y))`` and
    ``UP(R_a(y)) = R_a(UP(y)) ∪ {b}``.
    """
    path = reduction_path(nf)
    base = path[-1][1] if path else nf
    a = base.type_letter
    ups = {(a,), (a, 1 - a)}
    pair = ((a, 1 - a), (a,))
    forms = [nf] + [f for _, f in path]
    for (tag, _), outer in zip(reversed(path), reversed(forms[:-1])):
        m = lr_morphism(tag)
        ups = {m(u) for u in ups}
        if tag[0] == "R":
            ups.add((1 - outer.type_letter,))
        pair = (m(pair[0]), m(pair[1]))
    return sorted(ups, key=len), pair


class SturmianWord(InfiniteWord):
    """The word described by a normal form (optionally remembering its spec)."""

    def __init__(self, nf: NormalForm, glyphs: Optional[Sequence[str]] = None,
                 spec: Optional[SturmianSpec] = None):
        self.nf = nf
        self.spec = spec
        super().__init__(2, glyphs)
        self._buf.extend(bytes(nf.prefix))
        self._core = standard_word(nf.directive)

    def _extend(self, n: int) -> None:
        start = len(self.nf.prefix)
        self._buf[start:] = self._core.raw(self.nf.shift + max(n - start, 2 * len(self._buf), 16))[self.nf.shift:]

    def describe(self) -> str:
        if self.spec is not None:
            return self.spec.render()
        nf = self.nf
        return f"sturm_nf(dir={nf.directive.render()};pre={render(nf.prefix, '01')};shift={nf.shift})"


def realize(spec: SturmianSpec) -> SturmianWord:
    return SturmianWord(normalize(spec), spec=spec)


def realize_literal(spec: SturmianSpec) -> InfiniteWord:
    """The spec's word built literally: chain images of ``prepend · S``."""
    word: InfiniteWord = structural_standard(spec.directive)
    if spec.prepend:
        word = Concat(spec.prepend, word)
    for tag in reversed(spec.chain):
        word = MorphismImage(lr_morphism(tag), word)
    return word


def validate(spec: SturmianSpec) -> SturmianWord:
    """Validation gate: balance, complexity ``n + 1`` and agreement of the
    normal form with the literal realization."""
    literal = realize_literal(spec)
    word = realize(spec)
    if literal.raw(GATE_WINDOW) != word.raw(GATE_WINDOW):
        raise CrossCheckError(f"normal form of {spec.render()} disagrees with its realization")
    ok, witness = is_balanced(literal, GATE_BALANCE)
    if not ok:
        u, v = witness
        raise NotSturmianError(f"{spec.render()} is unbalanced: {render(u, '01')} vs {render(v, '01')}")
    for n in range(1, GATE_COMPLEXITY + 1):
        count = factor_stats(literal, n, GATE_WINDOW).count
        if count != n + 1:
            raise NotSturmianError(f"{spec.render()} has {count} factors of length {n}")
    return word


def sturmian_type(x: InfiniteWord, bound: int = GATE_BALANCE) -> int:
    """The letter ``a`` such that ``aa`` occurs in ``prefix(bound)``."""
    if isinstance(x, SturmianWord):
        return x.nf.type_letter
    if x.alphabet_size != 2:
        raise NotSturmianError("not Sturmian at this bound")
    w = x.raw(bound)
    found = [a for a in (0, 1) if bytes([a, a]) in w]
    if len(found) != 1:
        raise NotSturmianError("not Sturmian at this bound")
    return found[0]


class BlockDecode(InfiniteWord):
    """Lazy inverse of ``L_a`` (blocks a, ab) or ``R_a`` (blocks a, ba)."""

    def __init__(self, word: InfiniteWord, a: int, left: bool):
        self.word = word
        self.a = a
        self.left = left
        super().__init__(2, word.glyphs)
        self._pos = 0

    def _extend(self, n: int) -> None:
        a, b = self.a, 1 - self.a
        need = max(n - len(self._buf), 16)
        w = self.word.raw(self._pos + 2 * need + 2)
        p = self._pos
        while len(self._buf) < n and p + 1 < len(w):
            if self.left:
                if w[p] != a:
                    raise DecodeError(f"not an L{a}-image at position {p}")
                if w[p + 1] == b:
                    self._buf.append(b)
                    p += 2
                else:
                    self._buf.append(a)
                    p += 1
            elif w[p] == a:
                self._buf.append(a)
                p += 1
            elif w[p + 1] == a:
                self._buf.append(b)
                p += 2
            else:
                raise DecodeError(f"not an R{a}-image at position {p}")
        self._pos = p

    def describe(self) -> str:
        return f"{'L' if self.left else 'R'}{self.a}^-1({self.word.describe()})"


def desubstitute(x: InfiniteWord, bound: int = 256) -> tuple[str, InfiniteWord]:
    """One desubstitution step (inverse of L_a or R_a) on a stream with N(x) > 2."""
    a = sturmian_type(x)
    n = scan_up(x, bound).N
    begins_ab = x.prefix(2) == (a, 1 - a)
    if n == 2:
        raise PrefalError("base case, use delta_base")
    if begins_ab:
        raise CrossCheckError("word begins with ab but has N > 2")
    if x[0] == a:
        return f"L{a}", BlockDecode(x, a, True)
    return f"R{a}", BlockDecode(x, a, False)


def delta_base(x: InfiniteWord, bound: int = 256) -> InfiniteWord:
    """δ(x) for N(x) = 2: the left first-return coding, ``ab`` coded first."""
    a = sturmian_type(x)
    ups = scan_up(x, bound).up_set
    if ups != ((a,), (a, 1 - a)):
        raise PrefalError("delta_base needs UP(x) = {a, ab}")
    mapping = [1, 0] if a == 0 else [0, 1]
    return Relabel(BlockDecode(x, a, True), mapping, code_glyphs(2))


def _as_nf(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> NormalForm:
    if isinstance(x, SturmianSpec):
        return normalize(x)
    if isinstance(x, SturmianWord):
        return x.nf
    if isinstance(x, NormalForm):
        return x
    raise NotSturmianError(f"{x!r} is not given as a Sturmian spec")


def sturmian_delta(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> SturmianWord:
    nf = _as_nf(x)
    if not nf_in_p1(nf):
        raise PrefalError("word of the form aS is not in P1")
    return SturmianWord(delta_nf(nf), code_glyphs(2))


def is_in_P1(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> bool:
    return nf_in_p1(_as_nf(x))


def is_singular(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> tuple[bool, NormalForm]:
    nf = _as_nf(x)
    return nf.singular, nf


def up_pair(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> tuple[Word, Word]:
    return up_structure(_as_nf(x))[1]


@dataclass
class SturmianVerdict:
    status: Status
    singular: bool
    normal_form: NormalForm
    n: Optional[int] = None
    levels: list[NormalForm] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"status": self.status.value, "n": self.n, "singular": self.singular,
                "normal_form": self.normal_form.to_json()}


def classify_sturmian(x: Union[SturmianSpec, NormalForm, SturmianWord]) -> SturmianVerdict:
    """Nonsingular words lie in P∞; a singular word leaves P1 after finitely
    many derivations, and the exit level is found by iterating δ."""
    nf = _as_nf(x)
    if not nf.singular:
        return SturmianVerdict(Status.IN_P_INFINITY, False, nf, levels=[nf])
    levels = [nf]
    current = nf
    for level in range(1, REDUCTION_CAP + 1):
        if not nf_in_p1(current):
            return SturmianVerdict(Status.NOT_IN_P_N, True, nf, n=level, levels=levels)
        current = delta_nf(current)
        if not current.singular:
            raise CrossCheckError("derived word of a singular word became nonsingular")
        levels.append(current)
    raise PrefalError("reduction did not terminate")


def certify_sturmian(x: SturmianWord, analysis: UPAnalysis):
    """Certification hook used by the prefactor module."""
    if not nf_in_p1(x.nf):
        return None
    ups, _ = up_structure(x.nf)
    if len(ups[-1]) > analysis.bound:
        return None
    if analysis.stall is not None or list(analysis.up_set) != ups:
        raise CrossCheckError(f"scanned unbordered prefixes of {x.describe()} differ from the exact set")
    exact_pair = set(up_pair(x.nf))
    if set(analysis.up_prime) != exact_pair:
        raise CrossCheckError(f"code words of {x.describe()} differ from the exact pair")
    return "sturmian-exact", sturmian_delta(x.nf)


__all__ = [
    "Directive", "StandardSturmian", "SturmianSpec", "NormalForm", "SturmianWord",
    "SturmianVerdict", "lr_morphism", "standard_word", "structural_standard", "normalize",
    "realize", "realize_literal", "validate", "sturmian_type", "desubstitute", "delta_base",
    "sturmian_delta", "is_in_P1", "is_singular", "up_pair", "up_structure",
    "classify_sturmian", "certify_sturmian", "nf_in_p1", "delta_nf",
]
