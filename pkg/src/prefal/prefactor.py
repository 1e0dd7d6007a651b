"""Unbordered prefixes, the unique factorization over them, derived words and
the P1 ⊇ P2 ⊇ ... hierarchy.

Soundness policy: a scan at bound ``L`` only ever yields *bounded* evidence.
An analysis is upgraded to ``Certified`` only when a prefixal factorization of
the whole infinite word is exhibited structurally, since any prefixal
factorization ``x = V0 V1 ...`` bounds every unbordered prefix by ``|V0|``.
Certification also attaches a *witness*: a structured description of the
derived word (a fixed point, an image, a relabeling, ...), which is checked
symbol-by-symbol against the greedy derivation before it is trusted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, Optional, Sequence

from .errors import CrossCheckError, DecodeError, GenerationError, PrefalError, StallError
from .morphic import (CodeTable, MorphicFixedPoint, Morphism, MorphismImage, code_glyphs,
                      decode, derived_morphism)
from .words import (InfiniteWord, Periodic, Relabel, Word, failure_table, find_square,
                    render, word_isomorphic)

log = logging.getLogger(__name__)

DEFAULT_SCAN_BOUND = 256
DEFAULT_VERIFY_LEN = 4096
CYCLE_PREFIX = 512
WITNESS_CHECK_LEN = 1024


class Completeness(str, Enum):
    CERTIFIED = "Certified"
    BOUNDED = "BoundedOnly"


@dataclass(frozen=True)
class UPAnalysis:
    up_set: tuple[Word, ...]
    bound: int
    up_prime: tuple[Word, ...]
    phi: CodeTable
    completeness: Completeness = Completeness.BOUNDED
    certificate: Optional[str] = None
    stall: Optional[int] = None
    verify_len: int = DEFAULT_VERIFY_LEN
    witness: Optional[InfiniteWord] = field(default=None, compare=False, repr=False)

    @property
    def N(self) -> int:
        return len(self.up_set[-1])

    @property
    def certified(self) -> bool:
        return self.completeness is Completeness.CERTIFIED

    def code_of(self, piece: Sequence[int]) -> int:
        return self.phi.codewords.index(tuple(piece))

    def to_json(self, glyphs: Sequence[str]) -> dict:
        def r(w):
            return render(w, glyphs)
        return {
            "up_set": [r(u) for u in self.up_set],
            "N": self.N,
            "up_prime": [r(u) for u in self.up_prime],
            "phi": {str(i + 1): r(u) for i, u in enumerate(self.phi.codewords)},
            "completeness": self.completeness.value,
            "certificate": self.certificate,
            "stall": self.stall,
        }


def _iter_piece_lengths(x: InfiniteWord, lengths: Sequence[int]) -> Iterator[int]:
    """Greedy factorization of ``x`` over its prefixes of the given lengths.

    At each position the longest listed prefix of ``x`` that also prefixes the
    remaining suffix is taken.  Members are prefixes of ``x`` and so have
    pairwise distinct lengths; the choice is never tied.
    """
    lengths = sorted(set(lengths), reverse=True)
    longest = lengths[0]
    size = max(4 * longest, 256)
    w = x.raw(size)
    heads = [w[:n] for n in lengths]
    p = 0
    while True:
        if p + longest > len(w):
            size *= 2
            w = x.raw(size)
        for n, head in zip(lengths, heads):
            if w.startswith(head, p):
                yield n
                p += n
                break
        else:
            raise StallError(p)


def scan_up(x: InfiniteWord, L: int = DEFAULT_SCAN_BOUND,
            verify_len: int = DEFAULT_VERIFY_LEN) -> UPAnalysis:
    """Unbordered prefixes of length ≤ ``L`` plus the greedy code table.

    UP'(x) and its ≺ order are read off the greedy factorization of
    ``prefix(verify_len)``; a stall inside that window is recorded.
    """
    if L < 2:
        raise PrefalError("scan bound must be at least 2")
    w = x.raw(L)
    table = failure_table(w)
    up_set = tuple(tuple(w[:i + 1]) for i, b in enumerate(table) if b == 0)
    order: list[int] = []
    stall = None
    p = 0
    try:
        for n in _iter_piece_lengths(x, [len(u) for u in up_set]):
            if n not in order:
                order.append(n)
            p += n
            if p >= verify_len:
                break
    except StallError as exc:
        stall = exc.position
    up_prime = tuple(tuple(w[:n]) for n in order)
    return UPAnalysis(up_set, L, up_prime, CodeTable(up_prime), stall=stall, verify_len=verify_len)


def greedy_factorize(x: InfiniteWord, analysis: UPAnalysis, m: int) -> list[Word]:
    """First ``m`` pieces of the greedy factorization over ``analysis.up_set``."""
    out = []
    w = None
    p = 0
    for n in _iter_piece_lengths(x, [len(u) for u in analysis.up_set]):
        if len(out) == m:
            break
        w = x.raw(p + n)
        out.append(tuple(w[p:p + n]))
        p += n
    return out


class Derived(InfiniteWord):
    """δ(x): code letters of the greedy factorization of ``parent``.

    Symbols always come from the greedy factorization; ``witness`` (when the
    analysis is certified) is the structural description used for further
    certification and is checked against these symbols.
    """

    def __init__(self, parent: InfiniteWord, analysis: UPAnalysis):
        if not analysis.up_prime:
            raise StallError(analysis.stall or 0)
        self.parent = parent
        self.analysis = analysis
        super().__init__(len(analysis.up_prime), code_glyphs(len(analysis.up_prime)))
        self._code = {len(u): i for i, u in enumerate(analysis.up_prime)}
        self._pieces = _iter_piece_lengths(parent, [len(u) for u in analysis.up_set])
        self._pos = 0

    @property
    def witness(self) -> Optional[InfiniteWord]:
        return self.analysis.witness

    def _extend(self, n: int) -> None:
        for length in self._pieces:
            code = self._code.get(length)
            if code is None:
                raise GenerationError(
                    f"unbordered prefix of length {length} first used at position {self._pos},"
                    " outside the verified code table")
            self._buf.append(code)
            self._pos += length
            if len(self._buf) >= n:
                return

    def describe(self) -> str:
        return f"delta({self.parent.describe()})"


def derive(x: InfiniteWord, analysis: UPAnalysis) -> Derived:
    return Derived(x, analysis)


_CACHE_ATTR = "_prefal_analysis_cache"


def analyze(x: InfiniteWord, L: int = DEFAULT_SCAN_BOUND,
            verify_len: int = DEFAULT_VERIFY_LEN) -> UPAnalysis:
    """``certify_up(x, scan_up(x, L))``, memoized on the word object."""
    cache = x.__dict__.setdefault(_CACHE_ATTR, {})
    key = (L, verify_len)
    if key not in cache:
        cache[key] = certify_up(x, scan_up(x, L, verify_len))
    return cache[key]


def _codes_until(x: InfiniteWord, analysis: UPAnalysis, stop: int) -> list[int]:
    codes, p = [], 0
    for n in _iter_piece_lengths(x, [len(u) for u in analysis.up_set]):
        if p >= stop:
            break
        codes.append(analysis.code_of(x.prefix(n)))
        p += n
    if p != stop:
        raise CrossCheckError(f"period {stop} is not a cut point of the factorization")
    return codes


def _certify_periodic(x: Periodic, a: UPAnalysis):
    if len(x.period) > a.bound:
        return None
    codes = _codes_until(x, a, len(x.period))
    return "periodic", Periodic(codes, len(a.up_prime), code_glyphs(len(a.up_prime)))


def _certify_fixed_point(x: MorphicFixedPoint, a: UPAnalysis):
    try:
        tau = derived_morphism(x.morphism, a.phi)
    except DecodeError:
        return None
    if not tau.is_prolongable(0):
        return None
    z = MorphicFixedPoint(tau, 0, code_glyphs(len(a.phi)))
    back = MorphismImage(a.phi.as_morphism(x.alphabet_size), z)
    if back.raw(a.verify_len) != x.raw(a.verify_len):
        raise CrossCheckError(f"phi(fixed point of derived morphism) differs from {x.describe()}")
    return "derived-morphism", z


def _certify_image(x: MorphismImage, a: UPAnalysis):
    y = x.word
    ay = analyze(y, a.bound, a.verify_len)
    if not ay.certified:
        return None
    m = x.morphism
    if len(m(ay.up_prime[0])) > a.bound:
        return None
    letters = sorted({c for u in ay.up_prime for c in u})
    images = [m.images[c] for c in letters]
    if (letters == list(range(y.alphabet_size)) and len(set(images)) == len(images)
            and set(images) == set(a.up_prime)):
        mapping = [a.code_of(img) for img in images]
        return "morphism-image", Relabel(y, mapping, code_glyphs(len(a.phi)))
    h = []
    for cw in ay.phi.codewords:
        codes = decode(a.phi, m(cw))
        if codes is None:
            raise CrossCheckError("image of a derived factorization is not a code-table product")
        h.append(codes)
    inner = Derived(y, ay)
    glyphs = code_glyphs(len(a.phi))
    if all(len(c) == 1 for c in h) and len({c[0] for c in h}) == len(h):
        return "morphism-image", Relabel(inner, [c[0] for c in h], glyphs, len(a.phi))
    return "morphism-image", MorphismImage(Morphism(tuple(h), len(a.phi)), inner, glyphs)


def _certify_via(inner: InfiniteWord, a: UPAnalysis, label: str):
    ai = analyze(inner, a.bound, a.verify_len)
    if not ai.certified:
        return None
    return label, ai.witness


def certify_up(x: InfiniteWord, analysis: UPAnalysis) -> UPAnalysis:
    """Try to prove that ``analysis.up_set`` is all of UP(x).

    Never upgrades wrongly: anything not covered by a structural rule stays
    ``BoundedOnly``.  Inconsistencies between routes raise
    :class:`CrossCheckError`.
    """
    if analysis.certified:
        return analysis
    from . import sturmian

    if isinstance(x, sturmian.SturmianWord):
        result = sturmian.certify_sturmian(x, analysis)
    elif analysis.stall is not None:
        result = None
    elif isinstance(x, Periodic):
        result = _certify_periodic(x, analysis)
    elif isinstance(x, MorphicFixedPoint):
        result = _certify_fixed_point(x, analysis)
    elif isinstance(x, MorphismImage):
        result = _certify_image(x, analysis)
    elif isinstance(x, Relabel):
        result = _certify_via(x.word, analysis, "relabel")
    elif isinstance(x, Derived) and x.witness is not None:
        result = _certify_via(x.witness, analysis, "derived-witness")
    else:
        result = None
    if result is None:
        return analysis
    certificate, witness = result
    if witness is not None:
        greedy = Derived(x, analysis).raw(WITNESS_CHECK_LEN)
        if witness.raw(WITNESS_CHECK_LEN) != greedy:
            raise CrossCheckError(f"structural derived word of {x.describe()} disagrees with greedy")
    return replace(analysis, completeness=Completeness.CERTIFIED,
                   certificate=certificate, witness=witness)


def morphism_key(m: Morphism, seed: int) -> tuple:
    """Canonical form of a fixed point's morphism up to renaming letters.

    Letters reachable from ``seed`` are renumbered by first occurrence in the
    fixed point; unreachable letters are dropped.
    """
    order = [seed]
    i = 0
    while i < len(order):
        for b in m.images[order[i]]:
            if b not in order:
                order.append(b)
        i += 1
    # first-occurrence order in the fixed point itself
    fp = MorphicFixedPoint(m, seed) if m.is_prolongable(seed) else None
    if fp is not None:
        seen: list[int] = []
        n = 64
        while len(seen) < len(order):
            seen = list(dict.fromkeys(fp.raw(n)))
            n *= 2
        order = seen
    rank = {a: r for r, a in enumerate(order)}
    return tuple(tuple(rank[b] for b in m.images[a]) for a in order)


def _structure(x: InfiniteWord) -> InfiniteWord:
    while True:
        if isinstance(x, Derived) and x.witness is not None:
            x = x.witness
        elif isinstance(x, Relabel):
            x = x.word
        else:
            return x


def refute_p1(x: InfiniteWord, square_free_keys: frozenset = frozenset()) -> Optional[str]:
    """A certified reason why ``x`` has no prefixal factorization, if known.

    Two structural sources: a Sturmian word of the form aS, and a fixed point
    whose morphism matches a word flagged square-free in the corpus (a
    square-free word has no prefixal factorization).
    """
    from . import sturmian

    s = _structure(x)
    if isinstance(s, sturmian.SturmianWord) and not sturmian.nf_in_p1(s.nf):
        return "sturmian-aS"
    if isinstance(s, MorphicFixedPoint) and morphism_key(s.morphism, s.seed) in square_free_keys:
        square = find_square(s.raw(CYCLE_PREFIX))
        if square is not None:
            raise CrossCheckError(f"word flagged square-free has a square at {square}")
        return "square-free"
    return None


@dataclass
class Level:
    word: InfiniteWord
    analysis: UPAnalysis
    refutation: Optional[str] = None

    @property
    def in_p1_certified(self) -> bool:
        return self.refutation is None and self.analysis.certified

    def to_json(self) -> dict:
        out = {"word": self.word.describe(), "prefix": self.word.text(32)}
        out.update(self.analysis.to_json(self.word.glyphs))
        out["refutation"] = self.refutation
        return out


@dataclass
class DerivedChain:
    levels: list[Level]
    cycle: Optional[tuple[int, int]] = None

    @property
    def nu(self) -> list[int]:
        """ν values of the certified levels of the chain that lie in P1."""
        out = []
        for lvl in self.levels:
            if not lvl.in_p1_certified:
                break
            out.append(lvl.analysis.N)
        return out

    def nu_report(self) -> list:
        out: list = []
        for lvl in self.levels:
            if lvl.refutation:
                break
            n = lvl.analysis.N
            out.append(n if lvl.analysis.certified else f">={n}")
        return out

    def to_json(self) -> dict:
        return {"levels": [lvl.to_json() for lvl in self.levels],
                "nu": self.nu_report(),
                "cycle": list(self.cycle) if self.cycle else None}


def derived_chain(x: InfiniteWord, depth: int, L: int = DEFAULT_SCAN_BOUND,
                  verify_len: int = DEFAULT_VERIFY_LEN,
                  square_free_keys: frozenset = frozenset()) -> DerivedChain:
    """Levels ``x, δ(x), δ²(x), ...`` (``depth`` of them at most)."""
    if depth < 1:
        raise PrefalError("depth must be at least 1")
    levels: list[Level] = []
    word = x
    for k in range(depth):
        analysis = analyze(word, L, verify_len)
        levels.append(Level(word, analysis, refute_p1(word, square_free_keys)))
        if levels[-1].refutation or analysis.stall is not None or k + 1 == depth:
            break
        # a certified witness equals δ(word) exactly and was checked against
        # the greedy coding; continuing from it keeps deep levels cheap
        word = analysis.witness if analysis.witness is not None else derive(word, analysis)
    chain = DerivedChain(levels)
    live = [lvl for lvl in levels if lvl.refutation is None and lvl.analysis.stall is None]
    prefixes = [lvl.word.raw(CYCLE_PREFIX) for lvl in live]
    for k in range(len(prefixes)):
        for j in range(k):
            if word_isomorphic(prefixes[j], prefixes[k]) is not None:
                chain.cycle = (j, k)
                break
        if chain.cycle:
            break
    return chain


class Status(str, Enum):
    IN_P_INFINITY = "InPInfinity_Certified"
    NOT_IN_P_N = "NotInP_n"
    BOUNDED_MEMBER = "BoundedMember"
    UNRESOLVED = "Unresolved"


@dataclass
class HierarchyVerdict:
    status: Status
    n: Optional[int] = None
    cycle: Optional[tuple[int, int]] = None
    reason: Optional[str] = None
    member_through: int = 0
    chain: Optional[DerivedChain] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {"status": self.status.value, "n": self.n,
                "cycle": list(self.cycle) if self.cycle else None,
                "reason": self.reason, "member_through": self.member_through}


def classify_hierarchy(x: InfiniteWord, depth: int = 6, L: int = DEFAULT_SCAN_BOUND,
                       verify_len: int = DEFAULT_VERIFY_LEN,
                       square_free_keys: frozenset = frozenset()) -> HierarchyVerdict:
    """Place ``x`` in the hierarchy as far as certified evidence allows.

    ``member_through`` is the number of leading levels with a non-stalling
    factorization (bounded evidence for membership in that P_n).
    """
    chain = derived_chain(x, depth, L, verify_len, square_free_keys)
    levels = chain.levels
    member = 0
    for lvl in levels:
        if lvl.refutation or lvl.analysis.stall is not None:
            break
        member += 1
    for k, lvl in enumerate(levels):
        if lvl.refutation:
            if all(levels[j].in_p1_certified for j in range(k)):
                return HierarchyVerdict(Status.NOT_IN_P_N, n=k + 1, reason=lvl.refutation,
                                        member_through=member, chain=chain)
            return HierarchyVerdict(Status.UNRESOLVED, reason=f"{lvl.refutation} at uncertified level {k}",
                                    member_through=member, chain=chain)
    if chain.cycle is not None:
        j, k = chain.cycle
        if all(levels[i].in_p1_certified for i in range(k + 1)):
            return HierarchyVerdict(Status.IN_P_INFINITY, cycle=chain.cycle,
                                    reason="certified derived-word cycle",
                                    member_through=member, chain=chain)
    if member < len(levels):
        stall = levels[member].analysis.stall
        return HierarchyVerdict(Status.UNRESOLVED, reason=f"level {member} stalls at {stall} (bound {L})",
                                member_through=member, chain=chain)
    return HierarchyVerdict(Status.BOUNDED_MEMBER, n=member, reason="no cycle within depth",
                            member_through=member, chain=chain)


def refine_prefixal(x: InfiniteWord, pieces: Sequence[Sequence[int]],
                    analysis: UPAnalysis) -> list[Word]:
    """Code words ``v_i`` of δ(x) with ``φ(v_i) = V_i`` for a prefixal factorization.

    Cut points of the given pieces must be cut points of the unbordered-prefix
    factorization; a piece boundary strictly inside a factor is rejected.
    """
    if not analysis.certified:
        raise PrefalError("refinement needs a certified analysis")
    total = sum(len(v) for v in pieces)
    w = x.raw(total)
    p = 0
    for v in pieces:
        if not v or tuple(w[p:p + len(v)]) != tuple(v) or x.raw(len(v)) != bytes(v):
            raise PrefalError(f"piece at {p} is not a non-empty prefix of the word")
        p += len(v)
    out: list[Word] = []
    current: list[int] = []
    ends = iter(sum(len(v) for v in pieces[:i + 1]) for i in range(len(pieces)))
    target = next(ends, None)
    p = 0
    for n in _iter_piece_lengths(x, [len(u) for u in analysis.up_set]):
        if target is None:
            break
        current.append(analysis.code_of(x.prefix(n)))
        p += n
        if p > target:
            raise PrefalError(f"piece boundary {target} falls inside an unbordered factor")
        if p == target:
            out.append(tuple(current))
            current = []
            target = next(ends, None)
    return out
