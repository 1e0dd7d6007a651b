"""Parser for word specs such as ``morphic(0->01,1->0;0)``.

Grammar (letters are single characters)::

    word := morphic(rules;seed) | periodic(letters) | concat(letters;word)
          | image(morph;word) | sturm_std(directive)
          | sturm(dir=directive;pre=letters;chain=L0 R1 ...)
    morph := (L0|L1|R0|R1)+ | rules
    rules := letter->letters {, letter->letters}
"""

from __future__ import annotations

import re
from typing import Sequence

from . import sturmian
from .errors import CrossCheckError, NotSturmianError, PrefalError, SpecError
from .morphic import MorphicFixedPoint, Morphism, MorphismImage
from .words import Concat, InfiniteWord, Periodic

_CALL = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$", re.S)


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecError("unbalanced parentheses")
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise SpecError("unbalanced parentheses")
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _args(body: str, count: int, name: str) -> list[str]:
    parts = split_top(body, ";")
    if len(parts) != count or any(not p for p in parts):
        raise SpecError(f"{name}(...) takes {count} ';'-separated argument(s)")
    return parts


def parse_rules(text: str) -> list[tuple[str, str]]:
    rules = []
    for item in text.split(","):
        if "->" not in item:
            raise SpecError(f"rule {item.strip()!r} lacks '->'")
        lhs, rhs = (s.strip() for s in item.split("->", 1))
        if len(lhs) != 1 or not rhs or any(c.isspace() for c in rhs):
            raise SpecError(f"bad rule {item.strip()!r}")
        rules.append((lhs, rhs))
    if len({lhs for lhs, _ in rules}) != len(rules):
        raise SpecError("letter defined twice in rules")
    return rules


def _extend_glyphs(glyphs: Sequence[str], letters: str) -> tuple[str, ...]:
    out = list(glyphs)
    for c in sorted(set(letters) - set(glyphs)):
        out.append(c)
    return tuple(out)


def _morphic(body: str) -> InfiniteWord:
    rules_text, seed = _args(body, 2, "morphic")
    rules = parse_rules(rules_text)
    glyphs = tuple(lhs for lhs, _ in rules)
    index = {g: i for i, g in enumerate(glyphs)}
    for _, rhs in rules:
        for c in rhs:
            if c not in index:
                raise SpecError(f"letter {c!r} has no rule")
    if seed not in index:
        raise SpecError(f"seed {seed!r} has no rule")
    m = Morphism(tuple(tuple(index[c] for c in rhs) for _, rhs in rules), len(glyphs))
    if not m.is_prolongable(index[seed]):
        raise SpecError(f"morphism is not prolongable on {seed!r}")
    return MorphicFixedPoint(m, index[seed], glyphs)


def _image(body: str) -> InfiniteWord:
    morph, inner_text = _args(body, 2, "image")
    inner = parse_word(inner_text)
    if "->" in morph:
        rules = dict(parse_rules(morph))
        missing = [g for g in inner.glyphs if g not in rules]
        if missing:
            raise SpecError(f"image rules miss letters {missing}")
        glyphs = _extend_glyphs(inner.glyphs, "".join(rules.values()))
        index = {g: i for i, g in enumerate(glyphs)}
        images = tuple(tuple(index[c] for c in rules[g]) for g in inner.glyphs)
        return MorphismImage(Morphism(images, len(glyphs)), inner, glyphs)
    tags = re.findall(r"[LR][01]", morph)
    if "".join(tags) != morph.replace(" ", "") or not tags:
        raise SpecError(f"bad morphism sequence {morph!r}")
    if inner.alphabet_size != 2:
        raise SpecError("Sturmian morphisms act on binary words")
    word = inner
    for tag in reversed(tags):
        word = MorphismImage(sturmian.lr_morphism(tag), word, inner.glyphs)
    return word


def _sturm(body: str) -> InfiniteWord:
    fields = {}
    for part in split_top(body, ";"):
        if not part:
            continue
        if "=" not in part:
            raise SpecError(f"sturm field {part!r} lacks '='")
        key, value = (s.strip() for s in part.split("=", 1))
        if key not in ("dir", "pre", "chain") or key in fields:
            raise SpecError(f"bad or repeated sturm field {key!r}")
        fields[key] = value
    if "dir" not in fields:
        raise SpecError("sturm(...) needs dir=")
    pre = fields.get("pre", "")
    if any(c not in "01" for c in pre):
        raise SpecError("pre= must be a binary word")
    chain = fields.get("chain", "").split()
    spec = sturmian.SturmianSpec(sturmian.Directive.parse(fields["dir"]),
                                 tuple(int(c) for c in pre), tuple(chain))
    return sturmian.validate(spec)


def parse_word(text: str) -> InfiniteWord:
    """Build the lazy word described by ``text``; raises :class:`SpecError`."""
    m = _CALL.match(text)
    if not m:
        raise SpecError(f"cannot parse word spec {text!r}")
    name, body = m.group(1), m.group(2)
    try:
        if name == "morphic":
            return _morphic(body)
        if name == "periodic":
            letters = body.strip()
            if not letters or "(" in letters or ";" in letters:
                raise SpecError("periodic(...) takes a non-empty letter string")
            glyphs = tuple(sorted(set(letters)))
            return Periodic(tuple(glyphs.index(c) for c in letters), len(glyphs), glyphs)
        if name == "concat":
            head, tail_text = _args(body, 2, "concat")
            tail = parse_word(tail_text)
            glyphs = _extend_glyphs(tail.glyphs, head)
            return Concat(tuple(glyphs.index(c) for c in head), tail, glyphs)
        if name == "image":
            return _image(body)
        if name == "sturm_std":
            return sturmian.validate(sturmian.SturmianSpec(sturmian.Directive.parse(body)))
        if name == "sturm":
            return _sturm(body)
    except NotSturmianError as exc:
        raise SpecError(str(exc)) from exc
    except (SpecError, CrossCheckError):
        raise
    except PrefalError as exc:
        raise SpecError(str(exc)) from exc
    raise SpecError(f"unknown word constructor {name!r}")
