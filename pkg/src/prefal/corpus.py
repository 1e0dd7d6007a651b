"""The built-in example corpus and the runner that checks it."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from . import sturmian
from .dsl import parse_word
from .errors import CrossCheckError, PrefalError, SpecError
from .morphic import MorphicFixedPoint
from .prefactor import (DEFAULT_SCAN_BOUND, DEFAULT_VERIFY_LEN, Derived, HierarchyVerdict,
                        Status, analyze, classify_hierarchy, morphism_key)

ENV_VAR = "PREFAL_CORPUS"


def corpus_path() -> Optional[Path]:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else None


def load_corpus(path: Optional[Path] = None) -> list[dict]:
    path = path or corpus_path()
    try:
        if path is None:
            text = resources.files("prefal").joinpath("data/corpus.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read corpus: {exc}") from exc
    if data.get("schema") != 1 or not isinstance(data.get("entries"), list):
        raise SpecError("corpus must have schema 1 and an entries list")
    return data["entries"]


def square_free_keys(entries: list[dict]) -> frozenset:
    """Canonical morphism keys of fixed points flagged square-free."""
    keys = set()
    for entry in entries:
        if entry.get("square_free"):
            word = parse_word(entry["spec"])
            if not isinstance(word, MorphicFixedPoint):
                raise SpecError(f"square_free flag on non-morphic entry {entry['name']}")
            keys.add(morphism_key(word.morphism, word.seed))
    return frozenset(keys)


@dataclass(frozen=True)
class Bounds:
    scan_bound: int = DEFAULT_SCAN_BOUND
    verify_len: int = DEFAULT_VERIFY_LEN
    depth: int = 6

    def to_json(self) -> dict:
        return {"scan_bound": self.scan_bound, "verify_len": self.verify_len, "depth": self.depth}


def sturmian_cross_check(spec: sturmian.SturmianSpec, verdict: HierarchyVerdict,
                         bounds: Bounds) -> tuple[sturmian.SturmianVerdict, HierarchyVerdict]:
    """Exact classification versus the prefactor pipelines.

    Raises :class:`CrossCheckError` when a resolved prefactor verdict on the
    normal-form word or on the literal realization contradicts the exact Sturmian classification.
    """
    exact = sturmian.classify_sturmian(spec)
    literal = classify_hierarchy(sturmian.realize_literal(spec), bounds.depth,
                                 bounds.scan_bound, bounds.verify_len)
    for label, v in (("normal form", verdict), ("literal stream", literal)):
        if v.status in (Status.IN_P_INFINITY, Status.NOT_IN_P_N):
            if (v.status, v.n) != (exact.status, exact.n):
                raise CrossCheckError(
                    f"{label} verdict {v.status.value}({v.n}) contradicts Sturmian verdict "
                    f"{exact.status.value}({exact.n}) for {spec.render()}")
    return exact, literal


def analysis_report(spec_text: str, bounds: Bounds, keys: frozenset = frozenset()) -> tuple[dict, HierarchyVerdict]:
    """The full classify report for one spec."""
    word = parse_word(spec_text)
    verdict = classify_hierarchy(word, bounds.depth, bounds.scan_bound, bounds.verify_len, keys)
    chain = verdict.chain
    top = chain.levels[0]
    body = {"spec": spec_text, "bounds": bounds.to_json(), "prefix": word.text(32)}
    body.update(top.analysis.to_json(word.glyphs))
    body.update({"nu": chain.nu_report(), "cycle": list(chain.cycle) if chain.cycle else None,
                 "verdict": verdict.to_json(), "levels": [lvl.to_json() for lvl in chain.levels]})
    if isinstance(word, sturmian.SturmianWord) and word.spec is not None:
        exact, literal = sturmian_cross_check(word.spec, verdict, bounds)
        body["sturmian"] = exact.to_json()
        body["literal"] = literal.to_json()
    return body, verdict


def _derived_prefix(spec_text: str, bounds: Bounds, n: int) -> str:
    word = parse_word(spec_text)
    d = Derived(word, analyze(word, bounds.scan_bound, bounds.verify_len))
    return d.text(n)


def run_entry(entry: dict, bounds: Bounds, keys: frozenset) -> dict:
    """Check one corpus entry against its expectations."""
    b = Bounds(bounds.scan_bound, bounds.verify_len, entry.get("depth", bounds.depth))
    expect = entry.get("expect", {})
    checks = []

    def check(field: str, want, got) -> None:
        checks.append({"field": field, "expected": want, "got": got, "ok": want == got})

    try:
        body, verdict = analysis_report(entry["spec"], b, keys)
        word = parse_word(entry["spec"])
        if "prefix" in expect:
            check("prefix", expect["prefix"], word.text(len(expect["prefix"])))
        if "up_set" in expect:
            check("up_set", expect["up_set"], body["up_set"])
        if "up_prime" in expect:
            check("up_prime", expect["up_prime"], body["up_prime"])
        if "derived_prefix" in expect:
            n = len(expect["derived_prefix"])
            check("derived_prefix", expect["derived_prefix"], _derived_prefix(entry["spec"], b, n))
        if "nu" in expect:
            check("nu", expect["nu"], body["nu"])
        if "verdict" in expect:
            check("verdict", expect["verdict"], verdict.status.value)
        if "n" in expect:
            check("n", expect["n"], verdict.n if "sturmian" not in body else body["sturmian"]["n"])
        if "cycle" in expect:
            check("cycle", expect["cycle"], body["cycle"])
        if "member_through" in expect:
            check("member_through", expect["member_through"], verdict.member_through)
        if "sturmian" in expect:
            check("sturmian", expect["sturmian"], body["sturmian"]["status"])
            check("singular", expect["singular"], body["sturmian"]["singular"])
            check("normal_form", expect["normal_form"], body["sturmian"]["normal_form"])
        if "literal_member_through" in expect:
            check("literal_member_through", expect["literal_member_through"],
                  body["literal"]["member_through"])
        status = "pass" if all(c["ok"] for c in checks) else "fail"
        error = None
    except CrossCheckError as exc:
        status, error = "cross-check-failure", str(exc)
    except PrefalError as exc:
        status, error = "error", str(exc)
    return {"name": entry["name"], "spec": entry["spec"], "status": status,
            "error": error, "checks": checks}


def _run_entry_star(args: tuple) -> dict:
    return run_entry(*args)


def run_corpus(entries: list[dict], bounds: Bounds, jobs: int = 1) -> list[dict]:
    keys = square_free_keys(entries)
    tasks = [(e, bounds, keys) for e in entries]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_entry_star, tasks))
    return [run_entry(*t) for t in tasks]


__all__ = ["Bounds", "load_corpus", "square_free_keys", "analysis_report", "run_entry",
           "run_corpus", "sturmian_cross_check"]
