"""Acceptance criteria; each test prints one PASS/FAIL line."""

import itertools
import time
from contextlib import contextmanager

import pytest

from prefal.coloring import frontier, parse_coloring
from prefal.corpus import load_corpus, square_free_keys
from prefal.dsl import parse_word
from prefal.morphic import Morphism, apply, derived_morphism
from prefal.oracle import (oracle_borders, oracle_extendable_factorizations,
                           oracle_mono_factorizations)
from prefal.prefactor import (Status, analyze, classify_hierarchy, derive, derived_chain,
                              greedy_factorize, scan_up)
from prefal.sturmian import (classify_sturmian, desubstitute, is_in_P1, lr_morphism,
                             realize_literal, sturmian_delta, up_structure)
from prefal.words import (factor_stats, is_balanced, is_unbordered, shortest_border,
                          uniform_recurrence_gap)

FIB = "morphic(0->01,1->0;0)"
TRIB = "morphic(1->12,2->13,3->1;1)"
TM = "morphic(0->01,1->10;0)"


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, limit=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            assert limit is None or elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            with capsys.disabled():
                print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s)")
    return run


def strings(words, glyphs):
    return ["".join(glyphs[a] for a in u) for u in words]


def test_criterion_1_fibonacci(criterion):
    with criterion(1, "Fibonacci UP set, derived word, nu and cycle", 1.0):
        f = parse_word(FIB)
        a = scan_up(f)
        assert strings(a.up_set, f.glyphs) == ["0", "01"]
        assert strings(a.up_prime, f.glyphs) == ["01", "0"]
        assert derive(f, analyze(f)).text(19) == "1211212112112121121"
        chain = derived_chain(f, 4)
        assert chain.nu == [2, 2, 2, 2] and chain.cycle is not None


def test_criterion_2_tribonacci(criterion):
    with criterion(2, "Tribonacci UP set, derived word and morphism, verdict, nu", 1.0):
        x = parse_word(TRIB)
        a = analyze(x)
        assert strings(a.up_set, x.glyphs) == ["1", "12", "1213"]
        assert derive(x, a).text(18) == "123121231123121231"
        tau1 = derived_morphism(x.morphism, a.phi)
        assert tau1 == Morphism(((0, 1, 2), (0,), (1,)), 3)
        a1 = scan_up(derive(x, a))
        assert derived_morphism(tau1, a1.phi) == x.morphism
        v = classify_hierarchy(x, 4)
        assert v.status is Status.IN_P_INFINITY
        assert v.chain.nu == [4, 3, 4, 3]


def test_criterion_3_thue_morse(criterion):
    with criterion(3, "Thue-Morse UP set, Hall morphism, NotInP_n(2)", 1.0):
        t = parse_word(TM)
        a = analyze(t)
        assert strings(a.up_set, t.glyphs) == ["0", "01", "011"]
        assert derived_morphism(t.morphism, a.phi) == Morphism(((0, 1, 2), (0, 2), (1,)), 3)
        keys = square_free_keys(load_corpus())
        v = classify_hierarchy(t, 2, square_free_keys=keys)
        assert (v.status, v.n) == (Status.NOT_IN_P_N, 2)


def test_criterion_4_hierarchy_strictness(criterion):
    with criterion(4, "F^n(t) is NotInP_n(n+2) for n = 0, 1, 2", 10.0):
        keys = square_free_keys(load_corpus())
        fibonacci = Morphism(((0, 1), (0,)), 2)
        x = parse_word(TM)
        for n in range(3):
            v = classify_hierarchy(x, n + 3, 256, square_free_keys=keys)
            assert (v.status, v.n) == (Status.NOT_IN_P_N, n + 2), n
            x = apply(fibonacci, x)


def test_criterion_5_nu_five(criterion):
    with criterion(5, "nu = 5,5,5 for the two five-letter morphisms", 5.0):
        for spec in ("morphic(0->00001,1->0;0)", "morphic(0->00101,1->001;0)"):
            chain = derived_chain(parse_word(spec), 3)
            assert chain.nu == [5, 5, 5]
            assert all(level.analysis.certified for level in chain.levels)


def test_criterion_6_sturmian_classification(criterion):
    with criterion(6, "exact Sturmian classification against the prefactor pipelines", 30.0):
        entries = [e for e in load_corpus() if e.get("kind") == "sturmian"]
        words = [parse_word(e["spec"]) for e in entries]
        singular = [w for w in words if w.nf.singular]
        chained = [w for w in words if w.spec.chain]
        assert len(words) >= 20 and len(singular) >= 8 and len(words) - len(singular) >= 8
        assert len(chained) >= 4
        # R_a(aS') is nonsingular although its spec prepends a letter
        assert any(w.spec.prepend and w.spec.chain and w.spec.chain[-1][0] == "R"
                   and not w.nf.singular for w in words)
        mismatches = 0
        for entry, x in zip(entries, words):
            exact = classify_sturmian(x.spec)
            assert exact.singular == bool(x.nf.prefix)
            assert (exact.status is Status.IN_P_INFINITY) == (not exact.singular)
            for word in (x, realize_literal(x.spec)):
                v = classify_hierarchy(word, entry.get("depth", 6))
                if v.status in (Status.IN_P_INFINITY, Status.NOT_IN_P_N):
                    mismatches += (v.status, v.n) != (exact.status, exact.n)
        assert mismatches == 0


def test_criterion_7_oracle_equivalence(criterion):
    with criterion(7, "borders to 14, factorization uniqueness to 20, coloring DP to 16"):
        for n in range(1, 15):
            for w in itertools.product((0, 1), repeat=n):
                borders = oracle_borders(w)
                assert is_unbordered(w) == (not borders)
                assert shortest_border(w) == (borders[0] if borders else None)
        corpus = load_corpus()
        for entry in corpus:
            x = parse_word(entry["spec"])
            a = analyze(x)
            if a.stall is not None:
                continue
            longest = max(len(u) for u in a.up_set)
            if longest > 20:
                continue
            cuts, total = {}, 0
            for piece in greedy_factorize(x, a, 40):
                cuts[total] = None
                total += len(piece)
            pieces = greedy_factorize(x, a, 40)
            for p in range(1, 21):
                found = oracle_extendable_factorizations(x.prefix(20 + 3 * longest), a.up_set,
                                                         p, longest, cap=80)
                expected, acc = [], 0
                for piece in pieces:
                    if acc >= p:
                        break
                    expected.append(tuple(piece))
                    acc += len(piece)
                assert found == ([tuple(expected)] if acc == p else []), (entry["name"], p)
        colorings = ["coloring{ prefix_end(%s)->c0; prefix_end(%s)->c1; otherwise->c2 }",
                     "coloring{ not_prefix->inf; otherwise->c }",
                     "coloring{ prefix->p; otherwise->q }"]
        for entry in corpus:
            x = parse_word(entry["spec"])
            if x.alphabet_size != 2:
                continue
            parent = x.prefix(16)
            for text in colorings:
                if "%" in text:
                    text = text % tuple(x.glyphs)
                coloring = parse_coloring(text, x.glyphs)
                report = frontier(x, coloring, 16)
                for c in coloring.colors:
                    reach = set(report.colors[c].reachable)
                    for p in range(1, 17):
                        assert (p in reach) == oracle_mono_factorizations(
                            parent[:p], coloring, c, parent), (entry["name"], text, c, p)


def test_criterion_8_property_suite(criterion):
    with criterion(8, "phi reconstruction, precedence, desubstitution, delta Sturmian, recurrence"):
        corpus = load_corpus()
        for entry in corpus:
            x = parse_word(entry["spec"])
            a = analyze(x)
            if a.certified:
                codes = derive(x, a).prefix(512)
                rebuilt = tuple(s for c in codes for s in a.up_prime[c])
                assert rebuilt[:512] == x.prefix(512), entry["name"]
            for level in derived_chain(x, entry.get("depth", 4)).levels[1:]:
                seen = list(dict.fromkeys(level.word.prefix(2048)))
                assert seen == sorted(seen), entry["name"]
            if entry.get("expect", {}).get("verdict") == "InPInfinity_Certified" or \
                    entry.get("expect", {}).get("sturmian") == "InPInfinity_Certified":
                w = x.prefix(4096)
                for u in {w[i:i + k] for k in range(1, 9) for i in range(512)}:
                    assert uniform_recurrence_gap(x, u, 4096) is not None, (entry["name"], u)
        sides = set()
        for entry in corpus:
            if entry.get("kind") != "sturmian":
                continue
            x = parse_word(entry["spec"])
            if not is_in_P1(x):
                continue
            d = sturmian_delta(x)
            assert is_balanced(d, 512)[0]
            assert all(factor_stats(d, n, 4096).count == n + 1 for n in range(1, 13))
            ups, _ = up_structure(x.nf)
            if len(ups[-1]) <= 2:
                continue
            tag, y = desubstitute(x)
            image = {lr_morphism(tag)(u) for u in scan_up(y, 256).up_set}
            expected = set(ups) if tag[0] == "L" else set(ups) - {(1 - x.nf.type_letter,)}
            assert image == expected and scan_up(y, 256).N < len(ups[-1])
            sides.add(tag[0])
        assert sides == {"L", "R"}
