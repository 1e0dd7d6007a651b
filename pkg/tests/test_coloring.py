import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefal.coloring import (PREFIX_COLORING, color, frontier, parse_coloring, refute_via_P1,
                             z_array)
from prefal.dsl import parse_word
from prefal.errors import PrefalError, SpecError
from prefal.oracle import oracle_mono_factorizations
from prefal.prefactor import Status, classify_hierarchy, scan_up

from conftest import FIB, TEN_F, TM, TRIB, ZERO_F

PHI_PRIME = "coloring{ prefix_end(0)->c0; prefix_end(1)->c1; otherwise->c2 }"
HAT_CONSTANT = "coloring{ not_prefix->inf; otherwise->c }"
TERNARY_TM = "morphic(1->123,2->13,3->2;1)"


def w(text):
    return tuple(int(c) for c in text)


def test_color_examples(tm):
    phi = parse_coloring(PHI_PRIME, tm.glyphs)
    assert color(phi, w("0110"), tm) == "c0"
    assert color(phi, w("011"), tm) == "c1"
    assert color(phi, w("10"), tm) == "c2"
    hat = parse_coloring(HAT_CONSTANT, tm.glyphs)
    assert color(hat, w("10"), tm) == "inf"
    with pytest.raises(PrefalError):
        color(phi, (), tm)


def test_parse_coloring_forms(fib):
    c = parse_coloring("coloring{ word(01)->a; len_lt(3)->b; ends(1)->d; otherwise->e }",
                       fib.glyphs)
    assert c.colors == ("a", "b", "d", "e")
    assert color(c, w("01"), fib) == "a"
    assert color(c, w("10"), fib) == "b"
    assert color(c, w("101"), fib) == "d"
    assert color(c, w("100"), fib) == "e"
    assert parse_coloring(c.render(fib.glyphs), fib.glyphs) == c
    for bad in ("prefix->a", "coloring{ prefix->a }", "coloring{ ends->a; otherwise->b }",
                "coloring{ ends(7)->a; otherwise->b }", "coloring{ len_lt(x)->a; otherwise->b }"):
        with pytest.raises(SpecError):
            parse_coloring(bad, fib.glyphs)


def test_z_array():
    z = z_array(bytes(w("01001010")))
    assert list(z) == [8, 0, 1, 3, 0, 3, 0, 1, 0]


def test_thue_morse_frontier(tm):
    report = frontier(tm, parse_coloring(PHI_PRIME, tm.glyphs), 64)
    assert report.colors["c2"].dead_at == 0
    assert report.colors["c0"].dead_at is not None and report.colors["c1"].dead_at is not None
    assert report.all_dead and report.evidence == "bounded"


def test_periodic_prefix_coloring_alive():
    x = parse_word("periodic(01)")
    report = frontier(x, PREFIX_COLORING, 64)
    f = report.colors["prefix"]
    assert f.alive and set(range(0, 65, 2)) <= set(f.reachable)


def test_fibonacci_hat_coloring_alive(fib):
    report = frontier(fib, parse_coloring(HAT_CONSTANT, fib.glyphs), 64)
    assert report.colors["c"].alive
    assert report.colors["inf"].dead_at == 0


def test_zero_f_prefix_frontier_dies():
    x = parse_word(ZERO_F)
    report = frontier(x, parse_coloring(HAT_CONSTANT, x.glyphs), 128)
    assert report.colors["c"].dead_at is not None


@pytest.mark.parametrize("spec", [ZERO_F, TERNARY_TM, "morphic(0->001,1->1;0)", TM, FIB])
@pytest.mark.parametrize("n", [64, 128, 256])
def test_prefix_frontier_matches_greedy_stall(spec, n):
    x = parse_word(spec)
    report = frontier(x, parse_coloring(HAT_CONSTANT, x.glyphs), n)
    stall = scan_up(x, report.window, n).stall
    assert report.colors["c"].dead_at == stall


def test_refute_via_p1(keys):
    x = parse_word("sturm(dir=(01)*;pre=0;chain=)")
    coloring, report = refute_via_P1(x, classify_hierarchy(x, 2))
    assert coloring == PREFIX_COLORING and report.colors["prefix"].dead_at is not None
    y = parse_word(TERNARY_TM)
    _, report = refute_via_P1(y, classify_hierarchy(y, 2, square_free_keys=keys))
    assert report.colors["prefix"].dead_at is not None
    t = parse_word(TM)
    with pytest.raises(PrefalError):
        refute_via_P1(t, classify_hierarchy(t, 2, square_free_keys=keys))


def test_refute_needs_certified_verdict():
    # the bare stream 0f only stalls, which is bounded evidence
    x = parse_word(ZERO_F)
    with pytest.raises(PrefalError):
        refute_via_P1(x, classify_hierarchy(x, 2))


def test_refute_needs_level_zero_refutation(keys):
    t = parse_word(TM)
    v = classify_hierarchy(t, 3, square_free_keys=keys)
    assert v.status is Status.NOT_IN_P_N and v.n == 2
    with pytest.raises(PrefalError):
        refute_via_P1(t, v)


PAIRS = [(TM, PHI_PRIME), (FIB, HAT_CONSTANT), (ZERO_F, HAT_CONSTANT), (TEN_F, HAT_CONSTANT),
         (TRIB, "coloring{ prefix_end(1)->a; prefix->b; otherwise->c }"),
         (FIB, "coloring{ len_lt(2)->a; ends(0)->b; otherwise->c }"),
         (TM, "coloring{ word(0)->a; word(1)->a; prefix->p; otherwise->q }"),
         ("periodic(01)", "coloring{ prefix->prefix; otherwise->nonprefix }")]


@pytest.mark.parametrize("spec, text", PAIRS)
def test_dp_matches_oracle(spec, text):
    x = parse_word(spec)
    coloring = parse_coloring(text, x.glyphs)
    report = frontier(x, coloring, 16, window=4)
    parent = x.prefix(16)
    for c in coloring.colors:
        reach, windowed = set(report.colors[c].reachable), set(report.colors[c].reachable_windowed)
        for p in range(1, 17):
            assert (p in reach) == oracle_mono_factorizations(parent[:p], coloring, c, parent)
            assert (p in windowed) == oracle_mono_factorizations(parent[:p], coloring, c, parent, 4)


@given(st.sampled_from(PAIRS), st.integers(1, 96), st.integers(1, 96))
@settings(max_examples=40, deadline=None)
def test_frontier_monotone(pair, n, m):
    n, m = sorted((n, m))
    x = parse_word(pair[0])
    coloring = parse_coloring(pair[1], x.glyphs)
    small, large = frontier(x, coloring, n), frontier(x, coloring, m)
    for c in coloring.colors:
        r_small, r_large = small.colors[c].reachable, large.colors[c].reachable
        assert 0 in r_small
        assert set(r_small) == {p for p in r_large if p <= n}


def test_bad_frontier_arguments(fib):
    with pytest.raises(PrefalError):
        frontier(fib, PREFIX_COLORING, 0)
    with pytest.raises(PrefalError):
        frontier(fib, PREFIX_COLORING, 16, window=17)


def test_report_summary_beyond_256(fib):
    body = frontier(fib, PREFIX_COLORING, 300).to_json()
    assert "reachable" not in body["colors"]["prefix"]
    assert body["colors"]["prefix"]["reachable_count"] > 0
