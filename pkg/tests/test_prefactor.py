import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prefal.dsl import parse_word
from prefal.errors import PrefalError, StallError
from prefal.morphic import Morphism, apply
from prefal.oracle import oracle_extendable_factorizations
from prefal.prefactor import (Completeness, Status, analyze, classify_hierarchy, derive,
                              derived_chain, greedy_factorize, refine_prefixal, scan_up)
from prefal.words import Periodic, is_unbordered, uniform_recurrence_gap, word_isomorphic

from conftest import F_OF_TM, FIB, TEN_F, TM, ZERO_F


def w(text, base=0):
    return tuple(int(c) - base for c in text)


def strings(words, base=0):
    return ["".join(str(a + base) for a in u) for u in words]


def test_scan_up_examples(fib, tm):
    assert strings(scan_up(fib, 64).up_set) == ["0", "01"]
    assert strings(scan_up(tm, 64).up_set) == ["0", "01", "011"]
    ten_f = parse_word(TEN_F)
    assert scan_up(ten_f, 64).to_json(ten_f.glyphs)["up_set"] == ["1", "10", "100"]


def test_scan_up_members_are_unbordered_prefixes(corpus):
    for entry in corpus:
        x = parse_word(entry["spec"])
        a = scan_up(x, 128)
        for u in a.up_set:
            assert is_unbordered(u) and x.prefix(len(u)) == tuple(u)
        assert set(a.up_prime) <= set(a.up_set)


def test_greedy_factorize_examples(fib, trib):
    pieces = greedy_factorize(fib, analyze(fib), 16)
    # the printed 16-piece display does not concatenate to f past piece 13
    assert "".join(f"({p})" for p in strings(pieces[:13])) == \
        "(01)(0)(01)(01)(0)(01)(0)(01)(01)(0)(01)(01)(0)"
    assert "".join(strings(pieces)) == fib.text(sum(map(len, pieces)))
    pieces = greedy_factorize(trib, analyze(trib), 8)
    assert "".join(f"({p})" for p in strings(pieces, 1)) == \
        "(1213)(12)(1)(1213)(12)(1213)(12)(1)"


def test_zero_f_stalls():
    x = parse_word(ZERO_F)
    a = scan_up(x, 64)
    assert a.stall is not None and a.completeness is Completeness.BOUNDED
    with pytest.raises(StallError):
        greedy_factorize(x, a, 1000)


def test_derive_examples(fib, trib):
    assert derive(fib, analyze(fib)).text(19) == "1211212112112121121"
    assert derive(trib, analyze(trib)).text(18) == "123121231123121231"
    p = Periodic(w("01"))
    assert derive(p, analyze(p)).text(5) == "11111"


def test_fib_derived_is_isomorphic(fib):
    d = derive(fib, analyze(fib))
    assert word_isomorphic(d.prefix(19), fib.prefix(19)) == {0: 0, 1: 1}


def test_certification(trib, tm):
    a = analyze(trib)
    assert a.completeness is Completeness.CERTIFIED and a.N == 4
    a = analyze(tm)
    assert a.completeness is Completeness.CERTIFIED and strings(a.up_set) == ["0", "01", "011"]
    assert analyze(parse_word(TEN_F)).completeness is Completeness.BOUNDED
    assert analyze(parse_word("morphic(0->001,1->1;0)")).completeness is Completeness.BOUNDED


def test_derived_morphism_of_tribonacci_returns_original(trib):
    a = analyze(trib)
    assert a.witness.morphism == Morphism((w("012"), w("0"), w("1")), 3)
    d = derive(trib, a)
    a2 = analyze(d)
    assert a2.witness.morphism == trib.morphism


def test_chains(fib, trib):
    chain = derived_chain(fib, 4)
    assert chain.nu == [2, 2, 2, 2] and chain.cycle == (0, 1)
    chain = derived_chain(trib, 4)
    assert chain.nu == [4, 3, 4, 3] and chain.cycle == (0, 2)
    for spec in ("morphic(0->00001,1->0;0)", "morphic(0->00101,1->001;0)"):
        chain = derived_chain(parse_word(spec), 3)
        assert chain.nu == [5, 5, 5]
        assert all(level.analysis.certified for level in chain.levels)


def test_classify_thue_morse(tm, keys):
    v = classify_hierarchy(tm, 2, square_free_keys=keys)
    assert (v.status, v.n) == (Status.NOT_IN_P_N, 2)
    v = classify_hierarchy(tm, 2)
    assert v.status is not Status.NOT_IN_P_N


@pytest.mark.parametrize("power", [0, 1, 2])
def test_hierarchy_strictness(power, keys):
    x = parse_word(TM)
    for _ in range(power):
        x = apply(Morphism((w("01"), w("0")), 2), x)
    v = classify_hierarchy(x, power + 3, square_free_keys=keys)
    assert (v.status, v.n) == (Status.NOT_IN_P_N, power + 2)
    assert v.member_through == power + 1


def test_unresolved_and_bounded():
    v = classify_hierarchy(parse_word(TEN_F), 4)
    assert v.status is Status.UNRESOLVED and v.member_through == 1
    assert classify_hierarchy(parse_word(ZERO_F), 4).member_through == 0


def _certified_entries(corpus):
    out = []
    for entry in corpus:
        x = parse_word(entry["spec"])
        if analyze(x).certified:
            out.append((entry["name"], x))
    return out


def test_phi_reconstruction(corpus):
    for name, x in _certified_entries(corpus):
        a = analyze(x)
        d = derive(x, a)
        codes = d.prefix(512)
        rebuilt = tuple(s for c in codes for s in a.up_prime[c])
        assert rebuilt[:512] == x.prefix(512), name


def test_precedence_order(corpus):
    for entry in corpus:
        chain = derived_chain(parse_word(entry["spec"]), entry.get("depth", 4))
        for level in chain.levels[1:]:
            seen = list(dict.fromkeys(level.word.prefix(2048)))
            assert seen == sorted(seen), entry["name"]


def test_uniqueness_oracle(corpus):
    # every extendable factorization over UP equals the greedy one
    for name, x in _certified_entries(corpus):
        a = analyze(x)
        greedy = [tuple(u) for u in greedy_factorize(x, a, 64)]
        cuts = {0}
        total = 0
        for u in greedy:
            total += len(u)
            cuts.add(total)
        longest = max(len(u) for u in a.up_set)
        for p in range(1, 21):
            found = oracle_extendable_factorizations(x.prefix(20 + 2 * longest + 4), a.up_set,
                                                     p, longest, cap=64)
            if p in cuts:
                head = []
                acc = 0
                for u in greedy:
                    if acc == p:
                        break
                    head.append(u)
                    acc += len(u)
                assert found == [tuple(head)], (name, p)
            else:
                assert found == [], (name, p)


def test_refine_prefixal(trib, tm, fib):
    for x in (trib, tm, fib):
        a = analyze(x)
        m = x.morphism
        pieces = [m(u) for u in greedy_factorize(x, a, 6)]
        refined = refine_prefixal(x, pieces, a)
        assert len(refined) == len(pieces)
        flat = tuple(c for v in refined for c in v)
        assert flat == derive(x, a).prefix(len(flat))
        for v, piece in zip(refined, pieces):
            assert tuple(s for c in v for s in a.up_prime[c]) == tuple(piece)


def test_refine_prefixal_rejects_inner_cut(tm):
    a = analyze(tm)
    with pytest.raises(PrefalError):
        refine_prefixal(tm, [w("01"), w("1")], a)


def test_uniform_recurrence_of_p_infinity_words(corpus, keys):
    for entry in corpus:
        if entry.get("expect", {}).get("verdict") != "InPInfinity_Certified":
            continue
        x = parse_word(entry["spec"])
        factors = {x.prefix(4096)[i:i + k] for k in range(1, 9) for i in range(0, 512)}
        for u in factors:
            assert uniform_recurrence_gap(x, u, 4096) is not None, (entry["name"], u)


def test_nu_two_rigidity(corpus, fib):
    # ν ≡ 2 is only known once a certified cycle pins the whole sequence
    target = fib.prefix(1024)
    hits = 0
    for entry in corpus:
        x = parse_word(entry["spec"])
        v = classify_hierarchy(x, 6)
        if v.status is Status.IN_P_INFINITY and set(v.chain.nu) == {2}:
            hits += 1
            assert word_isomorphic(x.prefix(1024), target) is not None, entry["name"]
    assert hits >= 2


def test_nu_two_prefix_alone_is_not_enough(fib):
    x = parse_word("sturm(dir=(01)*;pre=1010;chain=L0 R1)")
    chain = derived_chain(x, 4)
    assert chain.nu == [2, 2, 2, 2]
    assert word_isomorphic(x.prefix(1024), fib.prefix(1024)) is None
    v = classify_hierarchy(x, 6)
    assert (v.status, v.n) == (Status.NOT_IN_P_N, 5)


def test_cache_is_bound_specific():
    x = parse_word(FIB)
    assert analyze(x, 8).bound == 8 and analyze(x, 16).bound == 16


@given(st.sampled_from([FIB, TM, "morphic(1->12,2->13,3->1;1)", "periodic(0010)",
                        "morphic(0->00101,1->001;0)"]), st.integers(1, 200))
@settings(max_examples=50, deadline=None)
def test_greedy_pieces_rebuild_prefix(spec, m):
    x = parse_word(spec)
    a = analyze(x)
    pieces = greedy_factorize(x, a, m)
    assert len(pieces) == m and all(tuple(u) in a.up_set for u in pieces)
    flat = tuple(s for u in pieces for s in u)
    assert flat == x.prefix(len(flat))


def test_bad_arguments(fib):
    with pytest.raises(PrefalError):
        scan_up(fib, 1)
    with pytest.raises(PrefalError):
        derived_chain(fib, 0)


def test_f_of_t_prefix():
    assert parse_word(F_OF_TM).text(23) == "01000100101000101001000"
