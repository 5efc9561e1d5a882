import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expreg import mso as m
from expreg.errors import CapExceeded, MissingMarkerColour, UnboundVariable
from expreg.words import Colouring, MarkedWord

from oracles import COLOUR_SETS, colourings, random_formula, words


def env_of(col=None, colours=None, **fo):
    mon = {} if col is None else {"X": Colouring(col, colours, 1)}
    return m.VariableEnv(fo, mon)


def test_letter_lookup():
    assert m.evaluate(m.Letter("a", "x"), "ab", env_of(x=1))
    assert not m.evaluate(m.Letter("a", "x"), "ab", env_of(x=2))


def test_no_witness():
    assert not m.evaluate(m.ExistsFO("x", m.Letter("a", "x")), "bbb")


def test_constant_colouring_witness():
    phi = m.ExistsMon("X", (0, 1), m.ForAll("x", m.MonEq("X", "x", 1)))
    for w in ["a", "ab", "bab"]:
        assert m.evaluate(phi, w)


def test_free_variable_must_be_bound():
    with pytest.raises(UnboundVariable):
        m.evaluate(m.Letter("a", "x"), "ab")


def test_marked_word_has_marker_positions():
    # first and last of the marked word are the markers
    phi = m.ExistsFO("x", m.And(m.First("x"), m.Letter("⊳", "x")))
    assert m.evaluate(phi, MarkedWord("ab"))


def test_quantifier_rank():
    assert m.quantifier_rank(m.Less("x", "y")) == 0
    assert m.quantifier_rank(m.ExistsFO("x", m.Letter("a", "x"))) == 1
    inner = m.ExistsFO("x", m.MonEq("X", "x", "c0"))
    assert m.quantifier_rank(m.ExistsMon("X", COLOUR_SETS[3], inner)) == 4


def test_sugar_evaluates_like_its_expansion():
    w = "abba"
    cases = [
        (m.ForAll("x", m.Letter("a", "x")), False),
        (m.ExistsFO("x", m.ExistsFO("y", m.Succ("x", "y"))), True),
        (m.ExistsFO("x", m.And(m.Last("x"), m.Letter("a", "x"))), True),
        (m.ForAll("x", m.Implies(m.First("x"), m.Letter("a", "x"))), True),
        (m.ExistsFO("x", m.Iff(m.Top("x"), m.Bottom("x"))), False),
    ]
    for phi, expected in cases:
        assert m.evaluate(phi, w) is expected
        assert m.is_core(m.desugar(phi))
        assert m.evaluate_naive(m.desugar(phi), w) is expected


def _all_envs(colours, n):
    for col in colourings(colours, n):
        yield col, m.VariableEnv({}, {"X": Colouring(col, colours, 1)})


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), size=st.integers(1, 4))
def test_generated_code_matches_interpreter(seed, size):
    colours = COLOUR_SETS[size]
    phi = random_formula(random.Random(seed), {"X": colours})
    for w in words("ab", 3):
        for _, env in _all_envs(colours, len(w)):
            assert m.evaluate(phi, w, env) == m.evaluate_naive(phi, w, env)


def test_binary_encoding_shape():
    phi = m.ExistsMon("X", COLOUR_SETS[4], m.ExistsFO("x", m.MonEq("X", "x", "c3")))
    enc = m.encode_monadic_to_binary(phi)
    assert enc == m.ExistsMon("X#0", m.BIT, m.ExistsMon("X#1", m.BIT, m.ExistsFO(
        "x", m.And(m.MonEq("X#0", "x", "1"), m.MonEq("X#1", "x", "1")))))


def test_binary_encoding_keeps_two_colour_formulas():
    phi = m.ExistsMon("X", ("p", "q"), m.ForAll("x", m.MonEq("X", "x", "q")))
    assert m.encode_monadic_to_binary(phi) == phi


def _bits(col, colours, width):
    idx = [colours.index(c) for c in col]
    return [tuple(m.BIT[(i >> b) & 1] for i in idx) for b in range(width)]


def test_binary_encoding_preserves_satisfaction_on_corpus():
    rng = random.Random(2024)
    for k in range(24):
        size = 1 + k % 4
        colours = COLOUR_SETS[size]
        phi = random_formula(rng, {"X": colours})
        enc = m.encode_monadic_to_binary(phi, {"X": colours})
        names = m.bit_names("X", size)
        for w in words("ab", 4):
            left = m.compile_predicate(phi, w, ["X"], colours)
            if size == 2:
                # two-colour variables are left as they are
                right = m.compile_predicate(enc, w, ["X"], colours)
            elif names:
                right = m.compile_predicate(enc, w, names, m.BIT)
            for col in colourings(colours, len(w)):
                want = left(col)
                if size == 2:
                    got = right(col)
                elif names:
                    got = right(*_bits(col, colours, len(names)))
                else:
                    got = m.evaluate(enc, w)
                assert want == got, (phi, w, col)


def test_encode_env_matches_manual_bits():
    colours = COLOUR_SETS[3]
    col = Colouring(("c2", "c0", "c1"), colours, 1)
    enc = m.encode_env(m.VariableEnv({}, {"X": col}))
    assert [enc.mon[n].values for n in m.bit_names("X", 3)] == _bits(col.values, colours, 2)


def test_relativize_leaves_atoms_alone():
    assert m.relativize_to_markers(m.Less("x", "y"), {}) == m.Less("x", "y")


def test_relativize_skips_marker_positions():
    phi = m.ExistsFO("x", m.Not(m.Letter("b", "x")))
    rel = m.relativize_to_markers(phi, {})
    assert not m.evaluate(phi, "b")
    assert not m.evaluate(rel, MarkedWord("b"))
    # without the guard the left marker would be a witness
    assert m.evaluate(phi, MarkedWord("b"))


def test_relativize_universal_dual():
    phi = m.ForAll("x", m.Letter("a", "x"))
    rel = m.relativize_to_markers(phi, {})
    for w in words("ab", 3):
        assert m.evaluate(phi, w) == m.evaluate(rel, MarkedWord(w))


def test_relativize_needs_marker_colours():
    with pytest.raises(MissingMarkerColour):
        m.relativize_to_markers(m.ExistsMon("Y", (0, 1), m.ExistsFO("x", m.MonEq("Y", "x", 0))), {})


def test_relativize_corpus():
    rng = random.Random(7)
    colours = COLOUR_SETS[2]
    for _ in range(20):
        phi = random_formula(rng, {"X": colours})
        names = {f.var for f in _walk(phi) if isinstance(f, (m.ExistsMon, m.ForAllMon))}
        mc = {"X": ("c0", "c0"), **{n: ("c0", "c0") for n in names}}
        rel = m.relativize_to_markers(phi, mc)
        for w in words("ab", 3):
            for col in colourings(colours, len(w)):
                plain = m.evaluate(phi, w, m.VariableEnv({}, {"X": Colouring(col, colours, 1)}))
                marked = m.evaluate(rel, MarkedWord(w), m.VariableEnv(
                    {}, {"X": m.extend_colouring(Colouring(col, colours, 1), "c0", "c0")}))
                assert plain == marked


def _walk(phi):
    yield phi
    for c in m.children(phi):
        yield from _walk(c)


def test_json_round_trip():
    rng = random.Random(11)
    for _ in range(30):
        phi = random_formula(rng, {"X": COLOUR_SETS[2]})
        assert m.from_json(m.to_json(phi)) == phi


def test_types_rank_zero_are_trivial():
    assert m.type_q("ab", q=0) == m.type_q("ba", q=0)


def test_types_rank_one():
    assert m.type_q("a", q=1) != m.type_q("b", q=1)
    assert m.type_q("aa", q=1) == m.type_q("aaa", q=1)


def test_type_cap():
    with pytest.raises(CapExceeded):
        m.type_q("aaaaa", q=1)
    with pytest.raises(CapExceeded):
        m.type_q("a", q=3)


def test_types_separate_what_rank_two_sentences_separate():
    # "some a is immediately followed by b" has rank 2
    phi = m.ExistsFO("x", m.ExistsFO("y", m.And(m.Succ("x", "y"), m.And(m.Letter("a", "x"), m.Letter("b", "y")))))
    seen = {}
    for w in words("ab", 4):
        t = m.type_q(w, q=2)
        if t in seen:
            assert m.evaluate(phi, w) == m.evaluate(phi, seen[t])
        seen[t] = w


def test_compositionality():
    short = list(words("ab", 3))
    for q in (1, 2):
        tp = {w: m.type_q(w, q=q, max_len=6) for w in words("ab", 6)}
        for u, u2 in itertools.product(short, repeat=2):
            if tp[u] != tp[u2]:
                continue
            for v in short:
                assert tp[u + v] == tp[u2 + v], (q, u, u2, v)
                assert tp[v + u] == tp[v + u2], (q, u, u2, v)
