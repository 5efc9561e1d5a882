import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expreg import althennie as ah
from expreg.errors import CapExceeded, VisitBoundExceeded
from expreg.words import LMARK, RIGHT, RMARK, STAY, PointedTape

AB = ("a", "b")


def const(value):
    return ah.AlternatingHennieAutomaton(AB, ("q",), "q", lambda q, a: ah.TRUE if value else ah.FALSE, 1)


def contains_a():
    # scan right; accept on reading a
    delta = {("q", LMARK): ah.Atom("q", LMARK, RIGHT), ("q", "a"): ah.TRUE,
             ("q", "b"): ah.Atom("q", "b", RIGHT)}
    return ah.AlternatingHennieAutomaton(AB, ("q",), "q", delta, 1, name="contains_a")


def test_constant_automata():
    for w in ["", "a", "abba"]:
        assert ah.ah_accepts(const(True), w)
        assert not ah.ah_accepts(const(False), w)


def test_missing_transition_is_false():
    H = ah.AlternatingHennieAutomaton(AB, ("q",), "q", {}, 1)
    assert not ah.ah_accepts(H, "a")


def test_language_enumeration():
    assert ah.language_upto(contains_a(), 2) == ["a", "aa", "ab", "ba"]
    assert ah.language_upto(const(False), 3) == []
    assert ah.language_upto(const(True), 1) == ["", "a", "b"]


def test_language_cap():
    with pytest.raises(CapExceeded):
        ah.language_upto(const(True), 5, max_words=10)


def test_conjunction_needs_every_branch():
    # both: a to the right and the word has length one (right neighbour is the marker)
    delta = {
        ("s", LMARK): ah.And([ah.Atom("isa", LMARK, RIGHT), ah.Atom("short", LMARK, RIGHT)]),
        ("isa", "a"): ah.TRUE,
        ("short", "a"): ah.Atom("end", "a", RIGHT),
        ("short", "b"): ah.Atom("end", "b", RIGHT),
        ("end", RMARK): ah.TRUE,
    }
    H = ah.AlternatingHennieAutomaton(AB, ("s", "isa", "short", "end"), "s", delta, 2)
    assert ah.language_upto(H, 2) == ["a"]


def test_off_tape_atoms_are_false():
    delta = {("q", LMARK): ah.Or([ah.Atom("q", LMARK, -1), ah.FALSE])}
    H = ah.AlternatingHennieAutomaton(AB, ("q",), "q", delta, 3)
    assert not ah.ah_accepts(H, "")


def test_visit_bound_enforced():
    loop = {("q", LMARK): ah.Atom("q", LMARK, STAY)}
    H = ah.AlternatingHennieAutomaton(AB, ("q",), "q", loop, 3)
    with pytest.raises(VisitBoundExceeded):
        ah.ah_accepts(H, "")


def test_lazy_disjunction_is_deterministic():
    calls = []

    def items():
        calls.append(1)
        yield ah.FALSE
        yield ah.TRUE

    H = ah.AlternatingHennieAutomaton(AB, ("q",), "q", lambda q, a: ah.Or(items), 1)
    assert ah.ah_accepts(H, "ab") and ah.ah_accepts(H, "ab")
    assert ah.ah_accepts(H, "ab", full=True)


def _random_positive(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return ah.Atom(rng.choice(["t", "f"]), LMARK, STAY)
    kids = [_random_positive(rng, depth - 1) for _ in range(rng.randint(1, 3))]
    return ah.And(kids) if rng.random() < 0.5 else ah.Or(kids)


def _strengthen(phi, rng):
    # flip one false leaf to true
    leaves = []

    def walk(f, path):
        if isinstance(f, ah.Atom):
            if f.state == "f":
                leaves.append(path)
            return
        for i, c in enumerate(f.items if isinstance(f, ah.And) else list(f)):
            walk(c, path + (i,))

    walk(phi, ())
    if not leaves:
        return phi
    target = rng.choice(leaves)

    def rebuild(f, path):
        if not path:
            return ah.Atom("t", LMARK, STAY)
        items = list(f.items if isinstance(f, ah.And) else f)
        items[path[0]] = rebuild(items[path[0]], path[1:])
        return ah.And(items) if isinstance(f, ah.And) else ah.Or(items)

    return rebuild(phi, target)


def _verdict(phi):
    delta = lambda q, a: phi if q == "s" else (ah.TRUE if q == "t" else ah.FALSE)
    H = ah.AlternatingHennieAutomaton(AB, ("s", "t", "f"), "s", delta, 100)
    return ah.ah_accepts_from(H, "s", PointedTape.of_word("", 0))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_positive_formulas_are_monotone(seed):
    rng = random.Random(seed)
    phi = _random_positive(rng, 3)
    if _verdict(phi):
        assert _verdict(_strengthen(phi, rng))


def test_json_round_trip():
    H = contains_a()
    back = ah.from_json(ah.to_json(H))
    assert ah.language_upto(back, 3) == ah.language_upto(H, 3)
    phi = ah.And([ah.Or([ah.Atom("q", "a", RIGHT), ah.TRUE]), ah.FALSE])
    assert ah.formula_from_json(ah.formula_to_json(phi)) == phi
