import pytest

from expreg import setinterp as si
from expreg import yhennie as yh
from expreg.errors import CapExceeded, InvalidModel, MarkerViolation, VisitBoundExceeded
from expreg.words import LEFT, LMARK, RIGHT, RMARK

from oracles import rev_prefix_ref, subword_multiset, words, yh_subwords

DIST = ("a", "b", "#")


def count_nodes(t):
    if isinstance(t, yh.Leaf):
        return 1
    return 1 + sum(count_nodes(c) for c in t.children)


@pytest.mark.parametrize("name,w,out", [
    ("rev_prefix", "aabb", "aaabaa"),
    ("rev_prefix", "", ""),
    ("rev_prefix", "a", ""),
    ("subwords", "ab", "baab"),
    ("distribute", "ab#cd", "ac#ad#bc#bd"),
])
def test_builtin_values(name, w, out):
    assert yh.evaluate_yh(yh.builtin_yh(name), w) == out


def test_empty_transitions_give_empty_yield():
    M = yh.YieldHennieMachine(("a",), ("a",), ("q",), "q", (LMARK, RMARK, "a"), {}, 1)
    tree = yh.run_tree(M, "aaa")
    assert tree.children == [] and yh.yield_of(tree) == ()


def test_yield_skips_inner_nodes():
    root = yh.Node("q", None, [yh.Leaf("a"), yh.Node("p", None, []), yh.Leaf("b")])
    assert "".join(yh.yield_of(root)) == "ab"


def test_rev_prefix_matches_reference():
    M = yh.rev_prefix()
    for w in words("ab", 6):
        assert yh.evaluate_yh(M, w) == rev_prefix_ref(w)


def test_subwords_decompose_into_subword_multiset():
    M = yh.subwords()
    for w in words("ab", 5):
        assert yh_subwords(M, w) == subword_multiset(w)


@pytest.mark.parametrize("name,sigma,max_len", [
    ("rev_prefix", "ab", 6), ("subwords", "ab", 6), ("distribute", DIST, 5),
])
def test_machines_agree_with_interpretations(name, sigma, max_len):
    M = yh.builtin_yh(name, tuple(sigma))
    phi = si.builtin_interpretation(name, tuple(sigma))
    for w in words(sigma, max_len):
        assert yh.evaluate_yh(M, w) == si.evaluate_interp(phi, w), w


@pytest.mark.parametrize("name,sigma", [("rev_prefix", "ab"), ("subwords", "ab"), ("distribute", DIST)])
def test_trees_reverify_and_respect_bounds(name, sigma):
    M = yh.builtin_yh(name, tuple(sigma))
    # a branch has at most k(|w|+2) inner nodes, each with at most b children
    b = max(2, max(len(out) for out in M.delta.values()))
    for w in words(sigma, 5):
        tree = yh.run_tree(M, w)
        assert yh.verify_tree(M, w, tree) == count_nodes(tree)
        assert count_nodes(tree) <= b ** (M.visit_bound * (len(w) + 2) + 1)
        assert yh.max_visits(M, w) <= M.visit_bound


def test_declared_bounds_are_tight():
    assert yh.max_visits(yh.rev_prefix(), "abab") == 2
    assert yh.max_visits(yh.subwords(), "abab") == 1
    assert yh.max_visits(yh.distribute(DIST), "ab#a") == 3


def test_lowered_bound_is_detected():
    M = yh.rev_prefix(visit_bound=1)
    with pytest.raises(VisitBoundExceeded) as e:
        yh.run_tree(M, "ab")
    assert e.value.witness


def test_node_cap():
    with pytest.raises(CapExceeded):
        yh.run_tree(yh.subwords(), "abab", max_nodes=10)


def test_marker_rules():
    bad = {("q", LMARK): (yh.Spawn("q", LMARK, LEFT),)}
    M = yh.YieldHennieMachine(("a",), (), ("q",), "q", (LMARK, RMARK, "a"), bad, 2)
    with pytest.raises(MarkerViolation):
        M.validate()
    with pytest.raises(MarkerViolation):
        yh.run_tree(M, "a")
    bad = {("q", RMARK): (yh.Spawn("q", RMARK, RIGHT),)}
    with pytest.raises(MarkerViolation):
        yh.YieldHennieMachine(("a",), (), ("q",), "q", (LMARK, RMARK, "a"), bad, 2).validate()


def test_validate_rejects_unknown_state():
    delta = {("q", LMARK): (yh.Spawn("zz", LMARK, RIGHT),)}
    with pytest.raises(InvalidModel):
        yh.YieldHennieMachine(("a",), (), ("q",), "q", (LMARK, RMARK, "a"), delta, 2).validate()


def test_verify_tree_catches_tampering():
    M = yh.rev_prefix()
    tree = yh.run_tree(M, "ab")
    tree.children[0].children.append(yh.Leaf("a"))
    with pytest.raises(InvalidModel):
        yh.verify_tree(M, "ab", tree)


@pytest.mark.parametrize("name", sorted(yh.BUILTINS))
def test_json_round_trip(name):
    M = yh.builtin_yh(name)
    back = yh.from_json(yh.to_json(M))
    assert back == M
