"""Alternating Hennie automata: transitions are positive Boolean formulas."""

import itertools
from dataclasses import dataclass

from .caps import MAX_NODES, scaled
from .errors import CapExceeded, InvalidModel, OutOfBounds, VisitBoundExceeded
from .words import LMARK, RMARK, Move, PointedTape, apply_move, as_word


class PosBool:
    pass


@dataclass(frozen=True)
class Atom(PosBool):
    state: object
    write: object
    move: Move

    def __post_init__(self):
        object.__setattr__(self, "move", Move.parse(self.move))


@dataclass(frozen=True)
class And(PosBool):
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


class Or(PosBool):
    """Disjunction; ``items`` is a sequence or a zero-argument callable yielding disjuncts."""

    def __init__(self, items):
        self._items = items if callable(items) else tuple(items)

    def __iter__(self):
        return iter(self._items()) if callable(self._items) else iter(self._items)

    @property
    def lazy(self):
        return callable(self._items)

    def __eq__(self, other):
        return isinstance(other, Or) and not self.lazy and not other.lazy and self._items == other._items

    def __hash__(self):
        return hash(("or", self._items if not self.lazy else id(self)))

    def __repr__(self):
        return "Or(<lazy>)" if self.lazy else f"Or({self._items!r})"


@dataclass(frozen=True)
class Const(PosBool):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class AlternatingHennieAutomaton:
    """``delta`` is a dict (state, symbol) -> PosBool or a function of both.

    ``decorate`` maps a letter of the marked word to its initial tape
    symbol; missing transitions evaluate to false.
    """

    sigma: tuple
    states: object
    initial: object
    delta: object
    visit_bound: int
    decorate: object = None
    name: str = ""
    origin: object = None

    def formula(self, state, symbol):
        if callable(self.delta):
            return self.delta(state, symbol)
        return self.delta.get((state, symbol), FALSE)

    def initial_tape(self, w):
        letters = (LMARK,) + as_word(w) + (RMARK,)
        if self.decorate is not None:
            letters = tuple(self.decorate(a) for a in letters)
        return PointedTape(letters, 0)


class _Evaluator:
    def __init__(self, H, full, max_nodes):
        self.H = H
        self.full = full
        self.cap = max_nodes if max_nodes is not None else scaled(MAX_NODES)
        self.nodes = 0
        self.memo = {}

    def accepts(self, state, tape, visits):
        pos = tape.pointer
        visits = visits[:pos] + (visits[pos] + 1,) + visits[pos + 1:]
        if visits[pos] > self.H.visit_bound:
            raise VisitBoundExceeded(
                f"position {pos} visited {visits[pos]} times (bound {self.H.visit_bound})",
                witness=(state, str(tape)))
        self.nodes += 1
        if self.nodes > self.cap:
            raise CapExceeded(f"evaluation exceeds {self.cap} nodes")
        key = (state, tape)
        if not self.full and key in self.memo:
            return self.memo[key]
        result = self.formula(self.H.formula(state, tape.current), tape, visits)
        if not self.full:
            self.memo[key] = result
        return result

    def formula(self, phi, tape, visits):
        if isinstance(phi, Const):
            return phi.value
        if isinstance(phi, Atom):
            try:
                child = apply_move(tape, phi.write, phi.move)
            except OutOfBounds:
                return False
            return self.accepts(phi.state, child, visits)
        if isinstance(phi, And):
            if self.full:
                return all([self.formula(p, tape, visits) for p in phi.items])
            return all(self.formula(p, tape, visits) for p in phi.items)
        if isinstance(phi, Or):
            if self.full:
                return any([self.formula(p, tape, visits) for p in phi])
            return any(self.formula(p, tape, visits) for p in phi)
        raise InvalidModel(f"not a positive Boolean formula: {phi!r}")


def ah_accepts_from(H, state, tape, full=False, max_nodes=None):
    """Acceptance from a configuration.

    With ``full`` every subformula is expanded (no short-circuit, no
    memoisation), which also checks the visit bound on every branch.
    """
    ev = _Evaluator(H, full, max_nodes)
    return ev.accepts(state, tape, (0,) * len(tape.cells))


def ah_accepts(H, w, full=False, max_nodes=None):
    return ah_accepts_from(H, H.initial, H.initial_tape(w), full=full, max_nodes=max_nodes)


def words_upto(sigma, max_len):
    for n in range(max_len + 1):
        for w in itertools.product(sigma, repeat=n):
            yield w


def language_upto(acceptor, max_len, sigma=None, max_words=None):
    """Accepted words of length at most ``max_len`` in length-lexicographic order."""
    from . import ariadne

    sigma = tuple(sigma if sigma is not None else acceptor.sigma)
    cap = max_words if max_words is not None else scaled(MAX_NODES)
    total = sum(len(sigma) ** n for n in range(max_len + 1))
    if total > cap:
        raise CapExceeded(f"{total} words exceed the cap {cap}")
    if isinstance(acceptor, AlternatingHennieAutomaton):
        test = lambda w: ah_accepts(acceptor, w)
    else:
        test = lambda w: ariadne.accepts(acceptor, w)
    return ["".join(w) for w in words_upto(sigma, max_len) if test(w)]


# serialisation of explicit automata


def formula_to_json(phi):
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Atom):
        return {"atom": [phi.state, phi.write, phi.move.name_str]}
    if isinstance(phi, And):
        return {"and": [formula_to_json(p) for p in phi.items]}
    if isinstance(phi, Or):
        return {"or": [formula_to_json(p) for p in phi]}
    raise InvalidModel(f"not a positive Boolean formula: {phi!r}")


def formula_from_json(data):
    if isinstance(data, bool):
        return TRUE if data else FALSE
    if "atom" in data:
        q, a, m = data["atom"]
        return Atom(q, a, Move.parse(m))
    if "and" in data:
        return And([formula_from_json(p) for p in data["and"]])
    if "or" in data:
        return Or([formula_from_json(p) for p in data["or"]])
    raise InvalidModel(f"bad formula {data!r}")


def to_json(H):
    if callable(H.delta):
        if H.origin is None:
            raise InvalidModel("generated automaton has no serialisable source")
        kind, source = H.origin
        return {"kind": "althennie", "name": H.name, "generator": kind, "source": source}
    return {
        "kind": "althennie",
        "name": H.name,
        "sigma": list(H.sigma),
        "states": list(H.states),
        "initial": H.initial,
        "visitBound": H.visit_bound,
        "delta": [{"state": q, "read": a, "formula": formula_to_json(f)} for (q, a), f in H.delta.items()],
    }


def from_json(data):
    if "generator" in data:
        from . import xlate
        return xlate.from_generator(data)
    delta = {(e["state"], e["read"]): formula_from_json(e["formula"]) for e in data["delta"]}
    return AlternatingHennieAutomaton(tuple(data["sigma"]), tuple(data["states"]), data["initial"],
                                      delta, int(data["visitBound"]), name=data.get("name", ""))
