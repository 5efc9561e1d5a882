"""Ariadne transducers and automata.

A stack is a tuple of (state, position) pairs over the marked word. The
machine reads the letter under the top position together with the local
view there, and either pushes a new entry or pops the top while updating
the entry beneath it.
"""

import itertools
from dataclasses import dataclass

from .errors import (
    InvalidModel,
    NonInflationaryUpdate,
    SafetyCapExceeded,
    UnknownName,
    VisitBoundExceeded,
)
from .words import LEFT, LMARK, RIGHT, RMARK, STAY, MarkedWord, Move, as_word


@dataclass(frozen=True)
class Push:
    move: Move
    state: object

    def __post_init__(self):
        object.__setattr__(self, "move", Move.parse(self.move))


@dataclass(frozen=True)
class Pop:
    update: tuple  # sorted (state, new state) pairs

    def __post_init__(self):
        items = self.update.items() if isinstance(self.update, dict) else self.update
        object.__setattr__(self, "update", tuple(sorted(items, key=lambda kv: str(kv[0]))))
        object.__setattr__(self, "_map", dict(self.update))

    def apply(self, state):
        return self._map.get(state)

    @property
    def mapping(self):
        return dict(self.update)


def transitive_closure(pairs):
    closure = set(pairs)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            return frozenset(closure)
        closure |= extra


@dataclass(frozen=True)
class AriadneTransducer:
    """An Ariadne transducer, or automaton when ``accepting`` is set.

    ``delta`` is a dict keyed by (letter, view) or a function of those two
    arguments; ``order`` is a set of (smaller, larger) pairs or a function
    deciding p < q. Generated machines keep their source in ``origin``.
    """

    sigma: tuple
    gamma: tuple
    states: tuple
    order: object
    initial: object
    bound: int
    delta: object
    accepting: frozenset = None
    name: str = ""
    max_production: int = None
    origin: object = None
    # raise instead of halting when a consulted view exceeds the bound
    strict_bound: bool = False

    def less(self, p, q):
        if callable(self.order):
            return self.order(p, q)
        return (p, q) in self.order

    def step(self, letter, view):
        if callable(self.delta):
            return self.delta(letter, tuple(view))
        return self.delta.get((letter, tuple(view)))

    @property
    def is_automaton(self):
        return self.accepting is not None

    @property
    def production_bound(self):
        if self.max_production is not None:
            return self.max_production
        return max((len(prod) for prod, _ in self.delta.values()), default=0)

    def validate(self):
        if self.initial not in self.states:
            raise InvalidModel("unknown initial state")
        if callable(self.delta):
            return self
        for p, q in self.order:
            if (q, p) in self.order or p == q:
                raise InvalidModel(f"state order is not strict at {p!r}, {q!r}")
        for (letter, view), (prod, action) in self.delta.items():
            if len(view) > self.bound:
                raise InvalidModel(f"view {view} longer than bound {self.bound}")
            for q in view:
                if q not in self.states:
                    raise InvalidModel(f"unknown state {q!r} in view")
            for g in prod:
                if g not in self.gamma:
                    raise InvalidModel(f"unknown output letter {g!r}")
            if isinstance(action, Pop):
                for p, q in action.update:
                    if not self.less(p, q):
                        raise NonInflationaryUpdate(f"update {p!r} -> {q!r} is not inflationary")
            elif action.state not in self.states:
                raise InvalidModel(f"unknown pushed state {action.state!r}")
        return self


def make_transducer(sigma, gamma, states, order, initial, bound, delta, accepting=None, name=""):
    return AriadneTransducer(
        tuple(sigma), tuple(gamma), tuple(states), transitive_closure(order), initial, bound,
        dict(delta), None if accepting is None else frozenset(accepting), name,
    ).validate()


def local_view(stack, i):
    return tuple(q for q, pos in stack if pos == i)


def stack_less(A, s, t):
    """Partial lexicographic order on stacks, positions ignored."""
    for (p, _), (q, _) in zip(s, t):
        if p == q:
            continue
        return A.less(p, q)
    return len(s) < len(t)


def successor_stack(A, w, s):
    """Return (successor, production) or None."""
    word = as_word(w)
    letters = MarkedWord(word).letters
    last = len(word) + 1
    state, i = s[-1]
    view = local_view(s, i)
    if len(view) > A.bound:
        return None
    found = A.step(letters[i], view)
    if found is None:
        return None
    prod, action = found
    if isinstance(action, Push):
        j = i + action.move.value
        if not 0 <= j <= last:
            return None
        nxt = s + ((action.state, j),)
    else:
        if len(s) < 2:
            return None
        p, j = s[-2]
        q = action.apply(p)
        if q is None:
            return None
        nxt = s[:-2] + ((q, j),)
    if not stack_less(A, s, nxt):
        raise NonInflationaryUpdate(f"successor {nxt} is not above {s}")
    return nxt, tuple(prod)


def safety_cap(A, w):
    """Number of state sequences of length 1..(|w|+2)k; stacks along a run have distinct ones."""
    q, n = len(A.states), (len(as_word(w)) + 2) * A.bound
    return n if q == 1 else (q ** (n + 1) - q) // (q - 1)


def iter_run(A, w, max_steps=None, check=True):
    """Yield (stack, production) along the run; the last stack produces nothing.

    Local views are maintained incrementally rather than recomputed.
    """
    word = as_word(w)
    letters = MarkedWord(word).letters
    last = len(word) + 1
    cap = safety_cap(A, word)
    if max_steps is not None:
        cap = min(cap, max_steps)
    views = [[] for _ in range(last + 1)]
    stack = [(A.initial, 0)]
    views[0].append(A.initial)
    steps = 1
    while True:
        state, i = stack[-1]
        view = views[i]
        if len(view) > A.bound and A.strict_bound:
            raise VisitBoundExceeded(f"local view of length {len(view)} exceeds bound {A.bound}",
                                     witness=tuple(stack))
        found = A.step(letters[i], tuple(view)) if len(view) <= A.bound else None
        nxt = None
        if found is not None:
            prod, action = found
            if isinstance(action, Push):
                j = i + action.move.value
                if 0 <= j <= last:
                    nxt = ("push", action.state, j)
            elif len(stack) >= 2:
                p, j = stack[-2]
                q = action.apply(p)
                if q is not None:
                    nxt = ("pop", q, j)
        if nxt is None:
            yield tuple(stack), ()
            return
        yield tuple(stack), tuple(prod)
        kind, q, j = nxt
        if kind == "push":
            stack.append((q, j))
            views[j].append(q)
        else:
            p = stack[-2][0]
            stack.pop()
            views[i].pop()
            stack[-1] = (q, j)
            views[j][-1] = q
            if check and not A.less(p, q):
                raise NonInflationaryUpdate(f"pop update {p!r} -> {q!r} is not inflationary")
        steps += 1
        if steps > cap:
            raise SafetyCapExceeded(f"run exceeds {cap} stacks")


def run_ariadne(A, w, max_steps=None):
    stacks, out = [], []
    for s, prod in iter_run(A, w, max_steps=max_steps):
        stacks.append(s)
        out.extend(prod)
    return stacks, tuple(out)


def evaluate_ariadne(A, w, **kw):
    return "".join(map(str, run_ariadne(A, w, **kw)[1]))


def accepts(A, w, max_steps=None):
    if A.accepting is None:
        raise InvalidModel("not an automaton: no accepting states")
    acc = A.accepting
    for s, _ in iter_run(A, w, max_steps=max_steps):
        if any(q in acc for q, _ in s):
            return True
    return False


# built-ins

ORDER3 = [("0", "1"), ("1", "2")]
NEXT = {"0": "1", "1": "2"}


def _subwords_delta(sigma, on_selected):
    """Counter on row one, selection sweep on row two.

    ``on_selected(letter)`` returns the (production, action) used when a
    selected position is popped during the printing sweep.
    """
    nxt = Pop(NEXT)
    delta = {
        (LMARK, ("0",)): ((), Push(RIGHT, "0")),
        (LMARK, ("0", "0")): ((), nxt),
        (RMARK, ("0",)): ((), Push(LEFT, "0")),
        (RMARK, ("1",)): ((), nxt),
    }
    for s in sigma:
        for d in "01":
            # lay the counter row or refill it with zeros after an increment
            delta[(s, (d,))] = ((), Push(RIGHT, "0"))
            delta[(s, (d, "0"))] = ((), Push(LEFT, "0"))
        delta[(s, ("2",))] = ((), nxt)
        delta[(s, ("0", "1"))] = ((), nxt)
        delta[(s, ("1", "1"))] = on_selected(s)
    return delta


def subwords(sigma=("a", "b")):
    delta = _subwords_delta(sigma, lambda s: ((s,), Pop(NEXT)))
    return make_transducer(sigma, sigma, ("0", "1", "2"), ORDER3, "0", 2, delta, name="subwords")


def subwords_acceptor(sigma=("a", "b"), target="a"):
    """The subword enumerator as an acceptor: accept once ``target`` is printed."""
    delta = _subwords_delta(
        sigma, lambda s: ((), Push(STAY, "acc")) if s == target else ((), Pop(NEXT)))
    return make_transducer(sigma, (), ("0", "1", "2", "acc"), ORDER3, "0", 3, delta,
                           accepting={"acc"}, name=f"subwords_acceptor_{target}")


def constant_acceptor(sigma=("a", "b"), accept=True):
    """Accepts everything (initial state accepting) or nothing."""
    return make_transducer(sigma, (), ("0",), [], "0", 1, {}, accepting={"0"} if accept else set(),
                           name="all" if accept else "empty")


@dataclass(frozen=True)
class DFA:
    """Deterministic automaton over letters (sigma, bits) with bits an n-tuple."""

    states: tuple
    initial: object
    accepting: frozenset
    delta: dict  # (state, sigma, bits) -> state

    def run(self, word, bits):
        p = self.initial
        for s, b in zip(word, bits):
            p = self.delta[(p, s, tuple(b))]
        return p in self.accepting


def dfa_from_predicate(sigma, n, states, initial, accepting, step):
    delta = {}
    for p in states:
        for s in sigma:
            for b in itertools.product((0, 1), repeat=n):
                delta[(p, s, b)] = step(p, s, b)
    return DFA(tuple(states), initial, frozenset(accepting), delta)


def build_subset_enumerator(D, n, sigma):
    """Acceptor guessing n bit rows by enumeration and running ``D`` on each guess.

    Counter rows are laid left to right and each is followed by a return
    row back to the left marker; the top of the stack then sweeps right
    simulating ``D``. Popping a finished sweep increments the innermost
    counter, and an overflowing row unwinds into the row before it.
    """
    sigma = tuple(sigma)
    dstate = {p: f"d:{p}" for p in D.states}
    done, acc = "X", "acc"
    states = ("0", "1", "2", done, acc) + tuple(dstate.values())
    order = list(ORDER3) + [(d, done) for d in dstate.values()]
    update = Pop({"0": "1", "1": "2", **{d: done for d in dstate.values()}})
    k = max(2 * n + 1, n + 2)
    delta = {}
    start_sweep = Push(RIGHT, dstate[D.initial])

    def put(letter, view, action, prod=()):
        delta[(letter, tuple(view))] = (tuple(prod), action)

    # left marker: views are [initial, return_1, ..., return_j]
    for j in range(n + 1):
        for tail in ("0", "1"):
            view = ["0"] * j + [tail]
            if tail == "0":
                put(LMARK, view, Push(RIGHT, "0") if j < n else start_sweep)
            elif j >= 1:
                put(LMARK, view, update)
    # right marker: views are [row_1, ..., row_j] or [row_1..row_n, sweep]
    for j in range(1, n + 1):
        put(RMARK, ["0"] * (j - 1) + ["0"], Push(LEFT, "0"))
        put(RMARK, ["0"] * (j - 1) + ["1"], update)
    for p, d in dstate.items():
        view = ["0"] * n + [d]
        put(RMARK, view, Push(STAY, acc) if p in D.accepting else update)
    # inner positions: [row_1, ret_1, ..., row_j(, ret_j)(, sweep)]
    for s in sigma:
        for j in range(1, n + 1):
            for digits in itertools.product("01", repeat=j - 1):
                below = [x for d in digits for x in (d, "0")]
                for top in "01":
                    put(s, below + [top], Push(RIGHT, "0"))
                put(s, below + ["2"], update)
                for top in "01":
                    put(s, below + [top, "0"], Push(LEFT, "0"))
                    put(s, below + [top, "1"], update)
        for digits in itertools.product("01", repeat=n):
            below = [x for d in digits for x in (d, "0")]
            bits = tuple(int(d) for d in digits)
            for p, d in dstate.items():
                put(s, below + [d], Push(RIGHT, dstate[D.delta[(p, s, bits)]]))
            put(s, below + [done], update)
    return make_transducer(sigma, (), states, order, "0", k, delta, accepting={acc},
                           name=f"subset_enumerator_{n}")


BUILTINS = {"subwords": subwords}


def builtin_ariadne(name, sigma=None):
    try:
        make = BUILTINS[name.replace("-", "_")]
    except KeyError:
        raise UnknownName(f"no built-in Ariadne transducer {name!r}") from None
    return make() if sigma is None else make(tuple(sigma))


# serialisation


def _action_json(action):
    if isinstance(action, Push):
        return {"push": action.move.name_str, "state": action.state}
    return {"pop": [[p, q] for p, q in action.update]}


def _action_from(data):
    if "push" in data:
        return Push(Move.parse(data["push"]), data["state"])
    pairs = data["pop"]
    return Pop(pairs.items() if isinstance(pairs, dict) else [tuple(x) for x in pairs])


def to_json(A):
    if callable(A.delta):
        if A.origin is None:
            raise InvalidModel("rule-based transducer has no serialisable source")
        kind, source = A.origin
        return {"kind": "ariadne", "name": A.name, "generator": kind, "source": source}
    data = {
        "kind": "ariadne-automaton" if A.is_automaton else "ariadne",
        "name": A.name,
        "sigma": list(A.sigma),
        "gamma": list(A.gamma),
        "states": list(A.states),
        "order": sorted([list(e) for e in _reduce(A.order)]),
        "initial": A.initial,
        "bound": A.bound,
        "delta": [
            {"letter": letter, "view": list(view), "produce": list(prod), "action": _action_json(act)}
            for (letter, view), (prod, act) in A.delta.items()
        ],
    }
    if A.is_automaton:
        data["accepting"] = sorted(A.accepting)
    return data


def _reduce(order):
    # drop edges implied by transitivity to keep files small
    return {(a, b) for a, b in order
            if not any((a, c) in order and (c, b) in order for c in {x for _, x in order})}


def from_json(data):
    if "generator" in data:
        from . import xlate
        return xlate.from_generator(data)
    delta = {}
    for e in data["delta"]:
        delta[(e["letter"], tuple(e["view"]))] = (tuple(e.get("produce", ())), _action_from(e["action"]))
    acc = data.get("accepting")
    return make_transducer(
        data.get("sigma", ()), data.get("gamma", ()), data["states"], [tuple(e) for e in data["order"]],
        data["initial"], int(data["bound"]), delta, accepting=acc, name=data.get("name", ""),
    )
