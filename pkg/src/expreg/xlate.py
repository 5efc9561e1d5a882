"""Translations between the models and a differential tester."""

import itertools
from dataclasses import dataclass

from . import althennie as ah
from . import ariadne as ar
from . import setinterp as si
from . import yhennie as yh
from .errors import InvalidModel
from .words import LEFT, LMARK, RIGHT, RMARK, STAY, Move, as_word

TOP = "⊤"


# yield-Hennie machine -> Ariadne transducer


@dataclass(frozen=True)
class Exp:
    """A node of the simulated run together with its children still to visit."""

    state: object
    rest: tuple

    def __str__(self):
        parts = []
        for item in self.rest:
            if isinstance(item, yh.Emit):
                parts.append(str(item.letter))
            else:
                parts.append(f"({item.state},{item.write},{item.move.symbol})")
        return f"{self.state}|{''.join(parts)}"


def yh_to_ariadne(M):
    """Depth-first traversal of the run tree: descend by push, return by pop."""
    if TOP in M.states:
        raise InvalidModel(f"machine state {TOP} clashes with the reserved top state")
    exps = set()
    for (p, _), out in M.delta.items():
        out = tuple(out)
        for i in range(len(out) + 1):
            exps.add(Exp(p, out[i:]))
    for p in M.states:
        exps.add(Exp(p, ()))
    states = (TOP,) + tuple(M.states) + tuple(sorted(exps, key=str))
    finish = ar.Pop({q: TOP for q in M.states})
    nextchild = ar.Pop({e: Exp(e.state, e.rest[1:]) for e in exps if e.rest})
    qset = frozenset(M.states)

    def less(a, b):
        if b == TOP:
            return a != TOP
        if isinstance(a, Exp) and isinstance(b, Exp):
            return len(a.rest) > len(b.rest)
        return False

    for upd in (finish, nextchild):
        for p, q in upd.update:
            assert less(p, q), f"update {p} -> {q} is not inflationary"

    def delta(letter, view):
        top = view[-1]
        if top == TOP:
            return (), nextchild
        if isinstance(top, Exp):
            if not top.rest:
                return (), finish
            head = top.rest[0]
            if isinstance(head, yh.Emit):
                return (head.letter,), ar.Push(STAY, TOP)
            return (), ar.Push(head.move, head.state)
        if top in qset:
            # the cell holds whatever the latest suspended node here wrote
            theta = letter
            for e in reversed(view[:-1]):
                if isinstance(e, Exp) and e.rest and isinstance(e.rest[0], yh.Spawn):
                    theta = e.rest[0].write
                    break
            return (), ar.Push(STAY, Exp(top, tuple(M.step(top, theta))))
        return None

    return ar.AriadneTransducer(
        M.sigma, M.gamma, states, less, M.initial, 2 * M.visit_bound + 1, delta,
        name=f"traversal({M.name})", max_production=1, origin=("traversal", yh.to_json(M)),
        strict_bound=True,
    )


# Ariadne automaton -> alternating Hennie automaton


def _pop_updates(A, letters=None):
    if callable(A.delta):
        raise InvalidModel("the construction needs a tabulated transition function")
    found = []
    for (letter, _), (_, act) in A.delta.items():
        if isinstance(act, ar.Pop) and (letters is None or letter in letters) and act not in found:
            found.append(act)
    return found


def _fresh_update(A, used):
    """The everywhere-undefined update if unused, else the first unused one."""
    for size in range(len(A.states) + 1):
        for dom in itertools.combinations(A.states, size):
            for img in itertools.product(A.states, repeat=size):
                f = ar.Pop(zip(dom, img))
                if f not in used:
                    return f
    raise InvalidModel("no unused update")


@dataclass(frozen=True)
class HStates:
    """States of the constructed automaton: pairs (state, update)."""

    base: tuple
    updates: tuple

    def __contains__(self, item):
        return isinstance(item, tuple) and len(item) == 2 and item[0] in self.base and item[1] in self.updates

    def __len__(self):
        return len(self.base) * len(self.updates)

    def __iter__(self):
        return iter(itertools.product(self.base, self.updates))


def ariadne_to_althennie(A):
    """Alternating automaton guessing how each pushed sub-run returns.

    A state (q, f) on tape (letter, view) asserts that the run from the
    current stack either accepts or ends with a pop by f. Disjuncts guess
    the successive top states at this position; conjuncts check each
    excursion above.
    """
    if A.accepting is None:
        raise InvalidModel("not an automaton")
    pops = _pop_updates(A)
    f0 = _fresh_update(A, set(_pop_updates(A, {LMARK})))
    never = _fresh_update(A, set(pops))
    updates = tuple(pops)
    acc = A.accepting

    def delta(state, symbol):
        q, f = state
        sigma, v = symbol

        def disjuncts():
            def extend(chain, atoms):
                qj = chain[-1]
                found = A.step(sigma, v + (qj,))
                if qj in acc or (found and isinstance(found[1], ar.Pop) and found[1] == f):
                    yield ah.And(atoms)
                if not found or not isinstance(found[1], ar.Push):
                    return
                act = found[1]
                write = (sigma, v + (qj,))
                # the excursion itself accepts; it need not come back
                yield ah.And(atoms + [ah.Atom((act.state, never), write, act.move)])
                for fj in updates:
                    nxt = fj.apply(qj)
                    if nxt is None or nxt in chain:
                        continue
                    yield from extend(chain + [nxt], atoms + [ah.Atom((act.state, fj), write, act.move)])

            return extend([q], [])

        return ah.Or(disjuncts)

    states = HStates(tuple(A.states), tuple(dict.fromkeys(updates + (f0, never))))
    return ah.AlternatingHennieAutomaton(
        A.sigma, states, (A.initial, f0), delta, A.bound + 1,
        decorate=lambda a: (a, ()), name=f"alternation({A.name})",
        origin=("alternation", ar.to_json(A)),
    )


# stacks as colourings of the marked word


def canonical_encoding(stack, length):
    """Per-position sequences of (state, direction); the top gets the stationary direction."""
    cells = [[] for _ in range(length)]
    for t, (q, i) in enumerate(stack):
        if t + 1 < len(stack):
            step = stack[t + 1][1] - i
            if step not in (-1, 0, 1):
                raise InvalidModel("consecutive stack positions differ by more than one")
            move = Move(step)
        else:
            move = STAY
        cells[i].append((q, move))
    return tuple(tuple(c) for c in cells)


def enumerate_locations(cells):
    """Run the location enumeration; returns the visited (state, pos, dir) or None on failure."""
    if not cells or not cells[0]:
        return None
    heights = [0] * len(cells)
    out = []
    i = 0
    while True:
        h = heights[i] + 1
        if len(cells[i]) < h:
            break
        q, move = cells[i][h - 1]
        heights[i] = h
        out.append((q, i, move))
        j = i + move.value
        if not 0 <= j < len(cells):
            return None
        i = j
    if sum(heights) != sum(len(c) for c in cells):
        return None
    return out


def induced_stack(cells, w=None):
    if w is not None and len(cells) != len(as_word(w)) + 2:
        return None
    locs = enumerate_locations(cells)
    if locs is None:
        return None
    return tuple((q, i) for q, i, _ in locs)


def has_canonical_top(cells):
    locs = enumerate_locations(cells)
    return locs is not None and locs[-1][2] == STAY


_RUNS = {}


def _index_for(A, w):
    # transducers hold dicts and are not hashable, so cache by identity
    word = as_word(w)
    key = (id(A), word)
    hit = _RUNS.get(key)
    if hit is not None and hit[0] is A:
        return hit[1]
    stacks, prods = [], []
    for s, prod in ar.iter_run(A, word):
        stacks.append(s)
        prods.append(prod)
    data = (stacks, prods, {s: p for p, s in enumerate(stacks)})
    if len(_RUNS) > 256:
        _RUNS.clear()
    _RUNS[key] = (A, data)
    return data


@dataclass(frozen=True)
class AriadneConfiguration:
    cells: tuple
    j: int
    stack_index: int
    letter: object

    @property
    def values(self):
        return tuple((c, self.j) for c in self.cells)


def ariadne_configurations(A, w):
    word = as_word(w)
    stacks, prods, _ = _index_for(A, word)
    out = []
    for p, (s, prod) in enumerate(zip(stacks, prods)):
        cells = canonical_encoding(s, len(word) + 2)
        for j in range(1, len(prod) + 1):
            out.append(AriadneConfiguration(cells, j, p, prod[j - 1]))
    return out


def locate(A, w, values):
    """Decide whether a colouring is a configuration; returns (p, j) or None."""
    word = as_word(w)
    if len(values) != len(word) + 2:
        return None
    js = {v[1] for v in values}
    if len(js) != 1:
        return None
    j = js.pop()
    cells = tuple(v[0] for v in values)
    locs = enumerate_locations(cells)
    if locs is None or locs[-1][2] != STAY:
        return None
    stack = tuple((q, i) for q, i, _ in locs)
    stacks, prods, index = _index_for(A, word)
    p = index.get(stack)
    if p is None or not 1 <= j <= len(prods[p]):
        return None
    return p, j


def is_configuration(A, w, values):
    return locate(A, w, values) is not None


@dataclass(frozen=True)
class ColourSpace:
    """F1 x {1..n}: sequences of at most ``bound`` (state, direction) pairs, paired with j."""

    states: tuple
    bound: int
    n: int

    def __contains__(self, item):
        try:
            seq, j = item
        except (TypeError, ValueError):
            return False
        if not (isinstance(j, int) and 1 <= j <= self.n) or len(seq) > self.bound:
            return False
        return all(q in self.states and isinstance(m, Move) for q, m in seq)

    @property
    def f1_size(self):
        base = 3 * len(self.states)
        return sum(base ** m for m in range(self.bound + 1))

    def __len__(self):
        return self.f1_size * self.n

    def __iter__(self):
        moves = (LEFT, STAY, RIGHT)
        for m in range(self.bound + 1):
            for seq in itertools.product(itertools.product(self.states, moves), repeat=m):
                for j in range(1, self.n + 1):
                    yield (seq, j)

    def __getitem__(self, i):
        return next(itertools.islice(iter(self), i, None))

    def index(self, item):
        for i, c in enumerate(self):
            if c == item:
                return i
        raise ValueError(item)


def ariadne_to_setinterp(A):
    """Procedure-backed interpretation on the marked word whose configurations encode run stacks."""
    n = A.production_bound
    colours = ColourSpace(tuple(A.states), A.bound, n)

    def conf(word, values):
        return is_configuration(A, word, values)

    def less(word, a, b):
        x, y = locate(A, word, a), locate(A, word, b)
        return x is not None and y is not None and x < y

    def letter_pred(g):
        def pred(word, values):
            loc = locate(A, word, values)
            if loc is None:
                return False
            _, prods, _ = _index_for(A, word)
            p, j = loc
            return prods[p][j - 1] == g
        return pred

    def candidates(word):
        for c in ariadne_configurations(A, word):
            yield c.values

    letters = {g: si.Oracle(letter_pred(g), f"letter {g}") for g in A.gamma}
    return si.SetInterpretation(
        colours, A.sigma, A.gamma, si.Oracle(conf, "is_configuration"), si.Oracle(less, "run order"),
        letters, marked=True, candidates=candidates, name=f"stacks({A.name})",
    )


# differential testing


def run_model(model, w):
    if isinstance(model, si.SetInterpretation):
        return si.evaluate_interp(model, w)
    if isinstance(model, yh.YieldHennieMachine):
        return yh.evaluate_yh(model, w)
    if isinstance(model, ar.AriadneTransducer):
        if model.is_automaton:
            return ar.accepts(model, w)
        return ar.evaluate_ariadne(model, w)
    if isinstance(model, ah.AlternatingHennieAutomaton):
        return ah.ah_accepts(model, w)
    raise InvalidModel(f"unsupported model {type(model).__name__}")


@dataclass(frozen=True)
class DiffReport:
    ok: bool
    word: tuple = None
    left: object = None
    right: object = None
    checked: int = 0

    def __str__(self):
        if self.ok:
            return "OK"
        return f"DIFF {''.join(self.word)}: {_show(self.left)} != {_show(self.right)}"


def _show(result):
    if isinstance(result, bool):
        return "ACCEPT" if result else "REJECT"
    return repr(result)


def difftest(left, right, sigma, max_len):
    from .caps import MAX_NODES, scaled
    from .errors import CapExceeded

    sigma = tuple(sigma)
    total = sum(len(sigma) ** n for n in range(max_len + 1))
    if total > scaled(MAX_NODES):
        raise CapExceeded(f"{total} words to test")
    count = 0
    for w in ah.words_upto(sigma, max_len):
        a, b = run_model(left, w), run_model(right, w)
        count += 1
        if a != b:
            return DiffReport(False, w, a, b, count)
    return DiffReport(True, checked=count)


# generated models in files


def from_generator(data):
    kind = data["generator"]
    source = data["source"]
    if kind == "traversal":
        return yh_to_ariadne(yh.from_json(source))
    if kind == "alternation":
        return ariadne_to_althennie(ar.from_json(source))
    if kind == "stacks":
        return ariadne_to_setinterp(ar.from_json(source))
    raise InvalidModel(f"unknown generator {kind!r}")
