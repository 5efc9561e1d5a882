"""Yield-Hennie machines: branching one-tape machines with bounded visits."""

from dataclasses import dataclass, field

from .caps import MAX_NODES, scaled
from .errors import CapExceeded, InvalidModel, MarkerViolation, UnknownName, VisitBoundExceeded
from .words import LEFT, LMARK, RIGHT, RMARK, STAY, Move, PointedTape, apply_move, as_word


@dataclass(frozen=True)
class Emit:
    letter: object


@dataclass(frozen=True)
class Spawn:
    state: object
    write: object
    move: Move

    def __post_init__(self):
        object.__setattr__(self, "move", Move.parse(self.move))


@dataclass(frozen=True)
class YieldHennieMachine:
    sigma: tuple
    gamma: tuple
    states: tuple
    initial: object
    tape: tuple
    delta: dict
    visit_bound: int
    name: str = ""

    def step(self, state, symbol):
        return self.delta.get((state, symbol), ())

    def validate(self):
        for (q, a), out in self.delta.items():
            if q not in self.states:
                raise InvalidModel(f"unknown state {q!r}")
            if a not in self.tape:
                raise InvalidModel(f"unknown tape symbol {a!r}")
            for item in out:
                if isinstance(item, Emit):
                    if item.letter not in self.gamma:
                        raise InvalidModel(f"unknown output letter {item.letter!r}")
                else:
                    if item.state not in self.states or item.write not in self.tape:
                        raise InvalidModel(f"bad spawn {item!r}")
                    _check_marker(a, item)
        return self


def _check_marker(read, item):
    if read == LMARK and (item.write != LMARK or item.move == LEFT):
        raise MarkerViolation(f"at {LMARK} the spawn {item} must keep the marker and not move left")
    if read == RMARK and (item.write != RMARK or item.move == RIGHT):
        raise MarkerViolation(f"at {RMARK} the spawn {item} must keep the marker and not move right")


@dataclass
class Node:
    state: object
    tape: PointedTape
    children: list = field(default_factory=list)


@dataclass(frozen=True)
class Leaf:
    letter: object


def run_tree(M, w, max_nodes=None):
    """Build the run of ``M`` on ``w``; a node with no transition has no children."""
    cap = max_nodes if max_nodes is not None else scaled(MAX_NODES)
    word = as_word(w)
    root = Node(M.initial, PointedTape.of_word(word, 0))
    visits = [0] * (len(word) + 2)
    path = []
    count = [1]

    def build(node):
        pos = node.tape.pointer
        visits[pos] += 1
        path.append((node.state, pos))
        if visits[pos] > M.visit_bound:
            raise VisitBoundExceeded(
                f"position {pos} visited {visits[pos]} times on one branch (bound {M.visit_bound})",
                witness=list(path))
        read = node.tape.current
        for item in M.step(node.state, read):
            count[0] += 1
            if count[0] > cap:
                raise CapExceeded(f"run tree exceeds {cap} nodes")
            if isinstance(item, Emit):
                node.children.append(Leaf(item.letter))
                continue
            _check_marker(read, item)
            child = Node(item.state, apply_move(node.tape, item.write, item.move))
            node.children.append(child)
            build(child)
        visits[pos] -= 1
        path.pop()

    build(root)
    return root


def verify_tree(M, w, root):
    """Independently re-check a run tree against the machine; returns the node count."""
    word = as_word(w)
    if root.state != M.initial or root.tape != PointedTape.of_word(word, 0):
        raise InvalidModel("root does not match the initial configuration")
    count = 0
    stack = [(root, ())]
    while stack:
        node, branch = stack.pop()
        count += 1
        branch = branch + (node.tape.pointer,)
        if branch.count(node.tape.pointer) > M.visit_bound:
            raise VisitBoundExceeded("branch exceeds the visit bound", witness=branch)
        expected = M.step(node.state, node.tape.current)
        if len(expected) != len(node.children):
            raise InvalidModel(f"node {node.state} has the wrong number of children")
        for item, child in zip(expected, node.children):
            if isinstance(item, Emit):
                if child != Leaf(item.letter):
                    raise InvalidModel("leaf does not match emitted letter")
                count += 1
            else:
                if not isinstance(child, Node) or child.state != item.state:
                    raise InvalidModel("child state does not match transition")
                if child.tape != apply_move(node.tape, item.write, item.move):
                    raise InvalidModel("child tape does not match transition")
                stack.append((child, branch))
    return count


def yield_of(tree):
    out = []
    stack = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, Leaf):
            out.append(t.letter)
        elif isinstance(t, Node):
            stack.extend(reversed(t.children))
    return tuple(out)


def evaluate_yh(M, w, **kw):
    return "".join(map(str, yield_of(run_tree(M, w, **kw))))


def max_visits(M, w):
    """Largest per-branch visit count at any position."""
    word = as_word(w)
    big = YieldHennieMachine(M.sigma, M.gamma, M.states, M.initial, M.tape, M.delta, 10 ** 9)
    best = 0

    def go(node, counts):
        nonlocal best
        counts = dict(counts)
        counts[node.tape.pointer] = counts.get(node.tape.pointer, 0) + 1
        best = max(best, counts[node.tape.pointer])
        for c in node.children:
            if isinstance(c, Node):
                go(c, counts)

    go(run_tree(big, word), {})
    return best


# built-ins


def rev_prefix(sigma=("a", "b"), visit_bound=3):
    q0, q1 = "q0", "q1"
    delta = {(q0, LMARK): (Spawn(q0, LMARK, RIGHT),), (q0, RMARK): (), (q1, LMARK): ()}
    for s in sigma:
        delta[(q0, s)] = (Spawn(q1, s, LEFT), Spawn(q0, s, RIGHT))
        delta[(q1, s)] = (Emit(s), Spawn(q1, s, LEFT))
    return YieldHennieMachine(tuple(sigma), tuple(sigma), (q0, q1), q0,
                              (LMARK, RMARK) + tuple(sigma), delta, visit_bound, "rev_prefix")


def subwords(sigma=("a", "b")):
    # each position is gray, red or black in that order; only the red letter is remembered
    start, none = "start", "scan"
    with_red = {s: f"red:{s}" for s in sigma}
    delta = {(start, LMARK): (Spawn(none, LMARK, RIGHT),), (none, RMARK): ()}
    for s in sigma:
        delta[(none, s)] = (Spawn(none, s, RIGHT), Spawn(with_red[s], s, RIGHT), Spawn(none, s, RIGHT))
        delta[(with_red[s], RMARK)] = (Emit(s),)
        for t in sigma:
            delta[(with_red[s], t)] = (Spawn(with_red[s], t, RIGHT), Spawn(with_red[s], t, RIGHT))
    states = (start, none) + tuple(with_red.values())
    return YieldHennieMachine(tuple(sigma), tuple(sigma), states, start,
                              (LMARK, RMARK) + tuple(sigma), delta, 1, "subwords")


SEP = "#"


def selected(s):
    return s + "*"


def distribute(sigma=("a", "b", "c", "d", "e", "f", SEP)):
    """Choose one letter per block on the way right, then print the choices.

    Scan states record whether the current block is empty so far, still
    needs a choice, or is done, whether some choice was not the first
    letter of its block, and whether a separator was seen.
    """
    letters = [s for s in sigma if s != SEP]
    start, prt = "start", "print"

    def scan(blk, nm, h):
        return f"scan_{blk}{int(nm)}{int(h)}"

    def back(nm, h):
        return f"back_{int(nm)}{int(h)}"

    flags = [(nm, h) for nm in (0, 1) for h in (0, 1)]
    tape = (LMARK, RMARK, SEP) + tuple(letters) + tuple(selected(s) for s in letters)
    delta = {(start, LMARK): (Spawn(scan("e", 0, 0), LMARK, RIGHT),)}
    for nm, h in flags:
        for blk in "end":
            q = scan(blk, nm, h)
            for s in letters:
                if blk == "d":
                    delta[(q, s)] = (Spawn(q, s, RIGHT),)
                else:
                    delta[(q, s)] = (Spawn(scan("d", nm or blk == "n", h), selected(s), RIGHT),
                                     Spawn(scan("n", nm, h), s, RIGHT))
            if blk != "n":
                delta[(q, SEP)] = (Spawn(scan("e", nm, 1), SEP, RIGHT),)
                delta[(q, RMARK)] = (Spawn(back(nm, h), RMARK, LEFT),)
        b = back(nm, h)
        for t in tape[2:]:
            delta[(b, t)] = (Spawn(b, t, LEFT),)
        head = (Emit(SEP),) if nm and h else ()
        delta[(b, LMARK)] = head + (Spawn(prt, LMARK, RIGHT),)
    for s in letters:
        delta[(prt, selected(s))] = (Emit(s), Spawn(prt, selected(s), RIGHT))
        delta[(prt, s)] = (Spawn(prt, s, RIGHT),)
    delta[(prt, SEP)] = (Spawn(prt, SEP, RIGHT),)
    states = (start, prt) + tuple(scan(blk, nm, h) for nm, h in flags for blk in "end") + \
        tuple(back(nm, h) for nm, h in flags)
    return YieldHennieMachine(tuple(sigma), tuple(sigma), states, start, tape, delta, 3, "distribute")


BUILTINS = {"rev_prefix": rev_prefix, "subwords": subwords, "distribute": distribute}


def builtin_yh(name, sigma=None):
    try:
        make = BUILTINS[name.replace("-", "_")]
    except KeyError:
        raise UnknownName(f"no built-in machine {name!r}") from None
    return make() if sigma is None else make(tuple(sigma))


# serialisation


def to_json(M):
    entries = []
    for (q, a), out in M.delta.items():
        items = []
        for it in out:
            if isinstance(it, Emit):
                items.append({"emit": it.letter})
            else:
                items.append({"state": it.state, "write": it.write, "move": it.move.name_str})
        entries.append({"state": q, "read": a, "out": items})
    return {
        "kind": "yhennie",
        "name": M.name,
        "sigma": list(M.sigma),
        "gamma": list(M.gamma),
        "states": list(M.states),
        "initial": M.initial,
        "tape": list(M.tape),
        "visitBound": M.visit_bound,
        "delta": entries,
    }


def from_json(data):
    delta = {}
    for e in data["delta"]:
        items = []
        for it in e["out"]:
            if "emit" in it:
                items.append(Emit(it["emit"]))
            else:
                items.append(Spawn(it["state"], it["write"], Move.parse(it["move"])))
        delta[(e["state"], e["read"])] = tuple(items)
    tape = tuple(data["tape"])
    for m in (LMARK, RMARK):
        if m not in tape:
            tape = tape + (m,)
    return YieldHennieMachine(
        tuple(data.get("sigma") or [t for t in tape if t not in (LMARK, RMARK)]),
        tuple(data.get("gamma") or sorted({it.letter for out in delta.values() for it in out
                                           if isinstance(it, Emit)})),
        tuple(data["states"]), data["initial"], tape, delta, int(data["visitBound"]),
        data.get("name", ""),
    ).validate()
