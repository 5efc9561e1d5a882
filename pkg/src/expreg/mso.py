"""MSO over words with F-coloured monadic variables.

Core connectives are ExistsFO, ExistsMon, Or, Not and the atoms MonEq,
Less and Letter. Everything else is sugar that expands into the core
before evaluation or rank computation.
"""

import itertools
import math
from dataclasses import dataclass, field

from .errors import CapExceeded, ColourOutOfRange, MissingMarkerColour, UnboundVariable
from .words import Colouring, MarkedWord, as_word


class Formula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


# core


@dataclass(frozen=True)
class ExistsFO(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsMon(Formula):
    var: str
    colours: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "colours", tuple(self.colours))


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class MonEq(Formula):
    var: str
    pos: str
    colour: object


@dataclass(frozen=True)
class Less(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Letter(Formula):
    letter: object
    pos: str


# sugar


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForAllMon(Formula):
    var: str
    colours: tuple
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "colours", tuple(self.colours))


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Succ(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class First(Formula):
    pos: str


@dataclass(frozen=True)
class Last(Formula):
    pos: str


@dataclass(frozen=True)
class Top(Formula):
    """Always true; anchored on a first-order variable so no quantifier is needed."""

    pos: str


@dataclass(frozen=True)
class Bottom(Formula):
    pos: str


CORE = (ExistsFO, ExistsMon, Or, Not, MonEq, Less, Letter)


def conj(*fs):
    fs = list(fs)
    if not fs:
        raise ValueError("empty conjunction")
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs):
    fs = list(fs)
    if not fs:
        raise ValueError("empty disjunction")
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def exists(vars_, body):
    for v in reversed(vars_):
        body = ExistsFO(v, body)
    return body


def forall(vars_, body):
    for v in reversed(vars_):
        body = ForAll(v, body)
    return body


def _fresh(*taken):
    name = "_z"
    while name in taken:
        name += "'"
    return name


def desugar(phi):
    """Expand sugar into the core grammar."""
    t = type(phi)
    if t is ExistsFO:
        return ExistsFO(phi.var, desugar(phi.body))
    if t is ExistsMon:
        return ExistsMon(phi.var, phi.colours, desugar(phi.body))
    if t is Or:
        return Or(desugar(phi.left), desugar(phi.right))
    if t is Not:
        return Not(desugar(phi.body))
    if t in (MonEq, Less, Letter):
        return phi
    if t is And:
        return Not(Or(Not(desugar(phi.left)), Not(desugar(phi.right))))
    if t is Implies:
        return Or(Not(desugar(phi.left)), desugar(phi.right))
    if t is Iff:
        a, b = desugar(phi.left), desugar(phi.right)
        return Not(Or(Not(Or(Not(a), b)), Not(Or(Not(b), a))))
    if t is ForAll:
        return Not(ExistsFO(phi.var, Not(desugar(phi.body))))
    if t is ForAllMon:
        return Not(ExistsMon(phi.var, phi.colours, Not(desugar(phi.body))))
    if t is Equal:
        x, y = phi.left, phi.right
        return Not(Or(Less(x, y), Less(y, x)))
    if t is Succ:
        x, y = phi.left, phi.right
        z = _fresh(x, y)
        between = Not(Or(Not(Less(x, z)), Not(Less(z, y))))
        return Not(Or(Not(Less(x, y)), ExistsFO(z, between)))
    if t is First:
        z = _fresh(phi.pos)
        return Not(ExistsFO(z, Less(z, phi.pos)))
    if t is Last:
        z = _fresh(phi.pos)
        return Not(ExistsFO(z, Less(phi.pos, z)))
    if t is Top:
        return Not(Less(phi.pos, phi.pos))
    if t is Bottom:
        return Less(phi.pos, phi.pos)
    raise TypeError(f"not a formula: {phi!r}")


def is_core(phi):
    if type(phi) not in CORE:
        return False
    return all(is_core(c) for c in children(phi))


def children(phi):
    if isinstance(phi, (ExistsFO, ExistsMon, Not, ForAll, ForAllMon)):
        return (phi.body,)
    if isinstance(phi, (Or, And, Implies, Iff)):
        return (phi.left, phi.right)
    return ()


def quantifier_rank(phi):
    return _rank(desugar(phi))


def _rank(phi):
    t = type(phi)
    if t is ExistsFO:
        return _rank(phi.body) + 1
    if t is ExistsMon:
        return _rank(phi.body) + len(phi.colours)
    if t is Or:
        return max(_rank(phi.left), _rank(phi.right))
    if t is Not:
        return _rank(phi.body)
    return 0


def free_variables(phi):
    """Return (first-order, monadic) free variables of the desugared formula."""
    fo, mon = set(), set()

    def go(f, bfo, bmon):
        t = type(f)
        if t is ExistsFO:
            go(f.body, bfo | {f.var}, bmon)
        elif t is ExistsMon:
            go(f.body, bfo, bmon | {f.var})
        elif t in (Or,):
            go(f.left, bfo, bmon)
            go(f.right, bfo, bmon)
        elif t is Not:
            go(f.body, bfo, bmon)
        elif t is MonEq:
            if f.var not in bmon:
                mon.add(f.var)
            if f.pos not in bfo:
                fo.add(f.pos)
        elif t is Less:
            for v in (f.left, f.right):
                if v not in bfo:
                    fo.add(v)
        elif t is Letter:
            if f.pos not in bfo:
                fo.add(f.pos)

    go(desugar(phi), frozenset(), frozenset())
    return fo, mon


# semantics


@dataclass(frozen=True)
class Structure:
    letters: tuple
    offset: int

    @property
    def positions(self):
        return range(self.offset, self.offset + len(self.letters))

    def letter(self, p):
        return self.letters[p - self.offset]


def structure(w):
    if isinstance(w, Structure):
        return w
    if isinstance(w, MarkedWord):
        return Structure(w.letters, 0)
    return Structure(as_word(w), 1)


@dataclass
class VariableEnv:
    fo: dict = field(default_factory=dict)
    mon: dict = field(default_factory=dict)


def _env_tables(st, env):
    env = env or VariableEnv()
    mon = {}
    for name, col in env.mon.items():
        if not isinstance(col, Colouring):
            raise TypeError(f"monadic binding {name} is not a Colouring")
        if tuple(col.positions) != tuple(st.positions):
            raise ValueError(f"colouring {name} does not cover the positions of the word")
        mon[name] = (col.values, col.colours)
    for name, p in env.fo.items():
        if p not in st.positions:
            raise ValueError(f"position {p} of {name} outside the word")
    return dict(env.fo), mon


def evaluate(phi, w, env=None):
    st = structure(w)
    fo, mon = _env_tables(st, env)
    core = desugar(phi)
    _check_free(core, fo, {k: c for k, (_, c) in mon.items()})
    fn = _generate(core, st, sorted(fo), sorted(mon))
    return fn(*[fo[k] for k in sorted(fo)], *[_pad(st, mon[k][0]) for k in sorted(mon)])


def evaluate_naive(phi, w, env=None):
    """Reference evaluator interpreting the formula tree directly."""
    st = structure(w)
    fo, mon = _env_tables(st, env)
    return _interpret(desugar(phi), st)(fo, mon)


def _check_free(core, fo, mon_colours):
    free_fo, free_mon = free_variables(core)
    for v in free_fo:
        if v not in fo:
            raise UnboundVariable(v)
    for v in free_mon:
        if v not in mon_colours:
            raise UnboundVariable(v)

    def walk(f, scope):
        t = type(f)
        if t is ExistsMon:
            walk(f.body, {**scope, f.var: f.colours})
        elif t is MonEq:
            if f.colour not in scope[f.var]:
                raise ColourOutOfRange(f"{f.colour!r} not a colour of {f.var}")
        else:
            for c in children(f):
                walk(c, scope)
    walk(core, dict(mon_colours))


def _pad(st, values):
    # index generated code by position directly
    return (None,) * st.offset + tuple(values)


def _generate(core, st, fo_args, mon_args):
    """Translate a core formula into a Python function via generator expressions."""
    consts = []
    names = {}

    def const(value):
        consts.append(value)
        return f"K[{len(consts) - 1}]"

    def ident(kind, var):
        key = (kind, var)
        if key not in names:
            names[key] = f"{kind}{len(names)}"
        return names[key]

    n = len(st.letters)

    def gen(f):
        t = type(f)
        if t is Letter:
            return f"(L[{ident('v', f.pos)}] == {const(f.letter)})"
        if t is Less:
            return f"({ident('v', f.left)} < {ident('v', f.right)})"
        if t is MonEq:
            return f"({ident('M', f.var)}[{ident('v', f.pos)}] == {const(f.colour)})"
        if t is Not:
            return f"(not {gen(f.body)})"
        if t is Or:
            return f"({gen(f.left)} or {gen(f.right)})"
        if t is ExistsFO:
            return f"any({gen(f.body)} for {ident('v', f.var)} in P)"
        if t is ExistsMon:
            m = ident("M", f.var)
            return (f"any({gen(f.body)} for {m} in "
                    f"(PAD + c for c in product({const(tuple(f.colours))}, repeat={n})))")
        raise TypeError(f"not a core formula: {f!r}")

    body = gen(core)
    params = [ident("v", v) for v in fo_args] + [ident("M", v) for v in mon_args]
    src = f"def _f({', '.join(params)}):\n    return {body}\n"
    scope = {
        "K": tuple(consts),
        "L": (None,) * st.offset + tuple(st.letters),
        "P": tuple(st.positions),
        "PAD": (None,) * st.offset,
        "product": itertools.product,
    }
    exec(compile(src, "<mso>", "exec"), scope)
    return scope["_f"]


def _interpret(phi, st):
    t = type(phi)
    off = st.offset
    positions = st.positions
    if t is Letter:
        letter, x = phi.letter, phi.pos

        def f(fo, mon):
            try:
                return st.letters[fo[x] - off] == letter
            except KeyError:
                raise UnboundVariable(x) from None
        return f
    if t is Less:
        x, y = phi.left, phi.right

        def f(fo, mon):
            try:
                return fo[x] < fo[y]
            except KeyError as e:
                raise UnboundVariable(e.args[0]) from None
        return f
    if t is MonEq:
        X, x, c = phi.var, phi.pos, phi.colour

        def f(fo, mon):
            try:
                values, colours = mon[X]
            except KeyError:
                raise UnboundVariable(X) from None
            if c not in colours:
                raise ColourOutOfRange(f"{c!r} not a colour of {X}")
            try:
                return values[fo[x] - off] == c
            except KeyError:
                raise UnboundVariable(x) from None
        return f
    if t is Not:
        g = _interpret(phi.body, st)
        return lambda fo, mon: not g(fo, mon)
    if t is Or:
        a, b = _interpret(phi.left, st), _interpret(phi.right, st)
        return lambda fo, mon: a(fo, mon) or b(fo, mon)
    if t is ExistsFO:
        g, x = _interpret(phi.body, st), phi.var

        def f(fo, mon):
            inner = dict(fo)
            for p in positions:
                inner[x] = p
                if g(inner, mon):
                    return True
            return False
        return f
    if t is ExistsMon:
        g, X, colours = _interpret(phi.body, st), phi.var, phi.colours
        n = len(positions)

        def f(fo, mon):
            inner = dict(mon)
            for values in itertools.product(colours, repeat=n):
                inner[X] = (values, colours)
                if g(fo, inner):
                    return True
            return False
        return f
    raise TypeError(f"not a core formula: {phi!r}")


def compile_predicate(phi, w, mon_vars, colours):
    """Compile a formula whose free variables are the monadic ``mon_vars``.

    Returns a function taking one value tuple per variable, each indexed
    from the first position of the word.
    """
    st = structure(w)
    core = desugar(phi)
    colours = tuple(colours)
    _check_free(core, {}, {X: colours for X in mon_vars})
    fn = _generate(core, st, [], list(mon_vars))
    pad = (None,) * st.offset
    if len(mon_vars) == 1:
        return lambda v: fn(pad + v)
    return lambda *vs: fn(*[pad + v for v in vs])



# binary encoding of monadic variables

BIT = ("0", "1")


def bit_width(size):
    return math.ceil(math.log2(size)) if size > 1 else 0


def bit_names(var, size):
    return [f"{var}#{b}" for b in range(bit_width(size))]


def _code(var, size, index, pos):
    bits = [MonEq(name, pos, BIT[(index >> b) & 1]) for b, name in enumerate(bit_names(var, size))]
    return conj(*bits) if bits else Top(pos)


def encode_monadic_to_binary(phi, free_colours=None):
    """Replace every monadic variable over more than two colours by bit variables.

    ``free_colours`` maps free monadic variables to their colour sets; it is
    only needed when the formula has free monadic variables of size other
    than 2. Variables that already range over two colours are kept.
    """
    scope = dict(free_colours or {})
    return _encode(phi, scope)


def _encode(phi, scope):
    t = type(phi)
    if t in (ExistsMon, ForAllMon):
        colours = phi.colours
        inner = dict(scope)
        inner[phi.var] = colours
        body = _encode(phi.body, inner)
        if len(colours) == 2:
            return t(phi.var, colours, body)
        names = bit_names(phi.var, len(colours))
        if len(colours) != 1 << len(names):
            # unused codes must not produce spurious witnesses
            g = _fresh(*free_variables(body)[0])
            valid = ForAll(g, disj(*[_code(phi.var, len(colours), j, g) for j in range(len(colours))]))
            body = And(valid, body) if t is ExistsMon else Implies(valid, body)
        quant = ExistsMon if t is ExistsMon else ForAllMon
        for name in reversed(names):
            body = quant(name, BIT, body)
        return body
    if t is MonEq:
        colours = scope.get(phi.var)
        if colours is None:
            raise UnboundVariable(f"colour set of {phi.var} unknown")
        if len(colours) == 2:
            return phi
        if phi.colour not in colours:
            raise ColourOutOfRange(f"{phi.colour!r} not a colour of {phi.var}")
        return _code(phi.var, len(colours), colours.index(phi.colour), phi.pos)
    if t in (ExistsFO, ForAll):
        return t(phi.var, _encode(phi.body, scope))
    if t is Not:
        return Not(_encode(phi.body, scope))
    if t in (Or, And, Implies, Iff):
        return t(_encode(phi.left, scope), _encode(phi.right, scope))
    return phi


def encode_colouring(var, col):
    """Split one colouring into the bit colourings used by the encoding."""
    if len(col.colours) == 2:
        return {var: col}
    idx = [col.colours.index(v) for v in col.values]
    return {
        name: Colouring(tuple(BIT[(i >> b) & 1] for i in idx), BIT, col.offset)
        for b, name in enumerate(bit_names(var, len(col.colours)))
    }


def encode_env(env):
    mon = {}
    for var, col in env.mon.items():
        mon.update(encode_colouring(var, col))
    return VariableEnv(dict(env.fo), mon)


# marker relativisation


def relativize_to_markers(phi, marker_colours):
    """Relativise first-order quantifiers to the unmarked positions.

    ``marker_colours`` maps every monadic variable, free or bound, to its
    pair (f_left, f_right).
    """
    for var, pair in marker_colours.items():
        if len(pair) != 2:
            raise ValueError(f"marker colours of {var} must be a pair")
    return _relativize(desugar(phi), marker_colours, {})


def _inner(x):
    return Not(Or(First(x), Last(x)))


def _relativize(phi, mc, scope):
    t = type(phi)
    if t is ExistsFO:
        return ExistsFO(phi.var, And(_inner(phi.var), _relativize(phi.body, mc, scope)))
    if t is ExistsMon:
        if phi.var not in mc:
            raise MissingMarkerColour(phi.var)
        for c in mc[phi.var]:
            if c not in phi.colours:
                raise ColourOutOfRange(f"marker colour {c!r} not a colour of {phi.var}")
        return ExistsMon(phi.var, phi.colours, _relativize(phi.body, mc, {**scope, phi.var: True}))
    if t is Or:
        return Or(_relativize(phi.left, mc, scope), _relativize(phi.right, mc, scope))
    if t is Not:
        return Not(_relativize(phi.body, mc, scope))
    if t is MonEq and phi.var not in scope and phi.var not in mc:
        raise MissingMarkerColour(phi.var)
    return phi


def extend_colouring(col, left, right):
    """Extend a colouring of w to one of the marked word."""
    return Colouring((left,) + col.values + (right,), col.colours, 0)


# rank-q types


def type_q(w, env=None, q=1, max_q=2, max_len=4):
    """Canonical rank-q type of (w, env).

    Monadic colour sets are renamed to {0..|F|-1} so only their size
    matters. The value is nested tuples and frozensets, hence hashable.
    """
    if q < 0:
        raise ValueError("rank must be non-negative")
    if q > max_q or len(as_word(w)) > max_len:
        raise CapExceeded(f"type_q limited to q<={max_q}, |w|<={max_len}")
    st = structure(w)
    env = env or VariableEnv()
    fo_names = sorted(env.fo)
    mon_names = sorted(env.mon)
    fo0 = tuple(env.fo[n] for n in fo_names)
    mon0 = tuple(
        (len(env.mon[n].colours), tuple(env.mon[n].colours.index(v) for v in env.mon[n].values))
        for n in mon_names
    )
    positions = tuple(st.positions)
    off = st.offset
    memo = {}

    def diag(fo, mon):
        letters = tuple(st.letters[p - off] for p in fo)
        order = tuple((fo[i] > fo[j]) - (fo[i] < fo[j]) for i in range(len(fo)) for j in range(i + 1, len(fo)))
        colours = tuple((size, tuple(vals[p - off] for p in fo)) for size, vals in mon)
        return letters, order, colours

    def tp(r, fo, mon):
        key = (r, fo, mon)
        if key in memo:
            return memo[key]
        d = diag(fo, mon)
        if r == 0:
            out = (d,)
        else:
            fo_kids = frozenset(tp(r - 1, fo + (p,), mon) for p in positions)
            mon_kids = tuple(
                frozenset(
                    tp(r - m, fo, mon + ((m, vals),))
                    for vals in itertools.product(range(m), repeat=len(positions))
                )
                for m in range(1, r + 1)
            )
            out = (d, fo_kids, mon_kids)
        memo[key] = out
        return out

    return tp(q, fo0, mon0)


# JSON

_BINARY = {"or": Or, "and": And, "implies": Implies, "iff": Iff}
_PAIR = {"less": Less, "equal": Equal, "succ": Succ}
_UNARY_POS = {"first": First, "last": Last, "true": Top, "false": Bottom}


def to_json(phi):
    t = type(phi)
    if t is ExistsFO:
        return {"op": "existsFO", "var": phi.var, "body": to_json(phi.body)}
    if t is ForAll:
        return {"op": "forall", "var": phi.var, "body": to_json(phi.body)}
    if t is ExistsMon:
        return {"op": "existsMon", "var": phi.var, "colours": list(phi.colours), "body": to_json(phi.body)}
    if t is ForAllMon:
        return {"op": "forallMon", "var": phi.var, "colours": list(phi.colours), "body": to_json(phi.body)}
    if t is Not:
        return {"op": "not", "body": to_json(phi.body)}
    for name, cls in _BINARY.items():
        if t is cls:
            return {"op": name, "args": [to_json(phi.left), to_json(phi.right)]}
    for name, cls in _PAIR.items():
        if t is cls:
            return {"op": name, "args": [phi.left, phi.right]}
    for name, cls in _UNARY_POS.items():
        if t is cls:
            return {"op": name, "pos": phi.pos}
    if t is MonEq:
        return {"op": "monEq", "var": phi.var, "pos": phi.pos, "colour": phi.colour}
    if t is Letter:
        return {"op": "letter", "letter": phi.letter, "pos": phi.pos}
    raise TypeError(f"not a formula: {phi!r}")


def from_json(data):
    op = data["op"]
    if op == "existsFO":
        return ExistsFO(data["var"], from_json(data["body"]))
    if op == "forall":
        return ForAll(data["var"], from_json(data["body"]))
    if op == "existsMon":
        return ExistsMon(data["var"], tuple(data["colours"]), from_json(data["body"]))
    if op == "forallMon":
        return ForAllMon(data["var"], tuple(data["colours"]), from_json(data["body"]))
    if op == "not":
        return Not(from_json(data["body"]))
    if op in _BINARY:
        args = [from_json(a) for a in data["args"]]
        if len(args) < 2:
            raise ValueError(f"{op} needs at least two arguments")
        out = args[0]
        for a in args[1:]:
            out = _BINARY[op](out, a)
        return out
    if op in _PAIR:
        x, y = data["args"]
        return _PAIR[op](x, y)
    if op in _UNARY_POS:
        return _UNARY_POS[op](data["pos"])
    if op == "monEq":
        return MonEq(data["var"], data["pos"], data["colour"])
    if op == "letter":
        return Letter(data["letter"], data["pos"])
    raise ValueError(f"unknown formula op {op!r}")
