"""MSO set interpretations: colourings as output positions."""

import functools
import itertools
import random
from dataclasses import dataclass, field, replace

from . import mso
from .caps import CHECK_LIMIT, MAX_COLOURINGS, scaled
from .errors import (
    AlreadyMarked,
    CapExceeded,
    NotTotalOrder,
    OracleBacked,
    PartitionViolation,
    UnknownName,
)
from .mso import (
    And, Equal, ExistsFO, First, ForAll, Implies, Last, Less, Letter, MonEq, Not, Or,
    conj, disj, exists, forall,
)
from .words import Colouring, MarkedWord, as_word


@dataclass(frozen=True)
class Oracle:
    """A predicate given as a procedure ``fn(word, *value_tuples) -> bool``."""

    fn: object
    name: str = "oracle"

    def __call__(self, word, *values):
        return bool(self.fn(word, *values))


@dataclass(frozen=True)
class SetInterpretation:
    colours: tuple
    sigma: tuple
    gamma: tuple
    conf: object
    less: object
    letters: dict
    marked: tuple = None
    # optional superset of the configurations, used to skip hopeless colourings
    candidates: object = field(default=None, compare=False)
    name: str = ""

    @property
    def formula_backed(self):
        provs = [self.conf, self.less, *self.letters.values()]
        return all(isinstance(p, mso.Formula) for p in provs)


@dataclass(frozen=True)
class Configuration:
    colouring: Colouring
    letter: object

    @property
    def values(self):
        return self.colouring.values


def _structure_word(phi, w):
    return MarkedWord(w) if phi.marked else as_word(w)


def _predicate(provider, target, word, arity, colours):
    if isinstance(provider, mso.Formula):
        names = ("X", "Y")[:arity]
        return mso.compile_predicate(provider, target, names, colours)
    if callable(provider):
        return lambda *values: bool(provider(word, *values))
    raise TypeError(f"bad predicate provider {provider!r}")


def _compiled(phi, w):
    word = as_word(w)
    target = _structure_word(phi, word)
    conf = _predicate(phi.conf, target, word, 1, phi.colours)
    less = _predicate(phi.less, target, word, 2, phi.colours)
    letters = [(g, _predicate(p, target, word, 1, phi.colours)) for g, p in phi.letters.items()]
    return word, target, conf, less, letters


def configurations(phi, w, mode="auto", max_colourings=None, exhaustive=False, rng=None):
    """All configurations of ``phi`` on ``w`` in output order.

    ``mode`` is "check", "trust" or "auto" (check below the configured
    limit). With ``exhaustive`` the candidate hint is ignored and every
    colouring is tried.
    """
    word, target, conf, less, letters = _compiled(phi, w)
    n = len(word) + 2 if phi.marked else len(word)
    offset = 0 if phi.marked else 1
    if phi.candidates is not None and not exhaustive:
        pool = phi.candidates(word)
    else:
        cap = max_colourings if max_colourings is not None else scaled(MAX_COLOURINGS)
        if len(phi.colours) ** n > cap:
            raise CapExceeded(f"{len(phi.colours)}^{n} colourings exceed the cap {cap}")
        pool = itertools.product(phi.colours, repeat=n)
    found = list(dict.fromkeys(v for v in map(tuple, pool) if conf(v)))

    def cmp(a, b):
        if a == b:
            return 0
        ab, ba = less(a, b), less(b, a)
        if ab and not ba:
            return -1
        if ba and not ab:
            return 1
        raise NotTotalOrder(f"less does not order {a} and {b}", witness=(a, b))

    found.sort(key=functools.cmp_to_key(cmp))
    if mode == "auto":
        mode = "check" if len(found) < CHECK_LIMIT else "trust"
    if mode == "check":
        _check_order(found, less)
    elif mode == "trust":
        _sample_order(found, less, rng or random.Random(0))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    out = []
    for v in found:
        hits = [g for g, p in letters if p(v)]
        if len(hits) != 1:
            raise PartitionViolation(
                f"configuration {v} satisfies {len(hits)} letter predicates", witness=v)
        out.append(Configuration(Colouring(v, phi.colours, offset), hits[0]))
    return out


def _check_order(found, less):
    # after sorting, index order must coincide with less; that is a strict total order
    for a in found:
        if less(a, a):
            raise NotTotalOrder(f"less is reflexive on {a}", witness=(a, a))
    for i, a in enumerate(found):
        for b in found[i + 1:]:
            if not less(a, b) or less(b, a):
                raise NotTotalOrder(f"less is not total/transitive on {a}, {b}", witness=(a, b))


def _sample_order(found, less, rng, samples=200):
    for a, b in zip(found, found[1:]):
        if not less(a, b) or less(b, a):
            raise NotTotalOrder(f"adjacent configurations out of order: {a}, {b}", witness=(a, b))
    if len(found) < 2:
        return
    for _ in range(samples):
        i, j = sorted(rng.sample(range(len(found)), 2))
        if not less(found[i], found[j]):
            raise NotTotalOrder("sampled pair out of order", witness=(found[i], found[j]))


def evaluate_interp(phi, w, **kw):
    return "".join(str(c.letter) for c in configurations(phi, w, **kw))


def evaluate_tokens(phi, w, **kw):
    return tuple(c.letter for c in configurations(phi, w, **kw))


# markers


def to_marked(phi, markers=None):
    """Rewrite an interpretation to run on the marked word."""
    if phi.marked:
        raise AlreadyMarked("interpretation is already marked")
    if not phi.formula_backed:
        raise OracleBacked("cannot relativise procedure-backed predicates")
    left, right = markers or (phi.colours[0], phi.colours[0])
    mc = {v: (left, right) for v in _monadic_names(phi)}

    def rel(f):
        return mso.relativize_to_markers(f, mc)

    ends = And(ExistsFO("x", And(First("x"), MonEq("X", "x", left))),
               ExistsFO("x", And(Last("x"), MonEq("X", "x", right))))
    cands = None
    if phi.candidates is not None:
        base = phi.candidates

        def cands(word):
            for v in base(word):
                yield (left,) + tuple(v) + (right,)
    return replace(
        phi,
        conf=And(rel(phi.conf), ends),
        less=rel(phi.less),
        letters={g: rel(p) for g, p in phi.letters.items()},
        marked=(left, right),
        candidates=cands,
        name=phi.name + "^marked" if phi.name else "",
    )


def _monadic_names(phi):
    names = {"X", "Y"}

    def walk(f):
        if isinstance(f, (mso.ExistsMon, mso.ForAllMon)):
            names.add(f.var)
        for c in mso.children(f):
            walk(c)
    for p in (phi.conf, phi.less, *phi.letters.values()):
        walk(p)
    return names


# built-ins


def _is(X, x, *cols):
    return disj(*[MonEq(X, x, c) for c in cols])


def _unique(X, x, cols):
    """Exactly one position carries a colour in ``cols``; binds the witness to x."""
    return And(_is(X, x, *cols), ForAll("u", Implies(_is(X, "u", *cols), Equal("u", x))))


def _letter_at(sigma, X, colour):
    return {s: ExistsFO("x", And(MonEq(X, "x", colour), Letter(s, "x"))) for s in sigma}


def rev_prefix(sigma=("a", "b")):
    g, r, b = "gray", "red", "black"
    conf = exists(["x", "y"], conj(Less("y", "x"), _unique("X", "x", [b]), _unique("X", "y", [r])))
    less = exists(
        ["x", "x'"],
        conj(
            MonEq("X", "x", b),
            MonEq("Y", "x'", b),
            Or(
                Less("x", "x'"),
                And(Equal("x", "x'"),
                    exists(["y", "y'"], conj(MonEq("X", "y", r), MonEq("Y", "y'", r), Less("y'", "y")))),
            ),
        ),
    )

    def cands(word):
        n = len(word)
        for x in range(n):
            for y in range(x):
                v = [g] * n
                v[x], v[y] = b, r
                yield tuple(v)

    return SetInterpretation((g, r, b), tuple(sigma), tuple(sigma), conf, less,
                             _letter_at(sigma, "X", r), candidates=cands, name="rev_prefix")


def subwords(sigma=("a", "b")):
    g, r, b = "gray", "red", "black"
    conf = ExistsFO("x", _unique("X", "x", [r]))
    order = [(g, r), (g, b), (r, b)]
    smaller = disj(*[And(MonEq("X", "x", c), MonEq("Y", "x", d)) for c, d in order])
    agree = disj(*[And(MonEq("X", "y", c), MonEq("Y", "y", c)) for c in (g, r, b)])
    less = ExistsFO("x", And(smaller, ForAll("y", Implies(Less("y", "x"), agree))))

    def cands(word):
        n = len(word)
        for x in range(n):
            for rest in itertools.product((g, b), repeat=n - 1):
                yield rest[:x] + (r,) + rest[x:]

    return SetInterpretation((g, r, b), tuple(sigma), tuple(sigma), conf, less,
                             _letter_at(sigma, "X", r), candidates=cands, name="subwords")


SEP = "#"


def distribute(sigma=("a", "b", "c", "d", "e", "f", SEP)):
    g, s, S, H = "g", "s", "S", "H"
    sigma = tuple(sigma)
    if SEP not in sigma:
        raise ValueError("distribute needs the separator # in its alphabet")
    hashx = Letter(SEP, "x")

    def sep(v):
        return Letter(SEP, v)

    def same_block(x, y):
        # no separator between x and y, endpoints included
        return conj(Not(sep(x)), Not(sep(y)),
                    ForAll("z", Implies(Or(And(Not(Less("z", x)), Not(Less(y, "z"))),
                                           And(Not(Less("z", y)), Not(Less(x, "z")))),
                                        Not(sep("z")))))

    def sel(X, v):
        return _is(X, v, s, S)

    not_minimal = exists(["x", "y"], conj(sel("X", "x"), same_block("x", "y"), Less("y", "x")))
    conf = conj(
        ForAll("x", Implies(hashx, _is("X", "x", g, H))),
        ForAll("x", Implies(Not(hashx), _is("X", "x", g, s, S))),
        ForAll("x", Implies(Not(hashx), ExistsFO("y", And(same_block("x", "y"), sel("X", "y"))))),
        forall(["x", "y"], Implies(conj(sel("X", "x"), sel("X", "y"), same_block("x", "y")),
                                   Equal("x", "y"))),
        ExistsFO("x", _unique("X", "x", [S, H])),
        ForAll("x", Implies(MonEq("X", "x", H),
                            And(Not(ExistsFO("y", And(Less("y", "x"), sep("y")))), not_minimal))),
    )
    # selection vectors compared position-wise, selected before unselected
    vec_differ = And(sel("X", "x"), Not(sel("Y", "x")))
    vec_agree = Implies(Less("y", "x"), Or(And(sel("X", "y"), sel("Y", "y")),
                                           And(Not(sel("X", "y")), Not(sel("Y", "y")))))
    vec_less = ExistsFO("x", And(vec_differ, ForAll("y", vec_agree)))
    vec_same = ForAll("x", Or(And(sel("X", "x"), sel("Y", "x")), And(Not(sel("X", "x")), Not(sel("Y", "x")))))
    h_first = And(ExistsFO("x", MonEq("X", "x", H)), ExistsFO("x", MonEq("Y", "x", S)))
    s_order = exists(["x", "y"], conj(MonEq("X", "x", S), MonEq("Y", "y", S), Less("x", "y")))
    less = Or(vec_less, And(vec_same, Or(h_first, s_order)))
    letters = {c: ExistsFO("x", And(MonEq("X", "x", S), Letter(c, "x"))) for c in sigma if c != SEP}
    letters[SEP] = ExistsFO("x", MonEq("X", "x", H))

    def cands(word):
        blocks, cur = [], []
        for i, c in enumerate(word):
            if c == SEP:
                blocks.append(cur)
                cur = []
            else:
                cur.append(i)
        blocks.append(cur)
        blocks = [bl for bl in blocks if bl]
        seps = [i for i, c in enumerate(word) if c == SEP]
        for choice in itertools.product(*blocks):
            base = [g] * len(word)
            for i in choice:
                base[i] = s
            if seps:
                v = list(base)
                v[seps[0]] = H
                yield tuple(v)
            for i in choice:
                v = list(base)
                v[i] = S
                yield tuple(v)

    return SetInterpretation((g, s, S, H), sigma, sigma, conf, less, letters,
                             candidates=cands, name="distribute")


BUILTINS = {"rev_prefix": rev_prefix, "subwords": subwords, "distribute": distribute}


def builtin_interpretation(name, sigma=None):
    try:
        make = BUILTINS[name.replace("-", "_")]
    except KeyError:
        raise UnknownName(f"no built-in interpretation {name!r}") from None
    return make() if sigma is None else make(tuple(sigma))


# serialisation


def to_json(phi):
    if not phi.formula_backed:
        raise OracleBacked("procedure-backed interpretations have no formula form")
    data = {
        "kind": "setinterp",
        "colours": list(phi.colours),
        "sigma": list(phi.sigma),
        "gamma": list(phi.gamma),
        "conf": mso.to_json(phi.conf),
        "less": mso.to_json(phi.less),
        "letters": {str(g): mso.to_json(p) for g, p in phi.letters.items()},
    }
    if phi.marked:
        data["marked"] = list(phi.marked)
    if phi.name:
        data["name"] = phi.name
    return data


def from_json(data):
    if "generator" in data:
        from . import xlate
        return xlate.from_generator(data)
    letters = {g: mso.from_json(p) for g, p in data["letters"].items()}
    colours = tuple(data["colours"])
    sigma = tuple(data.get("sigma") or ())
    gamma = tuple(data.get("gamma") or letters)
    phi = SetInterpretation(colours, sigma, gamma, mso.from_json(data["conf"]),
                            mso.from_json(data["less"]), letters,
                            marked=tuple(data["marked"]) if data.get("marked") else None,
                            name=data.get("name", ""))
    # a file holding a built-in gets its candidate hint back
    base = phi.name.replace("^marked", "")
    if base in BUILTINS and phi.sigma:
        ref = BUILTINS[base](phi.sigma)
        if phi.marked:
            ref = to_marked(ref, phi.marked)
        if ref == phi:
            phi = ref
    return phi
