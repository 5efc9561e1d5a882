"""Reference functions and decompositions used as independent oracles."""

import itertools
from collections import Counter

from expreg import ariadne as ar
from expreg import setinterp as si
from expreg import yhennie as yh


def rev_prefix_ref(w):
    # reversed proper prefixes, shortest first
    return "".join(w[:x][::-1] for x in range(len(w)))


def subword_multiset(w):
    return Counter("".join(w[i] for i in idx)
                   for n in range(1, len(w) + 1) for idx in itertools.combinations(range(len(w)), n))


def distribute_ref(w, sep="#"):
    blocks = w.split(sep)
    if len(blocks) < 2:
        return w
    return sep.join("".join(p) for p in itertools.product(*blocks))


def words(sigma, max_len, min_len=0):
    for n in range(min_len, max_len + 1):
        for t in itertools.product(sigma, repeat=n):
            yield "".join(t)


def setinterp_subwords(phi, w):
    """Group configurations by their non-gray positions, letters in output order."""
    groups = {}
    for c in si.configurations(phi, w):
        key = frozenset(i for i, v in enumerate(c.values) if v != "gray")
        groups.setdefault(key, []).append(c.letter)
    return Counter("".join(g) for g in groups.values())


def yh_subwords(M, w):
    """Group leaves by the positions where the branch took a red or black child.

    At a letter the built-in has children (gray, red, black) before a red
    choice and (gray, black) after it.
    """
    groups = {}

    def walk(node, chosen):
        spawns = [c for c in node.children if isinstance(c, yh.Node)]
        for c in node.children:
            if isinstance(c, yh.Leaf):
                groups.setdefault(chosen, []).append(c.letter)
        pos = node.tape.pointer
        for k, c in enumerate(spawns):
            picked = 0 < pos <= len(w) and k > 0
            walk(c, chosen | {pos} if picked else chosen)

    walk(yh.run_tree(M, w), frozenset())
    return Counter("".join(g) for g in groups.values())


def ariadne_subwords(A, w):
    """Group productions by the counter row (first entry at each inner position)."""
    groups = {}
    for s, prod in ar.iter_run(A, w):
        if not prod:
            continue
        row = tuple(next(q for q, i in s if i == p) for p in range(1, len(w) + 1))
        groups.setdefault(row, []).extend(prod)
    return Counter("".join(g) for g in groups.values())


# random formulas

from expreg import mso as m  # noqa: E402

COLOUR_SETS = {1: ("c0",), 2: ("c0", "c1"), 3: ("c0", "c1", "c2"), 4: ("c0", "c1", "c2", "c3")}


def random_formula(rng, free_mon, sigma=("a", "b"), depth=3, max_bound_mon=1):
    """A sentence over ``sigma`` whose only free variables are the monadic ones in ``free_mon``."""
    budget = [max_bound_mon]
    counter = [0]

    def fresh(prefix):
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    def atom(fo, mon):
        x = rng.choice(fo)
        y = rng.choice(fo)
        kinds = ["letter", "less", "equal", "succ", "first", "last"] + ["mon"] * (2 if mon else 0)
        k = rng.choice(kinds)
        if k == "letter":
            return m.Letter(rng.choice(sigma), x)
        if k == "less":
            return m.Less(x, y)
        if k == "equal":
            return m.Equal(x, y)
        if k == "succ":
            return m.Succ(x, y)
        if k == "first":
            return m.First(x)
        if k == "last":
            return m.Last(x)
        X = rng.choice(sorted(mon))
        return m.MonEq(X, x, rng.choice(mon[X]))

    def gen(d, fo, mon):
        if d == 0 or (fo and rng.random() < 0.25):
            if not fo:
                v = fresh("x")
                return (m.ExistsFO if rng.random() < 0.5 else m.ForAll)(v, atom([v], mon))
            return atom(fo, mon)
        k = rng.choice(["not", "or", "and", "implies", "fo", "fo", "mon"])
        if k == "not":
            return m.Not(gen(d - 1, fo, mon))
        if k in ("or", "and", "implies"):
            t = {"or": m.Or, "and": m.And, "implies": m.Implies}[k]
            return t(gen(d - 1, fo, mon), gen(d - 1, fo, mon))
        if k == "mon" and budget[0] > 0:
            budget[0] -= 1
            X = fresh("Z")
            cols = COLOUR_SETS[rng.randint(1, 3)]
            t = m.ExistsMon if rng.random() < 0.5 else m.ForAllMon
            return t(X, cols, gen(d - 1, fo, {**mon, X: cols}))
        v = fresh("x")
        t = m.ExistsFO if rng.random() < 0.5 else m.ForAll
        return t(v, gen(d - 1, fo + [v], mon))

    return gen(depth, [], dict(free_mon))


def colourings(colours, n):
    return itertools.product(colours, repeat=n)
