"""Splits, simplicity of intervals, tilings and funnel checks on a marked word.

Configurations here are value tuples indexed by marked positions
0..|w|+1, as produced for a marked interpretation.
"""

from dataclasses import dataclass

from . import setinterp as si
from .caps import MAX_NODES, scaled
from .errors import CapExceeded, InvalidTiling, MalformedTile, NotWellFormed
from .words import LEFT, RIGHT, Move, as_word

# splits


@dataclass(frozen=True, order=True)
class Split:
    """→i is positions 0..i, ←i is positions i..n+1 where n = |w|."""

    position: int
    direction: Move

    def __post_init__(self):
        d = Move.parse(self.direction)
        if d not in (LEFT, RIGHT):
            raise ValueError("a split points left or right")
        object.__setattr__(self, "direction", d)

    def __str__(self):
        return f"{self.direction.symbol}{self.position}"

    __repr__ = __str__

    @classmethod
    def parse(cls, text):
        text = text.strip()
        for prefix, d in (("->", RIGHT), ("<-", LEFT), ("→", RIGHT), ("←", LEFT), (">", RIGHT), ("<", LEFT)):
            if text.startswith(prefix):
                return cls(int(text[len(prefix):]), d)
        raise ValueError(f"bad split {text!r}")

    def valid(self, n):
        if self.direction == RIGHT:
            return 0 <= self.position < n + 1
        return 0 < self.position <= n + 1

    def positions(self, n):
        if self.direction == RIGHT:
            return range(0, self.position + 1)
        return range(self.position, n + 2)


def opposite(s):
    if s.direction == RIGHT:
        return Split(s.position + 1, LEFT)
    return Split(s.position - 1, RIGHT)


def successor(s, n):
    """The least split strictly containing ``s``, or None for ←1 and →n."""
    if s.direction == RIGHT:
        return Split(s.position + 1, RIGHT) if s.position < n else None
    return Split(s.position - 1, LEFT) if s.position > 1 else None


def all_splits(n):
    return [Split(i, RIGHT) for i in range(n + 1)] + [Split(i, LEFT) for i in range(1, n + 2)]


def restrict(values, s, n):
    return tuple(values[i] for i in s.positions(n))


def s_equivalent(a, b, s, n=None):
    if n is None:
        n = len(a) - 2
    return restrict(a, s, n) == restrict(b, s, n)


# simplicity


class SimplicityContext:
    """Sorted configurations of one marked word with memoised simplicity checks.

    Intervals are index pairs (lo, hi) into ``configs``. With ``check``
    set, every answer is computed by both checkers, which must agree.
    """

    def __init__(self, configs, n=None, check=False):
        self.configs = [tuple(c) for c in configs]
        if n is None:
            n = len(self.configs[0]) - 2 if self.configs else 0
        self.n = n
        self.check = check
        self._classes = {}
        self._fast = {}
        self._literal = {}

    def __len__(self):
        return len(self.configs)

    def classes(self, s):
        """Class index of every configuration under s-equivalence."""
        if s not in self._classes:
            ids = {}
            self._classes[s] = [ids.setdefault(restrict(c, s, self.n), len(ids)) for c in self.configs]
        return self._classes[s]

    def full(self):
        return (0, len(self.configs) - 1)

    def is_d_simple(self, interval, s, d, method=None):
        method = method or ("both" if self.check else "fast")
        if method == "fast":
            return self._is_fast(interval, s, d)
        if method == "literal":
            return self._is_literal(interval, s, d)
        a, b = self._is_fast(interval, s, d), self._is_literal(interval, s, d)
        if a != b:
            raise AssertionError(f"simplicity checkers disagree on {interval} at {s}, d={d}")
        return a

    def _is_fast(self, interval, s, d):
        key = (interval, s, d)
        if key not in self._fast:
            self._fast[key] = self._gaps(interval, s, d)
        return self._fast[key]

    def _gaps(self, interval, s, d):
        lo, hi = interval
        if lo == hi and d >= -1:
            return True
        if d < 0:
            return False
        cls = self.classes(s)
        inside = set(cls[lo:hi + 1])
        if d == 0:
            return len(inside) == 1
        t = opposite(s)
        # K is the members of one class; only the maximal gaps between them matter
        for c in inside:
            start, ok = lo, True
            for i in range(lo, hi + 2):
                if i > hi or cls[i] == c:
                    if start < i and not self._is_fast((start, i - 1), t, d - 1):
                        ok = False
                        break
                    start = i + 1
            if ok:
                return True
        return self._is_fast(interval, t, d - 1)

    def _is_literal(self, interval, s, d):
        key = (interval, s, d)
        if key not in self._literal:
            self._literal[key] = self._definition(interval, s, d)
        return self._literal[key]

    def _definition(self, interval, s, d):
        lo, hi = interval
        if lo == hi and d >= -1:
            return True
        if d < 0:
            return False
        cls = self.classes(s)
        t = opposite(s)
        # A0 ranges over every realised class plus one class absent from I
        witnesses = sorted(set(cls)) + [None]
        for c in witnesses:
            if all(c in cls[a:b + 1] or (d > 0 and self._is_literal((a, b), t, d - 1))
                   for a in range(lo, hi + 1) for b in range(a, hi + 1)):
                return True
        return False

    def simplicity(self, interval, s):
        d = -1
        while not self.is_d_simple(interval, s, d):
            d += 1
        return d


def context(phi, w, check=False, **kw):
    """Sorted configurations of ``phi`` on ``w``, marked if necessary."""
    if not phi.marked:
        phi = si.to_marked(phi)
    word = as_word(w)
    confs = si.configurations(phi, word, **kw)
    return SimplicityContext([c.values for c in confs], len(word), check=check)


def simplicity_table(phi, w, check=False, max_cells=None):
    ctx = context(phi, w, check=check)
    m = len(ctx)
    splits = all_splits(ctx.n)
    cells = m * (m + 1) // 2 * len(splits)
    cap = max_cells if max_cells is not None else scaled(MAX_NODES)
    if cells > cap:
        raise CapExceeded(f"{cells} simplicity cells exceed the cap {cap}")
    table = {}
    for lo in range(m):
        for hi in range(lo, m):
            for s in splits:
                table[((lo, hi), s)] = ctx.simplicity((lo, hi), s)
    return max(table.values(), default=-1), table


# tiles and tilings

STEPS = ("same", "opp", "suc")


def step_kind(step):
    return step[0] if isinstance(step, (tuple, list)) else step


def step_label(step):
    return step[1] if isinstance(step, (tuple, list)) else None


@dataclass(frozen=True)
class Block:
    position: int
    index: int
    kind: str
    entry: Move
    exit: Move
    levels: range


def block_decompose(tile, position=0):
    blocks = []
    for h, step in enumerate(tile):
        kind = step_kind(step)
        if kind not in STEPS:
            raise MalformedTile(f"unknown step {kind!r}")
        if kind == "same":
            if not blocks:
                raise MalformedTile("a tile cannot start with same")
            b = blocks[-1]
            blocks[-1] = Block(b.position, b.index, b.kind, b.entry, b.exit, range(b.levels.start, h + 1))
            continue
        entry = RIGHT if not blocks else Move(-blocks[-1].exit.value)
        exit_ = entry if kind == "suc" else Move(-entry.value)
        blocks.append(Block(position, len(blocks), kind, entry, exit_, range(h, h + 1)))
    return blocks


def _nth(items, m):
    return items[m] if m < len(items) else None


def block_graph(tiles):
    """Blocks of every tile and the successor edge of each block (or None)."""
    blocks = [block_decompose(t, i) for i, t in enumerate(tiles)]
    edges = {}
    for i, bs in enumerate(blocks):
        right_exits = [b for b in bs if b.exit == RIGHT]
        left_exits = [b for b in bs if b.exit == LEFT]
        for m, b in enumerate(right_exits):
            target = None
            if i + 1 < len(blocks):
                target = _nth([c for c in blocks[i + 1] if c.entry == RIGHT], m)
            edges[(i, b.index)] = None if target is None else (i + 1, target.index)
        for m, b in enumerate(left_exits):
            target = None
            if i > 0:
                target = _nth([c for c in blocks[i - 1] if c.entry == LEFT], m)
            edges[(i, b.index)] = None if target is None else (i - 1, target.index)
    return blocks, edges


def _block_path(tiles):
    """The blocks in path order, or a reason why the tiling is invalid."""
    if not tiles:
        return None, "no positions"
    blocks, edges = block_graph(tiles)
    if not blocks[0]:
        return None, "leftmost tile has no left entry"
    if any(b.exit == LEFT for b in blocks[0]):
        return None, "leftmost tile has a left exit"
    if any(b.exit == RIGHT for b in blocks[-1]):
        return None, "rightmost tile has a right exit"
    total = sum(len(bs) for bs in blocks)
    path, seen, node = [], set(), (0, 0)
    while node is not None:
        if node in seen:
            return None, "block graph has a cycle"
        seen.add(node)
        path.append(blocks[node[0]][node[1]])
        node = edges[node]
    if len(path) != total:
        return None, "block graph is not a single path"
    return path, None


def tiling_validate(tiles):
    """Returns (valid, live position)."""
    path, _ = _block_path(tiles)
    if path is None:
        return False, None
    return True, path[-1].position


def tiling_locations(tiles):
    path, why = _block_path(tiles)
    if path is None:
        raise InvalidTiling(why)
    return [(b.position, h, b) for b in path for h in b.levels]


def tiling_to_splits(tiles, labelled=False):
    out = []
    for i, h, b in tiling_locations(tiles):
        s = Split(i, b.exit)
        out.append((s, step_label(tiles[i][h])) if labelled else s)
    return out


def relation(prev, s, n):
    if s == prev:
        return "same"
    if s == opposite(prev):
        return "opp"
    if s == successor(prev, n):
        return "suc"
    return None


def default_tile_bound(d0):
    return 2 * (d0 + 2)


def check_well_formed(seq, n, bound=None):
    """Raise NotWellFormed naming the violated condition."""
    if not seq:
        raise NotWellFormed("empty split sequence")
    if seq[0] != Split(0, RIGHT):
        raise NotWellFormed(f"first split is {seq[0]}, not →0")
    for k, s in enumerate(seq):
        if not s.valid(n):
            raise NotWellFormed(f"split {s} at index {k} is not a split of a word of length {n}")
        if k and relation(seq[k - 1], s, n) is None:
            raise NotWellFormed(f"split {s} at index {k} is not same, opposite or successor of {seq[k - 1]}")
    if bound is not None:
        counts = [0] * (n + 2)
        for s in seq:
            counts[s.position] += 1
        for i, c in enumerate(counts):
            if c > bound:
                raise NotWellFormed(f"{c} splits at position {i} exceed the tile bound {bound}")


def is_well_formed(seq, n, bound=None):
    try:
        check_well_formed(seq, n, bound)
    except NotWellFormed:
        return False
    return True


def splits_to_tiling(seq, n, bound=None, labelled=False):
    """Append one step per split at its position; the first step is suc."""
    pairs = list(seq) if labelled else [(s, None) for s in seq]
    splits = [s for s, _ in pairs]
    check_well_formed(splits, n, bound)
    tiles = [[] for _ in range(n + 2)]
    for k, (s, label) in enumerate(pairs):
        step = "suc" if k == 0 else relation(splits[k - 1], s, n)
        tiles[s.position].append((step, label) if labelled else step)
    return [tuple(t) for t in tiles]


def tiling_from_json(data):
    tiles = []
    for t in data["tiles"]:
        tiles.append(tuple(tuple(x) if isinstance(x, list) else x for x in t))
    return tiles


def tiling_to_json(tiles):
    return {"tiles": [[list(x) if isinstance(x, tuple) else x for x in t] for t in tiles]}


# funnels


@dataclass(frozen=True)
class FunnelCheck:
    ok: bool
    item: int = None
    index: int = None
    reason: str = ""


def validate_funnel(candidate, basis_member, ctx):
    """Check a sequence of (interval, split) pairs item by item; the first failure is reported."""
    items = [((lo, hi), s) for (lo, hi), s in candidate]
    if not items:
        return FunnelCheck(False, 1, 0, "empty candidate")
    n = ctx.n
    if items[0][0] != ctx.full():
        return FunnelCheck(False, 1, 0, "first interval is not all configurations")
    if items[0][1] != Split(0, RIGHT):
        return FunnelCheck(False, 2, 0, "first split is not →0")
    lo = max(i[0] for i, _ in items)
    hi = min(i[1] for i, _ in items)
    if lo > hi:
        return FunnelCheck(False, 3, None, "intervals have empty intersection")
    for k, (interval, s) in enumerate(items):
        if not basis_member(interval, s):
            return FunnelCheck(False, 4, k, f"interval {interval} is not a basis member at {s}")
    for k in range(1, len(items)):
        if relation(items[k - 1][1], items[k][1], n) is None:
            return FunnelCheck(False, 5, k, "consecutive splits are unrelated")
    for k, (ik, sk) in enumerate(items):
        for k2 in range(k + 1, len(items)):
            ik2, sk2 = items[k2]
            if sk2 in (sk, opposite(sk)) and not ctx.simplicity(ik2, sk2) < ctx.simplicity(ik, sk):
                return FunnelCheck(False, 6, k2, f"simplicity does not decrease from index {k}")
    return FunnelCheck(True)
