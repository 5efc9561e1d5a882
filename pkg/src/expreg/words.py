"""Alphabets, marked words, pointed tapes and colourings."""

from dataclasses import dataclass
from enum import Enum

from .errors import ColourOutOfRange, MarkerOverwrite, OutOfBounds

LMARK = "⊳"
RMARK = "⊲"
MARKERS = (LMARK, RMARK)


class Move(Enum):
    LEFT = -1
    STAY = 0
    RIGHT = 1

    @property
    def symbol(self):
        return {-1: "←", 0: "↻", 1: "→"}[self.value]

    @property
    def name_str(self):
        return {-1: "left", 0: "stay", 1: "right"}[self.value]

    @classmethod
    def parse(cls, text):
        if isinstance(text, Move):
            return text
        table = {
            "←": cls.LEFT, "left": cls.LEFT, "L": cls.LEFT, "<": cls.LEFT, -1: cls.LEFT,
            "↻": cls.STAY, "stay": cls.STAY, "S": cls.STAY, "=": cls.STAY, 0: cls.STAY,
            "→": cls.RIGHT, "right": cls.RIGHT, "R": cls.RIGHT, ">": cls.RIGHT, 1: cls.RIGHT,
        }
        try:
            return table[text]
        except (KeyError, TypeError):
            raise ValueError(f"unknown move {text!r}") from None

    def __repr__(self):
        return self.symbol


LEFT, STAY, RIGHT = Move.LEFT, Move.STAY, Move.RIGHT


class Alphabet(tuple):
    """An ordered, duplicate-free tuple of symbols excluding the markers."""

    def __new__(cls, symbols):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet has duplicate symbols")
        for s in symbols:
            if s in MARKERS:
                raise ValueError("markers cannot belong to an alphabet")
        return super().__new__(cls, symbols)


def as_word(w):
    """Normalise a word given as a string or a sequence of symbol names."""
    if isinstance(w, MarkedWord):
        return w.base
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


@dataclass(frozen=True)
class MarkedWord:
    base: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", as_word(self.base))
        for s in self.base:
            if s in MARKERS:
                raise ValueError("markers may only appear at the ends")

    @property
    def letters(self):
        return (LMARK,) + self.base + (RMARK,)

    def __len__(self):
        return len(self.base) + 2

    def letter(self, i):
        if not 0 <= i <= len(self.base) + 1:
            raise IndexError(i)
        return self.letters[i]

    @property
    def last(self):
        return len(self.base) + 1


@dataclass(frozen=True)
class PointedTape:
    cells: tuple
    pointer: int

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if not 0 <= self.pointer < len(self.cells):
            raise OutOfBounds(f"pointer {self.pointer} outside tape of length {len(self.cells)}")

    @classmethod
    def of_word(cls, w, pointer=0):
        return cls(MarkedWord(w).letters, pointer)

    @property
    def current(self):
        return self.cells[self.pointer]

    def __str__(self):
        return "".join(map(str, self.cells)) + f"@{self.pointer}"


def is_marker(symbol):
    # decorated tape symbols keep their base letter in slot 0
    if isinstance(symbol, tuple):
        symbol = symbol[0] if symbol else None
    return symbol in MARKERS


def apply_move(tape, write, move):
    move = Move.parse(move)
    old = tape.current
    if is_marker(old) != is_marker(write) or (is_marker(old) and _base(old) != _base(write)):
        raise MarkerOverwrite(f"cannot write {write!r} over {old!r}")
    target = tape.pointer + move.value
    if not 0 <= target < len(tape.cells):
        raise OutOfBounds(f"move {move.symbol} from {tape.pointer} leaves the tape")
    cells = tape.cells[: tape.pointer] + (write,) + tape.cells[tape.pointer + 1:]
    return PointedTape(cells, target)


def _base(symbol):
    return symbol[0] if isinstance(symbol, tuple) else symbol


@dataclass(frozen=True)
class Colouring:
    """A total map from the positions of a word to a colour set.

    ``offset`` is 0 for marked words (positions 0..|w|+1) and 1 for plain
    words (positions 1..|w|).
    """

    values: tuple
    colours: tuple
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        # large colour spaces only need membership, so keep them as given
        if not hasattr(self.colours, "__contains__"):
            object.__setattr__(self, "colours", tuple(self.colours))
        for v in self.values:
            if v not in self.colours:
                raise ColourOutOfRange(f"colour {v!r} not in the colour set")

    def __getitem__(self, pos):
        i = pos - self.offset
        if not 0 <= i < len(self.values):
            raise IndexError(pos)
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @property
    def positions(self):
        return range(self.offset, self.offset + len(self.values))

    def __str__(self):
        return " ".join(map(str, self.values))
