import pytest

from expreg.errors import ColourOutOfRange, MarkerOverwrite, OutOfBounds
from expreg.words import (
    LEFT, LMARK, RIGHT, RMARK, STAY, Alphabet, Colouring, MarkedWord, Move, PointedTape, apply_move,
)


@pytest.mark.parametrize("text,move", [
    ("←", LEFT), ("left", LEFT), ("L", LEFT), (-1, LEFT),
    ("↻", STAY), ("stay", STAY), (0, STAY),
    ("→", RIGHT), ("R", RIGHT), (1, RIGHT),
])
def test_move_parse(text, move):
    assert Move.parse(text) is move


def test_move_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Move.parse("up")


def test_marked_word_positions():
    m = MarkedWord("ab")
    assert m.letters == (LMARK, "a", "b", RMARK)
    assert m.last == 3
    assert m.letter(0) == LMARK and m.letter(3) == RMARK
    with pytest.raises(IndexError):
        m.letter(4)


def test_alphabet_rejects_markers_and_duplicates():
    with pytest.raises(ValueError):
        Alphabet(["a", LMARK])
    with pytest.raises(ValueError):
        Alphabet(["a", "a"])


def test_apply_move_writes_and_moves():
    t = PointedTape.of_word("ab", 1)
    t2 = apply_move(t, "x", RIGHT)
    assert t2.cells == (LMARK, "x", "b", RMARK) and t2.pointer == 2


def test_markers_cannot_be_overwritten():
    t = PointedTape.of_word("ab", 0)
    with pytest.raises(MarkerOverwrite):
        apply_move(t, "a", RIGHT)
    # a letter cell cannot become a marker either
    with pytest.raises(MarkerOverwrite):
        apply_move(PointedTape.of_word("ab", 1), RMARK, RIGHT)


def test_moving_off_the_tape():
    with pytest.raises(OutOfBounds):
        apply_move(PointedTape.of_word("ab", 0), LMARK, LEFT)
    with pytest.raises(OutOfBounds):
        apply_move(PointedTape.of_word("ab", 3), RMARK, RIGHT)


def test_decorated_marker_keeps_base():
    t = PointedTape(((LMARK, ()), ("a", ())), 0)
    assert apply_move(t, (LMARK, ("q",)), RIGHT).cells[0] == (LMARK, ("q",))


def test_colouring_offsets():
    c = Colouring(("r", "g"), ("g", "r"), offset=1)
    assert c[1] == "r" and c[2] == "g"
    assert list(c.positions) == [1, 2]
    with pytest.raises(IndexError):
        c[0]
    with pytest.raises(ColourOutOfRange):
        Colouring(("z",), ("g", "r"))
