"""Command-line entry point."""

import argparse
import csv
import json
import sys
from pathlib import Path

from . import althennie as ah
from . import ariadne as ar
from . import setinterp as si
from . import structure as st
from . import xlate
from . import yhennie as yh
from .errors import ExpregError

KINDS = {
    "setinterp": si.from_json,
    "yhennie": yh.from_json,
    "ariadne": ar.from_json,
    "ariadne-automaton": ar.from_json,
    "althennie": ah.from_json,
}


class UsageError(Exception):
    pass


def load_model(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not JSON: {e}") from None
    kind = data.get("kind")
    if kind not in KINDS:
        raise UsageError(f"{path}: unknown model kind {kind!r}")
    return KINDS[kind](data)


def model_to_json(model):
    if isinstance(model, si.SetInterpretation):
        return si.to_json(model)
    if isinstance(model, yh.YieldHennieMachine):
        return yh.to_json(model)
    if isinstance(model, ar.AriadneTransducer):
        return ar.to_json(model)
    if isinstance(model, ah.AlternatingHennieAutomaton):
        return ah.to_json(model)
    raise UsageError(f"cannot serialise {type(model).__name__}")


def write_json(data, path):
    text = json.dumps(data, ensure_ascii=False, indent=1) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def parse_word(text, model=None):
    """Single-character symbols by default; a JSON array for longer ones."""
    if text.startswith("["):
        try:
            return tuple(json.loads(text))
        except json.JSONDecodeError:
            raise UsageError(f"bad word {text!r}") from None
    return tuple(text)


def run_capped(model, word, args):
    if isinstance(model, si.SetInterpretation):
        return si.evaluate_interp(model, word, max_colourings=args.max_colourings)
    if isinstance(model, yh.YieldHennieMachine):
        return yh.evaluate_yh(model, word, max_nodes=args.max_nodes)
    if isinstance(model, ar.AriadneTransducer):
        if model.is_automaton:
            return ar.accepts(model, word, max_steps=args.max_steps)
        return ar.evaluate_ariadne(model, word, max_steps=args.max_steps)
    if isinstance(model, ah.AlternatingHennieAutomaton):
        return ah.ah_accepts(model, word, max_nodes=args.max_nodes)
    raise UsageError(f"cannot run {type(model).__name__}")


def show(result):
    if isinstance(result, bool):
        return "ACCEPT" if result else "REJECT"
    return str(result)


def cmd_run(args):
    model = load_model(args.model)
    print(show(run_capped(model, parse_word(args.input, model), args)))


def cmd_translate(args):
    model = load_model(args.model)
    source = {"yh": yh.YieldHennieMachine, "ariadne": ar.AriadneTransducer}.get(args.source)
    if source is not None and not isinstance(model, source):
        raise UsageError(f"{args.model} is not a {args.source} model")
    target = args.to
    if target == "ariadne":
        if not isinstance(model, yh.YieldHennieMachine):
            raise UsageError("only yield-Hennie machines translate to Ariadne transducers")
        out = xlate.yh_to_ariadne(model)
    elif target == "althennie":
        if not isinstance(model, ar.AriadneTransducer) or not model.is_automaton:
            raise UsageError("only Ariadne automata translate to alternating Hennie automata")
        out = xlate.ariadne_to_althennie(model)
    else:
        if not isinstance(model, ar.AriadneTransducer):
            raise UsageError("only Ariadne transducers translate to set interpretations")
        xlate.ariadne_to_setinterp(model)
        # procedure-backed, so the file records how to rebuild it
        data = {"kind": "setinterp", "name": f"stacks({model.name})", "generator": "stacks",
                "source": ar.to_json(model)}
        write_json(data, args.out)
        return
    write_json(model_to_json(out), args.out)


def cmd_difftest(args):
    left, right = load_model(args.left), load_model(args.right)
    sigma = parse_word(args.alphabet)
    print(xlate.difftest(left, right, sigma, args.maxlen))


def cmd_lang(args):
    model = load_model(args.model)
    sigma = parse_word(args.alphabet) if args.alphabet else None
    for w in ah.language_upto(model, args.maxlen, sigma=sigma):
        print(w)


def cmd_simplicity(args):
    model = load_model(args.model)
    if not isinstance(model, si.SetInterpretation):
        raise UsageError("simplicity needs a set interpretation")
    top, table = st.simplicity_table(model, parse_word(args.input, model), check=args.check)
    print(top)
    if args.table:
        with open(args.table, "w", newline="", encoding="utf-8") as fh:
            out = csv.writer(fh)
            out.writerow(["lo", "hi", "split", "simplicity"])
            for ((lo, hi), s), d in table.items():
                out.writerow([lo, hi, str(s), d])


def cmd_tiling(args):
    data = json.loads(Path(args.file).read_text(encoding="utf-8"))
    if args.action == "encode":
        n = data.get("length")
        if n is None:
            raise UsageError("encode needs the word length in the 'length' field")
        seq = [st.Split.parse(x) for x in data["splits"]]
        write_json(st.tiling_to_json(st.splits_to_tiling(seq, int(n), bound=args.bound)), "-")
        return
    tiles = st.tiling_from_json(data)
    if args.action == "validate":
        ok, live = st.tiling_validate(tiles)
        print(f"valid live={live}" if ok else "invalid")
        if not ok:
            return 1
        return
    print(" ".join(str(s) for s in st.tiling_to_splits(tiles)))


def fixtures():
    """Every built-in model, keyed by file name."""
    dfa1 = ar.dfa_from_predicate(
        ("a", "b"), 1, ("even", "odd"), "even", {"odd"},
        lambda p, s, b: ({"even": "odd", "odd": "even"}[p] if b[0] and s == "a" else p))
    dfa2 = ar.dfa_from_predicate(
        ("a", "b"), 2, ("no", "yes"), "no", {"yes"},
        lambda p, s, b: "yes" if p == "yes" or (b[0] and b[1] and s == "b") else p)
    ab = ("a", "b")
    dist = ("a", "b", "c", "d", yh.SEP)
    out = {
        "revprefix-setinterp.json": si.rev_prefix(ab),
        "revprefix-yh.json": yh.rev_prefix(ab),
        "revprefix-ariadne.json": xlate.yh_to_ariadne(yh.rev_prefix(ab)),
        "subwords-setinterp.json": si.subwords(ab),
        "subwords-yh.json": yh.subwords(ab),
        "subwords-ariadne.json": ar.subwords(ab),
        "distribute-setinterp.json": si.distribute(dist),
        "distribute.json": yh.distribute(dist),
        "subwords-acceptor.json": ar.subwords_acceptor(ab),
        "subset-enumerator-1.json": ar.build_subset_enumerator(dfa1, 1, ab),
        "subset-enumerator-2.json": ar.build_subset_enumerator(dfa2, 2, ab),
        "empty.json": ar.constant_acceptor(ab, accept=False),
        "all.json": ar.constant_acceptor(ab, accept=True),
    }
    return {k: model_to_json(v) for k, v in out.items()}


EXAMPLE_TILING = [["suc", "opp"], ["opp", "same", "same", "suc"], ["suc", "same", "suc"], ["opp"]]


def cmd_examples(args):
    target = Path(args.out)
    target.mkdir(parents=True, exist_ok=True)
    for name, data in fixtures().items():
        write_json(data, target / name)
    write_json({"tiles": EXAMPLE_TILING}, target / "tiling-example.json")
    print(target)


def build_parser():
    p = argparse.ArgumentParser(prog="expreg", description="Run and compare string transducer models.")
    p.add_argument("--max-nodes", type=int, default=None, help="cap on run tree / evaluation nodes")
    p.add_argument("--max-steps", type=int, default=None, help="cap on Ariadne run length")
    p.add_argument("--max-colourings", type=int, default=None, help="cap on enumerated colourings")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a model on one word")
    r.add_argument("--model", required=True)
    r.add_argument("--input", required=True)
    r.set_defaults(fn=cmd_run)

    t = sub.add_parser("translate", help="translate a model file")
    t.add_argument("--model", required=True)
    t.add_argument("--from", dest="source", choices=["yh", "ariadne"], help="expected source kind")
    t.add_argument("--to", required=True, choices=["ariadne", "althennie", "setinterp"])
    t.add_argument("--out", default="-")
    t.set_defaults(fn=cmd_translate)

    d = sub.add_parser("difftest", help="compare two models on all short words")
    d.add_argument("--left", required=True)
    d.add_argument("--right", required=True)
    d.add_argument("--alphabet", required=True)
    d.add_argument("--maxlen", type=int, required=True)
    d.set_defaults(fn=cmd_difftest)

    lg = sub.add_parser("lang", help="list accepted words up to a length")
    lg.add_argument("--model", required=True)
    lg.add_argument("--maxlen", type=int, required=True)
    lg.add_argument("--alphabet")
    lg.set_defaults(fn=cmd_lang)

    s = sub.add_parser("simplicity", help="largest simplicity over all intervals and splits")
    s.add_argument("--model", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--table")
    s.add_argument("--check", action="store_true", help="cross-check both simplicity checkers")
    s.set_defaults(fn=cmd_simplicity)

    tl = sub.add_parser("tiling", help="decode, encode or validate a tiling")
    tl.add_argument("action", choices=["decode", "encode", "validate"])
    tl.add_argument("--file", required=True)
    tl.add_argument("--bound", type=int, default=None)
    tl.set_defaults(fn=cmd_tiling)

    e = sub.add_parser("examples", help="write the built-in fixtures to a directory")
    e.add_argument("--out", required=True)
    e.set_defaults(fn=cmd_examples)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except ExpregError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (KeyError, ValueError, TypeError, OSError) as e:
        print(f"usage error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
