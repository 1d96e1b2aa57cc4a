"""
Command line interface: one subcommand per library operation.

``run(argv)`` returns the exit code: 0 on success, 1 on a domain error and
2 on a usage error (bad flags, malformed expressions or sequences). With
``--json`` every outcome, errors included, is a single JSON document on
standard output.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pydantic

from src.construct import LGenWord, section_realizer, square_realizer, transitive_mapper
from src.errors import ExprSyntaxError, TreeGroupError, ValidationError
from src.expr import lower, parse_word
from src.invariant import (
    InvariantTriple,
    distinguish,
    invariant_triple,
    parity_by_count,
    parity_formula,
    parity_hom,
    parity_span,
    reconstruct_omega,
)
from src.omega import OmegaSeq, count_pi_classes
from src.quotient import (
    build_quotient,
    group_generators,
    group_order,
    index_in_quotient,
    is_level_transitive,
    orbit,
    rist_search,
)
from src.treeauto import (
    Word,
    act,
    equal_auto,
    in_L,
    is_trivial,
    is_trivial_to_depth,
    metric_distance,
    order,
    portrait,
    sections,
)

logger = logging.getLogger(__name__)

Result = Tuple[str, Any]


class UsageError(Exception):
    """Raised for arguments that do not parse or cannot be used."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _sequence(text: str) -> OmegaSeq:
    try:
        return OmegaSeq.parse(text)
    except ValidationError as e:
        raise UsageError(str(e)) from e


def _word(text: str, omega: OmegaSeq) -> Word:
    return Word(letters=lower(parse_word(text)), omega=omega)


def _require(value: Optional[Any], flag: str) -> Any:
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _generators(args, omega: OmegaSeq) -> List[Word]:
    if args.exprs:
        return [_word(text, omega) for text in args.exprs]
    return group_generators(omega, args.gens)


def _cmd_reduce(args, omega) -> Result:
    w = _word(args.expr, omega)
    return str(w), {"word": w.letters}


def _cmd_act(args, omega) -> Result:
    image = act(_word(args.expr, omega), _require(args.vertex, "--vertex"))
    return image, {"image": image}


def _cmd_sections(args, omega) -> Result:
    left, right = sections(_word(args.expr, omega))
    return f"0: {left}\n1: {right}", {"0": left.letters, "1": right.letters}


def _cmd_portrait(args, omega) -> Result:
    tree = portrait(_word(args.expr, omega), _require(args.depth, "--depth"))
    return "\n".join(tree.levels()), tree.to_json()


def _cmd_trivial(args, omega) -> Result:
    w = _word(args.expr, omega)
    result = is_trivial(w) if omega.is_periodic or args.depth is None else is_trivial_to_depth(w, args.depth)
    return _flag(result), {"trivial": result}


def _cmd_equal(args, omega) -> Result:
    eta = _sequence(args.eta) if args.eta else omega
    result = equal_auto(_word(args.first, omega), _word(args.second, eta))
    return _flag(result), {"equal": result}


def _cmd_order(args, omega) -> Result:
    value = order(_word(args.expr, omega), args.cap)
    return str(value), {"order": value}


def _cmd_metric(args, omega) -> Result:
    value = metric_distance(_word(args.first, omega), _word(args.second, omega), args.depth)
    return str(value), {"distance": str(value)}


def _cmd_inl(args, omega) -> Result:
    result = in_L(_word(args.expr, omega))
    return _flag(result), {"in_L": result}


def _cmd_parity(args, omega) -> Result:
    depth = _require(args.depth, "--depth")
    if args.method == "formula":
        vector = parity_formula(args.expr.replace(" ", ""), omega, depth)
    elif args.method == "count":
        vector = parity_by_count(_word(args.expr, omega), depth)
    else:
        vector = parity_hom(_word(args.expr, omega), depth)
    return str(vector), {"parity": str(vector)}


def _cmd_triple(args, omega) -> Result:
    triple = invariant_triple(omega, _require(args.depth, "--depth"))
    return str(triple), {"triple": [str(v) for v in triple.vectors]}


def _cmd_reconstruct(args, omega) -> Result:
    candidates = reconstruct_omega(InvariantTriple.parse(args.vectors))
    return "\n".join(candidates), {"candidates": list(candidates)}


def _cmd_distinguish(args, omega) -> Result:
    eta = _sequence(_require(args.eta, "--eta"))
    depth = _require(args.depth, "--depth")
    verdict = distinguish(omega, eta, depth)
    left, right = sorted(parity_span(omega, depth)), sorted(parity_span(eta, depth))
    text = f"{omega}: {{{', '.join(left)}}}\n{eta}: {{{', '.join(right)}}}\n{verdict}"
    return text, {"verdict": verdict.verdict, "depth": depth, "omega": left, "eta": right, "summary": str(verdict)}


def _cmd_orbit(args, omega) -> Result:
    vertex = _require(args.vertex, "--vertex")
    q = build_quotient(_generators(args, omega), len(vertex))
    points = sorted(orbit(q, vertex))
    return " ".join(points), {"orbit": points}


def _cmd_transitive(args, omega) -> Result:
    result = is_level_transitive(_generators(args, omega), _require(args.depth, "--depth"))
    return _flag(result), {"transitive": result}


def _cmd_qorder(args, omega) -> Result:
    q = build_quotient(_generators(args, omega), _require(args.depth, "--depth"))
    value = group_order(q)
    return str(value), {"order": value, "quotient": q.to_json()}


def _cmd_index(args, omega) -> Result:
    value = index_in_quotient(omega, _require(args.depth, "--depth"))
    return str(value), {"index": value}


def _cmd_realize(args, omega) -> Result:
    h = section_realizer(omega, _require(args.vertex, "--vertex"), LGenWord.parse(args.lword))
    return str(h), {"word": h.letters}


def _cmd_realize_sq(args, omega) -> Result:
    cert = square_realizer(omega, _require(args.vertex, "--vertex"), LGenWord.parse(args.lword))
    word = cert.to_word(omega)
    return f"{word}\n{json.dumps(cert.to_json(), sort_keys=True)}", {"word": word.letters, "certificate": cert.to_json()}


def _cmd_mapper(args, omega) -> Result:
    w = transitive_mapper(omega, _require(args.vertex, "--vertex"), _require(args.target, "--target"))
    return str(w), {"word": w.letters}


def _cmd_rist_search(args, omega) -> Result:
    witness = rist_search(omega, _require(args.vertex, "--vertex"), args.max_len)
    return f"{witness.word} ({witness.generators})", witness.model_dump()


def _cmd_classes(args, omega) -> Result:
    value = count_pi_classes(args.length)
    return str(value), {"classes": value}


COMMANDS: Dict[str, Tuple[Callable, str]] = {
    "reduce": (_cmd_reduce, "Reduce a word to normal form"),
    "act": (_cmd_act, "Image of --vertex under a word"),
    "sections": (_cmd_sections, "Sections of a word at vertices 0 and 1"),
    "portrait": (_cmd_portrait, "Activity portrait to --depth"),
    "trivial": (_cmd_trivial, "Decide whether a word is the identity"),
    "equal": (_cmd_equal, "Compare a word over --omega with a word over --eta"),
    "order": (_cmd_order, "Order of a word"),
    "metric": (_cmd_metric, "Tree distance between two words"),
    "inl": (_cmd_inl, "Membership in L = <ab, d>"),
    "parity": (_cmd_parity, "Parity vector of a word to --depth"),
    "triple": (_cmd_triple, "Parity image of L to --depth"),
    "reconstruct": (_cmd_reconstruct, "Recover the sequence from a parity triple"),
    "distinguish": (_cmd_distinguish, "Compare the parity images of L over --omega and --eta"),
    "orbit": (_cmd_orbit, "Orbit of --vertex on its level"),
    "transitive": (_cmd_transitive, "Level transitivity on level --depth"),
    "qorder": (_cmd_qorder, "Order of the level --depth quotient"),
    "index": (_cmd_index, "Index of L in G on level --depth"),
    "realize": (_cmd_realize, "Element of L with a given section at --vertex"),
    "realize-sq": (_cmd_realize_sq, "Product of iterated squares with a given section at --vertex"),
    "mapper": (_cmd_mapper, "Element of L sending --vertex to --target"),
    "rist-search": (_cmd_rist_search, "Search a rigid stabilizer element at --vertex"),
    "classes": (_cmd_classes, "Number of length-k sequences up to swapping 1 and 2"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", default="(012)", help="Sequence as PREFIX(PERIOD), default (012)")
    common.add_argument("--eta", help="Second sequence, same format")
    common.add_argument("--depth", type=int, help="Depth or tree level")
    common.add_argument("--vertex", help="Vertex as a bit string")
    common.add_argument("--max-len", type=int, help="Search bound in generators of L")
    common.add_argument("--json", action="store_true", help="Emit a single JSON document")

    parser = _Parser(
        prog="tree-groups",
        description="Exact computations with the groups G_omega and L_omega acting on the binary tree",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    commands = {name: subparsers.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}

    for name in ("reduce", "act", "sections", "portrait", "trivial", "order", "inl", "parity"):
        commands[name].add_argument("expr", help="Word expression, e.g. '(ab)^2' or 'd^(ab)'")
    for name in ("equal", "metric"):
        commands[name].add_argument("first")
        commands[name].add_argument("second")
    commands["order"].add_argument("--cap", type=int, help="Largest exponent k tried for 2^k")
    commands["parity"].add_argument("--method", choices=("hom", "count", "formula"), default="hom")
    commands["reconstruct"].add_argument("vectors", nargs=3, help="Three parity bit strings")
    for name in ("orbit", "transitive", "qorder"):
        commands[name].add_argument("exprs", nargs="*", help="Generator expressions (default: --gens)")
        commands[name].add_argument("--gens", choices=("G", "L"), default="L")
    for name in ("realize", "realize-sq"):
        commands[name].add_argument("lword", help="Word in A, A^-1, D, e.g. 'A D A^-1'")
    commands["mapper"].add_argument("--target", help="Destination vertex")
    commands["classes"].add_argument("--length", type=int, required=True)
    return parser


def _emit_error(as_json: bool, kind: str, message: str) -> None:
    if as_json:
        print(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True))
    else:
        print(f"❌ Error [{kind}]: {message}", file=sys.stderr)


def run(argv: Sequence[str]) -> int:
    """Parse ``argv``, run one subcommand and print its result."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as e:
        _emit_error("--json" in argv, "usage", str(e))
        return 2
    except SystemExit as e:
        return int(e.code or 0)

    handler, _ = COMMANDS[args.command]
    try:
        omega = _sequence(args.omega)
        text, payload = handler(args, omega)
    except (UsageError, ExprSyntaxError) as e:
        _emit_error(args.json, "usage" if isinstance(e, UsageError) else e.kind, str(e))
        return 2
    except TreeGroupError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        _emit_error(args.json, e.kind, str(e))
        return 1
    except pydantic.ValidationError as e:
        logger.error(f"{args.command} rejected its input: {str(e)}")
        _emit_error(args.json, "validation", str(e))
        return 1

    if args.json:
        print(json.dumps({"command": args.command, "result": payload}, sort_keys=True))
    else:
        print(text)
    return 0
