"""
The ``esmin`` command line.

Exit codes: 0 for success or an affirmative verdict, 1 for a well-formed negative
verdict (with its report on stdout), 2 for usage, input and other errors, reported
on stderr as ``error[<code>]: message``. File arguments that do not exist are
looked up in the fixture corpus, so ``esmin validate p0`` works out of the box.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Sequence

from dotenv import load_dotenv

from esmin.behavior import decide_bisim
from esmin.dot import export_config_dot, export_dot
from esmin.errors import EsminError, NonExecutableEvent, NotAMorphism, NotFoldings
from esmin.esmin_config import config
from esmin.folding import (
    CLASSES,
    check_abstraction_hom,
    check_folding,
    check_folding_aes,
    check_folding_pes,
    check_morphism,
    check_morphism_aes,
    check_morphism_pes,
    join_foldings,
    minimize,
    quotient,
)
from esmin.maps import EventMap
from esmin.models import BundleES, FlowES, Structure, as_event_structure, validate_model
from esmin.poset import EventStructure, validate_family
from esmin.reports import CheckReport
from esmin.textio import (
    fixture_path,
    parse_es,
    parse_map,
    parse_partition,
    serialize_es,
    serialize_map,
    serialize_partition,
)
from esmin.unfold import canonical_pes

logger = logging.getLogger(__name__)

OK, NEGATIVE, ERROR = 0, 1, 2


def _resolve(arg: str, suffix: str) -> Path:
    path = Path(arg)
    if path.is_file():
        return path
    try:
        return fixture_path(arg if arg.endswith(suffix) else arg + suffix)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file or fixture: {arg}") from None


def _read_es(arg: str) -> Structure:
    path = _resolve(arg, ".es")
    return parse_es(path.read_text(encoding="utf-8"), name=path.stem, source=str(path))


def _read_map(arg: str, source: Structure, target: Structure) -> EventMap:
    path = _resolve(arg, ".map")
    return parse_map(path.read_text(encoding="utf-8"), source, target, name=path.stem)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _verdict(report: CheckReport) -> int:
    print(report.render())
    return OK if report.verdict else NEGATIVE


# commands


def cmd_validate(args: argparse.Namespace) -> int:
    model = _read_es(args.file)
    if isinstance(model, EventStructure):
        report = validate_family(model)
    else:
        report = validate_model(model)
        if report.valid and isinstance(model, (FlowES, BundleES)):
            try:
                es = as_event_structure(model, prune=args.prune)
                report.warnings.extend(es.notes)
            except NonExecutableEvent as exc:
                report.add("fullness", exc.events, "events occur in no configuration")
    print(report.render())
    return OK if report.valid else NEGATIVE


def cmd_configs(args: argparse.Namespace) -> int:
    es = as_event_structure(_read_es(args.file), prune=args.prune)
    if args.dot:
        sys.stdout.write(export_config_dot(es))
    else:
        for c in es.configs:
            print(c.key)
    return OK


def cmd_histories(args: argparse.Namespace) -> int:
    es = as_event_structure(_read_es(args.file), prune=args.prune)
    for x in sorted(es.events):
        for h in es.histories_of(x):
            print(f"{x}: {h.config.key}")
    return OK


def cmd_unfold(args: argparse.Namespace) -> int:
    cp = canonical_pes(_read_es(args.file))
    _emit(serialize_es(cp.pes), args.output)
    return OK


def cmd_dot(args: argparse.Namespace) -> int:
    sys.stdout.write(export_dot(_read_es(args.file)))
    return OK


def _map_args(args: argparse.Namespace) -> EventMap:
    source, target = _read_es(args.source), _read_es(args.target)
    return _read_map(args.map, source, target)


_MORPHISM: dict[str, Callable[[EventMap], CheckReport]] = {
    "poset": check_morphism,
    "pes": check_morphism_pes,
    "aes": check_morphism_aes,
}
_FOLDING: dict[str, Callable[[EventMap], CheckReport]] = {
    "poset": check_folding,
    "pes": check_folding_pes,
    "aes": check_folding_aes,
}


def cmd_check_morphism(args: argparse.Namespace) -> int:
    return _verdict(_MORPHISM[args.criteria](_map_args(args)))


def cmd_check_folding(args: argparse.Namespace) -> int:
    f = _map_args(args)
    try:
        report = _FOLDING[args.criteria](f)
    except NotAMorphism as exc:
        print(exc.report.render())
        print("not a morphism, hence not a folding")
        return NEGATIVE
    if args.dot:
        sys.stdout.write(export_dot(f))
    return _verdict(report)


def cmd_check_abstraction(args: argparse.Namespace) -> int:
    return _verdict(check_abstraction_hom(_map_args(args)))


def cmd_quotient(args: argparse.Namespace) -> int:
    source = _read_es(args.source)
    path = _resolve(args.eq, ".eq")
    p = parse_partition(path.read_text(encoding="utf-8"), source.events, name=path.stem)
    _emit(serialize_es(quotient(source, p)), args.output)
    return OK


def cmd_join(args: argparse.Namespace) -> int:
    source = _read_es(args.source)
    f1 = _read_map(args.map1, source, _read_es(args.target1))
    f2 = _read_map(args.map2, source, _read_es(args.target2))
    try:
        result = join_foldings(f1, f2)
    except NotFoldings as exc:
        print(f"not foldings: {exc}")
        return NEGATIVE
    _emit(serialize_es(result.structure), args.output)
    print(f"# g1: {f1.target.name} -> join")
    sys.stdout.write(serialize_map(result.left))
    print(f"# g2: {f2.target.name} -> join")
    sys.stdout.write(serialize_map(result.right))
    return OK


def cmd_minimize(args: argparse.Namespace) -> int:
    structure = _read_es(args.file)
    result = minimize(structure, args.cls)
    outdir = Path(args.output) if args.output else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    print(f"# {len(result.quotients)} maximal folding equivalence(s) in class {result.cls}"
          f" ({result.accepted} of {result.candidates} candidates accepted)")
    for k, q in enumerate(result.quotients):
        print(f"# quotient {k}: {q.partition.key}")
        text = serialize_es(q.structure)
        if outdir is None:
            sys.stdout.write(serialize_partition(q.partition))
            sys.stdout.write(text)
            continue
        stem = f"{structure.name or 'structure'}.min{k}"
        (outdir / f"{stem}.es").write_text(text, encoding="utf-8")
        (outdir / f"{stem}.eq").write_text(serialize_partition(q.partition), encoding="utf-8")
        (outdir / f"{stem}.map").write_text(serialize_map(q.folding), encoding="utf-8")
        print(f"wrote {outdir / stem}.es/.eq/.map")
    return OK


def cmd_bisim(args: argparse.Namespace) -> int:
    left, right = _read_es(args.left), _read_es(args.right)
    relation = decide_bisim(left, right, hereditary=args.hereditary)
    kind = "hhp" if args.hereditary else "hp"
    if relation is None:
        print(f"{kind}-bisimilar: no")
        return NEGATIVE
    print(f"{kind}-bisimilar: yes ({len(relation)} triples)")
    if args.verbose:
        for t in relation.sorted():
            print(f"  {t}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="esmin", description="Foldings and minimal quotients of event structures.")
    ap.add_argument("--log-level", default=None, help="override ESMIN_LOG_LEVEL")
    sub = ap.add_subparsers(dest="command", required=True)

    def structure_cmd(name: str, func: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("file")
        p.add_argument("--prune", action="store_true", help="drop events occurring in no configuration")
        p.set_defaults(func=func)
        return p

    structure_cmd("validate", cmd_validate, "check the axioms of a structure")
    structure_cmd("configs", cmd_configs, "list configurations").add_argument("--dot", action="store_true")
    structure_cmd("histories", cmd_histories, "list the histories of each event")
    structure_cmd("unfold", cmd_unfold, "write the canonical PES").add_argument("-o", "--output")
    structure_cmd("dot", cmd_dot, "render a structure as DOT")

    for name, func, help in (
        ("check-morphism", cmd_check_morphism, "is the map a morphism?"),
        ("check-folding", cmd_check_folding, "is the map a folding?"),
        ("check-abstraction", cmd_check_abstraction, "is the map an abstraction homomorphism?"),
    ):
        p = sub.add_parser(name, help=help)
        p.add_argument("source")
        p.add_argument("target")
        p.add_argument("map")
        p.set_defaults(func=func)
        if name != "check-abstraction":
            p.add_argument("--criteria", choices=CLASSES, default="poset",
                           help="configuration-level check (poset) or the PES/AES criteria")
        if name == "check-folding":
            p.add_argument("--dot", action="store_true", help="also print the map as DOT")

    p = sub.add_parser("quotient", help="quotient a structure by an equivalence")
    p.add_argument("source")
    p.add_argument("eq")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("join", help="join two foldings with a common source")
    for arg in ("source", "map1", "target1", "map2", "target2"):
        p.add_argument(arg)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("minimize", help="maximal folding equivalences within a class")
    p.add_argument("file")
    p.add_argument("--class", dest="cls", choices=CLASSES, required=True)
    p.add_argument("-o", "--output", help="directory for the quotient files")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("bisim", help="decide (hereditary) history preserving bisimilarity")
    p.add_argument("left")
    p.add_argument("right")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--hhp", dest="hereditary", action="store_true", default=True)
    mode.add_argument("--hp", dest="hereditary", action="store_false")
    p.add_argument("-v", "--verbose", action="store_true", help="print the relation")
    p.set_defaults(func=cmd_bisim)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv(os.path.join(os.getcwd(), ".env"))
    args = build_parser().parse_args(argv)
    try:
        level = args.log_level.upper() if args.log_level else config.log_level
        logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except EsminError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error[io-error]: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
