"""``logstruct`` command line entry point."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from ..errors import LogStructError
from .commands import COMMANDS, Options, Report
from .formats import Document, build_model, parse_document

EXIT = {"ok": 0, "violation": 1, "undecided": 1, "error": 2}


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _merge(docs: list[Document]) -> Document:
    out = Document()
    for d in docs:
        for table, new in ((out.monoids, d.monoids), (out.sites, d.sites)):
            for k, v in new.items():
                if k in table:
                    raise LogStructError(f"{k} is declared in more than one input")
                table[k] = v
        out.morphisms += d.morphisms
    return out


def load(paths: Sequence[str], cocycles: bool = False):
    docs = []
    for p in paths:
        try:
            docs.append(parse_document(_read(p)))
        except LogStructError as exc:
            raise type(exc)(f"{p}: {exc}") from None
    return build_model(_merge(docs), cocycles=cocycles)


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _render(value, indent: int) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in value.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines += _render(v, indent + 1)
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{pad}{k}:")
            for i, x in enumerate(v):
                lines.append(f"{pad}  - [{i}]")
                lines += _render(x, indent + 2)
        else:
            lines.append(f"{pad}{k}: {_scalar(v)}")
    return lines


def render(rep: Report, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(rep.as_dict(), sort_keys=True, indent=2) + "\n"
    lines = [f"command: {rep.command}", f"status: {rep.status}"]
    if rep.payload:
        lines.append("payload:")
        lines += _render(rep.payload, 1)
    if rep.diagnostics:
        lines.append("diagnostics:")
        lines += [f"  - {d}" for d in rep.diagnostics]
    if rep.document is not None:
        lines.append("document:")
        lines += [f"  | {ln}" if ln else "  |" for ln in rep.document.rstrip("\n").split("\n")]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logstruct", description="Exact computations with log structures on finite sites.")
    groups = parser.add_subparsers(dest="group", required=True)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True)
        for name in cmds:
            p = sub.add_parser(name)
            p.add_argument("inputs", nargs="+", help="input files ('-' for standard input)")
            p.add_argument("-n", type=int, default=None, help="root index")
            p.add_argument("-N", type=int, default=None, help="tower index")
            p.add_argument("--bound", type=int, default=32, help="word-problem horizon")
            p.add_argument("--cocycles", action="store_true", help="enable transition-unit mode")
            p.add_argument("--format", choices=("text", "structured"), default="text")
            p.add_argument("-o", dest="output", default=None, help="write the produced document (or the report) here; '-' for stdout only")
            if group == "log" and name in ("kato2df", "df2kato"):
                p.add_argument("--reference", default=None, help="structure to compare the result against")
    return parser


def run(args: argparse.Namespace) -> tuple[Report, int]:
    rep = Report(f"{args.group} {args.command}")
    try:
        if args.bound < 1:
            raise LogStructError("--bound must be positive")
        model = load(args.inputs, args.cocycles)
        ref = getattr(args, "reference", None)
        opts = Options(args.n, args.N, args.bound, args.cocycles, load([ref], args.cocycles) if ref else None)
        COMMANDS[args.group][args.command](model, opts, rep)
    except (LogStructError, OSError, ValueError) as exc:
        rep = Report(rep.command, "error", diagnostics=[f"{type(exc).__name__}: {exc}"])
    return rep, EXIT[rep.status]


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    rep, code = run(args)
    text = render(rep, args.format)
    if args.output == "-":
        sys.stdout.write(rep.document if rep.document is not None and rep.status != "error" else text)
    elif args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(rep.document if rep.document is not None else text)
        sys.stdout.write(render(_without_document(rep), args.format))
    else:
        sys.stdout.write(text)
    return code


def _without_document(rep: Report) -> Report:
    return Report(rep.command, rep.status, rep.payload, rep.diagnostics)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
