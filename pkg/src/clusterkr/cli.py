"""Command-line interface: one JSON document per invocation.

Verbs: quiver | mutate | mgs | qchar | dt | serve.  Exit codes: 0 success,
1 usage error, 2 engine fault (Laurent phenomenon or invariant breach) --
CI relies on the distinction.  CLUSTERKR_LOG in {error, info, debug}
controls stderr logging; there is no other environment dependence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import EngineFault, UsageError
from .greenseq import (
    MutationSequence,
    classify_sequence,
    sink_sequence_An,
    source_mgs,
    source_sink_sequence,
)
from .krchar import hl_sweep_character, mgs_character
from .laurent import LaurentPoly
from .quiver import DynkinType, Quiver, VertexId, dynkin_quiver, hl_truncation, line_quiver
from .seed import Seed
from .server import canonical_dumps, serve
from .dt import dt_closed_form_A, dt_product_mutation, dt_via_qcharacters

log = logging.getLogger("clusterkr")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _render_text(obj: dict) -> str:
    """Terse human-readable rendering of the JSON payloads."""
    lines: list[str] = []
    if "vertices" in obj and "arrows" in obj:
        frozen = [v["id"] for v in obj["vertices"] if v["frozen"]]
        lines.append("vertices: " + " ".join(v["id"] for v in obj["vertices"]))
        if frozen:
            lines.append("frozen:   " + " ".join(frozen))
        lines.append(
            "arrows:   "
            + "  ".join(
                f"{a['from']}->{a['to']}" + (f" x{a['mult']}" if a["mult"] > 1 else "")
                for a in obj["arrows"]
            )
        )
    if "x" in obj:
        for vid, poly in obj["x"].items():
            lines.append(f"x[{vid}] = {LaurentPoly.from_obj(poly)}")
    if "kind" in obj:
        lines.append(f"kind: {obj['kind']}")
        if "sigma" in obj:
            lines.append("sigma: " + " ".join(f"{a}->{b}" for a, b in obj["sigma"].items()))
    if "sequence" in obj:
        lines.append(f"sequence: {obj['sequence']}")
        lines.append(f"kind: {obj['report']['kind']}")
    if "character" in obj:
        module = obj["module"]
        lines.append(
            f"W^({module['node']})_{{{module['k']},{module['right']}}}"
            + (" (truncated)" if obj["truncated"] else "")
        )
        lines.append(str(LaurentPoly.from_obj(obj["character"])))
    if "images" in obj:
        for vid, poly in obj["images"].items():
            lines.append(f"DT(x[{vid}]) = {LaurentPoly.from_obj(poly)}")
    if "error" in obj:
        lines.append(f"error ({obj['error']['kind']}): {obj['error']['message']}")
    return "\n".join(lines) if lines else canonical_dumps(obj)


def _build_parser() -> _Parser:
    parser = _Parser(prog="clusterkr", description=__doc__)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format", choices=["json", "text"], default="json",
        help="output format (default: one canonical JSON document)",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    q = sub.add_parser("quiver", description="build quivers")
    qsub = q.add_subparsers(dest="action", required=True)
    qb = qsub.add_parser("build", parents=[fmt])
    qb.add_argument("--type", choices=["A", "D", "E"], help="Dynkin family")
    qb.add_argument("--rank", type=int, help="Dynkin rank")
    qb.add_argument("--line", type=int, help="sink-oriented line quiver instead")
    qb.add_argument("--frozen-top", action="store_true", help="freeze the last line vertex")
    qb.add_argument("--product-levels", type=int, help="triangular product with A_L")
    qb.add_argument("--frozen-from", type=int, help="freeze levels >= this (default: top level)")

    mu = sub.add_parser("mutate", parents=[fmt])
    mu.add_argument("--quiver", required=True, help="quiver JSON file or - for stdin")
    mu.add_argument("--seq", required=True, help="comma-separated vertex ids")
    mu.add_argument("--tropical", action="store_true", help="include c/g/F data")

    mgs = sub.add_parser("mgs")
    msub = mgs.add_subparsers(dest="action", required=True)
    mv = msub.add_parser("verify", parents=[fmt])
    mv.add_argument("--quiver", required=True)
    mv.add_argument("--seq", required=True)
    mg = msub.add_parser("generate", parents=[fmt])
    mg.add_argument("--quiver", required=True)
    mg.add_argument("--kind", choices=["sink", "source", "source-sink"], default="source")

    qc = sub.add_parser("qchar", parents=[fmt])
    qc.add_argument("--type", required=True, choices=["A", "D", "E"])
    qc.add_argument("--rank", type=int, required=True)
    qc.add_argument("--node", type=int, required=True)
    qc.add_argument("--k", type=int, required=True, help="KR length")
    qc.add_argument("--level", type=int, required=True, help="right end of the support")
    qc.add_argument("--route", choices=["hl", "mgs"], default="mgs")

    dt = sub.add_parser("dt", parents=[fmt])
    dt.add_argument("--type", required=True, choices=["A", "D", "E"])
    dt.add_argument("--rank", type=int, required=True)
    dt.add_argument("--m", type=int, help="mutable levels of the product (route mutate/qchar)")
    dt.add_argument("--route", choices=["mutate", "qchar", "closed-form"], default="mutate")
    dt.add_argument("--unfrozen", action="store_true", help="closed form without the frozen top")

    sv = sub.add_parser("serve")
    sv.add_argument("--port", type=int, required=True)
    sv.add_argument("--idle-timeout", type=float, default=3600.0)
    sv.add_argument("--static", help="directory with the explorer UI assets")
    return parser


def _read_quiver(source: str) -> Quiver:
    if source == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read quiver file {source}: {exc}") from exc
    try:
        return Quiver.from_obj(json.loads(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad quiver JSON: {exc}") from exc


def _cmd_quiver(args: argparse.Namespace) -> dict:
    if args.line is not None:
        quiver = line_quiver(args.line, frozen_top=args.frozen_top)
        return quiver.to_obj()
    if not args.type or args.rank is None:
        raise UsageError("need --type and --rank (or --line M)")
    dtype = DynkinType(args.type, args.rank)
    if args.product_levels is not None:
        quiver = hl_truncation(dtype, args.product_levels, args.frozen_from)
    else:
        quiver = dynkin_quiver(dtype)
    return quiver.to_obj()


def _cmd_mutate(args: argparse.Namespace) -> dict:
    quiver = _read_quiver(args.quiver)
    seq = MutationSequence.from_text(args.seq)
    seed = Seed.initial(quiver, tracking=args.tropical).apply(seq)
    obj = seed.to_obj()
    if args.tropical:
        obj["tropical"] = seed.tropical_data().to_obj()
    return obj


def _cmd_mgs(args: argparse.Namespace) -> dict:
    quiver = _read_quiver(args.quiver)
    if args.action == "verify":
        report = classify_sequence(quiver, MutationSequence.from_text(args.seq))
        return report.to_obj()
    if args.kind == "source":
        seq = source_mgs(quiver)
    elif args.kind == "sink":
        levels = [v.node for v in quiver.mutable_vertices]
        if not all(isinstance(n, int) for n in levels):
            raise UsageError("sink generation expects an A-line quiver with integer ids")
        seq = sink_sequence_An(len(levels))
    else:
        levels = sorted({v.level for v in quiver.mutable_vertices if v.level is not None})
        if not levels:
            raise UsageError("source-sink generation expects a triangular product")
        nodes = sorted({str(v.node) for v in quiver.vertices})
        base_arrows = {}
        for (a, b), mult in quiver.arrows.items():
            if a.level == b.level == 1:
                base_arrows[(VertexId(a.node), VertexId(b.node))] = mult
        base = Quiver([VertexId(n) for n in nodes], base_arrows)
        seq = source_sink_sequence(base, sink_sequence_An(max(levels)), line_quiver(max(levels)), validate=False)
    report = classify_sequence(quiver, seq)
    return {
        "sequence": seq.to_text(),
        "provenance": seq.provenance,
        "report": report.to_obj(),
    }


def _cmd_qchar(args: argparse.Namespace) -> dict:
    dtype = DynkinType(args.type, args.rank)
    if args.route == "mgs":
        char = mgs_character(dtype, a=args.k, levels=args.level, node=args.node)
    else:
        d = args.level - args.k
        if d < 1:
            raise UsageError("hl route needs level > k")
        char = hl_sweep_character(dtype, d=d, k=args.k, node=args.node)
    return char.to_obj()


def _cmd_dt(args: argparse.Namespace) -> dict:
    dtype = DynkinType(args.type, args.rank)
    if args.route == "closed-form":
        if args.type != "A":
            raise UsageError("closed form is A-type only")
        return dt_closed_form_A(args.rank, iced=not args.unfrozen).to_obj()
    if args.m is None:
        raise UsageError("routes mutate/qchar need --m")
    if args.route == "qchar":
        return dt_via_qcharacters(dtype, args.m).to_obj()
    return dt_product_mutation(dtype, args.m).to_obj()


def _cmd_serve(args: argparse.Namespace) -> int:
    static = Path(args.static) if args.static else None
    try:
        httpd = serve(args.port, static, args.idle_timeout)
    except OSError as exc:
        log.error("cannot bind port %s: %s", args.port, exc)
        return 1
    port = httpd.server_address[1]  # actual port (supports --port 0)
    log.info("serving on 127.0.0.1:%s", port)
    print(canonical_dumps({"port": port, "serving": True}), flush=True)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("CLUSTERKR_LOG", "error").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.ERROR))
    try:
        args = _build_parser().parse_args(argv)
        if args.verb == "serve":
            return _cmd_serve(args)
        handlers = {
            "quiver": _cmd_quiver,
            "mutate": _cmd_mutate,
            "mgs": _cmd_mgs,
            "qchar": _cmd_qchar,
            "dt": _cmd_dt,
        }
        result = handlers[args.verb](args)
        print(_render_text(result) if args.format == "text" else canonical_dumps(result))
        return 0
    except UsageError as exc:
        log.error("usage error: %s", exc)
        print(canonical_dumps({"error": {"kind": "usage", "message": str(exc)}}))
        return 1
    except EngineFault as exc:
        log.error("engine fault: %s", exc)
        print(
            canonical_dumps(
                {
                    "error": {
                        "kind": "engine_fault",
                        "message": str(exc),
                        "context": {k: str(v) for k, v in exc.context.items()},
                    }
                }
            )
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
