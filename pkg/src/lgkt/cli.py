"""Batch command-line front end.

The CLI is a thin client of the FastAPI service: by default requests run
against the app over an in-process ASGI transport (no sockets, no server,
byte-deterministic output); pass --server to talk to a running instance
instead.  Exit status: 0 success, 1 validation failure, 2 input error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from typing import Any

import httpx


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: {path} is not valid JSON: {exc}")


def _post(path: str, payload: dict, server: str | None) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=300.0) as client:
            return client.post(path, json=payload)

    async def run() -> httpx.Response:
        from .service import app
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service.local") as client:
            return await client.post(path, json=payload)

    return asyncio.run(run())


def _emit_structured(doc: Any) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _finish(response: httpx.Response, emit: str, render) -> int:
    if response.status_code == 200:
        doc = response.json()
        if emit == "structured":
            _emit_structured(doc)
        else:
            sys.stdout.write(render(doc))
        return 0
    try:
        detail = response.json()
    except ValueError:
        detail = {"message": response.text}
    message = detail.get("message") or json.dumps(detail, sort_keys=True)
    kind = detail.get("kind", "input")
    sys.stderr.write(f"error ({kind}): {message}\n")
    if response.status_code == 409:
        return 1
    return 2


def _render_validation(doc: dict) -> str:
    lines = []
    for name, flag in sorted(doc["flags"].items()):
        if flag["witness"]:
            lines.append(f"{name}: {str(flag['value']).lower()} "
                         f"({flag['witness']})")
        else:
            lines.append(f"{name}: {str(flag['value']).lower()}")
    lines.append("result: ok" if doc["ok"] else "result: validation failed")
    return "\n".join(lines) + "\n"


def _render_report(doc: dict) -> str:
    lines = [f"mode: {doc['mode']}",
             f"K0: {doc['k0']}",
             f"K1: {doc['k1']}"]
    if doc.get("stabilized_at") is not None:
        lines.append(f"stabilized at level {doc['stabilized_at']}")
    for key in ("k0_classification", "k1_classification"):
        cls = doc.get(key)
        if cls:
            name = key.split("_")[0].upper()
            extra = f", from level {cls['stabilized_from']}" \
                if cls.get("stabilized_from") else ""
            lines.append(f"{name} limit: {cls['kind']}{extra} ({cls['flag']})")
    if doc["levels"]:
        lines.append("level  classes  ker            coker")
        for row in doc["levels"]:
            lines.append(f"{row['level']:<6} {row['class_count']:<8} "
                         f"{row['ker']:<14} {row['coker']}")
    for check in doc["checks"]:
        status = "ok" if check["passed"] else "FAIL"
        lines.append(f"check {check['name']} at level {check['level']}: {status}")
    return "\n".join(lines) + "\n"


def _render_partitions(doc: dict) -> str:
    lines = []
    for level in doc["levels"]:
        for cls in level["classes"]:
            lines.append(f"level {level['level']}: {{{','.join(cls)}}}")
    if doc["stabilized_at"] is not None:
        lines.append(f"stabilized at level {doc['stabilized_at']}")
    else:
        lines.append(f"not stabilized within horizon {doc['horizon']}")
    return "\n".join(lines) + "\n"


def _render_cover(doc: dict) -> str:
    g = doc["graph"]
    lines = [f"vertices: {','.join(g['vertices'])}"]
    for s, a, t in g["edges"]:
        lines.append(f"edge: {s} -{a}-> {t}")
    for v in sorted(doc["state_map"]):
        lines.append(f"state {v} = {{{','.join(doc['state_map'][v])}}}")
    lines.append(f"trimmed: {str(doc['trimmed']).lower()}")
    return "\n".join(lines) + "\n"


def _graph_payload(path: str) -> dict:
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise SystemExit(f"error: {path} must contain a graph object")
    return {"vertices": doc.get("vertices"), "edges": doc.get("edges", [])}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgkt",
        description="K-theory of labelled graph algebras via exact integer "
                    "linear algebra")
    parser.add_argument("--server", metavar="URL",
                        help="talk to a running service instead of computing "
                             "in-process")
    parser.add_argument("--emit", choices=("text", "structured"),
                        default="text", help="output format (default: text)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural and family validation")
    p.add_argument("graph", help="graph document (JSON)")
    p.add_argument("--family", metavar="FILE",
                   help="also validate a set family from FILE")
    p.add_argument("--horizon", type=int, default=1)

    p = sub.add_parser("partitions", help="generalized-vertex partition tower")
    p.add_argument("graph")
    p.add_argument("--max-level", type=int, default=32)

    p = sub.add_parser("ktheory", help="K-theory over the partition tower")
    p.add_argument("graph")
    p.add_argument("--max-level", type=int, default=32)

    p = sub.add_parser("graph", help="plain graph-algebra K-theory "
                                     "(labels ignored)")
    p.add_argument("graph")

    p = sub.add_parser("family", help="K-theory from an explicit set family")
    p.add_argument("graph")
    p.add_argument("--family", default="e0minus",
                   help='"e0minus" (default: generate the letter-range '
                        'family) or a JSON file with {"sets": [[...]]}')

    p = sub.add_parser("levels", help="K-theory of a level system")
    p.add_argument("system", nargs="?",
                   help="level-system document (JSON); omit when using "
                        "--generator")
    p.add_argument("--generator", choices=("dyck2", "int_line"))
    p.add_argument("--horizon", type=int, default=8)

    p = sub.add_parser("cover", help="left-resolving predecessor cover")
    p.add_argument("graph")
    p.add_argument("--no-trim", action="store_true",
                   help="do not trim sources/sinks before covering")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "validate":
        payload: dict = {"graph": _graph_payload(args.graph),
                         "horizon": args.horizon}
        if args.family:
            payload["family"] = {"sets": _load_json(args.family)["sets"]}
        response = _post("/validate", payload, args.server)
        code = _finish(response, args.emit, _render_validation)
        if code == 0 and not response.json()["ok"]:
            return 1
        return code

    if args.command == "partitions":
        payload = {"graph": _graph_payload(args.graph),
                   "max_level": args.max_level}
        return _finish(_post("/partitions", payload, args.server),
                       args.emit, _render_partitions)

    if args.command == "ktheory":
        payload = {"graph": _graph_payload(args.graph),
                   "max_level": args.max_level}
        return _finish(_post("/ktheory", payload, args.server),
                       args.emit, _render_report)

    if args.command == "graph":
        payload = {"graph": _graph_payload(args.graph)}
        return _finish(_post("/graph-algebra", payload, args.server),
                       args.emit, _render_report)

    if args.command == "family":
        payload = {"graph": _graph_payload(args.graph)}
        if args.family != "e0minus":
            payload["family"] = {"sets": _load_json(args.family)["sets"]}
        return _finish(_post("/family", payload, args.server),
                       args.emit, _render_report)

    if args.command == "levels":
        if (args.system is None) == (args.generator is None):
            raise SystemExit(
                "error: provide a level-system file or --generator, not both")
        payload = {"horizon": args.horizon}
        if args.system:
            payload["system"] = _load_json(args.system)
        else:
            payload["generator"] = args.generator
        return _finish(_post("/levels", payload, args.server),
                       args.emit, _render_report)

    if args.command == "cover":
        payload = {"graph": _graph_payload(args.graph),
                   "trim": not args.no_trim}
        return _finish(_post("/cover", payload, args.server),
                       args.emit, _render_cover)

    raise SystemExit(f"error: unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
