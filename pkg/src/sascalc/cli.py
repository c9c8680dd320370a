"""Command-line client for the calculus service.

Every subcommand builds an HTTP request and sends it to the FastAPI app,
in-process by default or to a remote server via --server. Structured
results go to stdout (JSON unless a subcommand's --out says csv),
diagnostics and error messages go to stderr. Exit codes: 0 success, 1
diagnostics or file problems, 2 usage errors (argparse's convention).

Coloring of stderr diagnostics follows the terminal and can be disabled
with SAS_COLOR=0.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Sequence

import httpx

from . import __version__, dsl, dynamics, him
from .errors import SasError

_TIMEOUT = 60.0


def _call(method: str, route: str, payload: dict | None, server: str | None) -> tuple[int, bytes]:
    if server:
        response = httpx.request(
            method,
            server.rstrip("/") + route,
            json=payload,
            timeout=_TIMEOUT,
        )
        return response.status_code, response.content

    from .service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://sascalc.local"
        ) as client:
            return await client.request(method, route, json=payload)

    response = asyncio.run(go())
    return response.status_code, response.content


def _color_enabled() -> bool:
    if os.environ.get("SAS_COLOR", "") == "0":
        return False
    return sys.stderr.isatty()


def _print_diagnostics(diagnostics: list[dict], path: str | None) -> None:
    color = _color_enabled()
    for entry in diagnostics:
        diag = dsl.Diagnostic(
            severity=entry["severity"],
            line=entry["line"],
            column=entry["column"],
            code=entry["code"],
            message=entry["message"],
        )
        print(dsl.format_diagnostic(diag, path=path, color=color), file=sys.stderr)


def _fail(status: int, body: bytes, path: str | None) -> int:
    """Render a non-200 response onto stderr."""

    try:
        doc = json.loads(body.decode("utf-8"))
    except (ValueError, UnicodeDecodeError):
        print(f"error: service returned status {status}", file=sys.stderr)
        return 1
    detail = doc.get("detail", doc)
    if isinstance(detail, dict) and detail.get("code") == "diagnostics":
        _print_diagnostics(detail.get("diagnostics", []), detail.get("path") or path)
    elif isinstance(detail, dict):
        code = detail.get("code", "error")
        message = detail.get("message", json.dumps(detail))
        print(f"error[{code}]: {message}", file=sys.stderr)
    else:
        print(f"error: {detail}", file=sys.stderr)
    return 1


def _emit(body: bytes, out_path: str | None = None) -> int:
    text = body.decode("utf-8")
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return 0
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    return 0


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


# --- subcommand handlers --------------------------------------------------


def _cmd_validate(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    status, body = _call(
        "POST", "/validate", {"source": source, "path": args.file}, args.server
    )
    if status != 200:
        return _fail(status, body, args.file)
    report = json.loads(body.decode("utf-8"))
    _print_diagnostics(report.get("diagnostics", []), args.file)
    for violation in report.get("violations", []):
        print(
            f"{args.file}: violation[{violation['code']}] at {violation['path']}: "
            f"{violation['message']}",
            file=sys.stderr,
        )
    _emit(body)
    has_errors = any(d["severity"] == dsl.ERROR for d in report.get("diagnostics", []))
    return 1 if (has_errors or report.get("violations")) else 0


def _cmd_fuse(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    payload = {
        "source": source,
        "path": args.file,
        "systems": args.systems,
        "oracle": args.oracle,
    }
    status, body = _call("POST", "/fuse", payload, args.server)
    return _emit(body) if status == 200 else _fail(status, body, args.file)


def _cmd_gain(args: argparse.Namespace) -> int:
    status, body = _call("POST", "/gain", {"n1": args.n1, "n2": args.n2}, args.server)
    return _emit(body) if status == 200 else _fail(status, body, None)


def _cmd_topology(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    status, body = _call(
        "POST", "/topology", {"source": source, "path": args.file}, args.server
    )
    return _emit(body) if status == 200 else _fail(status, body, args.file)


def _cmd_reliability(args: argparse.Namespace) -> int:
    status, body = _call("POST", "/reliability", {"rates": args.error_rates}, args.server)
    return _emit(body) if status == 200 else _fail(status, body, None)


def _cmd_capacity(args: argparse.Namespace) -> int:
    payload = {"neurons": args.neurons, "synapses": args.synapses}
    status, body = _call("POST", "/capacity", payload, args.server)
    return _emit(body) if status == 200 else _fail(status, body, None)


def _cmd_knowledge_gain(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    payload = {"source": source, "path": args.file, "concepts": args.concepts}
    status, body = _call("POST", "/knowledge-gain", payload, args.server)
    return _emit(body) if status == 200 else _fail(status, body, args.file)


def _cmd_compose(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    payload = {"source": source, "path": args.file, "layers": args.layers}
    status, body = _call("POST", "/compose", payload, args.server)
    return _emit(body) if status == 200 else _fail(status, body, args.file)


def _cmd_dispatch(args: argparse.Namespace) -> int:
    source = _read_file(args.file)
    occurrences = him.parse_events_text(_read_file(args.events))
    payload = {
        "source": source,
        "path": args.file,
        "events": [[t, name] for t, name in occurrences],
    }
    status, body = _call("POST", "/dispatch", payload, args.server)
    if status != 200:
        return _fail(status, body, args.file)
    report = json.loads(body.decode("utf-8"))
    with open(args.trace, "w", encoding="utf-8", newline="") as fh:
        json.dump(report, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    summary = {
        "events": len(report["trace"]),
        "handled": report["handled"],
        "unhandled": report["unhandled"],
        "trace": args.trace,
    }
    print(json.dumps(summary, separators=(",", ":")))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    payload = {
        "bl": args.bl,
        "dl": args.dl,
        "bg": args.bg,
        "dg": args.dg,
        "nl0": args.nl0,
        "ng0": args.ng0,
        "dt": args.dt,
        "steps": args.steps,
        "format": args.out,
    }
    status, body = _call("POST", "/simulate-pps", payload, args.server)
    if status != 200:
        return _fail(status, body, None)
    return _emit(body, out_path=args.path)


def _cmd_taxonomy(args: argparse.Namespace) -> int:
    status, body = _call("GET", "/taxonomy", None, args.server)
    return _emit(body) if status == 200 else _fail(status, body, None)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# --- argument parsing ------------------------------------------------------


def _comma_names(text: str) -> list[str]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    if len(names) != 2:
        raise argparse.ArgumentTypeError("expected exactly two comma-separated names")
    return names


def _comma_floats(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated numbers") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one rate")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sascalc",
        description="Symbiotic-systems calculus over .sas model files.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running sascalc server (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("validate", help="parse and check a .sas file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("fuse", help="fuse two systems declared in a file")
    p.add_argument("file")
    p.add_argument("--systems", type=_comma_names, required=True, metavar="A,B")
    p.add_argument("--oracle", action="store_true", help="include the enumeration oracle")
    p.set_defaults(func=_cmd_fuse)

    p = sub.add_parser("gain", help="closed-form symbiotic gain for component counts")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.set_defaults(func=_cmd_gain)

    p = sub.add_parser("topology", help="layered view of a file's systems")
    p.add_argument("file")
    p.set_defaults(func=_cmd_topology)

    p = sub.add_parser("reliability", help="error-rate aggregation report")
    p.add_argument("--error-rates", type=_comma_floats, required=True, metavar="LIST")
    p.set_defaults(func=_cmd_reliability)

    p = sub.add_parser("capacity", help="log10 of the synapse-selection capacity")
    p.add_argument("--neurons", type=float, required=True, metavar="MAG")
    p.add_argument("--synapses", type=float, required=True, metavar="MAG")
    p.set_defaults(func=_cmd_capacity)

    p = sub.add_parser("knowledge-gain", help="symbiosis gain between two concepts")
    p.add_argument("file")
    p.add_argument("--concepts", type=_comma_names, required=True, metavar="A,B")
    p.set_defaults(func=_cmd_knowledge_gain)

    p = sub.add_parser("compose", help="compose knowledge layers over a file's concepts")
    p.add_argument("file")
    p.add_argument("--layers", type=_positive_int, default=1)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("dispatch", help="run an event sequence through a file's bindings")
    p.add_argument("file")
    p.add_argument("--events", required=True, help="events file: one seq,event_name per line")
    p.add_argument("--trace", required=True, help="path for the trace document")
    p.set_defaults(func=_cmd_dispatch)

    p = sub.add_parser("simulate-pps", help="predator-prey simulation")
    p.add_argument("--bl", type=float, default=dynamics.DEFAULT_B_L,
                   help="predator birth coupling")
    p.add_argument("--dl", type=float, default=dynamics.DEFAULT_D_L,
                   help="predator death rate")
    p.add_argument("--bg", type=float, default=dynamics.DEFAULT_B_G,
                   help="prey birth rate")
    p.add_argument("--dg", type=float, default=dynamics.DEFAULT_D_G,
                   help="prey death coupling")
    p.add_argument("--nl0", type=float, default=dynamics.DEFAULT_N_L0,
                   help="initial predator population")
    p.add_argument("--ng0", type=float, default=dynamics.DEFAULT_N_G0,
                   help="initial prey population")
    p.add_argument("--dt", type=float, default=dynamics.DEFAULT_DT,
                   help="integration step")
    p.add_argument("--steps", type=_positive_int, default=dynamics.DEFAULT_STEPS)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.add_argument("--path", default=None, help="write output to a file instead of stdout")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("taxonomy", help="the fixed 16-entry behavior taxonomy")
    p.set_defaults(func=_cmd_taxonomy)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        missing = exc.filename if exc.filename else str(exc)
        print(f"error: cannot read {missing}: no such file", file=sys.stderr)
        return 1
    except IsADirectoryError as exc:
        print(f"error: {exc.filename} is a directory", file=sys.stderr)
        return 1
    except SasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"error: cannot reach server: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
