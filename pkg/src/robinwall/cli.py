"""Command-line front end.

Thin client of the HTTP service: every data subcommand builds a request
model, posts it to the service (in-process by default, or to --server),
and writes the returned rows as CSV or JSON. Exit codes: 0 success or
check passed, 1 check failed, 2 usage/configuration error.

Floats are printed with 17 significant digits in CSV so files
round-trip losslessly and identical configurations diff byte-identical.
"""

from __future__ import annotations

import argparse
import asyncio
import csv
import io
import json
import sys
from pathlib import Path

import httpx
import pydantic

from . import experiments, schemas

USAGE_ERROR = 2
CHECK_FAILED = 1


def _parse_widths(specs: list[str]) -> list[float]:
    """Expand width arguments; each is a float or a start:factor:count range."""
    widths: list[float] = []
    for spec in specs:
        if ":" in spec:
            try:
                start_s, factor_s, count_s = spec.split(":")
                start, factor, count = float(start_s), float(factor_s), int(count_s)
            except ValueError:
                raise argparse.ArgumentTypeError(
                    f"range spec must be start:factor:count, got {spec!r}"
                ) from None
            widths.extend(start * factor**j for j in range(count))
        else:
            widths.append(float(spec))
    return widths


def _post(server: str | None, path: str, payload: dict) -> tuple[int, dict]:
    """POST to the running service at ``server`` or to the app in process."""
    if server is not None:
        with httpx.Client(base_url=server, timeout=httpx.Timeout(600.0)) as client:
            response = client.post(path, json=payload)
            return response.status_code, response.json()

    async def _call() -> tuple[int, dict]:
        from .service import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://robinwall", timeout=httpx.Timeout(600.0)
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(_call())


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render(columns: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{c: row.get(c) for c in columns} for row in rows], indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


def _write_table(out: str | None, columns: list[str], rows: list[dict], fmt: str) -> None:
    text = _render(columns, rows, fmt)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)


def _report_http_error(status: int, body: dict) -> int:
    detail = body.get("detail", body)
    print(f"error: {detail}", file=sys.stderr)
    return USAGE_ERROR if status in (400, 422) else CHECK_FAILED


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--server", help="base URL of a running service (default: in process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robinwall",
        description="Robin/Neumann walls from thin layers: reflection tables, "
        "convergence curves, shooting-oracle checks, wave-packet experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reflect", help="reflection amplitudes for a wall model")
    p.add_argument("--kind", choices=("robin", "delta", "valley"), required=True)
    p.add_argument("--k", action="append", type=float, required=True, help="wave number (repeatable)")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--L", action="append", default=None,
                   help="layer width, float or start:factor:count range (repeatable)")
    _add_output_flags(p)

    p = sub.add_parser("converge", help="error |b(L) - b_robin| of the calibrated layers")
    p.add_argument("--k", action="append", type=float, default=None, help="wave number (repeatable; default 1)")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--kind", action="append", choices=("delta", "valley"), default=None,
                   help="layer kind (repeatable; default both)")
    p.add_argument("--L", action="append", default=None,
                   help="widths, floats or start:factor:count ranges (default 0.1:0.5:7)")
    _add_output_flags(p)

    p = sub.add_parser("evolve", help="wave-packet comparison of Robin wall vs calibrated layer")
    p.add_argument("--kind", choices=("robin", "delta", "valley"), required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--L", action="append", default=None,
                   help="layer widths (default 0.4 0.2 0.1 for layered kinds)")
    p.add_argument("--xmin", type=float, default=experiments.EVOLVE_DEFAULTS.x_min)
    p.add_argument("--nodes", type=int, default=experiments.EVOLVE_DEFAULTS.nodes)
    p.add_argument("--x0", type=float, default=experiments.EVOLVE_DEFAULTS.x0)
    p.add_argument("--sigma", type=float, default=experiments.EVOLVE_DEFAULTS.sigma)
    p.add_argument("--k0", type=float, default=experiments.EVOLVE_DEFAULTS.k0)
    p.add_argument("--dt", type=float, default=experiments.EVOLVE_DEFAULTS.dt)
    p.add_argument("--horizon", type=float, default=experiments.EVOLVE_DEFAULTS.horizon)
    p.add_argument("--observables", help="path for per-step (t, norm, <x>) rows")
    p.add_argument("--obs-every", type=int, default=1, help="record every N-th step (with --observables)")
    p.add_argument("--snapshots", help="path for final-state snapshots")
    _add_output_flags(p)

    p = sub.add_parser("oracle", help="cross-check closed forms against the shooting oracle")
    p.add_argument("--seed", type=int, default=experiments.DEFAULT_SEED)
    p.add_argument("--tuples", type=int, default=100, help="random tuples per kind")
    p.add_argument("--h", type=float, default=1e-5, help="oracle step size")
    p.add_argument("--against", choices=("oracle", "robin"), default="oracle",
                   help="'robin' compares finite-L amplitudes with the limit instead (control)")
    _add_output_flags(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_reflect(args: argparse.Namespace) -> int:
    request = schemas.ReflectRequest(
        kind=args.kind,
        k=args.k,
        alpha=args.alpha,
        L=_parse_widths(args.L) if args.L else None,
    )
    status, body = _post(args.server, "/reflect", request.model_dump())
    if status != 200:
        return _report_http_error(status, body)
    _write_table(args.out, experiments.REFLECT_COLUMNS, body["rows"], args.format)
    return 0


def _cmd_converge(args: argparse.Namespace) -> int:
    request = schemas.ConvergeRequest(
        k=args.k if args.k else [1.0],
        alpha=args.alpha,
        kind=args.kind if args.kind else ["delta", "valley"],
        L=_parse_widths(args.L) if args.L else list(experiments.DEFAULT_CONVERGE_WIDTHS),
    )
    status, body = _post(args.server, "/converge", request.model_dump())
    if status != 200:
        return _report_http_error(status, body)
    _write_table(args.out, experiments.CONVERGE_COLUMNS, body["rows"], args.format)
    lo, hi = body["order_band"]
    verdict = "pass" if body["passed"] else "FAIL"
    print(f"terminal observed order within [{lo}, {hi}]: {verdict}", file=sys.stderr)
    return 0 if body["passed"] else CHECK_FAILED


def _cmd_evolve(args: argparse.Namespace) -> int:
    if args.kind == "robin":
        widths = _parse_widths(args.L) if args.L else None
    else:
        widths = _parse_widths(args.L) if args.L else list(experiments.DEFAULT_EVOLVE_WIDTHS)
    request = schemas.EvolveRequest(
        kind=args.kind,
        alpha=args.alpha,
        L=widths,
        x_min=args.xmin,
        nodes=args.nodes,
        x0=args.x0,
        sigma=args.sigma,
        k0=args.k0,
        dt=args.dt,
        horizon=args.horizon,
        record_every=args.obs_every if args.observables else 0,
        include_snapshots=bool(args.snapshots),
    )
    status, body = _post(args.server, "/evolve", request.model_dump())
    if status != 200:
        return _report_http_error(status, body)
    _write_table(args.out, experiments.EVOLVE_COLUMNS, body["rows"], args.format)
    if args.observables:
        _write_table(args.observables, experiments.OBSERVABLE_COLUMNS, body["observables"], args.format)
    if args.snapshots:
        _write_table(args.snapshots, experiments.SNAPSHOT_COLUMNS, body["snapshots"], args.format)
    print(f"max relative norm drift: {body['norm_drift']:.3e}", file=sys.stderr)
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    request = schemas.OracleRequest(
        seed=args.seed,
        tuples_per_kind=args.tuples,
        h=args.h,
        against=args.against,
    )
    status, body = _post(args.server, "/oracle", request.model_dump())
    if status != 200:
        return _report_http_error(status, body)
    _write_table(args.out, experiments.ORACLE_COLUMNS, body["rows"], args.format)
    verdict = "pass" if body["passed"] else "FAIL"
    print(
        f"max |difference| = {body['max_difference']:.3e} "
        f"(tolerance {body['tolerance']:.0e}): {verdict}",
        file=sys.stderr,
    )
    return 0 if body["passed"] else CHECK_FAILED


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "reflect": _cmd_reflect,
        "converge": _cmd_converge,
        "evolve": _cmd_evolve,
        "oracle": _cmd_oracle,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (argparse.ArgumentTypeError, pydantic.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
