"""Thin CLI client for the compute service.

The CLI parses a structured text config, builds the request for the chosen
subcommand, sends it to the service over HTTP (an in-process application
instance by default, or ``--server URL`` for a running one), and writes the
returned table as a CSV plus a JSON summary.  Given identical config and
seed, outputs are byte-identical.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

import httpx

from .config import ConfigError, build_request, parse_config_text
from .csvio import render_csv

OPERATIONS = ("norm", "rearrange", "indices", "ermakoff", "doubling", "poincare", "certify")


async def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server:
        async with httpx.AsyncClient(base_url=server.rstrip("/"), timeout=600.0) as client:
            return await client.post(path, json=payload)
    from .service.app import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(
        transport=transport, base_url="http://ripoincare.local", timeout=600.0
    ) as client:
        return await client.post(path, json=payload)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ripoincare",
        description="Client for the rearrangement-invariant norm / doubling-certificate service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for op in OPERATIONS:
        p = sub.add_parser(op, help=f"run the {op} pipeline")
        p.add_argument("--config", required=True, help="path to the structured text config")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized families")
        p.add_argument(
            "--grid-scale", type=int, default=1, help="multiplier for estimator grid densities"
        )
        p.add_argument("--server", default=None, help="base URL of a running service")
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_config_text(fh.read())
        request = build_request(cfg, args.command, args.seed, args.grid_scale)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    resp = asyncio.run(
        _post(args.server, f"/v1/{args.command}", request.model_dump(mode="json"))
    )
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"service rejected the request ({resp.status_code}): {detail}", file=sys.stderr)
        return 3

    payload = resp.json()
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, f"{args.command}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(payload["columns"], payload["rows"]))
    summary = dict(payload["summary"])
    summary["seed"] = getattr(request, "seed", args.seed)
    summary["grid_scale"] = args.grid_scale
    summary_path = os.path.join(args.out, f"{args.command}_summary.json")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"wrote {csv_path} and {summary_path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
