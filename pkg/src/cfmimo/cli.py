"""Command-line front end.

The CLI is a thin HTTP client of the simulation service: with --server it
talks to a running instance, otherwise it mounts the FastAPI app in-process
over an ASGI transport, so `simulate` works standalone while exercising the
same request path. Exit codes: 0 success, 1 configuration error, 2 runtime
error.
"""

import argparse
import sys
from typing import Optional

import httpx

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfmimo",
        description="Capacity experiments for cooperative cell-free mmWave MIMO",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a sweep and write its CSV")
    sim.add_argument("--config", required=True, help="path to a key=value config file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--realizations", type=int, default=None,
                     help="override the config's realization count")
    sim.add_argument("--seed", type=int, default=None, help="override the master seed")
    sim.add_argument("--scenario", default=None, help="override the config's scenario")
    sim.add_argument("--server", default=None,
                     help="base URL of a running service (default: in-process)")

    srv = sub.add_parser("serve", help="start the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    return parser


def _post_sweep(server: Optional[str], payload: dict) -> httpx.Response:
    if server:
        with httpx.Client(base_url=server, timeout=None) as client:
            return client.post("/sweep/csv", json=payload)

    # no server given: mount the app in-process over an ASGI transport
    import asyncio

    from .service.app import app

    async def _request() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://cfmimo.local", timeout=None
        ) as client:
            return await client.post("/sweep/csv", json=payload)

    return asyncio.run(_request())


def _simulate(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            config_text = handle.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = {
        "config_text": config_text,
        "scenario": args.scenario,
        "realizations": args.realizations,
        "seed": args.seed,
        "workers": args.workers,
    }
    try:
        response = _post_sweep(args.server, payload)
    except httpx.HTTPError as exc:
        print(f"error: service request failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if response.status_code == 400:
        detail = response.json().get("detail", response.text)
        print(f"configuration error: {detail}", file=sys.stderr)
        return EXIT_CONFIG
    if response.status_code != 200:
        print(f"error: service returned {response.status_code}: {response.text}",
              file=sys.stderr)
        return EXIT_RUNTIME
    try:
        with open(args.out, "wb") as handle:
            handle.write(response.content)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {args.out}")
    return EXIT_OK


def _serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _simulate(args)
    return _serve(args)


def simulate_entry() -> None:
    """Entry point for the `simulate` console script."""
    sys.exit(main(["simulate", *sys.argv[1:]]))


if __name__ == "__main__":
    sys.exit(main())
