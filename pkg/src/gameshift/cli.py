"""Command-line client.

Runs experiments in process by default; pass --server to send the same
request to a running service instead. Either way the work goes through
the service layer, so both modes produce identical files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx

from .config import ConfigError
from .service.app import SWEEP_KINDS, execute_experiment, theory_csv, theory_rows
from .service.schemas import ExperimentRequest


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except httpx.HTTPStatusError as e:
        detail = _error_detail(e.response)
        print(f"server rejected the request ({e.response.status_code}): {detail}", file=sys.stderr)
        return 1
    except httpx.HTTPError as e:
        print(f"cannot reach server: {e}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gameshift",
        description="Evolutionary games on networks with drifting game chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    theory = sub.add_parser("theory", help="print the stationary law of a game chain")
    theory.add_argument("--rates", required=True, metavar="LAMBDAS:MUS",
                        help="up rates, a colon, then down rates, e.g. 0.02,0.03:0.04,0.08")
    theory.add_argument("--n", type=int, default=1000,
                        help="agent count used for expected state counts (default 1000)")
    theory.add_argument("--server", metavar="URL", help="POST to a running service instead")
    theory.set_defaults(handler=_cmd_theory)

    for name, blurb in (
        ("simulate", "run a timeseries experiment from a config file"),
        ("dist", "compare simulated state counts against the stationary law"),
        ("sweep", "run a parameter sweep experiment"),
    ):
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--config", required=True, help="TOML experiment config")
        cmd.add_argument("--out", required=True, help="directory for the output files")
        cmd.add_argument("--seed", type=int, help="override the config's base seed")
        cmd.add_argument("--server", metavar="URL", help="POST to a running service instead")
        cmd.set_defaults(handler=_cmd_experiment, endpoint=name)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)

    return parser


def _parse_rates_arg(text: str) -> tuple[list[float], list[float]]:
    try:
        lam_text, mu_text = text.split(":")
        lam = [float(x) for x in lam_text.split(",")]
        mu = [float(x) for x in mu_text.split(",")]
    except ValueError:
        raise ConfigError(
            f"--rates must be 'LAMBDAS:MUS' with comma-separated numbers, got {text!r}"
        ) from None
    return lam, mu


def _cmd_theory(args: argparse.Namespace) -> int:
    lam, mu = _parse_rates_arg(args.rates)
    if args.server:
        resp = httpx.post(
            f"{args.server.rstrip('/')}/theory",
            json={"lambda": lam, "mu": mu, "agents": args.n},
            timeout=60.0,
        )
        _raise_for_status(resp)
        csv = resp.json()["csv"]
    else:
        csv = theory_csv(theory_rows(lam, mu, args.n))
    print(csv, end="")
    return 0


_ALLOWED_KINDS = {
    "simulate": ("timeseries",),
    "dist": ("dist",),
    "sweep": SWEEP_KINDS,
}


def _cmd_experiment(args: argparse.Namespace) -> int:
    config_text = Path(args.config).read_text()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.server:
        resp = httpx.post(
            f"{args.server.rstrip('/')}/{args.endpoint}",
            json={"config": config_text, "seed": args.seed},
            timeout=None,
        )
        _raise_for_status(resp)
        files = resp.json()["files"]
        names_contents = [(f["name"], f["content"]) for f in files]
    else:
        req = ExperimentRequest(config=config_text, seed=args.seed)
        result = execute_experiment(req, _ALLOWED_KINDS[args.endpoint])
        names_contents = [(f.name, f.content) for f in result.files]
    for name, content in names_contents:
        path = out_dir / name
        path.write_text(content, newline="")
        print(f"wrote {path}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _raise_for_status(resp: httpx.Response) -> None:
    if resp.status_code >= 400:
        raise httpx.HTTPStatusError(
            f"HTTP {resp.status_code}", request=resp.request, response=resp
        )


def _error_detail(resp: httpx.Response) -> str:
    try:
        return str(resp.json().get("detail", resp.text))
    except ValueError:
        return resp.text


if __name__ == "__main__":
    sys.exit(main())
