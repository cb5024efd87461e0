"""Command-line experiment runner.

    python -m app.cli diameter --config runs/interval.toml --out out/interval --workers 4
    python -m app.cli serve --port 8020

Exit status: 0 when every check passed, 1 when a tolerance check failed, 2 on
an invalid config or a computation error (error JSON on stdout).
"""
import argparse
import json
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Optional, Sequence

from loguru import logger
from pydantic import ValidationError

from .config import VERSION, configure_logging, get_settings
from .errors import ConfigError, FeketeError, validation_error_body
from .schemas import COMMANDS, ExperimentConfig
from .services.experiments import execute


def read_config_file(path: Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path} does not exist", field="config")
    try:
        if path.suffix == ".toml":
            with path.open("rb") as fh:
                return tomllib.load(fh)
        if path.suffix == ".json":
            return json.loads(path.read_text(encoding="utf-8"))
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}", field="config") from exc
    raise ConfigError(f"unsupported config format {path.suffix!r}; use .toml or .json", field="config")


def build_config(args: argparse.Namespace) -> tuple[ExperimentConfig, Path]:
    """CLI flags override the config file, which overrides Settings."""
    settings = get_settings()
    data = read_config_file(args.config) if args.config else {}
    data.setdefault("workers", settings.workers)
    data.setdefault("seed", settings.seed)
    for key in ("workers", "seed"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.out is not None:
        data["out"] = str(args.out)
    config = ExperimentConfig.model_validate(data)
    return config, Path(config.out or settings.output_dir)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML or JSON experiment config")
    common.add_argument("--out", type=Path, help="output directory for CSV and JSON files")
    common.add_argument("--workers", type=int, help="worker threads (byte-reproducible output at 1)")
    common.add_argument("--seed", type=int, help="seed for every randomised sample")
    common.add_argument("--log-level", default=None, help="loguru level, default from FEKETE_LOG_LEVEL")

    parser = argparse.ArgumentParser(prog="fekete", description="Weighted Fekete configurations and transfinite diameters")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        sub.add_parser(command, parents=[common], help=f"run the {command} experiment")
    serve = sub.add_parser("serve", parents=[common], help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8020)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("app.main:app", host=args.host, port=args.port)
        return 0

    try:
        config, out_dir = build_config(args)
        report = execute(args.command, config, out_dir)
    except ValidationError as exc:
        print(json.dumps(validation_error_body(exc)))
        return 2
    except FeketeError as exc:
        logger.error(f"[cli] {args.command} failed: {exc.code}: {exc.detail}")
        print(json.dumps(exc.to_dict()))
        return 2
    except Exception as exc:
        logger.exception(f"[cli] {args.command} crashed")
        print(json.dumps({"error": "internal-error", "field": None, "detail": f"{type(exc).__name__}: {exc}"}))
        return 2

    print(json.dumps(report.model_dump(mode="json"), indent=2))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
