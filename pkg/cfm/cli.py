"""
Command line entry point
cfm solve | bench | testgen | reproduce | serve
"""
import logging
import sys
from functools import wraps
from typing import Optional

import click

from .core.config import settings
from .core.errors import CFMError
from .core.logging import configure_logging
from .harness import FIGURES, cmd_bench, cmd_reproduce, cmd_solve, cmd_testgen
from .schemas import ErrorPayload, RunConfig
from .solvers import Variant

logger = logging.getLogger(__name__)

EXIT_ERROR = 1
EXIT_MISSING = 2


def fail(payload: ErrorPayload, code: int):
    click.echo(payload.to_json())
    sys.exit(code)


def reports_errors(fn):
    """Turn package errors into error JSON on stdout and a nonzero exit"""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FileNotFoundError as e:
            fail(ErrorPayload.missing_file(e.filename or str(e.args[0] if e.args else e)), EXIT_MISSING)
        except CFMError as e:
            logger.error("%s: %s", e.code, e.message)
            fail(ErrorPayload.from_error(e), EXIT_ERROR)

    return wrapper


def run_options(fn):
    """Shared flags; each one overrides the matching config file field"""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="JSON or YAML run configuration"),
        click.option("--variant", type=click.Choice([v.value for v in Variant]), default=None),
        click.option("--mu", type=float, default=None, help="Smoothing parameter"),
        click.option("--tol", type=float, default=None, help="Stopping tolerance"),
        click.option("--seed", type=int, default=None),
        click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def load_config(config_path: Optional[str], **overrides) -> RunConfig:
    config = RunConfig.load(config_path) if config_path else RunConfig()
    return config.with_overrides(**overrides)


@click.group()
@click.option("--log-level", default=None, help=f"Defaults to {settings.LOG_LEVEL}")
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
def main(log_level: Optional[str]):
    """Conic first-order methods: smoothed duals, optimal first-order solvers, certified test problems"""
    configure_logging(log_level)


@main.command()
@run_options
@reports_errors
def solve(config_path, variant, mu, tol, seed, out):
    """Solve the configured problem and write x, traces and summary.json"""
    config = load_config(config_path, variant=variant, mu=mu, tol=tol, seed=seed, out=out)
    summary = cmd_solve(config)
    click.echo(summary.model_dump_json(by_alias=True))


@main.command()
@run_options
@reports_errors
def bench(config_path, variant, mu, tol, seed, out):
    """Run every configured variant and write a comparison table"""
    config = load_config(config_path, mu=mu, tol=tol, seed=seed, out=out)
    if variant is not None:
        config = config.model_copy(update={"variants": [Variant(variant)]})
    summary = cmd_bench(config)
    click.echo(summary.model_dump_json(by_alias=True))


@main.command()
@run_options
@reports_errors
def testgen(config_path, variant, mu, tol, seed, out):
    """Generate a certified instance bundle"""
    config = load_config(config_path, mu=mu, seed=seed, out=out)
    path = cmd_testgen(config)
    click.echo(str(path))


@main.command()
@click.argument("figure", type=click.Choice(sorted(FIGURES)))
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False), default=None)
@reports_errors
def reproduce(figure, seed, out):
    """Write the CSV behind one desk-scale experiment"""
    path = cmd_reproduce(figure, out or settings.OUTPUT_DIR, settings.SEED if seed is None else seed)
    click.echo(str(path))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Serve the HTTP API with uvicorn"""
    import uvicorn

    uvicorn.run("cfm.main:app", host=host, port=port, log_level=settings.LOG_LEVEL.lower())


if __name__ == "__main__":
    main()
