"""
gammaq - Γ-Lie Bialgebra Quantization Workbench
Exact classical checks and ℏ-truncated quantization of Γ-Lie bialgebras.
Run: python app.py check catalog:sl2-z2
"""
import logging
import os
import sys

import click

from commands.common import AppState
from config import config
from errors import GammaqError
from report import VERSION, Report

logger = logging.getLogger(__name__)

INTERNAL_EXIT = 70
USAGE_EXIT = 3


class GammaqGroup(click.Group):
    """Command group whose errors become a report plus the documented exit code."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GammaqError as exc:
            self._fail(ctx, exc.exit_code, exc.to_dict())
        except click.exceptions.Exit:
            raise
        except click.UsageError as exc:
            click.echo(f"usage error: {exc.format_message()}", err=True)
            ctx.exit(USAGE_EXIT)
        except click.ClickException:
            raise
        except Exception as exc:
            logger.exception("unexpected failure")
            self._fail(ctx, INTERNAL_EXIT, {"reason": "internal", "message": f"{type(exc).__name__}: {exc}"})

    @staticmethod
    def _fail(ctx, code, error):
        state = ctx.find_object(AppState)
        report = state.report if state is not None and state.report is not None else Report(ctx.invoked_subcommand)
        report.error = error
        fmt = state.fmt if state is not None else "json"
        click.echo(report.render(fmt), nl=False)
        ctx.exit(code)


def configure_logging(cfg):
    level = getattr(logging, cfg.LOG_LEVEL, logging.WARNING)
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(cfg.LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level)


def create_app(config_name=None):
    if not config_name:
        config_name = os.environ.get("GAMMAQ_ENV", "default")
    cfg = config.get(config_name, config["default"])
    configure_logging(cfg)

    @click.group(cls=GammaqGroup)
    @click.version_option(VERSION, prog_name="gammaq")
    @click.pass_context
    def cli(ctx):
        """Exact Γ-Lie bialgebra checks and truncated quantization.

        Exit codes: 0 pass, 2 defect, 3 schema, 4 solver cap, 5 no equivalence, 70 internal.
        """
        ctx.obj = AppState(cfg)

    # Register commands
    from commands.check import check_cmd
    from commands.quantize import quantize_cmd
    from commands.compare import compare_cmd
    from commands.verify import verify_cmd
    from commands.listing import catalog_cmd

    cli.add_command(check_cmd)
    cli.add_command(quantize_cmd)
    cli.add_command(compare_cmd)
    cli.add_command(verify_cmd)
    cli.add_command(catalog_cmd)
    return cli


if __name__ == "__main__":
    create_app()(prog_name="gammaq")
