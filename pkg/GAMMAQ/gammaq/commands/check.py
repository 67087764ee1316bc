"""
gammaq - check command
"""
import click

from commands.common import check_window, emit, load_problem, output_options, require_classical


@click.command("check")
@click.argument("source")
@click.option("--check-degree", type=click.IntRange(min=0), default=None,
              help="D_in for the co-Poisson checks; defaults to GAMMAQ_CHECK_DEGREE.")
@output_options
@click.pass_obj
def check_cmd(state, source, check_degree, fmt, timestamps):
    """Run every applicable classical check on SOURCE (a JSON file or catalog:<name>)."""
    report = state.start("check", timestamps=timestamps, fmt=fmt)
    problem = load_problem(source)
    report.digest = problem.digest
    report.set("twists", problem.twists_source)
    require_classical(problem, report, check_window(state, check_degree))
    return emit(state)
