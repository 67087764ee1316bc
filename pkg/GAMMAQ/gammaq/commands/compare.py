"""
gammaq - compare command
"""
import time

import click

from commands.common import (emit, load_problem, require_classical, resolve_caps, resolve_order, resolve_seed,
                             solver_options)
from errors import EquivalenceError, SchemaError
from quant.gamma_quant import assemble_gamma_quantization, compare_pipelines, quasitriangular_gamma_quantize


@click.command("compare")
@click.argument("source")
@solver_options
@click.pass_obj
def compare_cmd(state, source, order, degree_cap, seed_order, check_degree, fmt, timestamps):
    """Run the direct and the generic pipelines on SOURCE and look for a gauge equivalence."""
    report = state.start("compare", timestamps=timestamps, fmt=fmt)
    problem = load_problem(source)
    report.digest = problem.digest
    if problem.qt is None:
        raise SchemaError("compare needs an r-matrix", pointer="/r")
    if problem.gamma is None:
        raise SchemaError("compare needs a group and an action", pointer="/group")
    order = resolve_order(state, problem, order)
    caps = resolve_caps(state, problem, degree_cap)
    report.set("order", order)
    report.set("caps", caps.to_dict())
    report.set("twists", problem.twists_source)
    require_classical(problem, report)

    started = time.perf_counter()
    direct = quasitriangular_gamma_quantize(problem.qt, problem.action, order, caps)
    report.time("direct", started)
    started = time.perf_counter()
    generic = assemble_gamma_quantization(problem.gamma, order, caps, seed_order=resolve_seed(problem, seed_order))
    report.time("generic", started)
    report.gauge_log = direct.gauge_log.to_list() + generic.gauge_log.to_list()

    started = time.perf_counter()
    witness = compare_pipelines(direct, generic, caps)
    report.time("compare", started)
    if not witness.found:
        raise EquivalenceError("no gauge equivalence between the pipelines", order=witness.order,
                               certificate=witness.certificate)
    report.add_check("equivalence", status="pass")
    report.set("witness", witness.to_dict(direct.envelope, direct.group))
    return emit(state)
