"""
gammaq - quantize command
"""
import logging
import time

import click

from algebra.envelope import Envelope
from commands.common import (emit, gamma_or_trivial, load_problem, require_classical,
                             resolve_caps, resolve_order, resolve_seed, solver_options)
from errors import InternalCheckError, SchemaError
from quant.gamma_quant import (TruncatedGammaBialgebra, assemble_gamma_quantization, ladder_agreement,
                               quantization_defects, quasitriangular_gamma_quantize)
from report import VERSION, write_artifact

logger = logging.getLogger(__name__)

PIPELINES = ("generic", "quasitriangular")


def build_quantization(problem, pipeline, order, caps, seed=None):
    gamma = gamma_or_trivial(problem)
    if pipeline == "quasitriangular":
        if problem.qt is None:
            raise SchemaError("the quasitriangular pipeline needs an r-matrix", pointer="/r")
        return quasitriangular_gamma_quantize(problem.qt, gamma.action, order, caps)
    return assemble_gamma_quantization(gamma, order, caps, seed_order=seed)


def make_artifact(problem, A, caps, check_degree, defects):
    return {
        "tool": "gammaq",
        "version": VERSION,
        "input": problem.document,
        "input_digest": problem.digest,
        "pipeline": A.pipeline,
        "order": A.order,
        "caps": caps.to_dict(),
        "check_degree": check_degree,
        "quantization": A.to_dict(),
        "defects": defects.to_dict(),
    }


def cached_quantization(state, problem, pipeline, order, caps, check_degree):
    """A re-validated cached artifact, or None."""
    cache = state.cache
    if cache is None:
        return None
    artifact = cache.get(problem.digest, pipeline, order, caps.to_dict())
    if artifact is None:
        return None
    gamma = gamma_or_trivial(problem)
    A = TruncatedGammaBialgebra.from_dict(Envelope(problem.algebra), gamma.action, artifact["quantization"])
    defects = quantization_defects(A, gamma, check_degree)
    if not defects.passed:
        logger.warning("cached artifact for %s fails re-validation; discarding", problem.digest)
        cache.discard(problem.digest)
        return None
    return A, defects


@click.command("quantize")
@click.argument("source")
@click.option("--pipeline", type=click.Choice(PIPELINES), default="generic", show_default=True,
              help="Generic Γ-assembly, or the direct construction from r.")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the artifact here instead of embedding it in the report.")
@solver_options
@click.pass_obj
def quantize_cmd(state, source, pipeline, output, order, degree_cap, seed_order, check_degree, fmt, timestamps):
    """Quantize SOURCE to order N and verify every bialgebra axiom mod ℏ^{N+1}."""
    report = state.start("quantize", timestamps=timestamps, fmt=fmt)
    problem = load_problem(source)
    report.digest = problem.digest
    order = resolve_order(state, problem, order)
    caps = resolve_caps(state, problem, degree_cap)
    d_in = state.config.CHECK_DEGREE if check_degree is None else check_degree
    report.set("order", order)
    report.set("pipeline", pipeline)
    report.set("caps", caps.to_dict())
    require_classical(problem, report)

    started = time.perf_counter()
    hit = cached_quantization(state, problem, pipeline, order, caps, d_in)
    if hit is not None:
        A, defects = hit
        report.set("cache", "hit")
    else:
        A = build_quantization(problem, pipeline, order, caps, resolve_seed(problem, seed_order))
        report.time("solve", started)
        started = time.perf_counter()
        defects = quantization_defects(A, gamma_or_trivial(problem), d_in)
        if pipeline == "generic":
            agreement = ladder_agreement(A, gamma_or_trivial(problem), caps)
            report.add_check("ladder", agreement)
            if not agreement.passed:
                raise InternalCheckError("assembled quantization disagrees with the twist ladder",
                                         failing=[str(f) for f in agreement.failures()])
        report.time("verify", started)
    report.add_check("quantization", defects)
    report.gauge_log = A.gauge_log.to_list()
    if not defects.passed:
        raise InternalCheckError("quantization fails its axioms", failing=[str(f) for f in defects.failures()])

    artifact = make_artifact(problem, A, caps, d_in, defects)
    if hit is None and state.cache is not None:
        state.cache.put(problem.digest, pipeline, order, caps.to_dict(), VERSION, artifact)
    if output:
        write_artifact(output, artifact)
        report.set("artifact", output)
    else:
        report.set("artifact", artifact)
    return emit(state)
