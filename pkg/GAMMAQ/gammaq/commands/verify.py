"""
gammaq - verify-artifact command
"""
import click

from algebra.envelope import Envelope
from commands.common import emit, gamma_or_trivial, output_options
from errors import DefectError, GammaqError, SchemaError
from quant.coproduct import coassoc_defect
from quant.gamma_quant import TruncatedGammaBialgebra, quantization_defects
from schema import document_digest, load_document, read_document

ARTIFACT_FIELDS = ("input", "input_digest", "pipeline", "order", "check_degree", "quantization")


def load_artifact(data):
    for key in ARTIFACT_FIELDS:
        if key not in data:
            raise SchemaError(f"artifact is missing {key!r}", pointer=f"/{key}")
    if document_digest(data["input"]) != data["input_digest"]:
        raise SchemaError("input digest does not match the embedded input", pointer="/input_digest")
    problem = load_document(data["input"])
    gamma = gamma_or_trivial(problem)
    try:
        A = TruncatedGammaBialgebra.from_dict(Envelope(problem.algebra), gamma.action, data["quantization"])
    except (KeyError, ValueError, TypeError, GammaqError) as exc:
        raise SchemaError(f"malformed quantization tables: {exc}", pointer="/quantization") from exc
    return problem, gamma, A


@click.command("verify-artifact")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--check-degree", type=click.IntRange(min=0), default=None,
              help="D_in for the re-check; defaults to the degree stored in the artifact.")
@output_options
@click.pass_obj
def verify_cmd(state, path, check_degree, fmt, timestamps):
    """Recompute every defect of a quantize artifact from its stored tables."""
    report = state.start("verify-artifact", timestamps=timestamps, fmt=fmt)
    data = read_document(path)
    if not isinstance(data, dict):
        raise SchemaError("artifact must be a JSON object", pointer="")
    problem, gamma, A = load_artifact(data)
    report.digest = problem.digest
    d_in = data["check_degree"] if check_degree is None else check_degree
    report.set("pipeline", A.pipeline)
    report.set("order", A.order)
    defects = quantization_defects(A, gamma, d_in)
    for i, d in enumerate(coassoc_defect(A.coproduct)):
        defects.record("coproduct.coassociativity", A.envelope.labels[i], d)
    report.add_check("quantization", defects)
    report.gauge_log = A.gauge_log.to_list()
    if not defects.passed:
        raise DefectError("artifact fails re-validation", failing=[str(f) for f in defects.failures()])
    return emit(state)
