"""
gammaq - Shared Command Plumbing
Input loading, the flags every solver command takes, classical pre-checks
and report emission.
"""
import logging
import os
from dataclasses import dataclass

import click

import catalog
from algebra.defects import DefectReport
from algebra.envelope import TruncationWindow, copoisson_axiom_defects
from algebra.exact import Tensor, format_scalar
from algebra.gamma import (FiniteGroup, GammaLieBialgebra, GroupAction, check_action, gamma_defects,
                           gamma_inverse_identity)
from algebra.lie import (bialgebra_defects, coboundary_cobracket, cobracket_equal, cybe_defect,
                         invariance_defect)
from errors import DefectError, SchemaError
from models.models import SolveCache
from quant.engine import DegreeCaps
from report import Report
from schema import load_document, read_document

logger = logging.getLogger(__name__)

CATALOG_PREFIX = "catalog:"


@dataclass
class AppState:
    config: type
    report: Report = None
    fmt: str = "json"
    _cache: SolveCache = None

    @property
    def cache(self):
        if self._cache is None and self.config.cache_url():
            os.makedirs(self.config.CACHE_DIR, exist_ok=True)
            self._cache = SolveCache(self.config.cache_url())
        return self._cache

    def start(self, command, digest=None, timestamps=None, fmt="json"):
        stamps = self.config.TIMESTAMPS if timestamps is None else timestamps
        self.report = Report(command, digest, stamps)
        self.fmt = fmt
        return self.report


def load_input(source):
    """A JSON file path, or catalog:<name> for a shipped example."""
    if source.startswith(CATALOG_PREFIX):
        name = source[len(CATALOG_PREFIX):]
        try:
            return catalog.document(name)
        except KeyError as exc:
            raise SchemaError(str(exc.args[0]), pointer="") from exc
    return read_document(source)


def load_problem(source):
    return load_document(load_input(source))


def gamma_or_trivial(problem):
    """The document's Γ-Lie bialgebra, or the trivial group with f_e = 0."""
    if problem.gamma is not None:
        return problem.gamma
    group = FiniteGroup.trivial()
    action = GroupAction.trivial(group, problem.algebra.dim)
    space = problem.algebra.space
    return GammaLieBialgebra(problem.bialgebra, action, [Tensor((space, space))], check=False)


# ─────────────────────────────────────────────
# FLAGS
# ─────────────────────────────────────────────
def output_options(fn):
    fn = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json",
                      show_default=True, help="Report format.")(fn)
    fn = click.option("--timestamps/--no-timestamps", default=None,
                      help="Write timings and creation time (off keeps reports byte-reproducible).")(fn)
    return fn


def solver_options(fn):
    fn = click.option("--order", "-N", type=click.IntRange(min=0), default=None,
                      help="ℏ-order N; defaults to the document option, then GAMMAQ_DEFAULT_ORDER.")(fn)
    fn = click.option("--degree-cap", type=click.IntRange(min=1), default=None,
                      help="Absolute per-leg degree cap for solver unknowns.")(fn)
    fn = click.option("--seed-order", default=None,
                      help="Comma-separated group labels fixing the order unknowns are seeded in.")(fn)
    fn = click.option("--check-degree", type=click.IntRange(min=0), default=None,
                      help="D_in for the axiom checks; defaults to GAMMAQ_CHECK_DEGREE.")(fn)
    return output_options(fn)


def resolve_order(state, problem, order):
    if order is not None:
        return order
    return problem.options.get("order", state.config.DEFAULT_ORDER)


def resolve_caps(state, problem, degree_cap):
    absolute = degree_cap if degree_cap is not None else problem.options.get("degree_cap")
    return DegreeCaps(slack=state.config.CAP_SLACK, absolute=absolute)


def resolve_seed(problem, seed_order):
    labels = [s.strip() for s in seed_order.split(",")] if seed_order else problem.options.get("seed_order")
    if not labels or problem.group is None:
        return None
    for label in labels:
        if label not in problem.group.labels:
            raise SchemaError(f"unknown group element {label!r} in the seed order", pointer="/options/seed_order")
    return [problem.group.index(label) for label in labels]


# ─────────────────────────────────────────────
# CLASSICAL CHECKS
# ─────────────────────────────────────────────
def _record_table(defects, section, table, labels, head):
    """Group the nonzero entries of a defect table by their first `head` indices."""
    grouped = {}
    for key, c in table.sorted_items():
        at = tuple(labels[i] for i in key[:head])
        grouped.setdefault(at, {})["⊗".join(labels[i] for i in key[head:])] = format_scalar(c)
    for at, value in grouped.items():
        defects.record(section, ",".join(at) or section, value)


def classical_checks(problem, report, window=None):
    """Run every applicable classical check into the report; returns True when all pass."""
    labels = problem.labels
    lie = DefectReport("lie bialgebra")
    tables = bialgebra_defects(problem.bialgebra)
    _record_table(lie, "jacobi", tables["jacobi"], labels, 3)
    _record_table(lie, "cojacobi", tables["cojacobi"], labels, 1)
    _record_table(lie, "cocycle", tables["cocycle"], labels, 2)
    report.add_check("lie_bialgebra", lie)

    if problem.qt is not None:
        qt = DefectReport("quasitriangular")
        qt.section("cybe")
        _record_table(qt, "cybe", cybe_defect(problem.algebra, problem.qt.r), labels, 0)
        _record_table(qt, "invariance", invariance_defect(problem.algebra, problem.qt.t), labels, 1)
        if "cobracket" in problem.document:
            coboundary = coboundary_cobracket(problem.algebra, problem.qt.r)
            if not cobracket_equal(coboundary, problem.bialgebra.cobracket):
                qt.record("coboundary", "δ", {"mismatch": True})
        report.add_check("quasitriangular", qt)
    else:
        report.skip("quasitriangular", "no r-matrix")

    if problem.gamma is None:
        for name in ("action", "gamma", "copoisson"):
            report.skip(name, "no group")
        return report.passed

    report.add_check("action", check_action(problem.action, problem.algebra))
    gamma = gamma_defects(problem.gamma).merge(gamma_inverse_identity(problem.gamma))
    report.add_check("gamma", gamma)
    if not report.passed:
        report.skip("copoisson", "earlier checks failed")
        return False
    if window is not None:
        report.add_check("copoisson", copoisson_axiom_defects(problem.gamma, window))
    else:
        report.skip("copoisson", "not requested")
    return report.passed


def check_window(state, check_degree=None):
    d_in = state.config.CHECK_DEGREE if check_degree is None else check_degree
    return TruncationWindow(max(state.config.DEGREE_WINDOW, 2 * d_in + 2), d_in)


def require_classical(problem, report, window=None):
    if not classical_checks(problem, report, window):
        failing = sorted(name for name, c in report.checks.items() if c.get("status") == "fail")
        raise DefectError("classical checks failed", failing=failing)


# ─────────────────────────────────────────────
# OUTPUT
# ─────────────────────────────────────────────
def emit(state, exit_code=0):
    click.echo(state.report.render(state.fmt), nl=False)
    return exit_code
