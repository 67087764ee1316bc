"""
gammaq - Deformed Coproducts
Order-by-order solves for Δ_ℏ on generators and for the quasitriangular
twist J, coassociativity defects and transport along automorphisms.
"""
import logging

from algebra.envelope import AlgebraMap, Envelope
from algebra.exact import HSeries, SparseVector
from algebra.lie import mat_inverse
from errors import InternalCheckError
from quant.engine import (HALF, DegreeCaps, GaugeLog, SeriesMap, SeriesOps, UnknownPool,
                          evaluate_series, series_to_json)

logger = logging.getLogger(__name__)


class TruncatedCoproduct:
    """Δ_ℏ on generators, extended as an algebra map of the undeformed product."""

    def __init__(self, envelope, tables, gauge_log=None):
        self.envelope = envelope
        self.map = SeriesMap(envelope, tables, arity=2)
        self.order = self.map.order
        self.gauge_log = gauge_log if gauge_log is not None else GaugeLog()

    @classmethod
    def primitive(cls, envelope, order):
        ops = SeriesOps(envelope, order)
        return cls(envelope, [ops.const(envelope.delta0(envelope.gen(i))) for i in range(envelope.dim)])

    @property
    def tables(self):
        return self.map.images

    @property
    def ops(self):
        return SeriesOps(self.envelope, self.order)

    def __call__(self, x, leg=0):
        return self.map.apply(x, leg)

    def truncate(self, order):
        return TruncatedCoproduct(self.envelope, [t.truncate(order) for t in self.tables], self.gauge_log)

    def with_order(self, k, coeffs):
        return TruncatedCoproduct(self.envelope, [t.with_coeff(k, c) for t, c in zip(self.tables, coeffs)],
                                  self.gauge_log)

    def evaluate(self, values):
        return TruncatedCoproduct(self.envelope, [evaluate_series(t, values) for t in self.tables],
                                  self.gauge_log)

    def conjugated(self, g):
        """Ad(g)∘Δ for an invertible g ∈ U^{⊗2}[[ℏ]]."""
        ops = self.ops
        g_inv = ops.inv(g)
        return TruncatedCoproduct(self.envelope, [ops.prod(g, t, g_inv) for t in self.tables],
                                  self.gauge_log)

    def equals(self, other):
        return self.order == other.order and all(a == b for a, b in zip(self.tables, other.tables))

    def to_dict(self):
        env = self.envelope
        return {env.labels[i]: series_to_json(env, t) for i, t in enumerate(self.tables)}

    def __repr__(self):
        return f"<TruncatedCoproduct N={self.order} on {self.envelope.labels}>"


def coassoc_defect(delta):
    """(Δ⊗id)Δ(x) − (id⊗Δ)Δ(x) per generator."""
    return [delta(t, 0) - delta(t, 1) for t in delta.tables]


def homomorphism_rows(pool, ops, algebra, images, k):
    """Rows for φ(x_a)φ(x_b) − φ(x_b)φ(x_a) = Σ c_ab^l φ(x_l) at order k."""
    n = algebra.dim
    for a in range(n):
        for b in range(a + 1, n):
            value = ops.mul(images[a], images[b]) - ops.mul(images[b], images[a])
            for l, c in algebra.c[a][b].items():
                value = value - ops.scale(images[l], c)
            pool.require_zero(value[k])


# ─────────────────────────────────────────────
# Δ_ℏ
# ─────────────────────────────────────────────
def solve_coproduct(bialgebra, order, caps=None, envelope=None):
    caps = caps or DegreeCaps()
    env = envelope or Envelope(bialgebra.algebra)
    delta = TruncatedCoproduct.primitive(env, order)
    for k in range(1, order + 1):
        pool = UnknownPool("coproduct", k, caps)
        coeffs = [pool.tensor2(env, f"D{k}[{label}]", total=caps.map_total(k)) for label in env.labels]
        trial = delta.truncate(k).with_order(k, coeffs)
        ops = trial.ops
        for i, table in enumerate(trial.tables):
            if k == 1:
                pool.require_zero(env.alt2(table[1]) - env.from_tensor(bialgebra.cobracket[i]))
            pool.require_zero((trial(table, 0) - trial(table, 1))[k])
        homomorphism_rows(pool, ops, bialgebra.algebra, trial.tables, k)
        values = pool.solve()
        delta = delta.with_order(k, [c.evaluate(values) for c in coeffs])
        logger.info("coproduct order %d solved with %d unknowns", k, len(pool.names))
    if any(not d.is_zero() for d in coassoc_defect(delta)):
        raise InternalCheckError("solved coproduct is not coassociative")
    return delta


# ─────────────────────────────────────────────
# QUASITRIANGULAR TWIST J
# ─────────────────────────────────────────────
def quasitriangular_coproduct(envelope, J):
    """Ad(J)∘Δ_0 on generators."""
    return TruncatedCoproduct.primitive(envelope, J.order).conjugated(J)


def associator(envelope, J):
    """(J^{23}(1⊗Δ_0)J)^{-1} J^{12}(Δ_0⊗1)J."""
    ops = SeriesOps(envelope, J.order)
    left = ops.mul(ops.inject(J, (0, 1), 3), J.map(lambda c: envelope.delta0(c, 0)))
    right = ops.mul(ops.inject(J, (1, 2), 3), J.map(lambda c: envelope.delta0(c, 1)))
    return ops.mul(ops.inv(right), left)


def solve_J_quasitriangular(qt, order, action=None, caps=None, envelope=None, gauge_log=None):
    """J = 1⊗1 + ℏr/2 + … with Ad(J)∘Δ_0 coassociative.

    With an action, the associator of J is also required to be invariant
    under every θ_γ^{⊗3}, so that θ_γ^{⊗2}(J)J^{-1} is a cocycle.
    """
    caps = caps or DegreeCaps()
    env = envelope or Envelope(qt.algebra)
    log = gauge_log if gauge_log is not None else GaugeLog()
    coeffs = [env.one(2)]
    if order >= 1:
        coeffs.append(env.from_tensor(qt.r).scale(HALF))
    J = HSeries(coeffs, order)
    thetas = [AlgebraMap.linear(env, action.theta(g)) for g in action.group.elements()] if action else []
    for k in range(2, order + 1):
        pool = UnknownPool("quasitriangular twist J", k, caps)
        unknown = pool.tensor2(env, f"J{k}")
        trial = J.truncate(k).with_coeff(k, unknown)
        delta = quasitriangular_coproduct(env, trial)
        for table in delta.tables:
            pool.require_zero((delta(table, 0) - delta(table, 1))[k])
        if thetas:
            phi = associator(env, trial)[k]
            for theta in thetas:
                pool.require_zero(theta.on_all_legs(phi) - phi)
        soft = pool.mark()
        for table in delta.tables:
            pool.require_zero(SparseVector(env.degree_one_part(env.alt2(table[k]))))
        solution = pool.try_solve()
        if not solution.consistent:
            pool.drop_rows_from(soft)
            log.add("J", k, "order-k bracket normalization dropped")
            values = pool.solve()
        else:
            values = solution.values
        J = J.with_coeff(k, unknown.evaluate(values))
    delta = quasitriangular_coproduct(env, J)
    if any(not d.is_zero() for d in coassoc_defect(delta)):
        raise InternalCheckError("Ad(J)∘Δ_0 is not coassociative")
    return J


# ─────────────────────────────────────────────
# TRANSPORT
# ─────────────────────────────────────────────
def transport_coproduct(delta, matrix):
    """Δ^θ = θ^{⊗2}∘Δ∘θ^{-1} for an automorphism θ of 𝔞 (columns)."""
    env = delta.envelope
    inverse = mat_inverse(matrix)
    theta = SeriesMap.linear(env, matrix, delta.order)
    tables = [theta.on_all_legs(delta(env.vector(inverse[i]))) for i in range(env.dim)]
    return TruncatedCoproduct(env, tables, delta.gauge_log)
