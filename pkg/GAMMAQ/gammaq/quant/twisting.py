"""
gammaq - Quantized Twists
F(𝔞,f), i(𝔞,f) and v(𝔞,f,f′) solved order by order, the twist ladder that
caches them per twisted bialgebra, the v-cocycle check and gauge transforms.
"""
import logging
from dataclasses import dataclass, field

from algebra.exact import HSeries
from algebra.twists import twist, twist_defect
from errors import AxiomError, InternalCheckError
from quant.coproduct import homomorphism_rows, solve_coproduct
from quant.engine import DegreeCaps, GaugeLog, SeriesMap, SeriesOps, UnknownPool, adjoint_map

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# F(𝔞, f)
# ─────────────────────────────────────────────
def twist_cocycle_defect(delta, F):
    """(F⊗1)(Δ⊗id)(F) − (1⊗F)(id⊗Δ)(F)."""
    ops = SeriesOps(delta.envelope, F.order)
    if delta.order != F.order:
        delta = delta.truncate(F.order)
    lhs = ops.mul(ops.inject(F, (0, 1), 3), delta(F, 0))
    rhs = ops.mul(ops.inject(F, (1, 2), 3), delta(F, 1))
    return lhs - rhs


def twist_counit_defect(envelope, F):
    ops = SeriesOps(envelope, F.order)
    one = ops.one()
    return ops.counit(F, 0) - one, ops.counit(F, 1) - one


def _twist_rows(pool, delta, trial, k, classical=None):
    env = delta.envelope
    pool.require_zero(twist_cocycle_defect(delta.truncate(k), trial)[k])
    if k == 1 and classical is not None:
        pool.require_zero(env.alt2(trial[1]) - classical)


def solve_twist_F(delta, f, caps=None, name="F"):
    """Cocycle F = 1⊗1 + ℏF_1 + … for Δ with alt2(F_1) = f."""
    caps = caps or DegreeCaps()
    env, order = delta.envelope, delta.order
    classical = env.from_tensor(f)
    F = HSeries([env.one(2)], order)
    for k in range(1, order + 1):
        pool = UnknownPool(f"twist {name}", k, caps)
        unknown = pool.tensor2(env, f"{name}{k}")
        _twist_rows(pool, delta, F.truncate(k).with_coeff(k, unknown), k, classical)
        values = pool.solve()
        F = F.with_coeff(k, unknown.evaluate(values))
    if not twist_cocycle_defect(delta, F).is_zero():
        raise InternalCheckError(f"solved {name} is not a cocycle")
    return F


# ─────────────────────────────────────────────
# i(𝔞, f)
# ─────────────────────────────────────────────
def iso_defect(iso, src, F, dst):
    """i^{⊗2}(Ad(F)Δ_src(x)) − Δ_dst(i(x)) per generator."""
    twisted = src.conjugated(F)
    return [iso.on_all_legs(t) - dst(im) for t, im in zip(twisted.tables, iso.images)]


def _iso_rows(pool, algebra, iso, twisted, dst, k):
    for table, image in zip(twisted.tables, iso.images):
        pool.require_zero((iso.on_all_legs(table) - dst(image))[k])
    homomorphism_rows(pool, iso.ops, algebra, iso.images, k)


def solve_iso_i(src, F, dst, algebra, caps=None, gauge_log=None, name="i"):
    """Algebra automorphism i with i^{⊗2}∘Ad(F)∘Δ_src = Δ_dst∘i.

    When no i exists for the given F at some order, F_k is re-solved jointly
    with i_k (cocycle and classical rows kept) and the realignment is logged.
    Returns (i, F).
    """
    caps = caps or DegreeCaps()
    log = gauge_log if gauge_log is not None else GaugeLog()
    env, order = src.envelope, src.order
    iso = SeriesMap.identity(env, order)
    for k in range(1, order + 1):
        src_k, dst_k, F_k = src.truncate(k), dst.truncate(k), F.truncate(k)
        pool = UnknownPool(f"isomorphism {name}", k, caps)
        images = [pool.generator_image(env, f"{name}{k}[{label}]") for label in env.labels]
        trial = iso.truncate(k).with_order_coeffs(k, images)
        _iso_rows(pool, algebra, trial, src_k.conjugated(F_k), dst_k, k)
        solution = pool.try_solve()
        if not solution.consistent:
            pool = UnknownPool(f"isomorphism {name} with twist realignment", k, caps)
            unknown = pool.tensor2(env, f"F{k}")
            images = [pool.generator_image(env, f"{name}{k}[{label}]") for label in env.labels]
            trial = iso.truncate(k).with_order_coeffs(k, images)
            F_trial = F_k.with_coeff(k, unknown)
            _iso_rows(pool, algebra, trial, src_k.conjugated(F_trial), dst_k, k)
            _twist_rows(pool, src, F_trial, k, env.alt2(F[1]) if k == 1 else None)
            values = pool.solve()
            F = F.with_coeff(k, unknown.evaluate(values))
            log.add(name, k, "twist realigned to admit the isomorphism")
        else:
            values = solution.values
        iso = iso.with_order_coeffs(k, [im.evaluate(values) for im in images])
    if any(not d.is_zero() for d in iso_defect(iso, src, F, dst)):
        raise InternalCheckError(f"solved {name} does not intertwine the coproducts")
    return iso, F


# ─────────────────────────────────────────────
# TWIST LADDER
# ─────────────────────────────────────────────
def tensor_key(t):
    return tuple(t.sorted_items())


@dataclass
class TwistData:
    base: object
    f: object
    F: HSeries
    iso: SeriesMap
    twisted: object


class TwistLadder:
    """Lazily solved Δ(𝔞_g), F(𝔞_g, f) and i(𝔞_g, f) for every bialgebra reached."""

    def __init__(self, envelope, order, caps=None, gauge_log=None):
        self.envelope = envelope
        self.order = order
        self.caps = caps or DegreeCaps()
        self.gauge_log = gauge_log if gauge_log is not None else GaugeLog()
        self._coproducts = {}
        self._twists = {}
        self._vs = {}

    @property
    def ops(self):
        return SeriesOps(self.envelope, self.order)

    def coproduct(self, bialgebra):
        key = bialgebra.key()
        if key not in self._coproducts:
            self._coproducts[key] = solve_coproduct(bialgebra, self.order, self.caps, self.envelope)
        else:
            logger.debug("ladder hit: coproduct")
        return self._coproducts[key]

    def twist(self, bialgebra, f):
        key = (bialgebra.key(), tensor_key(f))
        if key not in self._twists:
            twisted = twist(bialgebra, f)
            delta = self.coproduct(bialgebra)
            F = solve_twist_F(delta, f, self.caps)
            iso, F = solve_iso_i(delta, F, self.coproduct(twisted), bialgebra.algebra,
                                 self.caps, self.gauge_log)
            self._twists[key] = TwistData(bialgebra, f, F, iso, twisted)
        return self._twists[key]

    def replace(self, bialgebra, f, F=None, iso=None):
        data = self.twist(bialgebra, f)
        if F is not None:
            data.F = F
        if iso is not None:
            data.iso = iso
        return data

    def v(self, bialgebra, f, f_prime):
        key = (bialgebra.key(), tensor_key(f), tensor_key(f_prime))
        if key not in self._vs:
            self._vs[key] = solve_v(self, bialgebra, f, f_prime)
        return self._vs[key]


# ─────────────────────────────────────────────
# v(𝔞, f, f′)
# ─────────────────────────────────────────────
def is_primitive(x):
    """True when x ∈ U lies in 𝔞, the primitive part of U."""
    return all(len(key[0]) == 1 for key in x.terms)


def pulled_twist(first, second):
    """(i(f)^{-1})^{⊗2}(F(𝔞_f, f′))·F(f)."""
    ops = SeriesOps(first.iso.envelope, first.F.order)
    return ops.mul(first.iso.inverse().on_all_legs(second.F), first.F)


def composition_defect(delta, F_sum, pulled, v):
    """F_sum·Δ(v) − v^{⊗2}·pulled at the order of v."""
    k = v.order
    ops = SeriesOps(delta.envelope, k)
    if delta.order != k:
        delta = delta.truncate(k)
    return ops.mul(F_sum.truncate(k), delta(v)) - ops.mul(ops.outer(v, v), pulled.truncate(k))


def v_relation_defect(ladder, bialgebra, f, f_prime, v, F_sum=None):
    """F(f+f′)Δ(v) − v^{⊗2}(i(f)^{-1})^{⊗2}(F(𝔞_f, f′))F(f)."""
    first = ladder.twist(bialgebra, f)
    second = ladder.twist(first.twisted, f_prime)
    if F_sum is None:
        F_sum = ladder.twist(bialgebra, f + f_prime).F
    return composition_defect(ladder.coproduct(bialgebra), F_sum, pulled_twist(first, second), v)


def _solve_composition(delta, F_sum, pulled, caps, realign, gauge_log=None):
    env, order = delta.envelope, delta.order
    v = HSeries([env.one()], order)
    for k in range(1, order + 1):
        pool = UnknownPool("composition element v", k, caps)
        unknown = pool.element(env, f"v{k}")
        trial = v.truncate(k).with_coeff(k, unknown)
        pool.require_zero(composition_defect(delta, F_sum, pulled, trial)[k])
        solution = pool.try_solve()
        if solution.consistent:
            v = v.with_coeff(k, unknown.evaluate(solution.values))
            continue
        if not realign:
            return None, F_sum
        pool = UnknownPool("composition element v with twist realignment", k, caps)
        unknown = pool.element(env, f"v{k}")
        F_unknown = pool.tensor2(env, f"F{k}")
        trial = v.truncate(k).with_coeff(k, unknown)
        F_trial = F_sum.truncate(k).with_coeff(k, F_unknown)
        pool.require_zero(composition_defect(delta, F_trial, pulled, trial)[k])
        _twist_rows(pool, delta, F_trial, k, env.alt2(F_sum[1]) if k == 1 else None)
        values = pool.solve()
        v = v.with_coeff(k, unknown.evaluate(values))
        F_sum = F_sum.with_coeff(k, F_unknown.evaluate(values))
        if gauge_log is not None:
            gauge_log.add("F(f+f')", k, "twist realigned to admit v")
    return v, F_sum


def solve_composition_element(delta, F_sum, pulled, caps=None):
    """v = 1 + ℏv_1 + … with F_sum·Δ(v) = v^{⊗2}·pulled for frozen twists, or None."""
    v, _ = _solve_composition(delta, F_sum, pulled, caps or DegreeCaps(), realign=False)
    return v


def solve_v(ladder, bialgebra, f, f_prime, realign=True):
    """v = 1 + ℏv_1 + … from the F-composition relation; i(f+f′) is then redefined
    as i(𝔞_f, f′)∘i(f)∘Ad(v^{-1}). With realign=False nothing in the ladder is
    touched and None is returned when no v exists for the frozen F's."""
    env = ladder.envelope
    first = ladder.twist(bialgebra, f)
    if twist_defect(first.twisted, f_prime):
        raise AxiomError("f' is not a twist of 𝔞_f")
    second = ladder.twist(first.twisted, f_prime)
    total = ladder.twist(bialgebra, f + f_prime)
    delta = ladder.coproduct(bialgebra)
    v, F_sum = _solve_composition(delta, total.F, pulled_twist(first, second), ladder.caps, realign,
                                  ladder.gauge_log)
    if not realign:
        return v
    ops = ladder.ops
    composed = second.iso.compose(first.iso).compose(adjoint_map(env, ops.inv(v)))
    if F_sum is not total.F or not composed.equals(total.iso):
        ladder.gauge_log.add("i(f+f')", ladder.order, "redefined as i(𝔞_f,f')∘i(f)∘Ad(v^-1)")
    ladder.replace(bialgebra, f + f_prime, F_sum, composed)
    return v


@dataclass
class VCocycleResult:
    """v(f+f′,f″) in the aligned gauge, v(f,f′+f″)·i(f)^{-1}(v(𝔞_f,f′,f″))·v(f,f′)^{-1},
    against the relation defining it, the i-composition it induces and the
    intertwining of the ladder's i(f+f′+f″). gauge is an independently solved
    v(f+f′,f″) minus the aligned one."""
    aligned: HSeries
    relation: HSeries
    composition: list
    intertwining: list
    gauge: HSeries = None
    notes: list = field(default_factory=list)

    @property
    def gauge_is_primitive(self):
        if self.gauge is None or self.gauge.is_zero():
            return True
        return is_primitive(self.gauge[self.gauge.first_nonzero_order()])

    @property
    def passed(self):
        return (self.relation.is_zero()
                and all(d.is_zero() for d in self.composition)
                and all(d.is_zero() for d in self.intertwining)
                and self.gauge_is_primitive)


def check_v_cocycle(ladder, bialgebra, f, f_prime, f_second):
    """f′ twists 𝔞_f and f″ twists 𝔞_{f+f′}.

    Each v may redefine a ladder entry an earlier v read, so the entries are
    captured at the point each relation used them.
    """
    env, ops = ladder.envelope, ladder.ops
    delta = ladder.coproduct(bialgebra)
    i_f = ladder.twist(bialgebra, f).iso
    v1 = ladder.v(bialgebra, f, f_prime)
    step = ladder.twist(bialgebra, f + f_prime)
    F_step, i_step = step.F, step.iso
    last = ladder.twist(step.twisted, f_second)
    F_last, i_last = last.F, last.iso
    v2 = ladder.v(ladder.twist(bialgebra, f).twisted, f_prime, f_second)
    v3 = ladder.v(bialgebra, f, f_prime + f_second)
    total = ladder.twist(bialgebra, f + f_prime + f_second)
    F_total, i_total = total.F, total.iso

    aligned = ops.prod(v3, i_f.inverse().apply(v2), ops.inv(v1))
    pulled = ops.mul(i_step.inverse().on_all_legs(F_last), F_step)
    relation = composition_defect(delta, F_total, pulled, aligned)
    induced = i_last.compose(i_step).compose(adjoint_map(env, ops.inv(aligned)))
    composition = [a - b for a, b in zip(i_total.images, induced.images)]
    intertwining = iso_defect(i_total, delta, F_total, ladder.coproduct(total.twisted))

    notes = []
    independent = solve_composition_element(delta, F_total, pulled, ladder.caps)
    gauge = None
    if independent is None:
        notes.append("no independent v(f+f',f'') for the frozen twists")
    else:
        gauge = independent - aligned
        if not gauge.is_zero():
            notes.append(f"independent v(f+f',f'') differs by a gauge from order {gauge.first_nonzero_order()}")
    return VCocycleResult(aligned, relation, composition, intertwining, gauge, notes)


# ─────────────────────────────────────────────
# GAUGE TRANSFORMS
# ─────────────────────────────────────────────
def gauge_transform(delta, F, iso, u):
    """F′ = u^{⊗2} F Δ(u)^{-1} and i′ = i∘Ad(u^{-1}); ε(u) must be 1."""
    ops = SeriesOps(delta.envelope, F.order)
    F_new = ops.prod(ops.outer(u, u), F, ops.inv(delta(u)))
    iso_new = iso.compose(adjoint_map(delta.envelope, ops.inv(u)))
    return F_new, iso_new
