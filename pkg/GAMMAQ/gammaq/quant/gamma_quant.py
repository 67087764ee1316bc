"""
gammaq - Γ-Graded Quantization
The quantized smash bialgebra A = ⊕_γ U(𝔞)[[ℏ]]·[γ] with

    [a|γ][b|γ′] = [a · φ_γ(b) · c_{γ,γ′} | γγ′]
    Δ_A([a|γ])  = [Δ(a) · F_γ^{-1} | γ, γ]

where φ_γ = i_γ^{-1}∘θ_γ and c_{γ,γ′} = v_{γ,γ′}^{-1}. The generic pipeline
solves (F_γ, φ_γ, c_{γ,γ′}) jointly per order on top of Δ_ℏ(𝔞); the
quasitriangular pipeline takes Δ = Ad(J)∘Δ_0, F_γ = θ_γ^{⊗2}(J)J^{-1},
φ_γ = θ_γ and c = 1.
"""
import logging
from dataclasses import dataclass, field
from itertools import product

from algebra.defects import DefectReport
from algebra.envelope import CoPoissonStructure, Envelope, SmashAlgebra, tag
from algebra.exact import ONE, SparseVector
from algebra.gamma import quasitriangular_gamma
from algebra.lie import mat_inverse
from algebra.twists import compose_twists
from errors import InternalCheckError, ShapeMismatchError
from quant.coproduct import (TruncatedCoproduct, homomorphism_rows, quasitriangular_coproduct,
                             solve_coproduct, solve_J_quasitriangular, transport_coproduct)
from quant.engine import (DegreeCaps, GaugeLog, SeriesMap, SeriesOps, UnknownPool, compose_series,
                          series_from_json, series_to_json)
from quant.twisting import is_primitive, solve_composition_element, solve_iso_i, twist_cocycle_defect

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# THE QUANTIZED SMASH BIALGEBRA
# ─────────────────────────────────────────────
class TruncatedGammaBialgebra:
    def __init__(self, envelope, action, coproduct, twists, phis, cocycle, pipeline="generic",
                 gauge_log=None, J=None):
        group = action.group
        if len(twists) != group.order or len(phis) != group.order:
            raise ShapeMismatchError("one F_γ and one φ_γ per group element are required")
        self.envelope = envelope
        self.action = action
        self.group = group
        self.coproduct = coproduct
        self.order = coproduct.order
        self.twists = list(twists)
        self.phis = list(phis)
        self.cocycle = dict(cocycle)
        self.pipeline = pipeline
        self.J = J
        self.gauge_log = gauge_log if gauge_log is not None else GaugeLog()
        self.smash = SmashAlgebra(envelope, action)
        self.ops = SeriesOps(envelope, self.order)
        self._twist_inverses = [self.ops.inv(F) for F in self.twists]
        self._products = {}
        self._coproducts = {}

    def c(self, g, h):
        if g == self.group.identity or h == self.group.identity:
            return self.ops.one()
        return self.cocycle[(g, h)]

    def unit(self):
        return self.smash.unit()

    def element(self, m, g, coeff=ONE):
        return self.smash.element(m, g, coeff)

    # ── product ──
    def pair_product(self, p1, p2):
        key = (p1, p2)
        cached = self._products.get(key)
        if cached is None:
            (m1, g1), (m2, g2) = p1, p2
            ops = self.ops
            left = ops.const(SparseVector({(m1,): ONE}, clean=False))
            value = ops.prod(left, self.phis[g1].monomial(m2), self.c(g1, g2))
            gg = self.group.mul(g1, g2)
            cached = value.map(lambda x: tag(x, gg))
            self._products[key] = cached
        return cached

    def mult(self, a, b):
        """Product of two plain smash tensors of equal arity, as a series."""
        ops = self.ops
        out = ops.zero()
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                if len(ka) != len(kb):
                    raise ShapeMismatchError("smash tensors of different arity")
                term = ops.const(SparseVector({(): ca * cb}, clean=False))
                for p1, p2 in zip(ka, kb):
                    term = ops.outer(term, self.pair_product(p1, p2))
                out = out + term
        return out

    def mult_series(self, x, y):
        ops = self.ops
        x, y = ops.lift(x), ops.lift(y)
        return compose_series(x, lambda xi: compose_series(y, lambda yj: self.mult(xi, yj), self.order),
                              self.order)

    # ── coproduct ──
    def pair_coproduct(self, p):
        cached = self._coproducts.get(p)
        if cached is None:
            m, g = p
            value = self.ops.mul(self.coproduct.map.monomial(m), self._twist_inverses[g])
            cached = value.map(lambda x: tag(x, g))
            self._coproducts[p] = cached
        return cached

    def _coproduct_plain(self, x, leg):
        env, ops = self.envelope, self.ops
        out = ops.zero()
        for key, c in x.terms.items():
            image = self.pair_coproduct(key[leg])
            prefix = SparseVector({key[:leg]: c}, clean=False)
            suffix = SparseVector({key[leg + 1:]: ONE}, clean=False)
            out = out + image.map(lambda part: env.outer(env.outer(prefix, part), suffix))
        return out

    def comult(self, x, leg=0):
        """Δ_A applied on one leg of a plain or series smash tensor."""
        return compose_series(self.ops.lift(x), lambda c: self._coproduct_plain(c, leg), self.order)

    def counit(self, x, leg=0):
        return self.ops.lift(x).map(lambda c: self.smash.counit(c, leg))

    # ── derived data ──
    def isos(self):
        """i_γ = θ_γ∘φ_γ^{-1}."""
        env, order = self.envelope, self.order
        out = []
        for g in self.group.elements():
            theta = SeriesMap.linear(env, self.action.theta(g), order)
            theta_inv = SeriesMap.linear(env, mat_inverse(self.action.theta(g)), order)
            rho = theta_inv.compose(self.phis[g])
            out.append(theta.compose(rho.inverse()).compose(theta_inv))
        return out

    def compositions(self):
        """v_{γ,γ′} = c_{γ,γ′}^{-1}."""
        return {pair: self.ops.inv(c) for pair, c in self.cocycle.items()}

    def to_dict(self):
        env, group = self.envelope, self.group
        labels = group.labels
        isos = self.isos()
        return {
            "pipeline": self.pipeline,
            "order": self.order,
            "coproduct": self.coproduct.to_dict(),
            "F": {labels[g]: series_to_json(env, F) for g, F in enumerate(self.twists)},
            "phi": {labels[g]: {env.labels[i]: series_to_json(env, im) for i, im in enumerate(phi.images)}
                    for g, phi in enumerate(self.phis)},
            "c": {f"{labels[g]},{labels[h]}": series_to_json(env, c) for (g, h), c in sorted(self.cocycle.items())},
            "i": {labels[g]: {env.labels[i]: series_to_json(env, im) for i, im in enumerate(iso.images)}
                  for g, iso in enumerate(isos)},
            "v": {f"{labels[g]},{labels[h]}": series_to_json(env, v)
                  for (g, h), v in sorted(self.compositions().items())},
            "J": series_to_json(env, self.J) if self.J is not None else None,
            "gauge_log": self.gauge_log.to_list(),
        }

    @classmethod
    def from_dict(cls, envelope, action, data):
        order = data["order"]
        group = action.group
        tables = [series_from_json(envelope, data["coproduct"][l], order) for l in envelope.labels]
        twists = [series_from_json(envelope, data["F"][group.labels[g]], order) for g in group.elements()]
        phis = [SeriesMap(envelope, [series_from_json(envelope, data["phi"][group.labels[g]][l], order)
                                     for l in envelope.labels]) for g in group.elements()]
        cocycle = {}
        for key, value in data["c"].items():
            g, h = (group.index(x) for x in key.split(","))
            cocycle[(g, h)] = series_from_json(envelope, value, order)
        log = GaugeLog(list(data.get("gauge_log", [])))
        J = series_from_json(envelope, data["J"], order) if data.get("J") is not None else None
        return cls(envelope, action, TruncatedCoproduct(envelope, tables), twists, phis, cocycle,
                   data.get("pipeline", "generic"), log, J)

    def __repr__(self):
        return f"<TruncatedGammaBialgebra {self.pipeline} N={self.order} Γ={self.group.labels}>"


# ─────────────────────────────────────────────
# AXIOM DEFECTS
# ─────────────────────────────────────────────
def _label(A, p):
    m, g = p
    word = "".join(A.envelope.labels[i] for i in m) or "1"
    return f"[{word}|{A.group.labels[g]}]"


def bialgebra_axiom_defects(A, check_degree):
    """Associativity, coassociativity, compatibility, unit, counit and grading
    on smash monomials of degree at most check_degree in every slot."""
    report = DefectReport(f"{A.pipeline} quantization")
    for name in ("associativity", "coassociativity", "compatibility", "unit", "counit", "grading"):
        report.section(name)
    ops = A.ops
    basis = A.smash.basis(check_degree)
    elements = {p: SparseVector({(p,): ONE}, clean=False) for p in basis}
    unit = A.unit()

    coproducts = {}
    for p in basis:
        x = elements[p]
        lx = _label(A, p)
        report.record("unit", f"1·{lx}", A.mult(unit, x) - ops.const(x))
        report.record("unit", f"{lx}·1", A.mult(x, unit) - ops.const(x))
        cop = coproducts[p] = A.comult(x)
        report.record("counit", f"(ε⊗id)Δ{lx}", A.counit(cop, 0) - ops.const(x))
        report.record("counit", f"(id⊗ε)Δ{lx}", A.counit(cop, 1) - ops.const(x))
        report.record("coassociativity", lx, A.comult(cop, 0) - A.comult(cop, 1))
        for coeff in cop.coeffs:
            report.record("grading", f"Δ{lx}", A.smash.grading_defect(coeff, (p[1], p[1])))

    products = {}
    for p, q in product(basis, repeat=2):
        ab = products[(p, q)] = A.mult(elements[p], elements[q])
        gg = A.group.mul(p[1], q[1])
        for coeff in ab.coeffs:
            report.record("grading", f"{_label(A, p)}{_label(A, q)}", A.smash.grading_defect(coeff, (gg,)))
        report.record("compatibility", f"{_label(A, p)}{_label(A, q)}",
                      A.comult(ab) - A.mult_series(coproducts[p], coproducts[q]))

    for p, q, s in product(basis, repeat=3):
        left = A.mult_series(products[(p, q)], elements[s])
        right = A.mult_series(elements[p], products[(q, s)])
        report.record("associativity", "".join(_label(A, t) for t in (p, q, s)), left - right)
    logger.info("axiom checks for %s at D_in=%d: %s", A, check_degree, "pass" if report.passed else "fail")
    return report


def classical_limit(A, gamma, check_degree):
    """Order 0 against the undeformed smash bialgebra and the order-1
    antisymmetrized coproduct against δ_A."""
    smash = A.smash
    delta = CoPoissonStructure(smash, gamma)
    report = DefectReport("classical limit")
    for name in ("product", "coproduct", "copoisson"):
        report.section(name)
    basis = smash.basis(check_degree)
    for p in basis:
        x = smash.element(*p)
        cop = A.comult(x)
        report.record("coproduct", _label(A, p), cop[0] - smash.smash_coproduct(x))
        if A.order >= 1:
            report.record("copoisson", _label(A, p), smash.permute(cop[1], (0, 1)) - smash.permute(cop[1], (1, 0))
                          - delta(x))
        for q in basis:
            y = smash.element(*q)
            report.record("product", f"{_label(A, p)}{_label(A, q)}", A.mult(x, y)[0] - smash.smash_mult(x, y))
    return report


def quantization_defects(A, gamma, check_degree):
    """Axiom and classical-limit defects of a quantization in one report."""
    report = DefectReport(f"{A.pipeline} quantization")
    report.merge(bialgebra_axiom_defects(A, check_degree), "axioms")
    report.merge(classical_limit(A, gamma, check_degree), "classical_limit")
    return report


# ─────────────────────────────────────────────
# GENERIC PIPELINE
# ─────────────────────────────────────────────
def _trial_map(base, k, images):
    return base.truncate(k).with_order_coeffs(k, images) if images is not None else base.truncate(k)


def _assembly_rows(pool, gamma, env, delta, F, phi, c, k):
    group = gamma.group
    e = group.identity
    ops = SeriesOps(env, k)
    nonid = [g for g in group.elements() if g != e]

    def cc(g, h):
        return c[(g, h)] if g != e and h != e else ops.one()

    for g in nonid:
        pool.require_zero(twist_cocycle_defect(delta, F[g])[k])
        if k == 1:
            pool.require_zero(env.alt2(F[g][1]) - env.from_tensor(gamma.twists[g]))
        for i, table in enumerate(delta.tables):
            lhs = ops.mul(phi[g].on_all_legs(table), F[g])
            rhs = ops.mul(F[g], delta(phi[g].images[i]))
            pool.require_zero((lhs - rhs)[k])
        homomorphism_rows(pool, ops, gamma.algebra, phi[g].images, k)
    for g in nonid:
        for h in nonid:
            gh = group.mul(g, h)
            for i in range(env.dim):
                lhs = ops.mul(phi[g].apply(phi[h].images[i]), cc(g, h))
                rhs = ops.mul(cc(g, h), phi[gh].images[i])
                pool.require_zero((lhs - rhs)[k])
            lhs = ops.mul(ops.outer(cc(g, h), cc(g, h)), F[gh])
            rhs = ops.prod(phi[g].on_all_legs(F[h]), F[g], delta(cc(g, h)))
            pool.require_zero((lhs - rhs)[k])
            for s in nonid:
                lhs = ops.mul(cc(g, h), cc(gh, s))
                rhs = ops.mul(phi[g].apply(cc(h, s)), cc(g, group.mul(h, s)))
                pool.require_zero((lhs - rhs)[k])


def assemble_gamma_quantization(gamma, order, caps=None, envelope=None, check_degree=None, seed_order=None):
    """Solve (F_γ, φ_γ, c_{γ,γ′}) per order over Δ_ℏ(𝔞) and verify the axioms.

    seed_order lists group elements in the order their unknowns are created,
    which fixes the pinned gauge; check_degree=None skips the final axiom
    verification.
    """
    caps = caps or DegreeCaps()
    group, action = gamma.group, gamma.action
    bialgebra = gamma.bialgebra
    for g in group.elements():
        for h in group.elements():
            compose_twists(bialgebra, gamma.twists[g], action.wedge2(g, gamma.twists[h]))
    env = envelope or Envelope(gamma.algebra)
    delta = solve_coproduct(bialgebra, order, caps, env)
    ops = SeriesOps(env, order)
    e = group.identity
    nonid = [g for g in (seed_order or group.elements()) if g != e]
    if sorted(nonid) != [g for g in group.elements() if g != e]:
        raise ShapeMismatchError("seed order must list every non-identity element once")
    F = [ops.one(2) for _ in group.elements()]
    phi = [SeriesMap.linear(env, action.theta(g), order) for g in group.elements()]
    c = {(g, h): ops.one() for g in nonid for h in nonid}
    log = GaugeLog()
    for k in range(1, order + 1):
        pool = UnknownPool("Γ-assembly", k, caps)
        F_k = {g: pool.tensor2(env, f"F{k}[{group.labels[g]}]") for g in nonid}
        phi_k = {g: [pool.generator_image(env, f"phi{k}[{group.labels[g]},{l}]") for l in env.labels]
                 for g in nonid}
        c_k = {(g, h): pool.element(env, f"c{k}[{group.labels[g]},{group.labels[h]}]") for (g, h) in c}
        F_t = {g: F[g].truncate(k).with_coeff(k, F_k[g]) if g in F_k else F[g].truncate(k)
               for g in group.elements()}
        phi_t = {g: _trial_map(phi[g], k, phi_k.get(g)) for g in group.elements()}
        c_t = {pair: c[pair].truncate(k).with_coeff(k, c_k[pair]) for pair in c}
        _assembly_rows(pool, gamma, env, delta.truncate(k), F_t, phi_t, c_t, k)
        values = pool.solve()
        for g in nonid:
            F[g] = F[g].with_coeff(k, F_k[g].evaluate(values))
            phi[g] = phi[g].with_order_coeffs(k, [im.evaluate(values) for im in phi_k[g]])
        for pair in c:
            c[pair] = c[pair].with_coeff(k, c_k[pair].evaluate(values))
        if pool.pinned:
            log.add("Γ-assembly", k, f"{pool.pinned} free unknowns pinned to zero")
        logger.info("Γ-assembly order %d solved with %d unknowns", k, len(pool.names))
    A = TruncatedGammaBialgebra(env, action, delta, F, phi, c, "generic", log)
    if check_degree is not None:
        report = bialgebra_axiom_defects(A, check_degree)
        if not report.passed:
            raise InternalCheckError("assembled quantization fails its axioms", defects=report.to_dict())
    return A


# ─────────────────────────────────────────────
# LADDER AGREEMENT
# ─────────────────────────────────────────────
def _record_offset(report, log, section, name, offsets, labels=None):
    orders = [d.first_nonzero_order() for d in offsets if not d.is_zero()]
    if not orders:
        return
    k = min(orders)
    bad = [(i, d[k]) for i, d in enumerate(offsets) if not is_primitive(d[k])]
    if not bad:
        log.add(name, k, "ladder solution differs by a primitive gauge")
        return
    for i, value in bad:
        where = f"{name}({labels[i]})" if labels else name
        report.record(section, f"{where} at order {k}", value)


def ladder_agreement(A, gamma, caps=None):
    """Re-solve i_γ and v_{γ,γ′} with the twist-ladder solvers on the data of A.

    F(𝔞_{f_γ}, γ·f_γ′) is read as θ_γ^{⊗2}(F_γ′), so the ladder relations take
    Δ^{θ_γ} as the coproduct of 𝔞_{f_γ}. Two solutions may differ, at the first
    order they disagree, only by a primitive gauge; offsets are logged in
    A.gauge_log and anything else is a defect.
    """
    caps = caps or DegreeCaps()
    env, group, action = A.envelope, A.group, A.action
    delta, ops = A.coproduct, A.ops
    report = DefectReport("ladder agreement")
    report.section("isomorphisms")
    report.section("compositions")
    isos = A.isos()
    for g in group.elements():
        if g == group.identity:
            continue
        label = group.labels[g]
        target = transport_coproduct(delta, action.theta(g))
        iso, F = solve_iso_i(delta, A.twists[g], target, gamma.algebra, caps, A.gauge_log, name=f"i[{label}]")
        if not F == A.twists[g]:
            report.note(f"i[{label}]: F_{label} was realigned, not compared")
            continue
        offsets = [a - b for a, b in zip(iso.images, isos[g].images)]
        _record_offset(report, A.gauge_log, "isomorphisms", f"i[{label}]", offsets, env.labels)
    for (g, h), c in sorted(A.cocycle.items()):
        name = f"v[{group.labels[g]},{group.labels[h]}]"
        pulled = ops.mul(A.phis[g].on_all_legs(A.twists[h]), A.twists[g])
        v = solve_composition_element(delta, A.twists[group.mul(g, h)], pulled, caps)
        if v is None:
            report.note(f"{name}: no solution for the frozen twists")
            continue
        _record_offset(report, A.gauge_log, "compositions", name, [v - ops.inv(c)])
    logger.info("ladder agreement for %s: %s", A, "pass" if report.passed else "fail")
    return report


# ─────────────────────────────────────────────
# QUASITRIANGULAR PIPELINE
# ─────────────────────────────────────────────
def quasitriangular_gamma_quantize(qt, action, order, caps=None, envelope=None, check_degree=None):
    """Undeformed smash product with Δ = Ad(J)∘Δ_0 on all of U(𝔞)⋊Γ."""
    quasitriangular_gamma(qt, action)
    env = envelope or Envelope(qt.algebra)
    log = GaugeLog()
    J = solve_J_quasitriangular(qt, order, action, caps, env, log)
    ops = SeriesOps(env, order)
    J_inv = ops.inv(J)
    delta = quasitriangular_coproduct(env, J)
    group = action.group
    thetas = [SeriesMap.linear(env, action.theta(g), order) for g in group.elements()]
    F = [ops.mul(theta.on_all_legs(J), J_inv) for theta in thetas]
    nonid = [g for g in group.elements() if g != group.identity]
    c = {(g, h): ops.one() for g in nonid for h in nonid}
    A = TruncatedGammaBialgebra(env, action, delta, F, thetas, c, "quasitriangular", log, J)
    if check_degree is not None:
        report = bialgebra_axiom_defects(A, check_degree)
        if not report.passed:
            raise InternalCheckError("quasitriangular quantization fails its axioms", defects=report.to_dict())
    return A


# ─────────────────────────────────────────────
# PIPELINE COMPARISON
# ─────────────────────────────────────────────
@dataclass
class GaugeWitness:
    """Ψ([x|γ]) = [ψ(x)·u_γ | γ] from the generic to the direct structure."""
    found: bool
    psi: SeriesMap = None
    units: dict = field(default_factory=dict)
    order: int = None
    certificate: dict = None

    def to_dict(self, envelope, group):
        if not self.found:
            return {"found": False, "order": self.order, "certificate": self.certificate}
        return {
            "found": True,
            "psi": {envelope.labels[i]: series_to_json(envelope, im) for i, im in enumerate(self.psi.images)},
            "u": {group.labels[g]: series_to_json(envelope, u) for g, u in sorted(self.units.items())},
        }


def compare_pipelines(direct, generic, caps=None):
    """Solve for ψ (automorphism, identity at order 0) and u_γ (ε(u_γ) = 1)."""
    caps = caps or DegreeCaps()
    if direct.group.table != generic.group.table or direct.order != generic.order:
        raise ShapeMismatchError("pipelines differ in group or order")
    if direct.envelope.labels != generic.envelope.labels:
        raise ShapeMismatchError("pipelines differ in the Lie algebra")
    env, order, group = direct.envelope, direct.order, direct.group
    e = group.identity
    nonid = [g for g in group.elements() if g != e]
    ops = SeriesOps(env, order)
    psi = SeriesMap.identity(env, order)
    units = {g: ops.one() for g in nonid}
    inverse_twists = {g: ops.inv(generic.twists[g]) for g in nonid}
    for k in range(1, order + 1):
        pool = UnknownPool("pipeline comparison", k, caps)
        psi_k = [pool.generator_image(env, f"psi{k}[{l}]") for l in env.labels]
        u_k = {g: pool.element(env, f"u{k}[{group.labels[g]}]") for g in nonid}
        psi_t = psi.truncate(k).with_order_coeffs(k, psi_k)
        u_t = {g: units[g].truncate(k).with_coeff(k, u_k[g]) for g in nonid}
        _comparison_rows(pool, direct, generic, inverse_twists, psi_t, u_t, k)
        solution = pool.try_solve()
        if not solution.consistent:
            logger.warning("pipelines differ at order %d", k)
            return GaugeWitness(False, order=k, certificate=solution.to_dict())
        psi = psi.with_order_coeffs(k, [im.evaluate(solution.values) for im in psi_k])
        for g in nonid:
            units[g] = units[g].with_coeff(k, u_k[g].evaluate(solution.values))
    return GaugeWitness(True, psi, units)


def _comparison_rows(pool, direct, generic, inverse_twists, psi, units, k):
    env, group = direct.envelope, direct.group
    e = group.identity
    ops = SeriesOps(env, k)

    def u(g):
        return units[g] if g != e else ops.one()

    d_delta, g_delta = direct.coproduct.truncate(k), generic.coproduct.truncate(k)
    for i in range(env.dim):
        pool.require_zero((d_delta(psi.images[i]) - psi.on_all_legs(g_delta.tables[i]))[k])
    homomorphism_rows(pool, ops, generic.envelope.algebra, psi.images, k)
    for g in units:
        d_phi, g_phi = direct.phis[g].truncate(k), generic.phis[g].truncate(k)
        for i in range(env.dim):
            lhs = ops.mul(psi.apply(g_phi.images[i]), u(g))
            rhs = ops.mul(u(g), d_phi.apply(psi.images[i]))
            pool.require_zero((lhs - rhs)[k])
        lhs = ops.mul(d_delta(u(g)), ops.inv(direct.twists[g].truncate(k)))
        rhs = ops.mul(psi.on_all_legs(inverse_twists[g].truncate(k)), ops.outer(u(g), u(g)))
        pool.require_zero((lhs - rhs)[k])
        for h in units:
            gh = group.mul(g, h)
            lhs = ops.mul(psi.apply(generic.c(g, h).truncate(k)), u(gh))
            rhs = ops.prod(u(g), d_phi.apply(u(h)), direct.c(g, h).truncate(k))
            pool.require_zero((lhs - rhs)[k])

