"""
gammaq - Order-by-Order Solver Engine
Series arithmetic over U(𝔞)^{⊗k}, algebra maps with series-valued images,
unknown pools whose residuals become linear rows, and the degree caps that
bound every ansatz.
"""
import logging
from dataclasses import dataclass, field

from algebra.exact import (ONE, HSeries, LinSystem, LinearForm, SparseVector, accumulate,
                           add_residual_rows, format_scalar, hseries_inverse, hseries_mul,
                           lin_solve, scalar)
from errors import NonInvertibleError, ShapeMismatchError, SolverCapError

logger = logging.getLogger(__name__)

HALF = ONE / 2


# ─────────────────────────────────────────────
# DEGREE CAPS
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class DegreeCaps:
    """Polynomial-degree bounds for the order-k unknowns.

    Generator images (Δ_k, i, φ, ψ) live in total degree ≤ k+1, elements
    (F, J, v, c, u) in total degree ≤ 2k; every tensor leg is capped at
    k+2 plus the slack, and by the absolute cap when one is given.
    """
    slack: int = 0
    absolute: int = None

    def leg(self, k):
        cap = k + 2 + self.slack
        return min(cap, self.absolute) if self.absolute is not None else cap

    def map_total(self, k):
        total = k + 1 + self.slack
        return min(total, self.absolute) if self.absolute is not None else total

    def element_total(self, k):
        return 2 * k + self.slack

    def hint(self, k):
        return (f"increase --degree-cap or GAMMAQ_CAP_SLACK (order {k} used leg cap {self.leg(k)}, "
                f"map degree {self.map_total(k)}, element degree {self.element_total(k)})")

    def to_dict(self):
        return {"slack": self.slack, "absolute": self.absolute}


# ─────────────────────────────────────────────
# GAUGE LOG
# ─────────────────────────────────────────────
@dataclass
class GaugeLog:
    """Deterministic record of gauge choices and realignments."""
    entries: list = field(default_factory=list)

    def add(self, obj, order, event):
        self.entries.append({"object": obj, "order": order, "event": event})
        logger.info("gauge: %s at order %s: %s", obj, order, event)

    def extend(self, other):
        self.entries.extend(other.entries)

    def to_list(self):
        return list(self.entries)


# ─────────────────────────────────────────────
# SERIES ARITHMETIC
# ─────────────────────────────────────────────
class SeriesOps:
    """Truncated ℏ-series arithmetic over the tensor powers of one envelope."""

    def __init__(self, envelope, order):
        self.envelope = envelope
        self.order = order

    def at(self, order):
        return SeriesOps(self.envelope, order)

    def const(self, x):
        return HSeries.constant(x, self.order)

    def one(self, arity=1):
        return self.const(self.envelope.one(arity))

    def zero(self):
        return self.const(SparseVector())

    def lift(self, x):
        return x if isinstance(x, HSeries) else self.const(x)

    def mul(self, a, b):
        return hseries_mul(self.lift(a), self.lift(b), self.envelope.u_mult)

    def prod(self, *factors):
        out = self.lift(factors[0])
        for f in factors[1:]:
            out = self.mul(out, f)
        return out

    def inv(self, a):
        a = self.lift(a)
        return hseries_inverse(a, self.envelope.u_mult, self.envelope.one(self.arity(a)))

    def outer(self, a, b):
        return hseries_mul(self.lift(a), self.lift(b), self.envelope.outer)

    def permute(self, x, sigma):
        return x.map(lambda c: self.envelope.permute(c, sigma))

    def inject(self, x, legs, arity):
        return x.map(lambda c: self.envelope.inject(c, legs, arity))

    def alt2(self, x):
        return x.map(self.envelope.alt2)

    def counit(self, x, leg=0):
        return x.map(lambda c: self.envelope.counit(c, leg))

    def scale(self, x, coeff):
        return x.map(lambda c: c.scale(coeff))

    def conjugate(self, g, x):
        """g x g^{-1}."""
        return self.prod(g, x, self.inv(g))

    @staticmethod
    def arity(x):
        for c in x.coeffs:
            for key in c.terms:
                return len(key)
        return 1


def evaluate_series(x, values):
    return x.map(lambda c: c.evaluate(values))


def compose_series(x, fn, order):
    """Σ_i ℏ^i fn(x_i) where fn returns a series; truncated at order."""
    coeffs = [SparseVector() for _ in range(order + 1)]
    for i, xi in enumerate(x.coeffs[:order + 1]):
        if not xi:
            continue
        image = fn(xi)
        for j in range(order + 1 - i):
            if image[j]:
                coeffs[i + j] = coeffs[i + j] + image[j]
    return HSeries(coeffs, order)


# ─────────────────────────────────────────────
# SERIES-VALUED ALGEBRA MAPS
# ─────────────────────────────────────────────
class SeriesMap:
    """Algebra map U → U^{⊗arity}[[ℏ]] extended multiplicatively from generator images."""

    def __init__(self, envelope, images, arity=1):
        if len(images) != envelope.dim:
            raise ShapeMismatchError("one image per generator is required")
        orders = {im.order for im in images}
        if len(orders) != 1:
            raise ShapeMismatchError(f"generator images of different orders {orders}")
        self.envelope = envelope
        self.images = list(images)
        self.arity = arity
        self.order = orders.pop()
        self.ops = SeriesOps(envelope, self.order)
        self._cache = {(): self.ops.one(arity)}

    @classmethod
    def identity(cls, envelope, order):
        ops = SeriesOps(envelope, order)
        return cls(envelope, [ops.const(envelope.gen(i)) for i in range(envelope.dim)])

    @classmethod
    def linear(cls, envelope, matrix, order):
        ops = SeriesOps(envelope, order)
        return cls(envelope, [ops.const(envelope.vector(col)) for col in matrix])

    def monomial(self, m):
        cached = self._cache.get(m)
        if cached is None:
            cached = self.ops.mul(self.monomial(m[:-1]), self.images[m[-1]])
            self._cache[m] = cached
        return cached

    def on_leg(self, x, leg=0):
        """Image of a plain element of U^{⊗k} with the map applied on one leg."""
        env = self.envelope
        coeffs = [SparseVector() for _ in range(self.order + 1)]
        for key, c in x.terms.items():
            image = self.monomial(key[leg])
            prefix = SparseVector({key[:leg]: c}, clean=False)
            suffix = SparseVector({key[leg + 1:]: ONE}, clean=False)
            for n, part in enumerate(image.coeffs):
                if part:
                    coeffs[n] = coeffs[n] + env.outer(env.outer(prefix, part), suffix)
        return HSeries(coeffs, self.order)

    def apply(self, x, leg=0):
        x = self.ops.lift(x)
        if x.order != self.order:
            x = x.truncate(self.order) if x.order > self.order else x.extend(self.order)
        return compose_series(x, lambda c: self.on_leg(c, leg), self.order)

    def on_all_legs(self, x):
        x = self.ops.lift(x)
        for leg in reversed(range(SeriesOps.arity(x))):
            x = self.apply(x, leg)
        return x

    def compose(self, other):
        """self ∘ other for arity-one maps."""
        return SeriesMap(self.envelope, [self.apply(im) for im in other.images], self.arity)

    def truncate(self, order):
        return SeriesMap(self.envelope, [im.truncate(order) for im in self.images], self.arity)

    def extend(self, order):
        return SeriesMap(self.envelope, [im.extend(order) for im in self.images], self.arity)

    def with_order_coeffs(self, k, coeffs):
        return SeriesMap(self.envelope, [im.with_coeff(k, c) for im, c in zip(self.images, coeffs)],
                         self.arity)

    def evaluate(self, values):
        return SeriesMap(self.envelope, [evaluate_series(im, values) for im in self.images], self.arity)

    def inverse(self):
        """Inverse of an arity-one map that is the identity at order 0."""
        env, order = self.envelope, self.order
        ops = SeriesOps(env, order)
        inv = SeriesMap.identity(env, order)
        for k in range(1, order + 1):
            trial = inv.truncate(k)
            head = self.truncate(k)
            coeffs = [-head.apply(im)[k] for im in trial.images]
            inv = inv.with_order_coeffs(k, coeffs)
        for i, im in enumerate(inv.images):
            if not self.apply(im) == ops.const(env.gen(i)):
                raise NonInvertibleError("map is not the identity at order 0")
        return inv

    def equals(self, other):
        return all(a == b for a, b in zip(self.images, other.images))

    def __repr__(self):
        return f"<SeriesMap N={self.order} arity={self.arity}>"


def adjoint_map(envelope, g):
    """x ↦ g x g^{-1} as a series map."""
    ops = SeriesOps(envelope, g.order)
    g_inv = ops.inv(g)
    return SeriesMap(envelope, [ops.prod(g, ops.const(envelope.gen(i)), g_inv)
                                for i in range(envelope.dim)])


# ─────────────────────────────────────────────
# UNKNOWNS
# ─────────────────────────────────────────────
def monomial_label(envelope, m):
    return "·".join(envelope.labels[i] for i in m) or "1"


def key_label(envelope, key):
    return "⊗".join(monomial_label(envelope, m) for m in key)


def element_basis(envelope, total, leg_cap):
    """Monomials of U with 1 ≤ degree ≤ min(total, leg_cap), ascending degree."""
    top = min(total, leg_cap)
    return [(monomial_label(envelope, m), SparseVector({(m,): ONE}, clean=False))
            for m in envelope.monomials(top, 1)]


def tensor2_basis(envelope, total, leg_cap):
    """Symmetrized basis of U⁺⊗U⁺: antisymmetric combinations first, then symmetric."""
    monos = envelope.monomials(min(total - 1, leg_cap), 1)
    anti, sym = [], []
    for a, m1 in enumerate(monos):
        for m2 in monos[a:]:
            if len(m1) + len(m2) > total:
                continue
            deg = len(m1) + len(m2)
            name = f"{monomial_label(envelope, m1)}⊗{monomial_label(envelope, m2)}"
            if m1 == m2:
                sym.append((deg, "sym " + name, SparseVector({(m1, m2): ONE}, clean=False)))
                continue
            anti.append((deg, "alt " + name, SparseVector({(m1, m2): ONE, (m2, m1): -ONE}, clean=False)))
            sym.append((deg, "sym " + name, SparseVector({(m1, m2): ONE, (m2, m1): ONE}, clean=False)))
    ordered = sorted(anti, key=lambda t: t[0]) + sorted(sym, key=lambda t: t[0])
    return [(name, vec) for _, name, vec in ordered]


class UnknownPool:
    """Unknowns of one per-order solve and the rows their residuals produce."""

    def __init__(self, what, order, caps):
        self.what = what
        self.order = order
        self.caps = caps
        self.names = []
        self.pinned = 0
        self.system = LinSystem(variables=self.names)

    def variable(self, name):
        self.names.append(name)
        return LinearForm.variable(len(self.names) - 1)

    def combination(self, basis, prefix):
        out = {}
        for label, vec in basis:
            u = self.variable(f"{prefix}[{label}]")
            for key, c in vec.terms.items():
                accumulate(out, key, u * c)
        return SparseVector(out, clean=False)

    def element(self, envelope, prefix):
        k = self.order
        return self.combination(element_basis(envelope, self.caps.element_total(k), self.caps.leg(k)), prefix)

    def generator_image(self, envelope, prefix):
        k = self.order
        return self.combination(element_basis(envelope, self.caps.map_total(k), self.caps.leg(k)), prefix)

    def tensor2(self, envelope, prefix, total=None):
        k = self.order
        total = self.caps.element_total(k) if total is None else total
        return self.combination(tensor2_basis(envelope, total, self.caps.leg(k)), prefix)

    def require_zero(self, x):
        add_residual_rows(self.system, x.terms.values())

    def mark(self):
        return len(self.system.rows)

    def drop_rows_from(self, mark):
        del self.system.rows[mark:]
        del self.system.rhs[mark:]

    def try_solve(self):
        m, n = self.system.shape
        logger.debug("%s order %d: %d rows, %d unknowns", self.what, self.order, m, n)
        return lin_solve(self.system)

    def solve(self):
        solution = self.try_solve()
        if not solution.consistent:
            logger.warning("%s inconsistent at order %d", self.what, self.order)
            raise SolverCapError(f"{self.what}: no solution at order {self.order} under the degree caps",
                                 order=self.order, certificate=solution.to_dict(),
                                 hint=self.caps.hint(self.order))
        self.pinned = len(self.names) - solution.rank
        return solution.values


# ─────────────────────────────────────────────
# JSON FORMS
# ─────────────────────────────────────────────
def u_to_json(envelope, x):
    """[[[leg labels], …], "p/q"] per term, sorted by key."""
    labels = envelope.labels
    return [[[[labels[i] for i in m] for m in key], format_scalar(c)] for key, c in x.sorted_items()]


def u_from_json(envelope, data):
    out = {}
    for key, c in data:
        accumulate(out, tuple(tuple(sorted(envelope.algebra.space.index(l) for l in leg)) for leg in key),
                   scalar(c))
    return SparseVector(out, clean=False)


def series_to_json(envelope, x):
    return [u_to_json(envelope, c) for c in x.coeffs]


def series_from_json(envelope, data, order):
    return HSeries([u_from_json(envelope, c) for c in data], order)
