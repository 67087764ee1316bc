"""
gammaq - Enveloping Algebra
PBW normal forms in U(𝔞) and its tensor powers, the smash product U(𝔞)⋊Γ,
and the co-Poisson cobracket δ_A extended as a derivation.

Elements of U^{⊗k} are SparseVectors keyed by k-tuples of PBW monomials
(nondecreasing index tuples). Smash elements are keyed by k-tuples of
(monomial, group element) pairs.
"""
import logging
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product

from algebra.defects import DefectReport
from algebra.exact import ONE, SparseVector, accumulate
from errors import ArityError, ShapeMismatchError, WindowOverflowError

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# TRUNCATION WINDOW
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class TruncationWindow:
    """Degree cap D for every product, and the input degree D_in a check runs at."""
    degree_cap: int
    check_degree: int = 0

    def __post_init__(self):
        if self.degree_cap < 0 or self.check_degree < 0:
            raise ValueError("window degrees must be non-negative")

    @classmethod
    def for_check(cls, check_degree):
        """Smallest window that keeps a co-Jacobi check of degree-D_in inputs exact."""
        return cls(2 * check_degree + 2, check_degree)

    def require(self, degree, what="product"):
        if degree > self.degree_cap:
            raise WindowOverflowError(f"{what} reaches degree {degree} above the window {self.degree_cap}",
                                      degree=degree, cap=self.degree_cap)


UNBOUNDED = TruncationWindow(10 ** 6)


# ─────────────────────────────────────────────
# U(𝔞) AND ITS TENSOR POWERS
# ─────────────────────────────────────────────
class Envelope:
    """PBW-truncated U(𝔞) with basis order = input basis order."""

    def __init__(self, algebra, window=UNBOUNDED):
        self.algebra = algebra
        self.window = window
        self._nf_cache = {}

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def labels(self):
        return self.algebra.space.labels

    def monomials(self, max_degree, min_degree=0):
        out = []
        for d in range(min_degree, max_degree + 1):
            out.extend(self._monomials_of_degree(d))
        return out

    def _monomials_of_degree(self, d):
        if d == 0:
            return [()]
        return list(combinations_with_replacement(range(self.dim), d))

    # ── normal forms ──
    def normal_form(self, word):
        """Straighten a word of generator indices into PBW monomials."""
        word = tuple(word)
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        for p in range(len(word) - 1):
            a, b = word[p], word[p + 1]
            if a > b:
                out = dict(self.normal_form(word[:p] + (b, a) + word[p + 2:]))
                for k, c in self.algebra.c[a][b].items():
                    for m, v in self.normal_form(word[:p] + (k,) + word[p + 2:]).items():
                        accumulate(out, m, c * v)
                break
        else:
            out = {word: ONE}
        self._nf_cache[word] = out
        return out

    def monomial_product(self, m1, m2):
        self.window.require(len(m1) + len(m2))
        return self.normal_form(m1 + m2)

    # ── constructors ──
    def one(self, arity=1):
        return SparseVector({((),) * arity: ONE}, clean=False)

    def zero(self):
        return SparseVector()

    def gen(self, i, coeff=ONE):
        return SparseVector({((i,),): coeff})

    def vector(self, coords):
        """Coordinate dict over 𝔞 as an element of U."""
        return SparseVector({((i,),): c for i, c in coords.items() if c})

    def from_word(self, word):
        return SparseVector({(m,): c for m, c in self.normal_form(word).items()}, clean=False)

    def from_tensor(self, tensor):
        """Tensor over 𝔞 (index tuples) to U^{⊗k} with degree-one legs."""
        return SparseVector({tuple((i,) for i in key): c for key, c in tensor.terms.items()})

    def degree_one_part(self, x):
        """Inverse of from_tensor on terms whose legs all have degree one."""
        out = {}
        for key, c in x.terms.items():
            if all(len(m) == 1 for m in key):
                out[tuple(m[0] for m in key)] = c
        return out

    # ── products ──
    def u_mult(self, a, b):
        """Legwise product in U^{⊗k}."""
        out = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                if len(ka) != len(kb):
                    raise ArityError(f"cannot multiply arity {len(ka)} by arity {len(kb)}")
                c = ca * cb
                if not c:
                    continue
                legs = [self.monomial_product(m1, m2) for m1, m2 in zip(ka, kb)]
                for combo in product(*(leg.items() for leg in legs)):
                    coeff = c
                    for _, v in combo:
                        coeff = coeff * v
                    accumulate(out, tuple(m for m, _ in combo), coeff)
        return SparseVector(out, clean=False)

    def outer(self, a, b):
        out = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                accumulate(out, ka + kb, ca * cb)
        return SparseVector(out, clean=False)

    def permute(self, x, sigma):
        """Move leg k to leg sigma[k]."""
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise ArityError(f"{sigma} is not a permutation")
        out = {}
        for key, c in x.terms.items():
            if len(key) != len(sigma):
                raise ArityError(f"permutation of {len(sigma)} legs on arity {len(key)}")
            new = [None] * len(key)
            for src, dst in enumerate(sigma):
                new[dst] = key[src]
            out[tuple(new)] = c
        return SparseVector(out, clean=False)

    def alt2(self, x):
        return x - self.permute(x, (1, 0))

    def inject(self, x, legs, arity):
        """Place an element of U^{⊗len(legs)} into the given legs of U^{⊗arity}."""
        out = {}
        for key, c in x.terms.items():
            if len(key) != len(legs):
                raise ArityError(f"element of arity {len(key)} injected into {len(legs)} legs")
            new = [()] * arity
            for m, leg in zip(key, legs):
                new[leg] = m
            out[tuple(new)] = c
        return SparseVector(out, clean=False)

    # ── Hopf structure of the undeformed envelope ──
    def coproduct_monomial(self, m):
        """Δ_0 of a PBW monomial: sum over position subsets."""
        out = {}
        k = len(m)
        for r in range(k + 1):
            for chosen in combinations(range(k), r):
                left = tuple(m[p] for p in chosen)
                right = tuple(m[p] for p in range(k) if p not in chosen)
                accumulate(out, (left, right), ONE)
        return out

    def delta0(self, x, leg=0):
        """Apply Δ_0 on one leg; that leg becomes two consecutive legs."""
        out = {}
        for key, c in x.terms.items():
            for (m1, m2), v in self.coproduct_monomial(key[leg]).items():
                accumulate(out, key[:leg] + (m1, m2) + key[leg + 1:], c * v)
        return SparseVector(out, clean=False)

    def counit(self, x, leg=0):
        """Apply ε on one leg, dropping it."""
        out = {}
        for key, c in x.terms.items():
            if key[leg] == ():
                accumulate(out, key[:leg] + key[leg + 1:], c)
        return SparseVector(out, clean=False)

    @staticmethod
    def arity_of(x):
        for key in x.terms:
            return len(key)
        return 0

    def __repr__(self):
        return f"<Envelope U({'|'.join(self.labels)}) D={self.window.degree_cap}>"


# ─────────────────────────────────────────────
# ALGEBRA MAPS
# ─────────────────────────────────────────────
class AlgebraMap:
    """Multiplicative extension U → U^{⊗arity} of images of the generators."""

    def __init__(self, envelope, images, arity=1):
        if len(images) != envelope.dim:
            raise ShapeMismatchError("one image per generator is required")
        self.envelope = envelope
        self.images = list(images)
        self.arity = arity
        self._cache = {(): envelope.one(arity)}

    @classmethod
    def linear(cls, envelope, matrix):
        """Extension of a linear map of 𝔞 given as columns."""
        return cls(envelope, [envelope.vector(col) for col in matrix])

    def monomial(self, m):
        cached = self._cache.get(m)
        if cached is None:
            cached = self.envelope.u_mult(self.monomial(m[:-1]), self.images[m[-1]])
            self._cache[m] = cached
        return cached

    def __call__(self, x):
        return self.on_leg(x, 0)

    def on_leg(self, x, leg):
        env = self.envelope
        out = SparseVector()
        for key, c in x.terms.items():
            image = self.monomial(key[leg])
            prefix = SparseVector({key[:leg]: c}, clean=False)
            suffix = SparseVector({key[leg + 1:]: ONE}, clean=False)
            out = out + env.outer(env.outer(prefix, image), suffix)
        return out

    def on_all_legs(self, x):
        for leg in reversed(range(Envelope.arity_of(x))):
            x = self.on_leg(x, leg)
        return x


# ─────────────────────────────────────────────
# SMASH PRODUCT U(𝔞)⋊Γ
# ─────────────────────────────────────────────
def tag(x, g):
    """Tag every leg of a U^{⊗k} element with the group element g."""
    return x.map_keys(lambda key: tuple((m, g) for m in key))


def untag(x):
    """Split a smash tensor by its grading: {(g_1,…,g_k): U^{⊗k} element}."""
    out = {}
    for key, c in x.terms.items():
        grades = tuple(g for _, g in key)
        accumulate(out.setdefault(grades, {}), tuple(m for m, _ in key), c)
    return {g: SparseVector(t, clean=False) for g, t in out.items()}


class SmashAlgebra:
    """U(𝔞)⋊Γ with [m|γ][m′|γ′] = [m·θ_γ(m′) | γγ′]."""

    def __init__(self, envelope, action):
        if any(len(mat) != envelope.dim for mat in action.matrices):
            raise ShapeMismatchError("action does not match the envelope dimension")
        self.envelope = envelope
        self.action = action
        self.group = action.group
        self.thetas = [AlgebraMap.linear(envelope, action.theta(g)) for g in self.group.elements()]

    @property
    def identity(self):
        return self.group.identity

    def element(self, m, g, coeff=ONE):
        return SparseVector({((tuple(m), g),): coeff})

    def unit(self, arity=1):
        return SparseVector({(((), self.identity),) * arity: ONE}, clean=False)

    def basis(self, max_degree):
        return [(m, g) for g in self.group.elements() for m in self.envelope.monomials(max_degree)]

    def pair_product(self, p1, p2):
        (m1, g1), (m2, g2) = p1, p2
        env = self.envelope
        moved = self.thetas[g1].monomial(m2)
        out = {}
        gg = self.group.mul(g1, g2)
        for (m,), c in moved.terms.items():
            for mm, v in env.monomial_product(m1, m).items():
                accumulate(out, (mm, gg), c * v)
        return out

    def smash_mult(self, a, b):
        """Legwise product in (U(𝔞)⋊Γ)^{⊗k}."""
        out = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                if len(ka) != len(kb):
                    raise ArityError(f"cannot multiply arity {len(ka)} by arity {len(kb)}")
                c = ca * cb
                legs = [self.pair_product(p1, p2) for p1, p2 in zip(ka, kb)]
                for combo in product(*(leg.items() for leg in legs)):
                    coeff = c
                    for _, v in combo:
                        coeff = coeff * v
                    accumulate(out, tuple(p for p, _ in combo), coeff)
        return SparseVector(out, clean=False)

    def smash_coproduct(self, x, leg=0):
        """Δ([m|γ]) = Σ [m_(1)|γ]⊗[m_(2)|γ] on one leg."""
        out = {}
        for key, c in x.terms.items():
            m, g = key[leg]
            for (m1, m2), v in self.envelope.coproduct_monomial(m).items():
                accumulate(out, key[:leg] + ((m1, g), (m2, g)) + key[leg + 1:], c * v)
        return SparseVector(out, clean=False)

    def counit(self, x, leg=0):
        """ε([m|γ]) = ε(m) for every γ."""
        out = {}
        for key, c in x.terms.items():
            if key[leg][0] == ():
                accumulate(out, key[:leg] + key[leg + 1:], c)
        return SparseVector(out, clean=False)

    def permute(self, x, sigma):
        return self.envelope.permute(x, sigma)

    def grading_defect(self, x, grades):
        """Part of x whose legs are not graded as expected."""
        return SparseVector({k: c for k, c in x.terms.items()
                             if tuple(g for _, g in k) != tuple(grades)}, clean=False)

    def __repr__(self):
        return f"<SmashAlgebra {self.envelope} ⋊ {self.group.labels}>"


# ─────────────────────────────────────────────
# CO-POISSON STRUCTURE
# ─────────────────────────────────────────────
class CoPoissonStructure:
    """δ_A on generators, extended by δ_A(ab) = δ_A(a)Δ(b) + Δ(a)δ_A(b)."""

    def __init__(self, smash, gamma):
        self.smash = smash
        self.gamma = gamma
        env = smash.envelope
        e = smash.identity
        self.generators = [tag(env.from_tensor(d), e) for d in gamma.bialgebra.cobracket]
        self.grouplikes = [-tag(env.from_tensor(f), g) for g, f in enumerate(gamma.twists)]
        self._cache = {}

    def _factors(self, m, g):
        e = self.smash.identity
        return [(((i,), e), self.generators[i]) for i in m] + [(((), g), self.grouplikes[g])]

    def delta_factors(self, factors):
        """δ_A of a product of factors, each given with its δ_A value."""
        smash = self.smash
        prod = smash.unit()
        d_prod = SparseVector()
        for pair, d_factor in factors:
            factor = SparseVector({(pair,): ONE}, clean=False)
            d_prod = (smash.smash_mult(d_prod, smash.smash_coproduct(factor))
                      + smash.smash_mult(smash.smash_coproduct(prod), d_factor))
            prod = smash.smash_mult(prod, factor)
        return prod, d_prod

    def delta_basis(self, m, g):
        key = (tuple(m), g)
        cached = self._cache.get(key)
        if cached is None:
            _, cached = self.delta_factors(self._factors(m, g))
            self._cache[key] = cached
        return cached

    def __call__(self, x, leg=0):
        out = SparseVector()
        for key, c in x.terms.items():
            m, g = key[leg]
            value = self.delta_basis(m, g)
            prefix = SparseVector({key[:leg]: c}, clean=False)
            suffix = SparseVector({key[leg + 1:]: ONE}, clean=False)
            env = self.smash.envelope
            out = out + env.outer(env.outer(prefix, value), suffix)
        return out


def copoisson_delta(gamma, window=UNBOUNDED, smash=None):
    """Build δ_A for a Γ-Lie bialgebra, optionally on an existing smash algebra."""
    if smash is None:
        smash = SmashAlgebra(Envelope(gamma.algebra, window), gamma.action)
    return CoPoissonStructure(smash, gamma)


def _words(dim, degree):
    return product(range(dim), repeat=degree)


def copoisson_axiom_defects(gamma, window):
    """Derivation, coderivation, co-Jacobi, antisymmetry and grading defects of δ_A.

    Inputs are the smash monomials [m|γ] with deg m ≤ window.check_degree; the
    window's degree cap must be at least 2·D_in + 2.
    """
    required = 2 * window.check_degree + 2
    if window.degree_cap < required:
        raise WindowOverflowError(f"co-Poisson checks at D_in = {window.check_degree} need D ≥ {required}",
                                  degree=required, cap=window.degree_cap)
    smash = SmashAlgebra(Envelope(gamma.algebra, window), gamma.action)
    delta = CoPoissonStructure(smash, gamma)
    env, group = smash.envelope, smash.group
    e = smash.identity
    report = DefectReport("copoisson")
    for name in ("derivation", "coderivation", "cojacobi", "antisymmetry", "grading"):
        report.section(name)

    def label(m, g):
        word = "".join(env.labels[i] for i in m) or "1"
        return f"[{word}|{group.labels[g]}]"

    for m, g in smash.basis(window.check_degree):
        x = smash.element(m, g)
        d = delta(x)
        report.record("antisymmetry", label(m, g), d + smash.permute(d, (1, 0)))
        report.record("grading", label(m, g), smash.grading_defect(d, (g, g)))
        cop = smash.smash_coproduct(x)
        lhs = smash.smash_coproduct(d, 0)
        rhs = delta(cop, 1) + smash.permute(delta(cop, 0), (0, 2, 1))
        report.record("coderivation", label(m, g), lhs - rhs)
        report.record("cojacobi", label(m, g), _cyclic3(smash, delta(d, 0)))

    # every word order, with the group-like first or last, must give the same δ_A
    for degree in range(1, window.check_degree + 1):
        for word in _words(env.dim, degree):
            for g in group.elements():
                gens = [(((i,), e), delta.generators[i]) for i in word]
                glike = (((), g), delta.grouplikes[g])
                for factors in (gens + [glike], [glike] + gens):
                    prod, via_word = delta.delta_factors(factors)
                    via_basis = delta(prod)
                    report.record("derivation", f"{'·'.join(env.labels[i] for i in word)} with {group.labels[g]}",
                                  via_word - via_basis)
    logger.info("co-Poisson checks at D_in=%d: %s", window.check_degree, "pass" if report.passed else "fail")
    return report


def _cyclic3(smash, t):
    return t + smash.permute(t, (1, 2, 0)) + smash.permute(t, (2, 0, 1))
