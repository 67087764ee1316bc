"""
gammaq - Γ-Structures
Finite groups by multiplication table, actions on Lie (bi)algebras, the
Γ-Lie bialgebra conditions (a), (b), (c) and the quasitriangular construction.
"""
import logging
from itertools import permutations

from algebra.defects import DefectReport
from algebra.exact import Tensor, accumulate
from algebra.lie import (LieBialgebra, automorphism_defect, coboundary_cobracket,
                         mat_apply, mat_equal, mat_identity, mat_inverse, mat_mul,
                         mat_is_invertible)
from algebra.twists import twist_defect
from errors import AxiomError, InternalCheckError, NonInvertibleError, ShapeMismatchError

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# FINITE GROUPS
# ─────────────────────────────────────────────
class FiniteGroup:
    """Group given by labels and a multiplication table of indices."""

    def __init__(self, labels, table, identity=0):
        self.labels = tuple(labels)
        self.table = [tuple(row) for row in table]
        self.identity = identity
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise AxiomError("group element labels are not distinct")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ShapeMismatchError(f"multiplication table must be {n}x{n}")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise AxiomError("multiplication table is not closed")
        if not 0 <= identity < n:
            raise AxiomError("identity index out of range")
        if any(self.table[identity][a] != a or self.table[a][identity] != a for a in range(n)):
            raise AxiomError(f"{self.labels[identity]} is not a two-sided identity")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise AxiomError("multiplication is not associative",
                                         triple=[self.labels[a], self.labels[b], self.labels[c]])
        self._inverse = []
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == identity]
            if len(inv) != 1 or self.table[inv[0]][a] != identity:
                raise AxiomError(f"{self.labels[a]} has no inverse")
            self._inverse.append(inv[0])

    @property
    def order(self):
        return len(self.labels)

    def elements(self):
        return range(self.order)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inverse[a]

    def index(self, label):
        return self.labels.index(label)

    @classmethod
    def trivial(cls):
        return cls(("e",), [[0]])

    @classmethod
    def cyclic(cls, n):
        labels = ["e"] + [f"g{k}" if n > 2 else "s" for k in range(1, n)]
        return cls(labels, [[(a + b) % n for b in range(n)] for a in range(n)])

    @classmethod
    def symmetric3(cls):
        perms = list(permutations(range(3)))
        names = {(0, 1, 2): "e", (1, 0, 2): "(12)", (0, 2, 1): "(23)", (2, 1, 0): "(13)",
                 (1, 2, 0): "(123)", (2, 0, 1): "(132)"}

        def compose(p, q):
            return tuple(p[q[i]] for i in range(3))

        table = [[perms.index(compose(p, q)) for q in perms] for p in perms]
        return cls([names[p] for p in perms], table)

    def sign(self, a):
        """Sign of x ↦ a·x as a permutation of the elements; the parity character on S3."""
        seen, cycles = set(), 0
        for start in self.elements():
            if start in seen:
                continue
            cycles += 1
            x = start
            while x not in seen:
                seen.add(x)
                x = self.mul(a, x)
        return -1 if (self.order - cycles) % 2 else 1

    def __repr__(self):
        return f"<FiniteGroup order={self.order} {self.labels}>"


# ─────────────────────────────────────────────
# ACTIONS
# ─────────────────────────────────────────────
class GroupAction:
    """γ ↦ θ_γ as column matrices over the algebra's basis."""

    def __init__(self, group, matrices):
        if len(matrices) != group.order:
            raise ShapeMismatchError("one action matrix per group element is required")
        self.group = group
        self.matrices = [list(m) for m in matrices]
        dims = {len(m) for m in self.matrices}
        if len(dims) != 1:
            raise ShapeMismatchError("action matrices have different sizes")
        for g, m in enumerate(self.matrices):
            if not mat_is_invertible(m):
                raise NonInvertibleError(f"θ_{group.labels[g]} is singular")
        self._inverses = [mat_inverse(m) for m in self.matrices]

    @classmethod
    def trivial(cls, group, dim):
        return cls(group, [mat_identity(dim) for _ in group.elements()])

    def theta(self, g):
        return self.matrices[g]

    def theta_inv(self, g):
        return self._inverses[g]

    def wedge2(self, g, tensor):
        return tensor.apply_matrix(self.matrices[g])

    def __repr__(self):
        return f"<GroupAction of {self.group.labels}>"


def check_action(action, algebra):
    """Homomorphism defects θ_γθ_γ' − θ_γγ' and automorphism defects on basis pairs."""
    if any(len(m) != algebra.dim for m in action.matrices):
        raise ShapeMismatchError("action matrices do not match the algebra dimension")
    group = action.group
    report = DefectReport("action")
    report.section("homomorphism")
    report.section("automorphism")
    for g in group.elements():
        for h in group.elements():
            lhs = mat_mul(action.theta(g), action.theta(h))
            rhs = action.theta(group.mul(g, h))
            if not mat_equal(lhs, rhs):
                report.record("homomorphism", (group.labels[g], group.labels[h]), {"mismatch": True})
    labels = algebra.space.labels
    for g in group.elements():
        for i in range(algebra.dim):
            for j in range(i + 1, algebra.dim):
                defect = automorphism_defect(algebra, action.theta(g), i, j)
                report.record("automorphism", (group.labels[g], labels[i], labels[j]), defect)
    return report


# ─────────────────────────────────────────────
# Γ-LIE BIALGEBRAS
# ─────────────────────────────────────────────
class GammaLieBialgebra:
    """(𝔞, μ, δ, θ, f) with one twist f_γ ∈ ∧²𝔞 per group element."""

    def __init__(self, bialgebra, action, twists, check=True):
        if len(twists) != action.group.order:
            raise ShapeMismatchError("one twist per group element is required")
        self.bialgebra = bialgebra
        self.action = action
        self.twists = list(twists)
        if check:
            report = gamma_defects(self)
            if not report.passed:
                raise AxiomError("Γ-Lie bialgebra conditions fail", failures=[str(f) for f in report.failures()])

    @property
    def group(self):
        return self.action.group

    @property
    def algebra(self):
        return self.bialgebra.algebra

    def __repr__(self):
        return f"<GammaLieBialgebra {self.algebra.space.labels} ⋊ {self.group.labels}>"


def transported_cobracket(bialgebra, matrix, matrix_inv):
    """x ↦ ∧²θ(δ(θ^{-1}x))."""
    return [bialgebra.delta(matrix_inv[i]).apply_matrix(matrix) for i in range(bialgebra.dim)]


def gamma_defects(gamma):
    b, action, group = gamma.bialgebra, gamma.action, gamma.group
    labels = b.space.labels
    report = DefectReport("gamma")
    for name in ("a", "b", "c", "f_e"):
        report.section(name)
    for g in group.elements():
        f = gamma.twists[g]
        transported = transported_cobracket(b, action.theta(g), action.theta_inv(g))
        shift = coboundary_cobracket(b.algebra, f)
        for i in range(b.dim):
            defect = transported[i] - b.cobracket[i] - shift[i]
            report.record("a", (group.labels[g], labels[i]), defect)
        if not f.is_antisymmetric():
            report.record("c", (group.labels[g], "antisymmetry"), f)
        else:
            report.record("c", (group.labels[g],), twist_defect(b, f))
    for g in group.elements():
        for h in group.elements():
            defect = gamma.twists[group.mul(g, h)] - gamma.twists[g] - action.wedge2(g, gamma.twists[h])
            report.record("b", (group.labels[g], group.labels[h]), defect)
    report.record("f_e", (group.labels[group.identity],), gamma.twists[group.identity])
    return report


def gamma_inverse_identity(gamma):
    """f_{γ^{-1}} + ∧²θ_{γ^{-1}}(f_γ) for every γ, and f_e."""
    group, action = gamma.group, gamma.action
    report = DefectReport("gamma_inverse")
    report.section("inverse")
    for g in group.elements():
        gi = group.inv(g)
        defect = gamma.twists[gi] + action.wedge2(gi, gamma.twists[g])
        report.record("inverse", (group.labels[g],), defect)
    report.record("f_e", (group.labels[group.identity],), gamma.twists[group.identity])
    return report


def quasitriangular_gamma(qt, action):
    """δ = coboundary of r and f_γ = θ_γ^{⊗2}(r) − r."""
    algebra = qt.algebra
    failing = [name for name, t in qt.defects().items() if t]
    if failing:
        raise AxiomError(f"quasitriangular data fails: {', '.join(failing)}", failing=failing)
    if not check_action(action, algebra).passed:
        raise AxiomError("the group does not act by Lie algebra automorphisms")
    t = qt.t
    for g in action.group.elements():
        if not action.wedge2(g, t) == t:
            raise AxiomError(f"θ_{action.group.labels[g]} does not preserve t")
    bialgebra = LieBialgebra(algebra, coboundary_cobracket(algebra, qt.r), check=False)
    twists = [action.wedge2(g, qt.r) - qt.r for g in action.group.elements()]
    gamma = GammaLieBialgebra(bialgebra, action, twists, check=False)
    report = gamma_defects(gamma)
    if not report.passed:
        raise InternalCheckError("quasitriangular Γ-Lie bialgebra fails its conditions",
                                 failures=[str(f) for f in report.failures()])
    logger.info("quasitriangular Γ-Lie bialgebra built over %s", action.group.labels)
    return gamma


# ─────────────────────────────────────────────
# MORPHISMS
# ─────────────────────────────────────────────
def _push(tensor, matrix, space):
    out = {}
    for key, c in tensor.terms.items():
        images = [matrix[i] for i in key]
        partial = {(): c}
        for col in images:
            nxt = {}
            for prefix, v in partial.items():
                for i, a in col.items():
                    accumulate(nxt, prefix + (i,), v * a)
            partial = nxt
        for k, v in partial.items():
            accumulate(out, k, v)
    return Tensor((space,) * tensor.arity, out, clean=False)


def gamma_morphism_check(src, dst, matrix):
    """Lie bialgebra morphism, equivariance and twist-family defects of i: 𝔞 → 𝔞′."""
    if src.group.labels != dst.group.labels or src.group.table != dst.group.table:
        raise ShapeMismatchError("morphism check needs the same group on both sides")
    if len(matrix) != src.algebra.dim or any(not 0 <= i < dst.algebra.dim for col in matrix for i in col):
        raise ShapeMismatchError("morphism matrix does not fit the dimensions")
    a, b = src.algebra, dst.algebra
    labels = a.space.labels
    report = DefectReport("gamma_morphism")
    for name in ("bracket", "cobracket", "equivariance", "twists"):
        report.section(name)
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            lhs = mat_apply(matrix, a.c[i][j])
            diff = dict(lhs)
            for k, v in b.bracket(matrix[i], matrix[j]).items():
                accumulate(diff, k, -v)
            report.record("bracket", (labels[i], labels[j]), diff)
    for i in range(a.dim):
        defect = dst.bialgebra.delta(matrix[i]) - _push(src.bialgebra.cobracket[i], matrix, b.space)
        report.record("cobracket", (labels[i],), defect)
    for g in src.group.elements():
        lhs = mat_mul(matrix, src.action.theta(g))
        rhs = mat_mul(dst.action.theta(g), matrix)
        if not mat_equal(lhs, rhs):
            report.record("equivariance", (src.group.labels[g],), {"mismatch": True})
        defect = _push(src.twists[g], matrix, b.space) - dst.twists[g]
        report.record("twists", (src.group.labels[g],), defect)
    return report
