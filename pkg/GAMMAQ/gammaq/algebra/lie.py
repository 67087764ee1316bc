"""
gammaq - Lie Structures
Lie algebras, cobrackets and Lie bialgebras by structure constants, their
classical defects, coboundary cobrackets and the Drinfeld double.
"""
import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from algebra.exact import (ZERO, ONE, BasedSpace, Tensor, accumulate, cyclic_sum3,
                           scalar, tensor_permute)
from errors import AxiomError, ShapeMismatchError, NonInvertibleError

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# MATRICES (column convention: M[j] = {i: a_ij} is the image of x_j)
# ─────────────────────────────────────────────
def mat_identity(n):
    return [{j: ONE} for j in range(n)]


def mat_from_rows(rows):
    n = len(rows)
    cols = [{} for _ in range(n)]
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ShapeMismatchError(f"matrix row {i} has {len(row)} entries, expected {n}")
        for j, a in enumerate(row):
            a = scalar(a)
            if a:
                cols[j][i] = a
    return cols


def mat_apply(matrix, vec):
    out = {}
    for j, c in vec.items():
        for i, a in matrix[j].items():
            accumulate(out, i, c * a)
    return out


def mat_mul(a, b):
    """Composition a∘b."""
    return [mat_apply(a, col) for col in b]


def mat_equal(a, b):
    return len(a) == len(b) and all(
        {i: v for i, v in x.items() if v} == {i: v for i, v in y.items() if v} for x, y in zip(a, b))


def _to_domain(matrix):
    n = len(matrix)
    dod = {}
    for j, col in enumerate(matrix):
        for i, a in col.items():
            if a:
                dod.setdefault(i, {})[j] = a
    return DomainMatrix.from_dod(dod, (n, n), QQ)


def mat_inverse(matrix):
    dm = _to_domain(matrix)
    if dm.rank() < len(matrix):
        raise NonInvertibleError("singular matrix")
    inv = dm.inv().to_dod()
    n = len(matrix)
    cols = [{} for _ in range(n)]
    for i, row in inv.items():
        for j, a in row.items():
            if a:
                cols[j][i] = a
    return cols


def mat_is_invertible(matrix):
    return _to_domain(matrix).rank() == len(matrix)


# ─────────────────────────────────────────────
# LIE ALGEBRA
# ─────────────────────────────────────────────
class LieAlgebra:
    """(𝔞, μ) with c[i][j] = {k: c_ij^k}."""

    def __init__(self, space, bracket):
        self.space = space
        n = space.dim
        self.c = [[{} for _ in range(n)] for _ in range(n)]
        for (i, j), out in bracket.items():
            for k, v in out.items():
                v = scalar(v)
                if v:
                    self.c[i][j][k] = v
        for i in range(n):
            for j in range(n):
                back = {k: -v for k, v in self.c[j][i].items()}
                if self.c[i][j] != back:
                    raise AxiomError(f"bracket is not antisymmetric on ({space.labels[i]}, {space.labels[j]})",
                                     pair=[space.labels[i], space.labels[j]])

    @classmethod
    def from_upper(cls, space, entries):
        """Bracket given on pairs i<j only; antisymmetry fills the rest."""
        full = {}
        for (i, j), out in entries.items():
            if i >= j:
                raise ShapeMismatchError(f"bracket entry ({i}, {j}) must have i < j")
            out = {k: scalar(v) for k, v in out.items()}
            full[(i, j)] = out
            full[(j, i)] = {k: -v for k, v in out.items()}
        return cls(space, full)

    @property
    def dim(self):
        return self.space.dim

    def spaces(self, k):
        return (self.space,) * k

    def bracket(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.c[i][j].items():
                    accumulate(out, k, a * b * c)
        return out

    def ad_slot(self, i, tensor, slot):
        """ad_{x_i} acting on one slot of a tensor over 𝔞."""
        out = {}
        for key, coeff in tensor.terms.items():
            for k, c in self.c[i][key[slot]].items():
                accumulate(out, key[:slot] + (k,) + key[slot + 1:], coeff * c)
        return Tensor(tensor.spaces, out, clean=False)

    def ad(self, i, tensor):
        """ad^{(k)}_{x_i} = Σ_slots ad_{x_i} on that slot."""
        out = tensor.zero_like()
        for slot in range(tensor.arity):
            out = out + self.ad_slot(i, tensor, slot)
        return out

    def is_automorphism(self, matrix):
        return all(not automorphism_defect(self, matrix, i, j)
                   for i in range(self.dim) for j in range(self.dim))

    def __repr__(self):
        return f"<LieAlgebra dim={self.dim} {self.space.labels}>"


def automorphism_defect(algebra, matrix, i, j):
    """θ([x_i,x_j]) − [θx_i, θx_j] as a coordinate dict."""
    lhs = mat_apply(matrix, algebra.c[i][j])
    rhs = algebra.bracket(matrix[i], matrix[j])
    out = dict(lhs)
    for k, v in rhs.items():
        accumulate(out, k, -v)
    return out


# ─────────────────────────────────────────────
# COBRACKETS AND BIALGEBRAS
# ─────────────────────────────────────────────
def cobracket_from_entries(space, entries):
    """{i: {(j, k): d}} with j<k, read as δ(x_i) = Σ d·x_j∧x_k."""
    table = []
    for i in range(space.dim):
        out = {}
        for (j, k), d in entries.get(i, {}).items():
            if j >= k:
                raise ShapeMismatchError(f"cobracket entry ({j}, {k}) must have j < k")
            d = scalar(d)
            accumulate(out, (j, k), d)
            accumulate(out, (k, j), -d)
        table.append(Tensor((space, space), out, clean=False))
    return table


def zero_cobracket(space):
    return [Tensor((space, space)) for _ in range(space.dim)]


def cobracket_equal(a, b):
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def apply_cobracket_slot(cobracket, tensor, slot):
    """Apply δ on one slot, which becomes two consecutive slots."""
    space = tensor.spaces[slot]
    out = {}
    for key, c in tensor.terms.items():
        for (a, b), d in cobracket[key[slot]].terms.items():
            accumulate(out, key[:slot] + (a, b) + key[slot + 1:], c * d)
    spaces = tensor.spaces[:slot] + (space, space) + tensor.spaces[slot + 1:]
    return Tensor(spaces, out, clean=False)


class LieBialgebra:
    """(𝔞, μ, δ) with cobracket[i] = δ(x_i) ∈ ∧²𝔞 ⊂ 𝔞⊗𝔞."""

    def __init__(self, algebra, cobracket, check=True):
        self.algebra = algebra
        self.cobracket = list(cobracket)
        if len(self.cobracket) != algebra.dim:
            raise ShapeMismatchError("cobracket table size differs from the dimension")
        for i, d in enumerate(self.cobracket):
            if not d.is_antisymmetric() and d:
                raise AxiomError(f"cobracket of {algebra.space.labels[i]} is not antisymmetric")
        if check:
            report = bialgebra_defects(self)
            failing = [name for name, t in report.items() if t]
            if failing:
                raise AxiomError(f"Lie bialgebra axioms fail: {', '.join(failing)}", failing=failing)

    @property
    def space(self):
        return self.algebra.space

    @property
    def dim(self):
        return self.algebra.dim

    def delta(self, vec):
        out = Tensor(self.algebra.spaces(2))
        for i, c in vec.items():
            out = out + self.cobracket[i].scale(c)
        return out

    def key(self):
        """Hashable identity of the structure: bracket and cobracket tables."""
        bracket = tuple(tuple(sorted(self.algebra.c[i][j].items()))
                        for i in range(self.dim) for j in range(self.dim))
        cob = tuple(tuple(d.sorted_items()) for d in self.cobracket)
        return (self.space.labels, bracket, cob)

    def __repr__(self):
        return f"<LieBialgebra dim={self.dim} {self.space.labels}>"


# ─────────────────────────────────────────────
# DEFECTS
# ─────────────────────────────────────────────
def _table(spaces_in, space_out_count, space, rows):
    out = {}
    for key_in, tensor in rows.items():
        for key_out, c in tensor.terms.items():
            out[key_in + key_out] = c
    return Tensor(tuple(spaces_in) + (space,) * space_out_count, out, clean=False)


def jacobi_defect(algebra):
    """(i, j, k, l): coefficient of x_l in [[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]."""
    n, space = algebra.dim, algebra.space
    rows = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out = {}
                for a, b, z in ((i, j, k), (j, k, i), (k, i, j)):
                    for l, v in algebra.bracket(algebra.c[a][b], {z: ONE}).items():
                        accumulate(out, (l,), v)
                if out:
                    rows[(i, j, k)] = Tensor((space,), out, clean=False)
    return _table((space,) * 3, 1, space, rows)


def cojacobi_defect(cobracket):
    """(i, a, b, c): coefficient in cyclic_sum3((δ⊗id)δ(x_i))."""
    if not cobracket:
        raise ShapeMismatchError("empty cobracket table")
    space = cobracket[0].spaces[0]
    rows = {}
    for i, d in enumerate(cobracket):
        if d.spaces != (space, space):
            raise ShapeMismatchError(f"cobracket of index {i} has the wrong shape")
        value = cyclic_sum3(apply_cobracket_slot(cobracket, d, 0))
        if value:
            rows[(i,)] = value
    return _table((space,), 3, space, rows)


def cocycle_defect(algebra, cobracket):
    """(i, j, a, b): δ([x_i,x_j]) − ad²_{x_i}δ(x_j) + ad²_{x_j}δ(x_i)."""
    n, space = algebra.dim, algebra.space
    rows = {}
    for i in range(n):
        for j in range(n):
            value = Tensor((space, space))
            for k, c in algebra.c[i][j].items():
                value = value + cobracket[k].scale(c)
            value = value - algebra.ad(i, cobracket[j]) + algebra.ad(j, cobracket[i])
            if value:
                rows[(i, j)] = value
    return _table((space, space), 2, space, rows)


def bialgebra_defects(bialgebra):
    algebra = bialgebra.algebra
    return {
        "jacobi": jacobi_defect(algebra),
        "cojacobi": cojacobi_defect(bialgebra.cobracket),
        "cocycle": cocycle_defect(algebra, bialgebra.cobracket),
    }


def tensor_commutator_13_23(algebra, a, b):
    """[a^{13}, b^{23}] = Σ a1⊗b1⊗[a2,b2]."""
    space = algebra.space
    out = {}
    for (p, q), x in a.terms.items():
        for (s, t), y in b.terms.items():
            for k, c in algebra.c[q][t].items():
                accumulate(out, (p, s, k), x * y * c)
    return Tensor((space,) * 3, out, clean=False)


def cybe_defect(algebra, r):
    """[r^{12},r^{13}] + [r^{12},r^{23}] + [r^{13},r^{23}]."""
    space = algebra.space
    out = {}
    items = list(r.terms.items())
    for (a, b), x in items:
        for (c, d), y in items:
            xy = x * y
            for k, v in algebra.c[a][c].items():
                accumulate(out, (k, b, d), xy * v)
            for k, v in algebra.c[b][c].items():
                accumulate(out, (a, k, d), xy * v)
            for k, v in algebra.c[b][d].items():
                accumulate(out, (a, c, k), xy * v)
    return Tensor((space,) * 3, out, clean=False)


def invariance_defect(algebra, t):
    """(i, a, b): ad²_{x_i}(t)."""
    space = algebra.space
    rows = {}
    for i in range(algebra.dim):
        value = algebra.ad(i, t)
        if value:
            rows[(i,)] = value
    return _table((space,), 2, space, rows)


def coboundary_cobracket(algebra, r):
    """δ(x) = [r, x⊗1 + 1⊗x] = −ad²_x(r)."""
    return [-algebra.ad(i, r) for i in range(algebra.dim)]


# ─────────────────────────────────────────────
# QUASITRIANGULAR DATA
# ─────────────────────────────────────────────
class QuasitriangularData:
    def __init__(self, algebra, r, check=True):
        if r.spaces != algebra.spaces(2):
            raise ShapeMismatchError("r must live in 𝔞⊗𝔞")
        self.algebra = algebra
        self.r = r
        if check:
            failing = [name for name, t in self.defects().items() if t]
            if failing:
                raise AxiomError(f"quasitriangular data fails: {', '.join(failing)}", failing=failing)

    @property
    def t(self):
        return self.r + tensor_permute(self.r, (1, 0))

    def defects(self):
        return {
            "cybe": cybe_defect(self.algebra, self.r),
            "invariance": invariance_defect(self.algebra, self.t),
        }

    def bialgebra(self):
        return LieBialgebra(self.algebra, coboundary_cobracket(self.algebra, self.r))

    def __repr__(self):
        return f"<QuasitriangularData {self.algebra.space.labels} r={self.r}>"


# ─────────────────────────────────────────────
# DRINFELD DOUBLE
# ─────────────────────────────────────────────
def double_space(space):
    return BasedSpace(tuple(space.labels) + tuple(f"{l}*" for l in space.labels))


def drinfeld_double(bialgebra):
    """D(𝔞) = 𝔞 ⊕ 𝔞* with x_i ↦ i and ξ^i ↦ n + i.

    [ξ^j, ξ^k] = −Σ d_i^{jk} ξ^i,
    [x_i, ξ^j] = −Σ_k d_i^{jk} x_k − Σ_k c_{ik}^j ξ^k,
    canonical r = Σ x_i ⊗ ξ^i.
    """
    failing = [name for name, t in bialgebra_defects(bialgebra).items() if t]
    if failing:
        raise AxiomError(f"cannot double: {', '.join(failing)} fail", failing=failing)
    a = bialgebra.algebra
    n = a.dim
    space = double_space(a.space)
    bracket = {}

    def put(i, j, k, v):
        if v:
            accumulate(bracket.setdefault((i, j), {}), k, v)
            accumulate(bracket.setdefault((j, i), {}), k, -v)

    for i in range(n):
        for j in range(i + 1, n):
            for k, v in a.c[i][j].items():
                put(i, j, k, v)
    for i in range(n):
        for (j, k), d in bialgebra.cobracket[i].terms.items():
            if j < k:
                put(n + j, n + k, n + i, -d)
    for i in range(n):
        for j in range(n):
            for (p, k), d in bialgebra.cobracket[i].terms.items():
                if p == j:
                    put(i, n + j, k, -d)
            for k in range(n):
                v = a.c[i][k].get(j, ZERO)
                if v:
                    put(i, n + j, n + k, -v)
    double = LieAlgebra(space, bracket)
    r = Tensor((space, space), {(i, n + i): ONE for i in range(n)})
    logger.debug("double of %s built on %d generators", bialgebra, 2 * n)
    return QuasitriangularData(double, r, check=False)


def coopposite(bialgebra):
    return LieBialgebra(bialgebra.algebra, [-d for d in bialgebra.cobracket], check=False)


def dual_bialgebra(bialgebra):
    """(𝔞*, [ξ^j,ξ^k] = −Σ d_i^{jk} ξ^i, δ(ξ^i) = −Σ c_{jk}^i ξ^j⊗ξ^k)."""
    a = bialgebra.algebra
    n = a.dim
    space = BasedSpace(tuple(f"{l}*" for l in a.space.labels))
    bracket = {}
    for i in range(n):
        for (j, k), d in bialgebra.cobracket[i].terms.items():
            accumulate(bracket.setdefault((j, k), {}), i, -d)
    for j in range(n):
        for k in range(n):
            bracket.setdefault((j, k), {})
    dual = LieAlgebra(space, bracket)
    cobracket = []
    for i in range(n):
        out = {}
        for j in range(n):
            for k in range(n):
                v = a.c[j][k].get(i, ZERO)
                if v:
                    accumulate(out, (j, k), -v)
        cobracket.append(Tensor((space, space), out, clean=False))
    return LieBialgebra(dual, cobracket, check=False)


def is_homomorphism(src, dst, matrix):
    """M[x,y] = [Mx,My] for all basis pairs of src."""
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = mat_apply(matrix, src.c[i][j])
            rhs = dst.bracket(matrix[i], matrix[j])
            diff = dict(lhs)
            for k, v in rhs.items():
                accumulate(diff, k, -v)
            if diff:
                return False
    return True
