"""
gammaq - Classical Twists
Twist defects, twisting, composition of twists and the double isomorphism
D(𝔞) ≅ D(𝔞_f).
"""
import logging
from dataclasses import dataclass, field

from sympy import Integer, Poly, Rational, Symbol, expand, linsolve, solve, sympify

from algebra.exact import ONE, Tensor, cyclic_sum3, format_scalar, scalar
from algebra.lie import (LieBialgebra, apply_cobracket_slot, cobracket_equal,
                         coboundary_cobracket, drinfeld_double, is_homomorphism,
                         mat_is_invertible, tensor_commutator_13_23)
from errors import AxiomError, InternalCheckError

logger = logging.getLogger(__name__)


def _require_antisymmetric(f):
    if f.arity != 2 or not f.is_antisymmetric():
        raise AxiomError("a twist must be an antisymmetric 2-tensor")


def twist_defect(bialgebra, f):
    """cyclic_sum3((δ⊗id)(f) + [f^{13}, f^{23}])."""
    _require_antisymmetric(f)
    value = apply_cobracket_slot(bialgebra.cobracket, f, 0)
    value = value + tensor_commutator_13_23(bialgebra.algebra, f, f)
    return cyclic_sum3(value)


def twist(bialgebra, f):
    """𝔞_f = (𝔞, μ, δ + ad(f)) with ad(f)(x) = [f, x⊗1 + 1⊗x]."""
    defect = twist_defect(bialgebra, f)
    if defect:
        raise AxiomError("not a twist: the twist defect is nonzero", defect_terms=len(defect))
    shift = coboundary_cobracket(bialgebra.algebra, f)
    cobracket = [d + s for d, s in zip(bialgebra.cobracket, shift)]
    return LieBialgebra(bialgebra.algebra, cobracket, check=False)


# ─────────────────────────────────────────────
# COMPOSITION OF TWISTS
# ─────────────────────────────────────────────
@dataclass
class TwistPair:
    base: LieBialgebra
    f: Tensor
    f_prime: Tensor
    twisted: LieBialgebra
    certificate: dict = field(default_factory=dict)

    @property
    def total(self):
        return self.f + self.f_prime

    def __repr__(self):
        return f"<TwistPair f={self.f} f'={self.f_prime}>"


def compose_twists(bialgebra, f, f_prime):
    if twist_defect(bialgebra, f):
        raise AxiomError("f is not a twist of the base bialgebra")
    twisted = twist(bialgebra, f)
    if twist_defect(twisted, f_prime):
        raise AxiomError("f' is not a twist of the twisted bialgebra 𝔞_f")
    total = f + f_prime
    if twist_defect(bialgebra, total):
        raise InternalCheckError("f + f' fails the twist identity although f' twists 𝔞_f")
    stacked = twist(twisted, f_prime)
    direct = twist(bialgebra, total)
    if not cobracket_equal(stacked.cobracket, direct.cobracket):
        raise InternalCheckError("(𝔞_f)_{f'} differs from 𝔞_{f+f'}")
    certificate = {"f_prime_twist_defect": 0, "sum_twist_defect": 0, "twisting_associative": True}
    logger.debug("composed twists on %s", bialgebra)
    return TwistPair(bialgebra, f, f_prime, twisted, certificate)


# ─────────────────────────────────────────────
# DOUBLE ISOMORPHISM
# ─────────────────────────────────────────────
def _rational(c):
    return Rational(format_scalar(c))


def _symbolic_bracket(algebra, u, v):
    out = {}
    for a, ua in u.items():
        for b, vb in v.items():
            for k, c in algebra.c[a][b].items():
                out[k] = out.get(k, 0) + _rational(c) * ua * vb
    return out


def _symbolic_image(columns, u):
    out = {}
    for i, ui in u.items():
        for k, v in columns[i].items():
            out[k] = out.get(k, 0) + _rational(ui) * v
    return out


def pick_free_parameters(general, quadratic, unknowns):
    """Values for the parameters left free by the linear rows: zero when the
    quadratic rows allow it, else the first rational solution."""
    free = sorted(set().union(*(expr.free_symbols for expr in general)) & set(unknowns), key=str)
    rest = [r for r in (expand(q.subs(dict(zip(unknowns, general)))) for q in quadratic) if r != 0]
    zero = {s: 0 for s in free}
    if all(r.subs(zero) == 0 for r in rest):
        return zero
    for candidate in sorted(solve(rest, free, dict=True), key=str):
        chosen = {s: expand(sympify(candidate.get(s, 0)).subs(zero)) for s in free}
        if all(v.is_rational for v in chosen.values()) and all(expand(r.subs(chosen)) == 0 for r in rest):
            return chosen
    return None


def double_twist_iso(bialgebra, f):
    """M: D(𝔞) → D(𝔞_f), identity on 𝔞 and ξ ↦ ξ + Φ(ξ) with Φ: 𝔞* → 𝔞.

    Φ(ξ^j) = Σ_b (f^{bj} + ψ^{bj}) x_b with ψ solved from the whole bracket
    table of D(𝔞_f): the (x, ξ) rows are linear in ψ and the (ξ, ξ) rows
    quadratic, so the linear rows are solved first and the quadratic ones
    then fix the parameters they leave free.
    """
    twisted = twist(bialgebra, f)
    algebra = bialgebra.algebra
    n = algebra.dim
    source = drinfeld_double(bialgebra).algebra
    target = drinfeld_double(twisted).algebra
    labels = algebra.space.labels

    unknowns = [Symbol(f"psi[{labels[b]},{labels[j]}*]") for j in range(n) for b in range(n)]
    columns = [{i: Integer(1)} for i in range(n)]
    for j in range(n):
        column = {n + j: Integer(1)}
        for b in range(n):
            column[b] = _rational(f.get((b, j))) + unknowns[j * n + b]
        columns.append(column)

    linear, quadratic = [], []
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            lhs = _symbolic_image(columns, source.c[a][b])
            rhs = _symbolic_bracket(target, columns[a], columns[b])
            for k in set(lhs) | set(rhs):
                row = expand(lhs.get(k, 0) - rhs.get(k, 0))
                if row == 0:
                    continue
                (linear if Poly(row, *unknowns).total_degree() <= 1 else quadratic).append(row)

    general = list(unknowns)
    if linear:
        solutions = list(linsolve(linear, unknowns))
        if not solutions:
            raise InternalCheckError("double isomorphism: the (x, ξ) rows are inconsistent")
        general = list(solutions[0])
    parameters = pick_free_parameters(general, quadratic, unknowns)
    if parameters is None:
        raise InternalCheckError("double isomorphism: no rational solution of the (ξ, ξ) rows")

    matrix = [{i: ONE} for i in range(n)]
    for j in range(n):
        col = {n + j: ONE}
        for b in range(n):
            value = scalar(str(expand(columns[n + j][b].subs(dict(zip(unknowns, general))).subs(parameters))))
            if value:
                col[b] = value
        matrix.append(col)
    if not mat_is_invertible(matrix) or not is_homomorphism(source, target, matrix):
        raise InternalCheckError("solved double map does not intertwine the brackets")
    return matrix
