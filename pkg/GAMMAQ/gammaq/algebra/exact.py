"""
gammaq - Exact Core
Rational scalars, based spaces, sparse tensors, ℏ-truncated series and the
deterministic sparse linear solver everything else reduces to.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from errors import (ArityError, ShapeMismatchError, NonInvertibleError,
                    NonlinearTermError, InternalCheckError)

logger = logging.getLogger(__name__)

ZERO = QQ.zero
ONE = QQ.one


# ─────────────────────────────────────────────
# SCALARS
# ─────────────────────────────────────────────
def scalar(value):
    """Coerce int, Fraction, QQ element or a "p/q" string to a QQ element."""
    if isinstance(value, QQ.dtype):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            den = int(den)
            if den == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return QQ(int(num), den)
        return QQ(int(text))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_scalar(value):
    value = scalar(value)
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def accumulate(terms, key, coeff):
    """In-place terms[key] += coeff, dropping the key when it cancels."""
    if not coeff:
        return
    prev = terms.get(key)
    if prev is None:
        terms[key] = coeff
        return
    total = prev + coeff
    if total:
        terms[key] = total
    else:
        del terms[key]


# ─────────────────────────────────────────────
# LINEAR FORMS (affine expressions in solver unknowns)
# ─────────────────────────────────────────────
class LinearForm:
    """Σ c_j·u_j + const over solver unknowns u_j.

    Used as a coefficient inside sparse vectors so that residuals of the
    defining identities can be evaluated on a trial solution and read off as
    linear equations.
    """
    __slots__ = ("terms", "const")

    def __init__(self, terms=None, const=ZERO):
        self.terms = terms if terms is not None else {}
        self.const = const

    @classmethod
    def variable(cls, index):
        return cls({index: ONE})

    @property
    def is_constant(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms) or bool(self.const)

    def __repr__(self):
        return f"<LinearForm {self.terms} + {self.const}>"

    def __add__(self, other):
        if isinstance(other, LinearForm):
            terms = dict(self.terms)
            for j, c in other.terms.items():
                accumulate(terms, j, c)
            return LinearForm(terms, self.const + other.const)
        return LinearForm(dict(self.terms), self.const + other)

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({j: -c for j, c in self.terms.items()}, -self.const)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LinearForm):
            if not other.terms:
                other = other.const
            elif not self.terms:
                return other * self.const
            else:
                raise NonlinearTermError("product of two unknown-dependent coefficients")
        if not other:
            return LinearForm()
        return LinearForm({j: c * other for j, c in self.terms.items()}, self.const * other)

    __rmul__ = __mul__

    def evaluate(self, values):
        total = self.const
        for j, c in self.terms.items():
            total += c * values[j]
        return total


def evaluate_coeff(coeff, values):
    if isinstance(coeff, LinearForm):
        return coeff.evaluate(values)
    return coeff


# ─────────────────────────────────────────────
# BASED SPACES
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class BasedSpace:
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ShapeMismatchError("a based space needs at least one basis vector")
        if len(set(self.labels)) != len(self.labels):
            raise ShapeMismatchError(f"basis labels are not distinct: {self.labels}")

    @property
    def dim(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(label)

    def __repr__(self):
        return f"<BasedSpace {'|'.join(self.labels)}>"


# ─────────────────────────────────────────────
# SPARSE VECTORS
# ─────────────────────────────────────────────
class SparseVector:
    """Finite combination of hashable keys with exact coefficients.

    Keys are index tuples, PBW monomials, tuples of monomials or smash pairs
    depending on the carrier. Coefficients are QQ elements or LinearForms.
    Instances are treated as immutable.
    """
    __slots__ = ("terms",)

    def __init__(self, terms=None, clean=True):
        if terms is None:
            terms = {}
        elif clean:
            terms = {k: c for k, c in terms.items() if c}
        self.terms = terms

    def _like(self, terms):
        return type(self)(terms, clean=False)

    def zero_like(self):
        return self._like({})

    @classmethod
    def basis(cls, key, coeff=ONE):
        return cls({key: coeff}, clean=False)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self):
        return not self.terms

    def items(self):
        return self.terms.items()

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def get(self, key):
        return self.terms.get(key, ZERO)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            accumulate(out, k, c)
        return self._like(out)

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            accumulate(out, k, -c)
        return self._like(out)

    def scale(self, coeff):
        if not coeff:
            return self.zero_like()
        out = {}
        for k, c in self.terms.items():
            p = c * coeff
            if p:
                out[k] = p
        return self._like(out)

    __mul__ = scale

    def __rmul__(self, coeff):
        return self.scale(coeff)

    def map_keys(self, fn):
        out = {}
        for k, c in self.terms.items():
            accumulate(out, fn(k), c)
        return self._like(out)

    def evaluate(self, values):
        """Substitute solved unknowns into LinearForm coefficients."""
        out = {}
        for k, c in self.terms.items():
            v = evaluate_coeff(c, values)
            if v:
                out[k] = v
        return self._like(out)

    def has_unknowns(self):
        return any(isinstance(c, LinearForm) and c.terms for c in self.terms.values())

    def __repr__(self):
        body = " + ".join(f"{c}*{k}" for k, c in self.sorted_items()[:8])
        more = " + ..." if len(self.terms) > 8 else ""
        return f"<{type(self).__name__} {body or '0'}{more}>"


# ─────────────────────────────────────────────
# TENSORS OVER BASED SPACES
# ─────────────────────────────────────────────
class Tensor(SparseVector):
    """Element of V_1 ⊗ … ⊗ V_k stored as {index tuple: coefficient}."""
    __slots__ = ("spaces",)

    def __init__(self, spaces, terms=None, clean=True):
        super().__init__(terms, clean)
        self.spaces = tuple(spaces)
        dims = [s.dim for s in self.spaces]
        for key in self.terms:
            if len(key) != len(dims) or any(not 0 <= i < d for i, d in zip(key, dims)):
                raise ShapeMismatchError(f"index {key} outside slots of dimensions {dims}")

    def _like(self, terms):
        return Tensor(self.spaces, terms, clean=False)

    @property
    def arity(self):
        return len(self.spaces)

    def _check_same(self, other):
        if self.spaces != other.spaces:
            raise ShapeMismatchError(f"slot spaces differ: {self.spaces} vs {other.spaces}")

    def __add__(self, other):
        self._check_same(other)
        return super().__add__(other)

    def __sub__(self, other):
        self._check_same(other)
        return super().__sub__(other)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.spaces == other.spaces and (self - other).is_zero()

    __hash__ = None

    def outer(self, other):
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                accumulate(out, k1 + k2, c1 * c2)
        return Tensor(self.spaces + other.spaces, out, clean=False)

    def apply_matrix(self, matrix, slot=None):
        """Apply a linear map (dict of columns: j -> {i: a_ij}) on one slot or all."""
        slots = range(self.arity) if slot is None else (slot,)
        result = self
        for s in slots:
            out = {}
            for key, c in result.terms.items():
                for i, a in matrix[key[s]].items():
                    accumulate(out, key[:s] + (i,) + key[s + 1:], c * a)
            result = Tensor(result.spaces, out, clean=False)
        return result

    def is_antisymmetric(self):
        return self.arity == 2 and (self + tensor_permute(self, (1, 0))).is_zero()


def tensor_permute(tensor, sigma):
    """Move the factor in slot k to slot sigma[k] (0-based images)."""
    sigma = tuple(sigma)
    k = tensor.arity
    if len(sigma) != k:
        raise ArityError(f"permutation of {len(sigma)} slots applied to arity {k}")
    if sorted(sigma) != list(range(k)):
        raise ArityError(f"{sigma} is not a permutation of {k} slots")
    spaces = [None] * k
    for src, dst in enumerate(sigma):
        spaces[dst] = tensor.spaces[src]
    out = {}
    for key, c in tensor.terms.items():
        new = [0] * k
        for src, dst in enumerate(sigma):
            new[dst] = key[src]
        out[tuple(new)] = c
    return Tensor(spaces, out, clean=False)


def cyclic_sum3(tensor):
    if tensor.arity != 3:
        raise ArityError(f"cyclic sum needs arity 3, got {tensor.arity}")
    return tensor + tensor_permute(tensor, (1, 2, 0)) + tensor_permute(tensor, (2, 0, 1))


def alt2(tensor):
    if tensor.arity != 2:
        raise ArityError(f"alt2 needs arity 2, got {tensor.arity}")
    if tensor.spaces[0] != tensor.spaces[1]:
        raise ShapeMismatchError("alt2 needs equal slots")
    return tensor - tensor_permute(tensor, (1, 0))


def wedge(space, i, j):
    """x_i ∧ x_j = x_i⊗x_j − x_j⊗x_i."""
    return Tensor((space, space), {(i, j): ONE}) - Tensor((space, space), {(j, i): ONE})


# ─────────────────────────────────────────────
# ℏ-TRUNCATED SERIES
# ─────────────────────────────────────────────
class HSeries:
    """c_0 + ℏc_1 + … + ℏ^N c_N modulo ℏ^{N+1}."""
    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = list(coeffs)
        if not coeffs:
            raise ShapeMismatchError("a series needs its order-0 coefficient")
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) > order + 1:
            coeffs = coeffs[:order + 1]
        while len(coeffs) < order + 1:
            coeffs.append(coeffs[0].zero_like())
        kinds = {type(c) for c in coeffs}
        if len(kinds) != 1:
            raise ShapeMismatchError(f"series coefficients of mixed kinds {kinds}")
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value, order):
        return cls([value], order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _check(self, other):
        if self.order != other.order:
            raise ShapeMismatchError(f"series orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        self._check(other)
        return HSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return HSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self):
        return HSeries([-a for a in self.coeffs], self.order)

    def __eq__(self, other):
        if not isinstance(other, HSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def truncate(self, order):
        return HSeries(self.coeffs[:order + 1], order)

    def extend(self, order):
        return HSeries(self.coeffs, order)

    def with_coeff(self, k, value):
        coeffs = list(self.coeffs)
        coeffs[k] = value
        return HSeries(coeffs, self.order)

    def map(self, fn):
        return HSeries([fn(c) for c in self.coeffs], self.order)

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def first_nonzero_order(self):
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def __repr__(self):
        return f"<HSeries N={self.order} {self.coeffs}>"


def hseries_mul(a, b, mult):
    """Cauchy product truncated at the common order."""
    if a.order != b.order:
        raise ShapeMismatchError(f"series orders differ: {a.order} vs {b.order}")
    coeffs = []
    for k in range(a.order + 1):
        acc = None
        for i in range(k + 1):
            if not a[i] or not b[k - i]:
                continue
            p = mult(a[i], b[k - i])
            acc = p if acc is None else acc + p
        coeffs.append(acc if acc is not None else mult(a[0], b[0]).zero_like())
    return HSeries(coeffs, a.order)


def hseries_inverse(a, mult, unit):
    """Inverse of a series whose order-0 coefficient is the unit."""
    if not a[0] == unit:
        raise NonInvertibleError("leading coefficient is not the unit")
    coeffs = [unit]
    for k in range(1, a.order + 1):
        acc = unit.zero_like()
        for j in range(1, k + 1):
            if a[j] and coeffs[k - j]:
                acc = acc - mult(a[j], coeffs[k - j])
        coeffs.append(acc)
    return HSeries(coeffs, a.order)


# ─────────────────────────────────────────────
# LINEAR SYSTEMS
# ─────────────────────────────────────────────
@dataclass
class LinSystem:
    rows: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    variables: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.rows) != len(self.rhs):
            raise ShapeMismatchError(f"{len(self.rows)} rows but {len(self.rhs)} right-hand sides")
        n = len(self.variables)
        for row in self.rows:
            for j in row:
                if not 0 <= j < n:
                    raise ShapeMismatchError(f"column {j} outside {n} variables")

    def add_row(self, row, rhs):
        self.rows.append(row)
        self.rhs.append(rhs)

    @property
    def shape(self):
        return len(self.rows), len(self.variables)


@dataclass(frozen=True)
class LinSolution:
    values: tuple
    pivots: tuple
    consistent = True

    @property
    def rank(self):
        return len(self.pivots)

    def as_dict(self, variables):
        return {variables[j]: v for j, v in enumerate(self.values) if v}


@dataclass(frozen=True)
class InconsistencyCertificate:
    """Left null vector y of A with y·b ≠ 0."""
    weights: tuple
    pairing: object
    consistent = False

    def to_dict(self):
        return {
            "rows": {str(i): format_scalar(y) for i, y in self.weights},
            "y_dot_b": format_scalar(self.pairing),
        }


def lin_solve(system):
    """Gauss-Jordan on [A|b]; free variables are pinned to zero.

    Returns a LinSolution, or an InconsistencyCertificate when b's column
    becomes a pivot.
    """
    m, n = system.shape
    dod = {}
    for i, (row, b) in enumerate(zip(system.rows, system.rhs)):
        entries = {j: scalar(c) for j, c in row.items() if c}
        if b:
            entries[n] = scalar(b)
        if entries:
            dod[i] = entries
    if not dod:
        return LinSolution((ZERO,) * n, ())
    reduced, pivots = DomainMatrix.from_dod(dod, (m, n + 1), QQ).rref(method="GJ")
    if n in pivots:
        return _certificate(system, dod)
    red = reduced.to_dod()
    values = [ZERO] * n
    for r, col in enumerate(pivots):
        values[col] = red.get(r, {}).get(n, ZERO)
    logger.debug("lin_solve: %d rows, %d variables, rank %d", m, n, len(pivots))
    return LinSolution(tuple(values), tuple(pivots))


def _certificate(system, dod):
    m, n = system.shape
    rhs = [scalar(b) if b else ZERO for b in system.rhs]
    if n == 0:
        for i, b in enumerate(rhs):
            if b:
                return InconsistencyCertificate(((i, ONE),), b)
    transposed = {}
    for i, entries in dod.items():
        for j, c in entries.items():
            if j < n:
                transposed.setdefault(j, {})[i] = c
    null = DomainMatrix.from_dod(transposed, (n, m), QQ).nullspace().to_dod()
    for y in null.values():
        pairing = sum((c * rhs[i] for i, c in y.items()), ZERO)
        if pairing:
            return InconsistencyCertificate(tuple(sorted(y.items())), pairing)
    raise InternalCheckError("inconsistent system without a separating left null vector")


def add_residual_rows(system, coeffs):
    """Append "coefficient = 0" rows for LinearForm or constant coefficients."""
    for c in coeffs:
        if not c:
            continue
        if isinstance(c, LinearForm):
            system.add_row(dict(c.terms), -c.const)
        else:
            system.add_row({}, -c)
