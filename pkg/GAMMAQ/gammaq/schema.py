"""
gammaq - Input Documents
Reads the JSON input format into algebraic structures. Every malformed field
raises SchemaError with a JSON pointer to it.

    {
      "dimension": 3,
      "basis": ["e", "f", "h"],
      "bracket":   [[i, j, k, "c"], ...]       [x_i, x_j] ∋ c·x_k, i < j
      "cobracket": [[i, j, k, "d"], ...]       δ(x_i) ∋ d·x_j∧x_k, j < k
      "r":         [[i, j, "c"], ...]          r ∋ c·x_i⊗x_j
      "group":  {"elements": [...], "table": [[...], ...]}
      "action": {"γ": [[row], ...]}            θ_γ as a matrix of rows
      "twists": {"γ": [[j, k, "c"], ...]}      f_γ ∋ c·x_j∧x_k, j < k
      "options": {"order": 2, "degree_cap": null, "seed_order": [...]}
    }
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field

from algebra.exact import BasedSpace, Tensor, accumulate, scalar
from algebra.gamma import FiniteGroup, GammaLieBialgebra, GroupAction
from algebra.lie import (LieAlgebra, LieBialgebra, QuasitriangularData, coboundary_cobracket,
                         cobracket_from_entries, mat_from_rows, mat_identity)
from errors import GammaqError, SchemaError

logger = logging.getLogger(__name__)

KNOWN_FIELDS = {"dimension", "basis", "bracket", "cobracket", "r", "group", "action", "twists", "options",
                "name", "description"}


@dataclass
class Problem:
    """Everything an input document defines, built without axiom checks."""
    document: dict
    algebra: LieAlgebra
    bialgebra: LieBialgebra
    qt: QuasitriangularData = None
    group: FiniteGroup = None
    action: GroupAction = None
    gamma: GammaLieBialgebra = None
    twists_source: str = "none"
    options: dict = field(default_factory=dict)

    @property
    def labels(self):
        return self.algebra.space.labels

    @property
    def digest(self):
        return document_digest(self.document)


def document_digest(document):
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def read_document(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", pointer="") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}", pointer="") from exc


# ─────────────────────────────────────────────
# FIELD READERS
# ─────────────────────────────────────────────
def _require(doc, key, kind, pointer=""):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}", pointer=f"{pointer}/{key}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"field {key!r} has the wrong type", pointer=f"{pointer}/{key}")
    return value


def _rational(value, pointer):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SchemaError("rationals are written as integers or \"p/q\" strings", pointer=pointer)
    try:
        return scalar(value)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"cannot read {value!r} as a rational: {exc}", pointer=pointer) from exc


def _index(value, n, pointer):
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < n:
        raise SchemaError(f"index {value!r} outside 0..{n - 1}", pointer=pointer)
    return value


def _entries(rows, width, n, pointer):
    """Validate a list of [index, …, "p/q"] entries with `width` indices."""
    if not isinstance(rows, list):
        raise SchemaError("expected a list of sparse entries", pointer=pointer)
    out = []
    for r, row in enumerate(rows):
        at = f"{pointer}/{r}"
        if not isinstance(row, list) or len(row) != width + 1:
            raise SchemaError(f"entry must have {width} indices and a coefficient", pointer=at)
        idx = tuple(_index(v, n, f"{at}/{p}") for p, v in enumerate(row[:width]))
        out.append((idx, _rational(row[width], f"{at}/{width}")))
    return out


def _ordered_pair(idx, pointer):
    if idx[-2] >= idx[-1]:
        raise SchemaError(f"pair {idx[-2:]} must be increasing", pointer=pointer)


def _wedge_tensor(space, entries, pointer):
    out = {}
    for r, ((j, k), c) in enumerate(entries):
        _ordered_pair((j, k), f"{pointer}/{r}")
        accumulate(out, (j, k), c)
        accumulate(out, (k, j), -c)
    return Tensor((space, space), out, clean=False)


def _matrix(rows, n, pointer):
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError(f"action matrix must have {n} rows", pointer=pointer)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"row must have {n} entries", pointer=f"{pointer}/{i}")
    return mat_from_rows([[_rational(v, f"{pointer}/{i}/{j}") for j, v in enumerate(row)]
                          for i, row in enumerate(rows)])


# ─────────────────────────────────────────────
# DOCUMENT
# ─────────────────────────────────────────────
def load_document(doc):
    if not isinstance(doc, dict):
        raise SchemaError("input must be a JSON object", pointer="")
    unknown = sorted(set(doc) - KNOWN_FIELDS)
    if unknown:
        raise SchemaError(f"unknown field {unknown[0]!r}", pointer=f"/{unknown[0]}")
    n = _require(doc, "dimension", int)
    if isinstance(n, bool) or n < 1:
        raise SchemaError("dimension must be a positive integer", pointer="/dimension")
    labels = _require(doc, "basis", list)
    if len(labels) != n or not all(isinstance(l, str) and l for l in labels):
        raise SchemaError(f"basis must list {n} non-empty labels", pointer="/basis")
    try:
        space = BasedSpace(tuple(labels))
    except GammaqError as exc:
        raise SchemaError(exc.message, pointer="/basis") from exc

    upper = {}
    for r, ((i, j, k), c) in enumerate(_entries(_require(doc, "bracket", list), 3, n, "/bracket")):
        if i >= j:
            raise SchemaError(f"bracket pair ({i}, {j}) must have i < j", pointer=f"/bracket/{r}")
        accumulate(upper.setdefault((i, j), {}), k, c)
    algebra = LieAlgebra.from_upper(space, upper)

    qt = None
    if "r" in doc:
        r_terms = {}
        for (i, j), c in _entries(doc["r"], 2, n, "/r"):
            accumulate(r_terms, (i, j), c)
        qt = QuasitriangularData(algebra, Tensor((space, space), r_terms, clean=False), check=False)

    if "cobracket" in doc:
        entries = {}
        for r, ((i, j, k), c) in enumerate(_entries(doc["cobracket"], 3, n, "/cobracket")):
            _ordered_pair((j, k), f"/cobracket/{r}")
            entries.setdefault(i, {})
            entries[i][(j, k)] = entries[i].get((j, k), 0) + c
        cobracket = cobracket_from_entries(space, entries)
    elif qt is not None:
        cobracket = coboundary_cobracket(algebra, qt.r)
    else:
        cobracket = cobracket_from_entries(space, {})
    bialgebra = LieBialgebra(algebra, cobracket, check=False)

    problem = Problem(doc, algebra, bialgebra, qt=qt, options=_options(doc))
    if "group" in doc:
        _load_group(doc, problem)
    elif "action" in doc or "twists" in doc:
        raise SchemaError("action and twists need a group", pointer="/group")
    logger.debug("loaded document %s", problem.digest)
    return problem


def _load_group(doc, problem):
    space = problem.algebra.space
    n = space.dim
    group_doc = _require(doc, "group", dict)
    elements = _require(group_doc, "elements", list, "/group")
    table = _require(group_doc, "table", list, "/group")
    if not all(isinstance(l, str) for l in elements):
        raise SchemaError("group elements are labelled by strings", pointer="/group/elements")
    m = len(elements)
    for a, row in enumerate(table):
        if not isinstance(row, list):
            raise SchemaError("table rows are lists", pointer=f"/group/table/{a}")
        for b, v in enumerate(row):
            _index(v, m, f"/group/table/{a}/{b}")
    try:
        group = FiniteGroup(elements, table)
    except GammaqError as exc:
        raise SchemaError(exc.message, pointer="/group/table") from exc

    action_doc = doc.get("action", {})
    if not isinstance(action_doc, dict):
        raise SchemaError("action maps group elements to matrices", pointer="/action")
    matrices = [mat_identity(n) for _ in group.elements()]
    for label, rows in action_doc.items():
        if label not in group.labels:
            raise SchemaError(f"unknown group element {label!r}", pointer=f"/action/{label}")
        matrices[group.index(label)] = _matrix(rows, n, f"/action/{label}")
    try:
        action = GroupAction(group, matrices)
    except GammaqError as exc:
        raise SchemaError(exc.message, pointer="/action") from exc

    if "twists" in doc:
        twists_doc = _require(doc, "twists", dict)
        twists = [Tensor((space, space)) for _ in group.elements()]
        for label, rows in twists_doc.items():
            if label not in group.labels:
                raise SchemaError(f"unknown group element {label!r}", pointer=f"/twists/{label}")
            entries = _entries(rows, 2, n, f"/twists/{label}")
            twists[group.index(label)] = _wedge_tensor(space, entries, f"/twists/{label}")
        source = "explicit"
    elif problem.qt is not None:
        r = problem.qt.r
        twists = [action.wedge2(g, r) - r for g in group.elements()]
        source = "r-matrix"
    else:
        twists = [Tensor((space, space)) for _ in group.elements()]
        source = "zero"
    problem.group = group
    problem.action = action
    problem.gamma = GammaLieBialgebra(problem.bialgebra, action, twists, check=False)
    problem.twists_source = source

    seed = problem.options.get("seed_order")
    if seed is not None:
        for p, label in enumerate(seed):
            if label not in group.labels:
                raise SchemaError(f"unknown group element {label!r}", pointer=f"/options/seed_order/{p}")
        identity = group.labels[group.identity]
        if sorted(l for l in seed if l != identity) != sorted(l for l in group.labels if l != identity):
            raise SchemaError("seed order must list every non-identity element once", pointer="/options/seed_order")


def _options(doc):
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        raise SchemaError("options must be an object", pointer="/options")
    out = {}
    for key in ("order", "degree_cap"):
        value = opts.get(key)
        if value is None:
            continue
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise SchemaError(f"{key} must be a non-negative integer", pointer=f"/options/{key}")
        out[key] = value
    if opts.get("seed_order") is not None:
        seed = opts["seed_order"]
        if not isinstance(seed, list) or not all(isinstance(s, str) for s in seed):
            raise SchemaError("seed_order lists group element labels", pointer="/options/seed_order")
        out["seed_order"] = list(seed)
    return out

