"""
gammaq - Example Catalog
Shipped input documents. Every entry is a plain JSON-ready dict in the
input format read by schema.load_document.
"""

Z2_TABLE = [[0, 1], [1, 0]]

S3_LABELS = ["e", "(12)", "(23)", "(13)", "(123)", "(132)"]

S3_PERMS = {
    "e": (0, 1, 2), "(12)": (1, 0, 2), "(23)": (0, 2, 1),
    "(13)": (2, 1, 0), "(123)": (1, 2, 0), "(132)": (2, 0, 1),
}


def _s3_table():
    perms = S3_PERMS
    index = {p: i for i, p in enumerate(perms[label] for label in S3_LABELS)}

    def compose(p, q):
        return tuple(p[q[i]] for i in range(3))

    return [[index[compose(perms[a], perms[b])] for b in S3_LABELS] for a in S3_LABELS]


def is_odd(label):
    p = S3_PERMS[label]
    return sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j]) % 2 == 1


def _by_sign(odd_matrix, identity_matrix):
    return {label: (odd_matrix if is_odd(label) else identity_matrix) for label in S3_LABELS}


def _identity_rows(n):
    return [["1" if i == j else "0" for j in range(n)] for i in range(n)]


# ─────────────────────────────────────────────
# LIE ALGEBRAS
# ─────────────────────────────────────────────
def abelian(n=2):
    labels = ["x", "y"] if n == 2 else [f"x{i}" for i in range(1, n + 1)]
    return {"dimension": n, "basis": labels, "bracket": []}


def solvable():
    """[h, x] = x with δ(x) = x∧h."""
    return {
        "dimension": 2,
        "basis": ["x", "h"],
        "bracket": [[0, 1, 0, "-1"]],
        "cobracket": [[0, 0, 1, "1"]],
    }


def sl2():
    """[h, e] = 2e, [h, f] = −2f, [e, f] = h."""
    return {
        "dimension": 3,
        "basis": ["e", "f", "h"],
        "bracket": [[0, 1, 2, "1"], [0, 2, 0, "-2"], [1, 2, 1, "2"]],
    }


def sl2_standard():
    """sl2 with r = e⊗f + ¼ h⊗h."""
    doc = sl2()
    doc["r"] = [[0, 1, "1"], [2, 2, "1/4"]]
    return doc


def sl2_zero():
    doc = sl2()
    doc["cobracket"] = []
    return doc


# ─────────────────────────────────────────────
# GROUP ACTIONS
# ─────────────────────────────────────────────
CARTAN = [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "-1"]]


def sl2_cartan_z2():
    """Cartan involution e ↔ f, h ↦ −h; f_σ = f⊗e − e⊗f comes from r."""
    doc = sl2_standard()
    doc["group"] = {"elements": ["e", "s"], "table": Z2_TABLE}
    doc["action"] = {"s": CARTAN}
    return doc


def sl2_trivial_group():
    doc = sl2_standard()
    doc["group"] = {"elements": ["e"], "table": [[0]]}
    doc["action"] = {}
    return doc


def sl2_s3_sign():
    doc = sl2_standard()
    doc["group"] = {"elements": S3_LABELS, "table": _s3_table()}
    doc["action"] = _by_sign(CARTAN, _identity_rows(3))
    return doc


def solvable_z2(c="1"):
    """x ↦ −x, h ↦ h + c·x with f_σ = c·x∧h."""
    doc = solvable()
    doc["group"] = {"elements": ["e", "s"], "table": Z2_TABLE}
    doc["action"] = {"s": [["-1", c], ["0", "1"]]}
    doc["twists"] = {"s": [[0, 1, c]]}
    return doc


def solvable_s3_sign(c="1"):
    doc = solvable()
    odd = [["-1", c], ["0", "1"]]
    doc["group"] = {"elements": S3_LABELS, "table": _s3_table()}
    doc["action"] = _by_sign(odd, _identity_rows(2))
    doc["twists"] = {label: [[0, 1, c]] for label in S3_LABELS if is_odd(label)}
    return doc


def abelian_swap(r=True):
    """Z/2 swapping x and y on abelian(2), with r = x⊗y when requested."""
    doc = abelian(2)
    doc["group"] = {"elements": ["e", "s"], "table": Z2_TABLE}
    doc["action"] = {"s": [["0", "1"], ["1", "0"]]}
    if r:
        doc["r"] = [[0, 1, "1"]]
    return doc


def abelian_swap_mismatched():
    """r = x⊗y but an explicit zero f-family; the two pipelines cannot agree."""
    doc = abelian_swap()
    doc["twists"] = {"s": []}
    return doc


CATALOG = {
    "abelian2": (abelian, "abelian Lie algebra of dimension 2, zero cobracket"),
    "solvable2": (solvable, "[h,x] = x with δ(x) = x∧h"),
    "sl2": (sl2_standard, "sl2 with the standard r-matrix e⊗f + ¼h⊗h"),
    "sl2-zero": (sl2_zero, "sl2 with zero cobracket"),
    "sl2-z2": (sl2_cartan_z2, "sl2 ⋊ Z/2 through the Cartan involution"),
    "sl2-trivial": (sl2_trivial_group, "sl2 with the trivial group"),
    "sl2-s3": (sl2_s3_sign, "sl2 ⋊ S3 through the sign character"),
    "solvable2-z2": (solvable_z2, "solvable algebra ⋊ Z/2, x ↦ −x, h ↦ h + x"),
    "solvable2-s3": (solvable_s3_sign, "solvable algebra ⋊ S3 through the sign character"),
    "abelian2-swap": (abelian_swap, "abelian(2) ⋊ Z/2 swapping x and y, r = x⊗y"),
    "abelian2-swap-mismatch": (abelian_swap_mismatched, "abelian(2) swap with r and a conflicting zero f-family"),
}


def names():
    return sorted(CATALOG)


def document(name):
    try:
        build, _ = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(names())}") from None
    return build()


def describe(name):
    return CATALOG[name][1]
