"""
gammaq - Defect Reports
"""
from algebra.exact import HSeries, LinearForm, SparseVector, format_scalar


def _key_text(key, labels=None):
    if labels is None:
        return str(key)
    if isinstance(key, tuple) and all(isinstance(i, int) for i in key):
        return "⊗".join(labels[i] for i in key) if key else "1"
    return str(key)


def vector_to_json(vector, labels=None):
    out = []
    for key, c in vector.sorted_items():
        if isinstance(c, LinearForm):
            raise ValueError("cannot serialize a vector with unsolved unknowns")
        out.append([_key_text(key, labels), format_scalar(c)])
    return out


def value_is_zero(value):
    if isinstance(value, HSeries):
        return value.is_zero()
    if isinstance(value, SparseVector):
        return value.is_zero()
    if isinstance(value, dict):
        return not any(value.values())
    return not value


def value_size(value):
    if isinstance(value, HSeries):
        return {"first_order": value.first_nonzero_order(),
                "terms": sum(len(c) for c in value.coeffs)}
    if isinstance(value, SparseVector):
        return {"terms": len(value)}
    if isinstance(value, dict):
        return {"terms": sum(1 for v in value.values() if v)}
    return {"value": str(value)}


class DefectReport:
    """Named sections of (location, defect) pairs; only nonzero defects are kept."""

    def __init__(self, title):
        self.title = title
        self.sections = {}
        self.notes = []

    def section(self, name):
        return self.sections.setdefault(name, [])

    def record(self, section, location, value):
        entries = self.section(section)
        if not value_is_zero(value):
            entries.append((location, value))

    def note(self, text):
        self.notes.append(text)

    def merge(self, other, prefix=None):
        for name, entries in other.sections.items():
            key = f"{prefix}.{name}" if prefix else name
            self.section(key).extend(entries)
        self.notes.extend(other.notes)
        return self

    @property
    def passed(self):
        return not any(self.sections.values())

    def failures(self):
        return [(name, loc) for name, entries in self.sections.items() for loc, _ in entries]

    def to_dict(self):
        return {
            "title": self.title,
            "status": "pass" if self.passed else "fail",
            "sections": {
                name: {
                    "status": "fail" if entries else "pass",
                    "defects": [dict(at=str(loc), **value_size(v)) for loc, v in entries],
                }
                for name, entries in sorted(self.sections.items())
            },
            "notes": list(self.notes),
        }

    def __repr__(self):
        status = "pass" if self.passed else f"fail {self.failures()[:3]}"
        return f"<DefectReport {self.title} {status}>"
