"""
gammaq - Reports
Deterministic JSON and text rendering of check results, solver outcomes and
errors. Timings and the creation time are only written when timestamps are on.
"""
import json
import time
from datetime import datetime, timezone

VERSION = "0.3.0"


class Report:
    def __init__(self, command, digest=None, timestamps=False):
        self.command = command
        self.digest = digest
        self.timestamps = timestamps
        self.checks = {}
        self.data = {}
        self.gauge_log = []
        self.timings = {}
        self.error = None
        self._started = time.perf_counter()

    # ── filling ──
    def add_check(self, name, defects=None, status=None):
        """Record a DefectReport, or a bare status ("pass", "fail", "skipped")."""
        if defects is not None:
            entry = defects.to_dict()
        else:
            entry = {"status": status}
        self.checks[name] = entry
        return entry

    def skip(self, name, why):
        self.checks[name] = {"status": "skipped", "why": why}

    def set(self, key, value):
        self.data[key] = value

    def time(self, name, started):
        self.timings[name] = round(time.perf_counter() - started, 3)

    def fail(self, error):
        self.error = error.to_dict()

    # ── status ──
    @property
    def passed(self):
        return self.error is None and all(c.get("status") != "fail" for c in self.checks.values())

    def to_dict(self):
        out = {
            "tool": "gammaq",
            "version": VERSION,
            "command": self.command,
            "input_digest": self.digest,
            "status": "pass" if self.passed else "fail",
            "checks": dict(sorted(self.checks.items())),
        }
        if self.data:
            out["result"] = self.data
        if self.gauge_log:
            out["gauge_log"] = list(self.gauge_log)
        if self.error is not None:
            out["error"] = self.error
        if self.timestamps:
            self.timings["total"] = round(time.perf_counter() - self._started, 3)
            out["timings"] = dict(sorted(self.timings.items()))
            out["created_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return out

    # ── rendering ──
    def render(self, fmt="json"):
        if fmt == "json":
            return dumps(self.to_dict())
        return self.to_text()

    def to_text(self):
        data = self.to_dict()
        lines = [f"gammaq {data['version']} {self.command}: {data['status'].upper()}"]
        if self.digest:
            lines.append(f"  input  {self.digest}")
        for name, check in data["checks"].items():
            lines.append(f"  {check['status']:<7} {name}")
            for section, body in sorted(check.get("sections", {}).items()):
                for defect in body["defects"][:5]:
                    lines.append(f"            {section} at {defect['at']}")
                extra = len(body["defects"]) - 5
                if extra > 0:
                    lines.append(f"            {section}: {extra} more")
        if self.error:
            lines.append(f"  error   {self.error['reason']}: {self.error['message']}")
            if self.error.get("hint"):
                lines.append(f"          hint: {self.error['hint']}")
            if self.error.get("pointer") is not None and self.error.get("reason") == "schema":
                lines.append(f"          at {self.error['pointer'] or '/'}")
        for entry in data.get("gauge_log", []):
            lines.append(f"  gauge   {entry['object']} order {entry['order']}: {entry['event']}")
        return "\n".join(lines) + "\n"


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_artifact(path, artifact):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(artifact))
