"""Deterministic CSV / JSON serialization of verification results.

Reports are fully determined by (configuration, seeds): floats are written
with ``repr`` (shortest round-trip form) and the JSON body excludes wall
clock, so reruns with identical inputs produce byte-identical ``cases.csv``
files and an identical body hash.
"""

import hashlib
import json
import numbers
from dataclasses import dataclass, field


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "pass" if value else "fail"
    if isinstance(value, numbers.Real) and not isinstance(value, numbers.Integral):
        return repr(float(value))
    return str(value)


@dataclass
class VerificationReport:
    """Tabular verdict of one harness run.

    ``rows`` is a list of dicts keyed by ``columns``; every row must carry a
    ``verdict`` entry equal to ``"pass"`` or ``"fail"``.  ``checks`` holds
    named boolean side conditions that participate in the overall verdict
    but do not fit the tabular schema (hypothesis violation counts,
    auxiliary statistical checks, ...).
    """

    command: str
    columns: list
    rows: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    wall_clock: float = None

    @property
    def overall_pass(self) -> bool:
        rows_ok = all(row.get("verdict") == "pass" for row in self.rows)
        checks_ok = all(bool(v) for v in self.checks.values())
        return rows_ok and checks_ok

    def add_row(self, **cells) -> dict:
        row = {col: cells.get(col) for col in self.columns}
        self.rows.append(row)
        return row

    def extend(self, other: "VerificationReport") -> None:
        if other.columns != self.columns:
            raise ValueError("cannot merge reports with different schemas")
        self.rows.extend(other.rows)
        for name, ok in other.checks.items():
            self.checks[name] = ok
        for seed in other.seeds:
            if seed not in self.seeds:
                self.seeds.append(seed)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(format_cell(row.get(col)) for col in self.columns) + "\n")

    def json_body(self) -> dict:
        return {
            "command": self.command,
            "columns": self.columns,
            "rows": [{k: row.get(k) for k in self.columns} for row in self.rows],
            "checks": {k: bool(v) for k, v in sorted(self.checks.items())},
            "seeds": list(self.seeds),
            "overall": "pass" if self.overall_pass else "fail",
        }

    def write_json(self, path) -> None:
        body = self.json_body()
        canonical = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
        doc = dict(body)
        doc["body_sha256"] = hashlib.sha256(canonical).hexdigest()
        if self.wall_clock is not None:
            doc["wall_clock_s"] = round(self.wall_clock, 3)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
