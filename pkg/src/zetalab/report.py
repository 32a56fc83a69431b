"""Machine-readable reports: canonical JSON documents and fixed-column CSV."""

from __future__ import annotations

import csv
import json
import math
import time

from . import __version__
from .nevanlinna import LemmaVerdict

SCHEMA_VERSION = 1
CSV_COLUMNS = ["t", "lemma_id", "computed", "bound", "margin", "pass", "error_estimate"]


class ReportDocument:
    """One run's verdicts, findings, constants, and config echo.

    Everything except the timing block is deterministic for a fixed config:
    verdicts are kept in sorted order and serialized with sorted keys and
    full-precision floats (repr), so identical configs produce byte-identical
    JSON apart from `timing`."""

    def __init__(self, command: str, config_echo: dict):
        self.command = command
        self.config_echo = config_echo
        self.constants: dict | None = None
        self.verdicts: list = []
        self.findings: list = []
        self.notes: list = []
        self._t0 = time.time()

    def add_verdicts(self, t: float | None, verdicts):
        for v in verdicts:
            self.verdicts.append((t, v))

    def add_findings(self, findings):
        self.findings.extend(findings)

    def sort(self):
        self.verdicts.sort(
            key=lambda tv: (
                tv[0] if tv[0] is not None else -math.inf,
                tv[1].lemma_id,
            )
        )
        self.findings.sort(key=lambda f: (f.t, f.kind))

    @property
    def all_passed(self) -> bool:
        return all(v.passed for _, v in self.verdicts)

    def exit_code(self) -> int:
        if not self.all_passed:
            return 2
        if self.findings:
            return 3
        return 0

    def to_json(self) -> dict:
        self.sort()
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "zetalab", "version": __version__},
            "command": self.command,
            "config": self.config_echo,
            "verdicts": [
                dict(v.to_json(), t=t) if t is not None else v.to_json()
                for t, v in self.verdicts
            ],
            "findings": [f.to_json() for f in self.findings],
            "notes": list(self.notes),
            "timing": {"seconds": time.time() - self._t0},
        }
        if self.constants is not None:
            doc["constants"] = self.constants
        return doc

    def json_bytes(self) -> bytes:
        return (json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n").encode()

    def write_json(self, path: str):
        with open(path, "wb") as fh:
            fh.write(self.json_bytes())

    def write_csv(self, path: str):
        self.sort()
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for t, v in self.verdicts:
                w.writerow(
                    [
                        "" if t is None else repr(float(t)),
                        v.lemma_id,
                        repr(v.computed),
                        repr(v.bound),
                        repr(v.margin),
                        str(v.passed).lower(),
                        repr(v.error_estimate),
                    ]
                )

    def print_summary(self, out):
        self.sort()
        for t, v in self.verdicts:
            tag = "PASS" if v.passed else "FAIL"
            loc = f" t={t:g}" if t is not None else ""
            print(
                f"[{tag}] {v.lemma_id}{loc}: computed={v.computed:.6g} "
                f"bound={v.bound:.6g} margin={v.margin:.6g}",
                file=out,
            )
        for f in self.findings:
            print(f"[FINDING] {f.kind} t={f.t:g}: {f.detail}", file=out)
        for n in self.notes:
            print(f"[NOTE] {n}", file=out)
