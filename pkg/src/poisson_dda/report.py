"""Structured outcome of verification and CLI commands."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
ERROR = "ERROR"

EXIT_CODES = {PASS: 0, FAIL: 1, ERROR: 2}


@dataclass
class Report:
    status: str
    payload: dict[str, Any] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.ok

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_dict(self) -> dict[str, Any]:
        return {"status": self.status, "payload": self.payload, "diagnostics": self.diagnostics}
