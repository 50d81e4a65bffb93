"""
engine/reports.py

Itemised pass/fail reports shared by the validators, the lifts and the CLI.
A law violation is a failed check carrying its first witness, never an
exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    ok: bool
    witness: dict | None = None


@dataclass
class Report:
    subject: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def record(self, name: str, ok: bool, witness: dict | None = None) -> bool:
        ok = bool(ok)
        self.checks.append(Check(name, ok, None if ok else (witness or {})))
        return ok

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def passed(self, name: str) -> bool:
        """True when every check called `name` passed (and at least one ran)."""
        found = [c for c in self.checks if c.name == name]
        return bool(found) and all(c.ok for c in found)

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        tag = prefix if prefix is not None else other.subject
        for c in other.checks:
            self.checks.append(Check(f"{tag}: {c.name}" if tag else c.name, c.ok, c.witness))
        self.notes.extend(other.notes)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok":      self.ok,
            "checks":  [
                {"name": c.name, "ok": c.ok, **({"witness": c.witness} if c.witness is not None else {})}
                for c in self.checks
            ],
            "notes":   list(self.notes),
        }

    def lines(self) -> list[str]:
        out = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            out.append(f"  [{mark}] {c.name}")
            if c.witness:
                pretty = ", ".join(f"{k}={v}" for k, v in c.witness.items())
                out.append(f"         witness: {pretty}")
        for n in self.notes:
            out.append(f"  note: {n}")
        return out


@dataclass
class Certificate:
    """Verdicts of an extremality scan: one entry per candidate, in scan order."""

    subject: str
    direction: str
    mode: str                       # "exhaustive" | "adversarial"
    seed: int | None = None
    entries: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e["on_side"] for e in self.entries if e["continuous"])

    @property
    def counterexample(self) -> dict | None:
        return next((e for e in self.entries if e["continuous"] and not e["on_side"]), None)

    @property
    def n_continuous(self) -> int:
        return sum(1 for e in self.entries if e["continuous"])

    def to_dict(self) -> dict:
        return {
            "subject":    self.subject,
            "direction":  self.direction,
            "mode":       self.mode,
            "seed":       self.seed,
            "ok":         self.ok,
            "candidates": len(self.entries),
            "continuous": self.n_continuous,
            "entries":    list(self.entries),
        }

    def lines(self) -> list[str]:
        out = [
            f"{self.subject}: {'PASS' if self.ok else 'FAIL'} ({self.direction}, {self.mode}"
            + (f", seed={self.seed:#x}" if self.seed is not None else "") + ")",
            f"  {len(self.entries)} candidates, {self.n_continuous} continuous",
        ]
        bad = self.counterexample
        if bad:
            out.append(f"  counterexample: candidate #{bad['index']} ({bad['digest'][:12]}) is {bad['order']}")
        return out
