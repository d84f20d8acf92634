"""Validation reports: one line per checked law, witness on failure."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckLine:
    name: str
    passed: bool
    witness: object = None

    def to_doc(self):
        doc = {"name": self.name, "passed": self.passed}
        if not self.passed and self.witness is not None:
            doc["witness"] = repr(self.witness)
        return doc


@dataclass
class ValidationReport:
    subject: str
    mode: str = "exhaustive"  # or "sampled", "by-construction"
    checks: list = field(default_factory=list)
    seed: int = None
    samples: int = None
    notes: list = field(default_factory=list)

    def check(self, name, passed, witness=None):
        self.checks.append(CheckLine(name, bool(passed), witness))
        return passed

    @property
    def ok(self):
        return all(line.passed for line in self.checks)

    def failures(self):
        return [line for line in self.checks if not line.passed]

    def first_failure(self):
        bad = self.failures()
        return bad[0] if bad else None

    def to_doc(self):
        doc = {
            "subject": self.subject,
            "mode": self.mode,
            "ok": self.ok,
            "checks": [line.to_doc() for line in self.checks],
        }
        if self.seed is not None:
            doc["seed"] = self.seed
        if self.samples is not None:
            doc["samples"] = self.samples
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc

    def summary(self):
        status = "pass" if self.ok else "FAIL"
        lines = [f"{self.subject}: {status} ({self.mode}, {len(self.checks)} checks)"]
        for line in self.failures():
            lines.append(f"  - {line.name} failed, witness={line.witness!r}")
        return "\n".join(lines)
