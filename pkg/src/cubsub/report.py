"""Check reports: named checks with counts and witnesses, in insertion order."""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_WITNESSES = 5


@dataclass
class Check:
    name: str
    total: int = 0
    failed: int = 0
    witnesses: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.failed == 0


class Report:
    def __init__(self, title: str = ""):
        self.title = title
        self.checks: dict[str, Check] = {}

    def declare(self, name: str, note: str = "") -> Check:
        c = self.checks.get(name)
        if c is None:
            c = self.checks[name] = Check(name, note=note)
        elif note:
            c.note = note
        return c

    def record(self, name: str, ok: bool, witness=None) -> bool:
        c = self.declare(name)
        c.total += 1
        if not ok:
            c.failed += 1
            if len(c.witnesses) < MAX_WITNESSES:
                c.witnesses.append(witness)
        return ok

    def extend(self, other: Report, prefix: str = "") -> Report:
        for name, c in other.checks.items():
            mine = self.declare(prefix + name, c.note)
            mine.total += c.total
            mine.failed += c.failed
            room = MAX_WITNESSES - len(mine.witnesses)
            mine.witnesses.extend(c.witnesses[:room])
        return self

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    @property
    def violations(self) -> int:
        return sum(c.failed for c in self.checks.values())

    def failures(self, name: str | None = None) -> list:
        if name is not None:
            return list(self.checks[name].witnesses) if name in self.checks else []
        return [(c.name, w) for c in self.checks.values() for w in c.witnesses]

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    def __contains__(self, name: str) -> bool:
        return name in self.checks

    def lines(self, fmt: str = "text") -> list[str]:
        out = []
        for c in self.checks.values():
            status = "PASS" if c.ok else "FAIL"
            if fmt == "lines":
                row = [self.title, c.name, status, str(c.total), str(c.failed), c.note]
                row += [_flat(w) for w in c.witnesses]
                out.append("\t".join(row))
            else:
                line = f"{status} {c.name}: {c.total - c.failed}/{c.total}"
                if c.note:
                    line += f" ({c.note})"
                out.append(line)
                for w in c.witnesses:
                    out.append(f"    witness: {_flat(w)}")
        return out

    def __str__(self):
        head = [f"== {self.title}"] if self.title else []
        return "\n".join(head + self.lines())


def _flat(w) -> str:
    return " ".join(str(w).split())
