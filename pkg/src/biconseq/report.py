"""Pass/fail reports shared by the axiom and proposition checkers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckItem:
    item: str
    status: str
    counterexample: Any = None
    detail: Any = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        d = {"item": self.item, "status": self.status, "counterexample": self.counterexample}
        if self.detail is not None:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    title: str
    items: list[CheckItem] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, item: str, ok: bool, counterexample=None, detail=None) -> CheckItem:
        entry = CheckItem(item, "pass" if ok else "fail", None if ok else counterexample, detail)
        self.items.append(entry)
        return entry

    @property
    def ok(self) -> bool:
        return all(i.ok for i in self.items)

    def __getitem__(self, name: str) -> CheckItem:
        for i in self.items:
            if i.item == name:
                return i
        raise KeyError(name)

    def failures(self) -> list[CheckItem]:
        return [i for i in self.items if not i.ok]

    def to_dict(self) -> dict:
        d = {"title": self.title, "items": [i.to_dict() for i in self.items]}
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [self.title]
        for i in self.items:
            line = f"  {i.item}: {i.status.upper()}"
            if i.counterexample is not None:
                line += f"  counterexample={i.counterexample}"
            lines.append(line)
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)
