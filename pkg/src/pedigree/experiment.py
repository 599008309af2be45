"""Driver-versus-oracle agreement experiment on generated points."""
from __future__ import annotations

import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .membership import decide
from .oracle import membership as oracle_membership
from .points import to_json
from .sampling import MODES, sample


@dataclass
class Record:
    n: int
    mode: str
    index: int
    driver: str
    reason: str | None
    stage: int | None
    oracle: bool
    violations: list
    point: dict

    @property
    def agrees(self) -> bool:
        return (self.driver == "member") == self.oracle


@dataclass
class Report:
    records: list = field(default_factory=list)
    elapsed: float = 0.0

    def discrepancies(self) -> list:
        return [r for r in self.records if not r.agrees]

    def violations(self) -> list:
        return [r for r in self.records if r.violations]

    def table(self) -> Counter:
        return Counter((r.n, r.mode, r.driver, "oracle-member" if r.oracle else "oracle-outside")
                       for r in self.records)

    def summary(self) -> str:
        lines = [f"{'n':>2} {'mode':<10} {'driver':<11} {'oracle':<15} {'count':>5}"]
        for (n, mode, d, o), c in sorted(self.table().items()):
            lines.append(f"{n:>2} {mode:<10} {d:<11} {o:<15} {c:>5}")
        agree = sum(r.agrees for r in self.records)
        lines.append(f"agreement {agree}/{len(self.records)}, invariant violations "
                     f"{sum(len(r.violations) for r in self.records)}, {self.elapsed:.1f}s")
        return "\n".join(lines)

    def dump(self, path):
        bad = [r.__dict__ for r in self.records if not r.agrees or r.violations]
        Path(path).write_text(json.dumps(bad, indent=1, default=str) + "\n")


def seed_for(seed: int, n: int, mode: str) -> int:
    # independent deterministic stream per (n, mode)
    return seed * 1000 + n * 10 + MODES.index(mode)


def run(ns, counts, seed: int = 0, modes=MODES, shortcuts: bool = False) -> Report:
    """counts[i] points for ns[i], spread round-robin over the modes."""
    rep = Report()
    t0 = time.perf_counter()
    for n, count in zip(ns, counts):
        rngs = {m: random.Random(seed_for(seed, n, m)) for m in modes}
        for i in range(count):
            mode = modes[i % len(modes)]
            x = sample(rngs[mode], n, mode)
            v = decide(x, shortcuts=shortcuts)
            o = oracle_membership(x)
            rep.records.append(Record(n, mode, i, v.result, v.reason, v.stage, o.member,
                                      v.violations(), to_json(x)))
    rep.elapsed = time.perf_counter() - t0
    return rep
