from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from features.stats.models.verdict import Verdict


@dataclass
class RunResult:
    run_id: str
    command: str
    output_dir: Path
    files: list[Path] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1
