"""
Artifact writers.

CSV files are UTF-8 with a header row and RFC-4180 quoting (CRLF line ends); heatmaps are binary
P5 PGM whose single comment line carries the value -> gray map. Every data file is named
`{command}_{N}_{seed}_{index}.{csv|pgm}`.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np
from loguru import logger

from core.errors import IoError
from features.stats.models.verdict import VERDICT_HEADER, Verdict

MAXVAL = 255


class OutputWriter:
    def __init__(self, output_dir: Path, command: str, N: Optional[int], seed: int):
        self.output_dir = Path(output_dir)
        self.command = command
        self.N = N
        self.seed = seed
        self.files: list[Path] = []
        self.log = logger.bind(service="writer", output_dir=str(self.output_dir))
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoError(f"cannot create {self.output_dir}: {e}") from e

    def name(self, index: int | str, ext: str) -> str:
        return f"{self.command}_{self.N}_{self.seed}_{index}.{ext}"

    def _open(self, filename: str, binary: bool = False):
        path = self.output_dir / filename
        try:
            handle = open(path, "wb") if binary else open(path, "w", encoding="utf-8", newline="")
        except OSError as e:
            raise IoError(f"cannot write {path}: {e}") from e
        self.files.append(path)
        return handle

    def csv(
        self, index: int | str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        return self.csv_named(self.name(index, "csv"), header, rows)

    def csv_named(
        self, filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]]
    ) -> Path:
        with self._open(filename) as handle:
            writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
            writer.writerow(header)
            writer.writerows(rows)
        self.log.bind(file=filename).debug("wrote csv")
        return self.files[-1]

    def pgm(self, index: int | str, grid: np.ndarray) -> Path:
        """
        Grid axis 0 is x and axis 1 is y; the image puts y upwards. NaN cells (outside the
        domain) are drawn black, values map affinely onto 1..255.
        """
        image = np.asarray(grid, dtype=float).T[::-1]
        finite = np.isfinite(image)
        lo = float(image[finite].min()) if finite.any() else 0.0
        hi = float(image[finite].max()) if finite.any() else 0.0
        scale = (MAXVAL - 1) / (hi - lo) if hi > lo else 0.0
        gray = np.zeros(image.shape, dtype=np.uint8)
        gray[finite] = np.rint(1 + (image[finite] - lo) * scale).astype(np.uint8)

        height, width = image.shape
        header = (
            f"P5\n# gray = 1 + (value - {lo!r}) * {scale!r}; 0 = outside\n"
            f"{width} {height}\n{MAXVAL}\n"
        )
        with self._open(self.name(index, "pgm"), binary=True) as handle:
            handle.write(header.encode("ascii"))
            handle.write(gray.tobytes())
        return self.files[-1]

    def verdicts(self, verdicts: Sequence[Verdict]) -> Path:
        return self.csv_named("verdict.csv", VERDICT_HEADER, [v.row() for v in verdicts])

    def manifest(self, fields: dict[str, Any]) -> Path:
        with self._open("run.json") as handle:
            json.dump(fields, handle, indent=2, sort_keys=True, default=str)
            handle.write("\n")
        return self.files[-1]
