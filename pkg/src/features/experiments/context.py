from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from core.pool import resolve_threads
from core.rng import StreamFactory
from features.dgff.service import DgffService
from features.experiments.models.config import RunConfig
from features.experiments.writers import OutputWriter
from features.green.models.operator import GreenOperator
from features.green.service import GreenService
from features.isomorphism.service import IsomorphismService
from features.lattice.models.wired import WiredDomain
from features.lattice.service import LatticeService
from features.measures.models.params import ScaleParams
from features.measures.service import MeasuresService
from features.stats.models.verdict import Verdict
from features.stats.service import StatsService
from features.walk.models.profile import HoldingMode
from features.walk.service import WalkService


@dataclass
class RunContext:
    """Everything a command handler needs: its config, output writer, streams and services."""

    config: RunConfig
    writer: OutputWriter
    lattice: LatticeService = field(default_factory=LatticeService)
    greens: GreenService = field(default_factory=GreenService)
    walks: WalkService = field(default_factory=WalkService)
    stats: StatsService = field(default_factory=StatsService)
    summary: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self):
        self.dgff = DgffService(self.greens)
        self.measures = MeasuresService(self.greens)
        self.iso = IsomorphismService(self.walks, self.dgff)

    @cached_property
    def streams(self) -> StreamFactory:
        return StreamFactory(self.config.master_seed)

    @cached_property
    def threads(self) -> int:
        return resolve_threads(self.config.threads)

    @cached_property
    def domain(self) -> WiredDomain:
        wired = self.lattice.discretize(self.config.domain, self.config.N)
        self.lattice.validate(wired)
        return wired

    def green(self, domain: Optional[WiredDomain] = None) -> GreenOperator:
        if domain is None:
            return self._green
        return self.greens.solve_green(domain, self.config.backend)

    @cached_property
    def _green(self) -> GreenOperator:
        return self.greens.solve_green(self.domain, self.config.backend)

    @cached_property
    def params(self) -> ScaleParams:
        config = self.config
        return self.measures.scale_params(
            config.N, lam=config.lam, theta=config.theta, a_N=config.a, t_N=config.t
        )

    def holding_verdicts(self, verdicts: list[Verdict]) -> list[Verdict]:
        """
        Monte-Carlo verdicts whose targets assume exponential holding times. Visit-count runs
        only report them as diagnostic summary rows.
        """
        if self.config.mode is HoldingMode.EXPONENTIAL:
            return verdicts
        for verdict in verdicts:
            self.report(f"diagnostic:{verdict.check}", verdict.value)
        return []

    def report(self, name: str, value: float) -> None:
        """Informational number for the run summary CSV."""
        self.summary.append((name, float(value)))
