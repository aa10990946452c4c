"""Cross-method entropy report for one map.

Every number carries its method and direction.  The rigorous horseshoe lower
bound is compared against the lap-growth estimate, which comes from exact counts;
a disagreement beyond the tolerance is flagged in the verdict, never raised.
Bowen counts at a fixed eps and small n are biased low, so they are reported
but not used to judge consistency.
"""
from __future__ import annotations

import dataclasses
import json
from typing import Optional

from . import __version__
from .config import DEFAULT_COVER, RunConfig, breakpoint_budget
from .covers import CoCompactCover, CoCompactSet, CoverEntropySeries, cover_entropy_sequence, parse_cover_spec
from .entropy import CountSeries, EntropyEstimate, convert_log, hd_estimate, lap_estimate, lap_series
from .horseshoe import HorseshoeCertificate, entropy_lower_bound, search
from .intervals import Interval, IntervalUnion
from .plmap import PLMap, classify_ends


def default_cover() -> CoCompactCover:
    return CoCompactCover(tuple(
        CoCompactSet(IntervalUnion(Interval(lo, hi) for lo, hi in pieces)) for pieces in DEFAULT_COVER
    ))


def load_cover(source: Optional[str]) -> CoCompactCover:
    if source is None:
        return default_cover()
    with open(source, encoding="utf-8") as fh:
        return parse_cover_spec(fh.read())


def config_echo(config: RunConfig) -> dict:
    out = dataclasses.asdict(config)
    out["budget"] = breakpoint_budget(config.budget)
    return json.loads(json.dumps(out))  # tuples -> lists


@dataclasses.dataclass
class EntropyReport:
    map: PLMap
    config: RunConfig
    estimates: dict[str, EntropyEstimate]
    certificate: Optional[HorseshoeCertificate]
    lap_series: CountSeries
    cover_series: CoverEntropySeries
    checks: list[dict]

    @property
    def consistent(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_json(self) -> dict:
        base = self.config.log_base
        return {
            "version": __version__,
            "map": self.map.to_json(),
            "end_class": classify_ends(self.map).value,
            "config": config_echo(self.config),
            "log_base": base,
            "estimates": {k: (v.to_json(base) if v is not None else None) for k, v in self.estimates.items()},
            "certificate": self.certificate.to_json() if self.certificate else None,
            "series": {
                "laps": self.lap_series.to_json(),
                "cover": {"N_n": self.cover_series.counts, "direction": self.cover_series.direction,
                          "params": self.cover_series.params},
            },
            "verdict": {"consistent": self.consistent, "checks": [
                {**c, "lower": convert_log(c["lower"], base), "value": convert_log(c["value"], base)}
                for c in self.checks]},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def entropy_report(f: PLMap, config: RunConfig) -> EntropyReport:
    budget = config.budget
    estimates: dict[str, Optional[EntropyEstimate]] = {}

    cert = search(f, config.horseshoe_n_max, None, budget)
    estimates["horseshoe"] = entropy_lower_bound(cert) if cert else None

    laps = lap_series(f, config.lap_n_max, budget)
    estimates["lap"] = lap_estimate(laps)

    U = load_cover(config.cover_source)
    cover = cover_entropy_sequence(f, U, config.cover_n_max, config.cover_budget)
    estimates["cover"] = EntropyEstimate(max(0.0, cover.estimate), "cover", "upper-bound",
                                         {"N_n": cover.counts, "scope": "this cover only"})

    windows = [Interval(lo, hi) for lo, hi in config.windows]
    for metric in config.metrics:
        estimates[f"bowen-{metric}"] = hd_estimate(f, metric, windows, config.eps,
                                                   config.bowen_n_max, config.grid_step)

    checks = []
    tol = config.tolerance
    if cert is not None:
        lower = estimates["horseshoe"].value
        checks.append({"check": "horseshoe <= lap", "lower": lower,
                       "value": estimates["lap"].value,
                       "ok": lower <= estimates["lap"].value + tol})
    return EntropyReport(f, config, estimates, cert, laps, cover, checks)
