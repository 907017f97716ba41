"""Scenario runner and versioned JSON reports.

A scenario is an ordered list of named checks.  Every check runs (nothing
short-circuits) and yields pass, fail or inconclusive together with the
witness data that justified the verdict.
"""
from __future__ import annotations

import json
import logging
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from .diagcubic import CertificateFailure, ProjPoint
from .localfields import PrecisionError
from .weierstrass import ECPoint, InconclusiveError, SquareClassPair

log = logging.getLogger(__name__)

SCHEMA = "lgdiv-report/1"
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
PROVENANCE = ("PAPER", "TRIVIAL", "DERIVED")


@dataclass
class Config:
    seed: int = 0
    height: int = 10**4
    precision: int = 12
    legendre_bound: int = 10**4
    corollary_bound: int = 10**4
    spot_checks: int = 1000
    dz_roots: tuple = (1365, 1430, -2795)
    dz_point: tuple = (341, 59136)
    creutz_roots: tuple = (0, -80, -205)
    selmer_abc: tuple = (1, 3, 10)
    selmer_point: tuple = (-11, 3, 5)
    selmer_image: tuple = (1523698559, -2736572309, 826803945)
    wc_dlist: tuple = (138, 165, 300, 354)
    remark_dlist: tuple = (51, 132, 159, 213, 219, 246, 267, 321, 348, 402, 435)
    remark_height: int = 1000

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        clean = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
        return cls(**clean)

    @classmethod
    def load(cls, path) -> "Config":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def replace(self, **overrides) -> "Config":
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return Config.from_dict(data)


@dataclass
class Step:
    name: str
    check: Callable[[Config], tuple]
    expected: str
    provenance: str
    anchor: str | None = None
    evidence_only: bool = False

    def __post_init__(self):
        if self.provenance not in PROVENANCE:
            raise ValueError(f"bad provenance tag {self.provenance!r}")
        if self.provenance == "PAPER" and not self.anchor:
            raise ValueError(f"paper-tagged step {self.name!r} needs an anchor")


@dataclass
class Scenario:
    id: str
    description: str
    steps: list[Step]
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        names = [s.name for s in self.steps]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate step names in {self.id}")


@dataclass
class StepResult:
    name: str
    status: str
    expected: str
    provenance: str
    anchor: str | None
    witness: dict
    detail: str
    elapsed: float
    evidence_only: bool = False

    def to_dict(self, canonical: bool = False) -> dict:
        out = {
            "name": self.name, "status": self.status, "expected": self.expected,
            "provenance": self.provenance, "witness": self.witness, "detail": self.detail,
        }
        if self.anchor:
            out["anchor"] = self.anchor
        if self.evidence_only:
            out["evidence_only"] = True
        if not canonical:
            out["elapsed"] = round(self.elapsed, 6)
        return out


@dataclass
class Report:
    scenario: str
    description: str
    steps: list[StepResult]
    notes: list[str]
    elapsed: float

    @property
    def status(self) -> str:
        statuses = {s.status for s in self.steps}
        if FAIL in statuses:
            return FAIL
        if INCONCLUSIVE in statuses:
            return INCONCLUSIVE
        return PASS

    def to_dict(self, canonical: bool = False) -> dict:
        out = {
            "scenario": self.scenario, "description": self.description,
            "status": self.status, "notes": self.notes,
            "steps": [s.to_dict(canonical) for s in self.steps],
        }
        if not canonical:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def summary(self) -> str:
        lines = [f"[{self.status.upper():>12}] {self.scenario}: {self.description}"]
        for s in self.steps:
            tag = " (evidence)" if s.evidence_only else ""
            lines.append(f"    {s.status:<12} {s.name}{tag}: {s.detail}")
        return "\n".join(lines)


def jsonable(obj):
    """Turn witness data into plain JSON values."""
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, float):
        return round(obj, 6)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, SquareClassPair):
        return [obj.c1, obj.c2]
    if isinstance(obj, ProjPoint):
        return list(obj.coords)
    if isinstance(obj, ECPoint):
        return "O" if obj.is_infinity else [str(obj.x), str(obj.y)]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(x) for x in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=lambda x: json.dumps(x, sort_keys=True))
        return items
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return repr(obj)


def run_step(step: Step, config: Config) -> StepResult:
    t0 = time.perf_counter()
    witness: dict = {}
    try:
        ok, witness, detail = step.check(config)
        status = PASS if ok else FAIL
    except (InconclusiveError, PrecisionError) as exc:
        status, detail = INCONCLUSIVE, f"inconclusive: {exc}"
    except CertificateFailure as exc:
        status, detail = FAIL, f"certificate failure: {exc}"
    except Exception as exc:  # a crashing check is a failed check
        log.debug("step %s raised\n%s", step.name, traceback.format_exc())
        status, detail = FAIL, f"{type(exc).__name__}: {exc}"
    return StepResult(step.name, status, step.expected, step.provenance, step.anchor,
                      jsonable(witness), detail, time.perf_counter() - t0, step.evidence_only)


def execute(scenario: Scenario, config: Config) -> Report:
    t0 = time.perf_counter()
    results = [run_step(step, config) for step in scenario.steps]
    return Report(scenario.id, scenario.description, results, list(scenario.notes),
                  time.perf_counter() - t0)


def run_scenario(scenario_id: str, config: Config | None = None, **overrides) -> Report:
    from .scenarios import build_registry

    config = (config or Config()).replace(**overrides)
    registry = build_registry(config)
    if scenario_id not in registry:
        raise KeyError(f"unknown scenario {scenario_id!r}; known: {sorted(registry)}")
    return execute(registry[scenario_id], config)


def run_all(config: Config | None = None, jobs: int = 1) -> tuple[list[Report], int]:
    """Run every registered scenario; return the reports and the exit code."""
    from .scenarios import build_registry

    config = config or Config()
    scenarios = list(build_registry(config).values())
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            reports = list(ex.map(lambda s: execute(s, config), scenarios))
    else:
        reports = [execute(s, config) for s in scenarios]
    return reports, exit_code(reports)


def exit_code(reports) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses:
        return 1
    if INCONCLUSIVE in statuses:
        return 2
    return 0


def report_document(reports, config: Config, canonical: bool = False) -> dict:
    return {
        "schema": SCHEMA,
        "config": jsonable(asdict(config)),
        "status": {0: PASS, 1: FAIL, 2: INCONCLUSIVE}[exit_code(reports)],
        "reports": [r.to_dict(canonical) for r in reports],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
