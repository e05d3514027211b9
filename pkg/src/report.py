"""
rmatrix-lab Verification Reports
Result objects returned by every verification operation.
"""

import time
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
INCONSISTENT = "inconsistent"
ERROR = "error"


@dataclass
class Counterexample:
    """The first violating instance of a checked identity."""
    description: str
    indices: Dict[str, Any] = field(default_factory=dict)
    left: Any = None
    right: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "description": self.description,
            "indices": self.indices,
            "left": self.left,
            "right": self.right,
        }


@dataclass
class VerificationReport:
    """Outcome of one check at one parameter tuple."""
    check_name: str
    params: Dict[str, Any]
    passed: bool
    counterexample: Optional[Counterexample] = None
    elapsed: float = 0.0
    status: str = PASS
    # Verdict of each independent path (e.g. permutation / matrix)
    paths: Dict[str, bool] = field(default_factory=dict)
    instances: int = 0
    error: Optional[str] = None

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            "check": self.check_name,
            "params": self.params,
            "pass": self.passed,
            "status": self.status,
            "paths": self.paths,
            "instances": self.instances,
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }
        if self.error:
            data["error"] = self.error
        if include_timing:
            data["elapsed"] = round(self.elapsed, 6)
        return data

    def describe(self) -> str:
        """One-line text rendering."""
        params = ",".join(f"{k}={v}" for k, v in self.params.items())
        line = f"[{self.status.upper():>12}] {self.check_name}({params}) {self.instances} instances in {self.elapsed:.3f}s"
        if self.error:
            line += f" :: {self.error}"
        elif self.counterexample:
            line += f" :: {self.counterexample.description} {self.counterexample.indices}"
        return line


class Timer:
    """Wall-clock stopwatch for report elapsed times."""

    def __init__(self):
        self.started = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started


def single_path(check_name: str, params: Dict[str, Any], timer: Timer,
                failure: Optional[Counterexample], instances: int = 0) -> VerificationReport:
    """Report for a check that has one verification path."""
    report = VerificationReport(
        check_name=check_name,
        params=params,
        passed=failure is None,
        counterexample=failure,
        elapsed=timer.elapsed,
        status=PASS if failure is None else FAIL,
        instances=instances,
    )
    _log(report)
    return report


def dual_path(check_name: str, params: Dict[str, Any], timer: Timer,
              failures: Dict[str, Optional[Counterexample]], instances: int = 0,
              broken_link: Optional[Counterexample] = None) -> VerificationReport:
    """Report for a check decided independently along several paths.

    All paths passing is a pass; all failing is a failure carrying the first
    path's counterexample; any disagreement is an internal-consistency failure.
    `broken_link` reports a failed link between the paths (e.g. a permutation
    whose matrix is not the matrix-level operator) and is also inconsistent.
    """
    paths = {name: failure is None for name, failure in failures.items()}
    failed = [name for name, ok in paths.items() if not ok]

    if broken_link is not None:
        status = INCONSISTENT
        counterexample = Counterexample(
            description=f"internal-consistency failure: {broken_link.description}",
            indices=broken_link.indices,
            left=broken_link.left,
            right=broken_link.right,
        )
    elif not failed:
        status, counterexample = PASS, None
    elif len(failed) == len(paths):
        status, counterexample = FAIL, failures[failed[0]]
    else:
        status = INCONSISTENT
        first = failures[failed[0]]
        counterexample = Counterexample(
            description=f"internal-consistency failure: {', '.join(failed)} failed while "
                        f"{', '.join(n for n in paths if n not in failed)} passed; {first.description}",
            indices=first.indices,
            left=first.left,
            right=first.right,
        )

    report = VerificationReport(
        check_name=check_name,
        params=params,
        passed=status == PASS,
        counterexample=counterexample,
        elapsed=timer.elapsed,
        status=status,
        paths=paths,
        instances=instances,
    )
    _log(report)
    return report


def refused(check_name: str, params: Dict[str, Any], error: Exception) -> VerificationReport:
    """Report for a check that was not run (resource cap or bad parameters)."""
    report = VerificationReport(
        check_name=check_name,
        params=params,
        passed=False,
        counterexample=Counterexample(description=str(error), indices=dict(params)),
        status=ERROR,
        error=str(error),
    )
    logger.error(f"{check_name}{params} refused: {error}")
    return report


def _log(report: VerificationReport):
    if report.passed:
        logger.debug(report.describe())
    else:
        logger.warning(report.describe())
