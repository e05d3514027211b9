"""
rmatrix-lab Suite Runner
Expands the selected suites into independent check tasks, runs them
(optionally on a process pool), and folds the reports into an exit code.
"""

import re
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, IO, List, Optional, Sequence, Tuple

import psutil

from errors import DomainError, RMatrixError
from limits import Limits, get_limits, set_limits
from monoid import check_wcs_base, check_wcs_coassoc, check_wcs_unit, coassoc_triples
from bialgebra import (
    delta, unit_element, verify_counit_law, verify_delta_homomorphism, verify_noncocommutativity,
)
from rmatrix import (
    IdentitySource, InvertedSource, RSource, build_P, build_P_right, build_Q, build_Q_right,
    chi_table, standard_source, verify_chi_dual_definition, verify_counit_r,
    verify_global_triangularity, verify_hexagon_left, verify_hexagon_right, verify_intertwiner,
    verify_phi_coherence, verify_pq_equal, verify_triangularity, verify_unitarity,
    verify_universal_r, verify_ybe,
)
from braidrep import (
    verify_braid_relations, verify_flip_conjugation, verify_involution, verify_symmetric_group,
)
from report import ERROR, FAIL, INCONSISTENT, VerificationReport, refused
from serialization import block_family_to_json, dumps, grid_map_to_json, matrix_to_json

logger = logging.getLogger(__name__)

SUITES = ("wcs", "bialgebra", "intertwiner", "hexagons", "triangular", "ybe", "counit", "braid")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# Default ranges
DOUBLE_MAX = 12
TRIPLE_MAX = 6


# ================== Configuration ==================

@dataclass
class SuiteConfig:
    """What to run and how: ranges, suites, output format and parallelism."""
    max_n: Optional[int] = None
    max_m: Optional[int] = None
    max_l: Optional[int] = None
    suites: Tuple[str, ...] = SUITES
    output: str = "text"
    jobs: int = 1
    wcs_max_product: int = 64
    wcs_unit_max: int = 16
    counit_law_max_n: int = 16
    homomorphism_max_n: int = 6
    counit_k_max: int = 32
    braid_spaces: List[List[int]] = field(default_factory=lambda: [[1, 2], [2, 3], [1, 2, 3]])
    braid_power: int = 3
    symmetric_spaces: List[List[int]] = field(default_factory=lambda: [[1, 2]])
    symmetric_power: int = 4
    involution_spaces: List[List[int]] = field(default_factory=lambda: [[1], [2, 3], [1, 2, 3, 4, 5]])
    source: RSource = standard_source

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise DomainError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
        if self.output not in ("text", "json"):
            raise DomainError(f"output must be 'text' or 'json', got {self.output!r}")
        for name in ("max_n", "max_m", "max_l"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 1):
                raise DomainError(f"{name} must be a positive integer, got {value!r}")
        if self.jobs < 0:
            raise DomainError(f"jobs must be >= 0, got {self.jobs}")
        self.suites = tuple(self.suites)

    @classmethod
    def from_config(cls, config: Dict[str, Any]) -> "SuiteConfig":
        """Build from the `suites` and `output` sections of the loaded YAML config."""
        suites_config = config.get("suites", {}) or {}
        output_config = config.get("output", {}) or {}
        kwargs = {
            key: suites_config[key]
            for key in (
                "max_n", "max_m", "max_l", "wcs_max_product", "wcs_unit_max", "counit_law_max_n",
                "homomorphism_max_n", "counit_k_max", "braid_spaces", "braid_power",
                "symmetric_spaces", "symmetric_power", "involution_spaces",
            )
            if suites_config.get(key) is not None
        }
        if suites_config.get("selected") is not None:
            kwargs["suites"] = tuple(suites_config["selected"])
        return cls(
            output=output_config.get("format", "text"),
            jobs=int(output_config.get("jobs", 0)),
            **kwargs,
        )

    def double_range(self) -> Tuple[int, int]:
        return self.max_n or DOUBLE_MAX, self.max_m or DOUBLE_MAX

    def triple_range(self) -> Tuple[int, int, int]:
        return self.max_n or TRIPLE_MAX, self.max_m or TRIPLE_MAX, self.max_l or TRIPLE_MAX

    def resolved_jobs(self) -> int:
        """jobs = 0 means one worker per logical CPU."""
        if self.jobs == 0:
            return psutil.cpu_count(logical=True) or 1
        return self.jobs


def parse_inject(value: Optional[str]) -> RSource:
    """'identity-r' or 'inverse-chi:N,M' -> the substituted R; None -> the standard R."""
    if not value:
        return standard_source
    if value == "identity-r":
        return IdentitySource()
    match = re.fullmatch(r"inverse-chi:(\d+),(\d+)", value)
    if match:
        return InvertedSource(int(match.group(1)), int(match.group(2)))
    raise DomainError(f"unknown injection {value!r}; use 'identity-r' or 'inverse-chi:N,M'")


# ================== Tasks ==================

# name -> (check, accepts an R source)
CHECKS: Dict[str, Tuple[Callable[..., VerificationReport], bool]] = {
    "wcs_base": (check_wcs_base, False),
    "wcs_unit": (check_wcs_unit, False),
    "wcs_coassoc": (check_wcs_coassoc, False),
    "counit_law": (verify_counit_law, False),
    "delta_homomorphism": (verify_delta_homomorphism, False),
    "noncocommutativity": (verify_noncocommutativity, False),
    "intertwiner": (verify_intertwiner, True),
    "chi_dual_definition": (verify_chi_dual_definition, False),
    "universal_r": (verify_universal_r, True),
    "hexagon_left": (verify_hexagon_left, True),
    "hexagon_right": (verify_hexagon_right, True),
    "p_equals_q": (verify_pq_equal, False),
    "phi_coherence": (verify_phi_coherence, False),
    "triangularity": (verify_triangularity, True),
    "unitarity": (verify_unitarity, True),
    "global_triangularity": (verify_global_triangularity, True),
    "ybe": (verify_ybe, True),
    "counit_r": (verify_counit_r, True),
    "braid_relations": (verify_braid_relations, True),
    "involution": (verify_involution, True),
    "flip_conjugation": (verify_flip_conjugation, True),
    "symmetric_group": (verify_symmetric_group, True),
}


@dataclass(frozen=True)
class Task:
    check: str
    args: Tuple


def _pairs(n_max: int, m_max: int):
    return ((n, m) for n in range(1, n_max + 1) for m in range(1, m_max + 1))


def _triples(n_max: int, m_max: int, l_max: int):
    return ((n, m, l) for n in range(1, n_max + 1) for m in range(1, m_max + 1) for l in range(1, l_max + 1))


def suite_tasks(suite: str, config: SuiteConfig) -> List[Task]:
    """Parameter tuples of one suite, in emission order."""
    n2, m2 = config.double_range()
    n3, m3, l3 = config.triple_range()

    if suite == "wcs":
        return (
            [Task("wcs_base", ())]
            + [Task("wcs_unit", (a,)) for a in range(1, config.wcs_unit_max + 1)]
            + [Task("wcs_coassoc", t) for t in coassoc_triples(config.wcs_max_product)]
        )
    if suite == "bialgebra":
        return [
            Task("noncocommutativity", ()),
            Task("counit_law", (config.counit_law_max_n,)),
            Task("delta_homomorphism", (config.homomorphism_max_n,)),
        ]
    if suite == "intertwiner":
        return (
            [Task("intertwiner", p) for p in _pairs(n2, m2)]
            + [Task("chi_dual_definition", p) for p in _pairs(n2, m2)]
            + [Task("universal_r", (max(n2, m2),))]
        )
    if suite == "hexagons":
        triples = list(_triples(n3, m3, l3))
        return (
            [Task("hexagon_left", t) for t in triples]
            + [Task("hexagon_right", t) for t in triples]
            + [Task("p_equals_q", t) for t in triples]
            + [Task("phi_coherence", t) for t in triples]
        )
    if suite == "triangular":
        return (
            [Task("triangularity", p) for p in _pairs(n2, m2)]
            + [Task("unitarity", p) for p in _pairs(n2, m2)]
            + [Task("global_triangularity", (max(n2, m2),))]
        )
    if suite == "ybe":
        return [Task("ybe", t) for t in _triples(n3, m3, l3)]
    if suite == "counit":
        return [Task("counit_r", (config.counit_k_max,))]
    if suite == "braid":
        tasks = []
        for dims in config.braid_spaces:
            tasks.append(Task("braid_relations", (tuple(dims), config.braid_power)))
            tasks.append(Task("flip_conjugation", (tuple(dims),)))
        for dims in config.symmetric_spaces:
            tasks.append(Task("braid_relations", (tuple(dims), config.symmetric_power)))
            tasks.append(Task("symmetric_group", (tuple(dims), config.symmetric_power)))
        tasks.extend(Task("involution", (tuple(dims),)) for dims in config.involution_spaces)
        return tasks
    raise DomainError(f"unknown suite {suite!r}")


def run_task(task: Task, source: RSource = standard_source) -> VerificationReport:
    """Run one check; library errors become an error report instead of propagating."""
    check, takes_source = CHECKS[task.check]
    kwargs = {"source": source} if takes_source else {}
    try:
        return check(*task.args, **kwargs)
    except RMatrixError as e:
        params = {f"arg{i}": list(a) if isinstance(a, tuple) else a for i, a in enumerate(task.args)}
        return refused(task.check, params, e)


def _init_worker(limits: Limits):
    set_limits(limits)


# ================== Running ==================

def exit_code_for(reports: Sequence[VerificationReport]) -> int:
    """0 if every report passes, 2 if any check was refused, else 1."""
    if any(r.status == ERROR for r in reports):
        return EXIT_USAGE
    if any(r.status in (FAIL, INCONSISTENT) for r in reports):
        return EXIT_FAILURE
    return EXIT_OK


def run_suite(config: SuiteConfig) -> Tuple[List[VerificationReport], int]:
    """Run every selected suite; reports come back in task order whatever the parallelism."""
    tasks: List[Task] = []
    for suite in config.suites:
        suite_list = suite_tasks(suite, config)
        logger.info(f"Suite {suite}: {len(suite_list)} task(s)")
        tasks.extend(suite_list)

    if not tasks:
        logger.info("No suites selected")
        return [], EXIT_OK

    jobs = min(config.resolved_jobs(), len(tasks))
    if jobs > 1:
        logger.info(f"Running {len(tasks)} task(s) on {jobs} worker process(es)")
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(get_limits(),)) as pool:
            reports = list(pool.map(run_task, tasks, [config.source] * len(tasks)))
    else:
        logger.info(f"Running {len(tasks)} task(s) in-process")
        reports = [run_task(task, config.source) for task in tasks]

    code = exit_code_for(reports)
    passed = sum(1 for r in reports if r.passed)
    logger.info(f"{passed}/{len(reports)} check(s) passed, exit code {code}")
    return reports, code


def emit(reports: Sequence[VerificationReport], output: str, stream: IO[str]):
    """Write reports as text lines or as one JSON object per line."""
    for report in reports:
        if output == "json":
            stream.write(dumps(report.to_dict()) + "\n")
        else:
            stream.write(report.describe() + "\n")
    if output == "text":
        failed = [r for r in reports if not r.passed]
        stream.write(f"{len(reports) - len(failed)}/{len(reports)} passed\n")
    stream.flush()


# ================== Dumps ==================

_DUMP_PATTERN = re.compile(r"^\s*(chi|rmatrix|delta|P|Q|Pright|Qright)\s*\(\s*([\d\s,]*)\)\s*$")
_DUMP_ARITY = {"chi": 2, "rmatrix": 2, "delta": 3, "P": 3, "Q": 3, "Pright": 3, "Qright": 3}
_COMPOSITES = {"P": build_P, "Q": build_Q, "Pright": build_P_right, "Qright": build_Q_right}


def parse_dump(text: str) -> Tuple[str, Tuple[int, ...]]:
    """'chi(2,3)' -> ('chi', (2, 3))."""
    match = _DUMP_PATTERN.match(text)
    if not match:
        raise DomainError(
            f"cannot parse dump object {text!r}; expected chi(n,m), rmatrix(n,m), delta(n,i,j), "
            "P(n,m,l), Q(n,m,l), Pright(n,m,l) or Qright(n,m,l)"
        )
    name = match.group(1)
    args = tuple(int(a) for a in match.group(2).replace(" ", "").split(",") if a)
    if len(args) != _DUMP_ARITY[name]:
        raise DomainError(f"{name} takes {_DUMP_ARITY[name]} indices, got {len(args)}")
    if any(a < 1 for a in args):
        raise DomainError(f"indices are 1-based, got {args}")
    return name, args


def dump(text: str, source: RSource = standard_source) -> Dict[str, Any]:
    """Deterministic JSON document for one structural object."""
    name, args = parse_dump(text)
    if name == "chi":
        n, m = args
        perm = chi_table(n, m)
        return {"object": "chi", "n": n, "m": m, "pairs": grid_map_to_json(perm), "order": perm.order()}
    if name == "rmatrix":
        n, m = args
        block = source(n, m)
        return {
            "object": "rmatrix", "n": n, "m": m,
            "permutation": grid_map_to_json(block.perm),
            "matrix": matrix_to_json(block.matrix),
        }
    if name == "delta":
        n, i, j = args
        return {"object": "delta", "unit": [n, i, j], **block_family_to_json(delta(unit_element(n, i, j)))}
    n, m, l = args
    perm = _COMPOSITES[name](n, m, l, source)
    return {"object": name, "n": n, "m": m, "l": l, "pairs": grid_map_to_json(perm)}
