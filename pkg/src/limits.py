"""
rmatrix-lab resource limits.
Caps on matrix sizes and per-suite products, read from the `limits` section
of the configuration and the RMATRIX_MAX_CELLS environment variable.
"""

import os
import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

from errors import ResourceLimitError

logger = logging.getLogger(__name__)

MAX_CELLS_ENV = "RMATRIX_MAX_CELLS"


@dataclass(frozen=True)
class Limits:
    """Resource caps shared by every verification path."""
    # Dense-equivalent cells (dim * dim) of any matrix the library builds
    max_cells: int = 1 << 20
    # Largest a*b*c accepted by the coassociativity checker
    coassoc_max_product: int = 512
    # Largest n accepted by the counit law
    counit_max_n: int = 64
    # Largest dimension of H^{(x)k} for the braid suites
    braid_max_dim: int = 4096
    # Largest n_max accepted by the block-family R Delta R* check
    universal_r_max_n: int = 32

    @classmethod
    def from_config(cls, config: Optional[Dict[str, Any]] = None) -> "Limits":
        """Build limits from a config dict; the environment overrides max_cells."""
        section = (config or {}).get("limits", {}) or {}
        limits = cls(
            max_cells=int(section.get("max_cells", cls.max_cells)),
            coassoc_max_product=int(section.get("coassoc_max_product", cls.coassoc_max_product)),
            counit_max_n=int(section.get("counit_max_n", cls.counit_max_n)),
            braid_max_dim=int(section.get("braid_max_dim", cls.braid_max_dim)),
            universal_r_max_n=int(section.get("universal_r_max_n", cls.universal_r_max_n)),
        )

        override = os.environ.get(MAX_CELLS_ENV)
        if override:
            try:
                limits = replace(limits, max_cells=int(override))
                logger.debug(f"{MAX_CELLS_ENV} overrides max_cells: {limits.max_cells}")
            except ValueError:
                logger.warning(f"Ignoring non-integer {MAX_CELLS_ENV}={override!r}")
        return limits

    def check_dim(self, dim: int, what: str = "matrix"):
        """Refuse matrices whose dense equivalent exceeds max_cells."""
        if dim * dim > self.max_cells:
            raise ResourceLimitError(f"{what} cells (max_cells)", dim * dim, self.max_cells)

    def check_coassoc(self, product: int):
        if product > self.coassoc_max_product:
            raise ResourceLimitError("coassociativity product a*b*c", product, self.coassoc_max_product)

    def check_counit(self, n_max: int):
        if n_max > self.counit_max_n:
            raise ResourceLimitError("counit n_max", n_max, self.counit_max_n)

    def check_braid(self, dim: int):
        if dim > self.braid_max_dim:
            raise ResourceLimitError("braid tensor-power dimension", dim, self.braid_max_dim)

    def check_universal_r(self, n_max: int):
        if n_max > self.universal_r_max_n:
            raise ResourceLimitError("universal R n_max", n_max, self.universal_r_max_n)


_active = Limits.from_config({})


def get_limits() -> Limits:
    """Limits currently in force for this process."""
    return _active


def set_limits(limits: Limits):
    """Install limits for this process (the runner does this in every worker)."""
    global _active
    _active = limits
