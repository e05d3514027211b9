"""
rmatrix-lab Serialization Module
JSON documents for matrices, block families, direct sums and grid maps.
All indices are written 1-based; scalars as [re_num, re_den, im_num, im_den].
"""

import json
from fractions import Fraction
from typing import Any, Dict, List

from exact import ExactScalar, GridPermutation, SparseSquareMatrix


def matrix_entries(x: SparseSquareMatrix) -> List[list]:
    """[[row, col, [re_num, re_den, im_num, im_den]], ...] in row-major order."""
    return [[r, c, value.to_json()] for (r, c), value in x.items()]


def matrix_to_json(x: SparseSquareMatrix) -> Dict[str, Any]:
    return {"dim": x.dim, "entries": matrix_entries(x)}


def block_family_to_json(family) -> Dict[str, Any]:
    """{"blocks": [{"n", "m", "entries"}, ...]} for the stored blocks, sorted by (n, m)."""
    return {
        "window": family.window,
        "blocks": [
            {"n": n, "m": m, "entries": matrix_entries(block)}
            for (n, m), block in sorted(family.blocks.items())
            if not block.is_zero()
        ],
    }


def direct_sum_to_json(element) -> Dict[str, Any]:
    """Same block schema as a block family, with "m" omitted."""
    return {
        "blocks": [
            {"n": n, "entries": matrix_entries(block)}
            for n, block in sorted(element.components.items())
        ]
    }


def grid_map_to_json(p: GridPermutation) -> List[list]:
    """[[source, image], ...] in lexicographic source order."""
    return [[list(source), list(image)] for source, image in p.items()]


def convert_to_serializable(obj):
    """Convert library values to JSON-serializable Python types."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, ExactScalar):
        return obj.to_json()
    if isinstance(obj, SparseSquareMatrix):
        return matrix_to_json(obj)
    if isinstance(obj, GridPermutation):
        return grid_map_to_json(obj)
    if hasattr(obj, "to_dict"):
        return convert_to_serializable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): convert_to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [convert_to_serializable(v) for v in obj]
    # For anything else, convert to string
    return str(obj)


def dumps(obj, **kwargs) -> str:
    """Compact JSON text; key order follows insertion order."""
    return json.dumps(convert_to_serializable(obj), separators=(",", ":"), **kwargs)
