"""Outcome records shared by the certification and congruence checks."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional


def _valuation_str(v):
    if v is None:
        return None
    return "inf" if v == math.inf else str(int(v))


@dataclass(frozen=True)
class CertReport:
    """Result of a finite-order check.

    A failing report always names the first offending coefficient index.
    Passing reports are evidence up to ``order`` only.
    """

    passed: bool
    order: int
    witness_index: Optional[int] = None
    witness_valuation: Optional[float] = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and self.witness_index is None:
            raise ValueError("a failing CertReport needs a witness index")

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["order"] = str(self.order)
        if self.witness_index is not None:
            d["witness_index"] = str(self.witness_index)
        d["witness_valuation"] = _valuation_str(self.witness_valuation)
        d["extra"] = {k: _jsonable(v) for k, v in self.extra.items()}
        return d


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "inf" if v == math.inf else repr(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "to_dict"):
        return v.to_dict()
    return str(v)
