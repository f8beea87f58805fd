"""Structured results shared by estimators, checks and verification suites."""

import json
import math
import re
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

FLOAT_FORMAT = ".17g"
FLOAT_TAG = "\u0000f17:"
_TAGGED = re.compile(r'"\\u0000f17:([^"]*)"')


def to_builtin(value: Any) -> Any:
    """Recursively convert numpy scalars/arrays into JSON-able Python values."""
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def _tag_floats(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _tag_floats(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_tag_floats(v) for v in value]
    if isinstance(value, float) and math.isfinite(value):
        return FLOAT_TAG + format(value, FLOAT_FORMAT)
    return value


def dumps_json(data: Any, indent: int = 2) -> str:
    """JSON text with every finite float written at 17 significant digits."""
    text = json.dumps(_tag_floats(to_builtin(data)), indent=indent)
    return _TAGGED.sub(r"\1", text)


class _Report(BaseModel):
    @field_validator("witness", mode="before", check_fields=False)
    @classmethod
    def _plain_witness(cls, v: Any) -> Any:
        return to_builtin(v) if v is not None else {}

    @field_validator("passed", mode="before", check_fields=False)
    @classmethod
    def _plain_bool(cls, v: Any) -> Any:
        return bool(v) if isinstance(v, np.bool_) else v

    def to_dict(self) -> Dict[str, Any]:
        return to_builtin(self.model_dump(mode="python", exclude_none=True))

    def to_json(self, indent: int = 2) -> str:
        return dumps_json(self.to_dict(), indent=indent)


class CheckReport(_Report):
    """One inequality or identity check: worst witness, signed margin, verdict."""

    check: str
    passed: bool
    margin: float
    tolerance: float
    witness: Dict[str, Any] = Field(default_factory=dict)
    case: Optional[str] = None
    l: Optional[int] = None
    alpha: Optional[float] = None
    numerator: Optional[float] = None
    denominator: Optional[float] = None
    ratio: Optional[float] = None
    tags: List[str] = Field(default_factory=list)

    @property
    def counted(self) -> bool:
        """Whether this case takes part in the pass/fail aggregate."""
        return "hypothesis-unverified" not in self.tags


class RatioReport(_Report):
    """Lower bound on a squared type constant: K^2 >= numerator / denominator."""

    check: str
    numerator: float
    denominator: float
    ratio: float
    sqrt_ratio: float
    witness: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    budget: Optional[int] = None

    @classmethod
    def from_sums(cls, check: str, numerator: float, denominator: float, **kwargs: Any) -> "RatioReport":
        """Build a report; callers guarantee denominator > 0."""
        ratio = float(numerator) / float(denominator)
        return cls(
            check=check,
            numerator=float(numerator),
            denominator=float(denominator),
            ratio=ratio,
            sqrt_ratio=math.sqrt(max(ratio, 0.0)),
            **kwargs,
        )


class SuiteReport(_Report):
    """Aggregate of one verification suite over a corpus."""

    suite: str
    corpus: Dict[str, Any] = Field(default_factory=dict)
    cases: List[CheckReport] = Field(default_factory=list)
    passed: bool = True
    worst_margin: Optional[float] = None
    notes: List[str] = Field(default_factory=list)

    @classmethod
    def from_cases(cls, suite: str, cases: List[CheckReport], corpus: Optional[Dict[str, Any]] = None,
                   notes: Optional[List[str]] = None) -> "SuiteReport":
        """Aggregate fails iff a counted case fails; hypothesis-unverified cases are reported only."""
        counted = [c for c in cases if c.counted]
        passed = all(c.passed for c in counted)
        worst = min((c.margin for c in counted), default=None)
        return cls(
            suite=suite,
            corpus=to_builtin(corpus or {}),
            cases=cases,
            passed=passed,
            worst_margin=worst,
            notes=notes or [],
        )


class CorpusReport(_Report):
    """Everything one run_corpus invocation produced, in config order."""

    config: Dict[str, Any] = Field(default_factory=dict)
    suites: List[SuiteReport] = Field(default_factory=list)
    passed: bool = True

    @classmethod
    def from_suites(cls, config: Dict[str, Any], suites: List[SuiteReport]) -> "CorpusReport":
        return cls(config=to_builtin(config), suites=suites, passed=all(s.passed for s in suites))
