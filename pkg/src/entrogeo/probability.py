"""Finite probability distributions and the constructions entropies quantify over.

A distribution on W outcomes is a vector p = (p_1, ..., p_W) with p_i >= 0 and
sum p_i = 1.  Validation is strict and never renormalizes: a vector either is a
distribution at the stated tolerance or construction fails.  The module also
provides the product p (x) q (independent joint, row-major), zero-padding
expansion, convex mixing, and JSON/CSV loading for the CLI.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import InitVar, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import IndexOutOfRange, LengthMismatch, NegativeWeight, SumNotOne

#: |sum(p) - 1| allowed when constructing in memory.
SIMPLEX_TOL = 1e-12

#: Default tolerance for distributions read from files (round-trips lose digits).
FILE_TOL = 1e-9


@dataclass(frozen=True)
class ProbDist:
    """A probability vector, validated at construction.

    Weights are stored exactly as given (as float64), never renormalized.
    The array is frozen, so instances are safe to share between threads.
    """

    weights: np.ndarray
    tol: InitVar[float] = SIMPLEX_TOL

    def __post_init__(self, tol: float) -> None:
        w = np.array(self.weights, dtype=float, copy=True).reshape(-1)
        if w.size == 0:
            raise LengthMismatch("a distribution needs at least one outcome")
        if not np.all(np.isfinite(w)):
            raise NegativeWeight("weights must be finite")
        if np.any(w < 0.0):
            raise NegativeWeight(f"negative weight at index {int(np.argmin(w))}")
        deviation = abs(float(w.sum()) - 1.0)
        if deviation > tol:
            raise SumNotOne(deviation, tol)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        """Number of outcomes W."""
        return int(self.weights.size)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class PositiveProbDist(ProbDist):
    """A distribution with every weight strictly positive."""

    def __post_init__(self, tol: float) -> None:
        super().__post_init__(tol)
        if np.any(self.weights <= 0.0):
            raise NegativeWeight(
                f"weight {float(self.weights.min())} at index "
                f"{int(np.argmin(self.weights))} is not strictly positive"
            )


def validate(weights: Sequence[float] | np.ndarray, tol: float = SIMPLEX_TOL) -> ProbDist:
    """Validate a weight sequence at tolerance `tol` and wrap it."""
    return ProbDist(np.asarray(weights, dtype=float), tol)


def uniform(size: int) -> ProbDist:
    """The uniform distribution on `size` outcomes."""
    if size < 1:
        raise IndexOutOfRange(f"need at least one outcome, got {size}")
    return ProbDist(np.full(size, 1.0 / size))


def certainty(size: int, index: int) -> ProbDist:
    """The distribution concentrated on outcome `index` (1-based)."""
    if size < 1:
        raise IndexOutOfRange(f"need at least one outcome, got {size}")
    if not 1 <= index <= size:
        raise IndexOutOfRange(f"index {index} outside 1..{size}")
    w = np.zeros(size)
    w[index - 1] = 1.0
    return ProbDist(w)


def product(p: ProbDist, q: ProbDist) -> ProbDist:
    """Independent joint distribution p (x) q, flattened row-major.

    Entry (i-1)*len(q) + j holds p_i * q_j, so the blocks of the result walk
    through q for each fixed outcome of p.
    """
    return ProbDist(np.outer(p.weights, q.weights).reshape(-1))


def expand(p: ProbDist) -> ProbDist:
    """Append one zero-probability outcome (the expansibility construction)."""
    return ProbDist(np.append(p.weights, 0.0))


def mix(p: ProbDist, q: ProbDist, lam: float) -> ProbDist:
    """Convex combination lam*p + (1-lam)*q of two same-length distributions."""
    if p.size != q.size:
        raise LengthMismatch(f"cannot mix lengths {p.size} and {q.size}")
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"mixing weight {lam} outside [0, 1]")
    return ProbDist(lam * p.weights + (1.0 - lam) * q.weights)


def loads_distribution(text: str, tol: float = FILE_TOL) -> ProbDist:
    """Parse a distribution from JSON (`{"weights": [...]}`) or single-column CSV."""
    stripped = text.strip()
    if not stripped:
        raise LengthMismatch("empty distribution input")
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError:
        return validate(_csv_column(stripped), tol)
    if not isinstance(doc, dict) or "weights" not in doc:
        raise LengthMismatch('JSON distribution must be an object with a "weights" key')
    weights = doc["weights"]
    if not isinstance(weights, list):
        raise LengthMismatch('"weights" must be a list of numbers')
    return validate(np.asarray(weights, dtype=float), tol)


def load_distribution(path: str | Path, tol: float = FILE_TOL) -> ProbDist:
    """Load a distribution file (JSON object or single-column CSV)."""
    return loads_distribution(Path(path).read_text(), tol)


def _csv_column(text: str) -> np.ndarray:
    values = []
    for row in csv.reader(io.StringIO(text)):
        cells = [c.strip() for c in row if c.strip()]
        if not cells:
            continue
        if len(cells) != 1:
            raise LengthMismatch(f"expected one column, got row {row!r}")
        try:
            values.append(float(cells[0]))
        except ValueError as exc:
            raise LengthMismatch(f"not a number: {cells[0]!r}") from exc
    if not values:
        raise LengthMismatch("no numeric rows in CSV input")
    return np.asarray(values, dtype=float)
