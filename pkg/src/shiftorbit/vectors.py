"""Finitely supported real sequences over Z or N = {1, 2, ...}."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .seqcore import BILATERAL, SIDES, UNILATERAL, DomainError

__all__ = ["SpaceTag", "SupportedVector", "norm", "combine", "basis", "sample_vector",
           "parse_space", "parse_vector", "lp", "C0"]


@dataclass(frozen=True)
class SpaceTag:
    """``lp`` with exponent ``p >= 1``, or ``c0`` (sup norm)."""

    kind: str = "lp"
    p: float = 2.0

    def __post_init__(self):
        if self.kind not in ("lp", "c0"):
            raise DomainError(f"unknown space {self.kind!r}")
        if self.kind == "lp" and not self.p >= 1:
            raise DomainError(f"lp needs p >= 1, got {self.p}")

    def __str__(self):
        if self.kind == "c0":
            return "c0"
        if self.p in (1.0, 2.0):
            return f"l{int(self.p)}"
        return f"lp:{self.p!r}"


def lp(p: float = 2.0) -> SpaceTag:
    return SpaceTag("lp", float(p))


C0 = SpaceTag("c0", math.inf)


def parse_space(text: str) -> SpaceTag:
    if text == "c0":
        return C0
    if text in ("l1", "l2"):
        return lp(float(text[1]))
    if text.startswith("lp:"):
        return lp(float(text[3:]))
    raise DomainError(f"unknown space {text!r} (use l1, l2, lp:<p> or c0)")


@dataclass(frozen=True)
class SupportedVector:
    """Sparse vector: sorted ``(index, coefficient)`` pairs with no zero entries."""

    items: tuple = ()
    side: str = BILATERAL

    def __post_init__(self):
        if self.side not in SIDES:
            raise DomainError(f"unknown side {self.side!r}")
        for j, x in self.items:
            if x == 0:
                raise DomainError(f"stored zero at index {j}")
            if self.side == UNILATERAL and j < 1:
                raise DomainError(f"index {j} < 1 in a unilateral vector")

    @classmethod
    def from_dict(cls, entries: Mapping[int, float], side: str = BILATERAL):
        items = tuple(sorted((int(j), float(x)) for j, x in entries.items() if x != 0))
        return cls(items, side)

    @classmethod
    def empty(cls, side: str = BILATERAL):
        return cls((), side)

    def as_dict(self) -> dict:
        return dict(self.items)

    @property
    def indices(self) -> np.ndarray:
        return np.array([j for j, _ in self.items], dtype=np.int64)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([x for _, x in self.items], dtype=np.float64)

    def __len__(self):
        return len(self.items)

    def __bool__(self):
        return bool(self.items)

    def scale(self, alpha: float) -> "SupportedVector":
        return combine(self, SupportedVector.empty(self.side), alpha, 0.0)

    def to_json(self) -> str:
        return json.dumps({"side": self.side,
                           "entries": {str(j): x for j, x in self.items}})

    def describe(self) -> str:
        if len(self.items) == 1 and self.items[0][1] == 1.0:
            return f"e{self.items[0][0]}"
        return self.to_json()


def basis(j: int, side: str = BILATERAL) -> SupportedVector:
    """Unit vector ``e_j``."""
    return SupportedVector(((int(j), 1.0),), side)


def norm(v: SupportedVector, space: SpaceTag) -> float:
    if not v.items:
        return 0.0
    a = np.abs(v.coefficients)
    if space.kind == "c0":
        return float(a.max())
    m = a.max()
    return float(m * np.sum((a / m) ** space.p) ** (1.0 / space.p))


def combine(v: SupportedVector, w: SupportedVector, alpha: float, beta: float) -> SupportedVector:
    """``alpha*v + beta*w`` with exact zeros pruned."""
    if v.side != w.side:
        raise DomainError(f"side mismatch: {v.side} vs {w.side}")
    out: dict = {}
    for j, x in v.items:
        out[j] = alpha * x
    for j, x in w.items:
        out[j] = out.get(j, 0.0) + beta * x
    return SupportedVector.from_dict(out, v.side)


def sample_vector(seed: int, side: str = BILATERAL, radius: int = 16,
                  envelope=("flat",)) -> SupportedVector:
    """Seeded random vector supported in ``[-K, K]`` (or ``[1, K]``).

    Coefficients are standard normal times ``envelope(|k|)``; the envelope is
    ``("flat",)`` or ``("geometric", rho)`` with ``0 < rho < 1``.
    """
    if radius < 1:
        raise DomainError(f"support radius must be >= 1, got {radius}")
    if side == UNILATERAL:
        idx = np.arange(1, radius + 1)
    else:
        idx = np.arange(-radius, radius + 1)
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal(idx.size)
    if envelope[0] == "geometric":
        rho = float(envelope[1])
        if not 0 < rho < 1:
            raise DomainError(f"geometric envelope needs 0 < rho < 1, got {rho}")
        coef = coef * rho ** np.abs(idx).astype(np.float64)
    elif envelope[0] != "flat":
        raise DomainError(f"unknown envelope {envelope[0]!r}")
    return SupportedVector.from_dict(dict(zip(idx.tolist(), coef.tolist())), side)


_BASIS_RE = re.compile(r"^e(-?\d+)$")


def parse_vector(text: str, side: str, seed: int = 0) -> SupportedVector:
    """Parse ``e<j>``, ``random[:K[:rho]]``, ``@file.json`` or inline JSON."""
    m = _BASIS_RE.match(text)
    if m:
        return basis(int(m.group(1)), side)
    if text.startswith("random"):
        parts = text.split(":")
        radius = int(parts[1]) if len(parts) > 1 else 16
        env = ("geometric", float(parts[2])) if len(parts) > 2 else ("flat",)
        return sample_vector(seed, side, radius, env)
    if text.startswith("@"):
        with open(text[1:]) as fh:
            d = json.load(fh)
    else:
        try:
            d = json.loads(text)
        except json.JSONDecodeError:
            raise DomainError(f"cannot parse vector {text!r}") from None
    if not isinstance(d, dict) or set(d) - {"side", "entries"}:
        raise DomainError("vector object takes only 'side' and 'entries'")
    vside = d.get("side", side)
    if vside != side:
        raise DomainError(f"vector side {vside} does not match operator side {side}")
    return SupportedVector.from_dict({int(k): float(x) for k, x in d.get("entries", {}).items()},
                                     vside)
