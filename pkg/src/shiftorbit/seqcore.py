"""Weight sequences and exact / log-domain products of weights.

A weight sequence ``w = (w_j)`` is described by an immutable :class:`WeightSpec`.
Products ``w_lo * ... * w_hi`` are returned as :class:`DyadicLog` values: an
integer base-2 exponent when every weight in the range is a power of two, and a
compensated floating ``log2`` otherwise.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = [
    "UNILATERAL", "BILATERAL", "DomainError", "CapacityError", "TruncationError",
    "ConfigError", "WeightSpec", "DyadicLog", "BlockBounds", "block_bounds",
    "block_index", "paper_blocks_prefix_exponent", "weight_at", "weight_log2", "log2_weights", "product_range",
    "ProductCursor", "compensated_cumsum", "load_weight_spec", "weight_spec_from_dict",
    "weight_spec_to_dict",
]

UNILATERAL = "unilateral"
BILATERAL = "bilateral"
SIDES = (UNILATERAL, BILATERAL)

DEFAULT_MAX_BLOCK = 40


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(OverflowError):
    """A value exceeds the representable range (exponent, block index, float)."""

    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"{message} (at step {step})")
        self.step = step


class TruncationError(RuntimeError):
    """A support left the finite window of a truncated computation."""


class ConfigError(ValueError):
    """Inconsistent parameters (e.g. misordered thresholds)."""


def _dyadic_exponent(x: float):
    """Return e if x == 2**e exactly, else None."""
    if not x > 0 or not math.isfinite(x):
        return None
    m, e = math.frexp(x)
    if m != 0.5:
        return None
    return e - 1


# ---------------------------------------------------------------------------
# block layout of the paper-blocks weight


@dataclass(frozen=True)
class BlockBounds:
    i: int
    a: int
    b: int
    c: int


def block_bounds(i: int, max_block: int = DEFAULT_MAX_BLOCK) -> BlockBounds:
    """Bounds ``a_i = 2**(2+i)``, ``b_i = a_i + 2i - 1``, ``c_i = b_i + 2i``."""
    if i < 1:
        raise DomainError(f"block index must be >= 1, got {i}")
    if i > max_block:
        raise CapacityError(f"block index {i} exceeds cap {max_block}")
    a = 1 << (2 + i)
    b = a + 2 * i - 1
    return BlockBounds(i, a, b, b + 2 * i)


def block_index(m: int):
    """Index i of the block whose span ``[a_i + 1, a_{i+1}]`` contains ``m``, or None.

    Blocks tile ``[9, inf)``; positions ``m <= 8`` precede the first block.
    """
    if m <= 8:
        return None
    return (m - 1).bit_length() - 3


# ---------------------------------------------------------------------------
# weight specifications

KINDS = ("constant", "rolewicz", "paper_blocks", "ratio_power", "table",
         "product_profile_dyadic")


@dataclass(frozen=True)
class WeightSpec:
    """Immutable description of a positive weight sequence.

    Use the classmethod constructors rather than the raw initializer.
    """

    kind: str
    side: str
    lam: float | None = None
    p: float | None = None
    entries: tuple = ()
    default: float | None = None
    exponents: tuple = ()
    default_exponent: int = 0
    max_block: int = DEFAULT_MAX_BLOCK
    _table: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if self.side not in SIDES:
            raise DomainError(f"unknown side {self.side!r}")
        if self.kind == "paper_blocks" and self.side != BILATERAL:
            raise DomainError("paper_blocks is bilateral")
        if self.kind in ("rolewicz", "ratio_power") and self.side != UNILATERAL:
            raise DomainError(f"{self.kind} is unilateral")
        if self.kind == "constant" and not (self.lam is not None and self.lam > 0):
            raise DomainError(f"constant weight must be positive, got {self.lam}")
        if self.kind == "rolewicz" and not (self.lam is not None and self.lam > 1):
            raise DomainError(f"rolewicz needs lambda > 1, got {self.lam}")
        if self.kind == "ratio_power" and not (self.p is not None and self.p > 1):
            raise DomainError(f"ratio_power needs p > 1, got {self.p}")
        if self.kind == "table":
            if not (self.default is not None and self.default > 0):
                raise DomainError("table default weight must be positive")
            for j, wj in self.entries:
                if not wj > 0:
                    raise DomainError(f"table weight at {j} is not positive: {wj}")
            object.__setattr__(self, "_table", dict(self.entries))
        if self.kind == "product_profile_dyadic":
            object.__setattr__(self, "_table", dict(self.exponents))
        if self.kind in ("table", "product_profile_dyadic") and self.side == UNILATERAL:
            idx = self.entries if self.kind == "table" else self.exponents
            if any(j < 1 for j, _ in idx):
                raise DomainError("unilateral table has an index < 1")

    # constructors -----------------------------------------------------------

    @classmethod
    def constant(cls, lam: float, side: str = BILATERAL):
        return cls("constant", side, lam=float(lam))

    @classmethod
    def rolewicz(cls, lam: float):
        return cls("rolewicz", UNILATERAL, lam=float(lam))

    @classmethod
    def paper_blocks(cls, max_block: int = DEFAULT_MAX_BLOCK):
        return cls("paper_blocks", BILATERAL, max_block=max_block)

    @classmethod
    def ratio_power(cls, p: float):
        return cls("ratio_power", UNILATERAL, p=float(p))

    @classmethod
    def table(cls, entries: Mapping[int, float], default: float = 1.0, side: str = BILATERAL):
        items = tuple(sorted((int(j), float(w)) for j, w in entries.items()))
        return cls("table", side, entries=items, default=float(default))

    @classmethod
    def dyadic_profile(cls, exponents: Mapping[int, int], default: int = 0,
                       side: str = BILATERAL):
        items = tuple(sorted((int(j), int(e)) for j, e in exponents.items()))
        return cls("product_profile_dyadic", side, exponents=items, default_exponent=int(default))

    # -----------------------------------------------------------------------

    @property
    def is_dyadic(self) -> bool:
        """True when every weight is an exact power of two."""
        k = self.kind
        if k in ("paper_blocks", "product_profile_dyadic"):
            return True
        if k in ("constant", "rolewicz"):
            return _dyadic_exponent(self.lam) is not None
        if k == "table":
            return _dyadic_exponent(self.default) is not None and all(
                _dyadic_exponent(w) is not None for _, w in self.entries)
        return False

    def check_index(self, j: int):
        if self.side == UNILATERAL and j < 1:
            raise DomainError(f"index {j} outside unilateral domain (indices >= 1)")
        if self.kind == "paper_blocks" and j < 0:
            i = block_index(-j)
            if i is not None and i > self.max_block:
                raise CapacityError(f"index {j} lies past block cap {self.max_block}")

    def describe(self) -> str:
        k = self.kind
        if k == "paper_blocks":
            return "paper-blocks"
        if k == "rolewicz":
            return f"rolewicz:{self.lam!r}"
        if k == "ratio_power":
            return f"ratio-power:{self.p!r}"
        if k == "constant":
            return f"constant:{self.lam!r}:{self.side}"
        return json.dumps(weight_spec_to_dict(self), sort_keys=True)


# ---------------------------------------------------------------------------
# products


@dataclass(frozen=True)
class DyadicLog:
    """A positive number stored by its base-2 logarithm.

    With ``exact`` set the value is exactly ``2**exponent``; otherwise
    ``float_log2`` carries the (rounded) logarithm.
    """

    exponent: int = 0
    exact: bool = True
    float_log2: float = 0.0

    @classmethod
    def exact_pow2(cls, e: int):
        return cls(int(e), True, float(e))

    @classmethod
    def from_log2(cls, lg: float):
        return cls(int(math.floor(lg)), False, float(lg))

    @property
    def log2(self) -> float:
        return float(self.exponent) if self.exact else self.float_log2

    @property
    def value(self) -> float:
        if self.exact:
            if self.exponent > 1023:
                raise CapacityError(f"2**{self.exponent} overflows a float")
            return math.ldexp(1.0, self.exponent)
        return 2.0 ** self.float_log2

    def __mul__(self, other):
        if not isinstance(other, DyadicLog):
            return NotImplemented
        if self.exact and other.exact:
            return DyadicLog.exact_pow2(self.exponent + other.exponent)
        return DyadicLog.from_log2(self.log2 + other.log2)

    def __truediv__(self, other):
        if not isinstance(other, DyadicLog):
            return NotImplemented
        if self.exact and other.exact:
            return DyadicLog.exact_pow2(self.exponent - other.exponent)
        return DyadicLog.from_log2(self.log2 - other.log2)

    def __lt__(self, other):
        return self.log2 < other.log2

    def __le__(self, other):
        return self.log2 <= other.log2

    def __gt__(self, other):
        return self.log2 > other.log2

    def __ge__(self, other):
        return self.log2 >= other.log2


ONE = DyadicLog.exact_pow2(0)


def _paper_blocks_exponents(js: np.ndarray, max_block: int) -> np.ndarray:
    js = np.asarray(js, dtype=np.int64)
    out = np.zeros(js.shape, dtype=np.int64)
    out[js > 0] = 1
    m = -js
    neg = m > 8
    if np.any(neg):
        mm = m[neg]
        # bit_length(mm - 1) via frexp (exact for |mm| < 2**53)
        _, bl = np.frexp((mm - 1).astype(np.float64))
        i = bl.astype(np.int64) - 3
        if i.max() > max_block:
            raise CapacityError(f"index {-int(mm.max())} lies past block cap {max_block}")
        a = np.left_shift(np.int64(1), i + 2)
        b = a + 2 * i - 1
        c = b + 2 * i
        e = np.zeros(mm.shape, dtype=np.int64)
        e[(mm >= a + 1) & (mm <= b)] = -1
        e[(mm >= b + 1) & (mm <= c)] = 1
        out[neg] = e
    return out


def log2_weights(spec: WeightSpec, lo: int, hi: int) -> np.ndarray:
    """log2 of ``w_lo, ..., w_hi`` (int64 for dyadic specs, float64 otherwise)."""
    if hi < lo:
        return np.zeros(0, dtype=np.int64 if spec.is_dyadic else np.float64)
    spec.check_index(lo)
    spec.check_index(hi)
    js = np.arange(lo, hi + 1, dtype=np.int64)
    k = spec.kind
    if k == "paper_blocks":
        return _paper_blocks_exponents(js, spec.max_block)
    if k in ("constant", "rolewicz"):
        e = _dyadic_exponent(spec.lam)
        if e is not None:
            return np.full(js.shape, e, dtype=np.int64)
        return np.full(js.shape, math.log2(spec.lam))
    if k == "ratio_power":
        return np.log1p(1.0 / js) / (math.log(2.0) * spec.p)
    if k == "product_profile_dyadic":
        out = np.full(js.shape, spec.default_exponent, dtype=np.int64)
        for j, e in spec.exponents:
            if lo <= j <= hi:
                out[j - lo] = e
        return out
    # table
    if spec.is_dyadic:
        out = np.full(js.shape, _dyadic_exponent(spec.default), dtype=np.int64)
        conv = _dyadic_exponent
    else:
        out = np.full(js.shape, math.log2(spec.default))
        conv = math.log2
    for j, w in spec.entries:
        if lo <= j <= hi:
            out[j - lo] = conv(w)
    return out


def weight_log2(spec: WeightSpec, j: int) -> DyadicLog:
    lg = log2_weights(spec, j, j)[0]
    if spec.is_dyadic:
        return DyadicLog.exact_pow2(int(lg))
    return DyadicLog.from_log2(float(lg))


def weight_at(spec: WeightSpec, j: int) -> float:
    """The weight ``w_j``."""
    spec.check_index(j)
    k = spec.kind
    if k in ("constant", "rolewicz"):
        return spec.lam
    if k == "ratio_power":
        return ((j + 1) / j) ** (1.0 / spec.p)
    if k == "table":
        return spec._table.get(j, spec.default)
    if k == "product_profile_dyadic":
        return math.ldexp(1.0, spec._table.get(j, spec.default_exponent))
    return weight_log2(spec, j).value


def compensated_cumsum(values) -> np.ndarray:
    """Prefix sums with Neumaier error compensation."""
    vals = np.asarray(values, dtype=np.float64)
    out = np.empty_like(vals)
    s = 0.0
    comp = 0.0
    for n, x in enumerate(vals.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
        out[n] = s + comp
    return out


def paper_blocks_prefix_exponent(m: int, max_block: int = DEFAULT_MAX_BLOCK) -> int:
    """Exponent of ``prod_{j=-m}^{0} w_j`` for the paper-blocks weight, in O(1).

    Takes ``m >= -1`` (``m = -1`` is the empty product).
    """
    i = block_index(m)
    if i is None:
        return 0
    bb = block_bounds(i, max_block)
    base = i - 1  # exponent on the plateau [c_{i-1}, a_i]
    if m <= bb.b:
        return base - (m - bb.a)
    if m <= bb.c:
        return base - (2 * i - 1) + (m - bb.b)
    return i


def _paper_blocks_range_exponent(spec, lo, hi):
    e = 0
    if hi > 0:
        e += hi - max(lo, 1) + 1
    if lo <= 0:
        top = min(hi, 0)
        e += (paper_blocks_prefix_exponent(-lo, spec.max_block)
              - paper_blocks_prefix_exponent(-top - 1, spec.max_block))
    return e


def product_range(spec: WeightSpec, lo: int, hi: int) -> DyadicLog:
    """``prod_{j=lo}^{hi} w_j``; the empty range ``lo == hi + 1`` gives 1."""
    if lo > hi + 1:
        raise DomainError(f"bad range [{lo}, {hi}]")
    if lo == hi + 1:
        return ONE
    spec.check_index(lo)
    spec.check_index(hi)
    if spec.kind == "paper_blocks":
        return DyadicLog.exact_pow2(_paper_blocks_range_exponent(spec, lo, hi))
    if spec.kind in ("constant", "rolewicz"):
        e = _dyadic_exponent(spec.lam)
        if e is not None:
            return DyadicLog.exact_pow2(e * (hi - lo + 1))
    lg = log2_weights(spec, lo, hi)
    if spec.is_dyadic:
        return DyadicLog.exact_pow2(int(lg.sum()))
    return DyadicLog.from_log2(math.fsum(lg.tolist()))


class ProductCursor:
    """Running product over a range ``[lo, hi]`` that can be grown at either end.

    Each extension costs one weight lookup; the range starts empty at
    ``[anchor + 1, anchor]``.
    """

    def __init__(self, spec: WeightSpec, anchor: int):
        self.spec = spec
        self.lo = anchor + 1
        self.hi = anchor
        self._exact = spec.is_dyadic
        self._e = 0
        self._s = 0.0
        self._c = 0.0

    def _add(self, j):
        lg = log2_weights(self.spec, j, j)[0]
        if self._exact:
            self._e += int(lg)
            return
        x = float(lg)
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    def extend_down(self, steps: int = 1) -> DyadicLog:
        for _ in range(steps):
            self.lo -= 1
            self._add(self.lo)
        return self.value

    def extend_up(self, steps: int = 1) -> DyadicLog:
        for _ in range(steps):
            self.hi += 1
            self._add(self.hi)
        return self.value

    @property
    def value(self) -> DyadicLog:
        if self._exact:
            return DyadicLog.exact_pow2(self._e)
        return DyadicLog.from_log2(self._s + self._c)


# ---------------------------------------------------------------------------
# weight-spec files

_FILE_KEYS = {
    "paper_blocks": {"kind"},
    "rolewicz": {"kind", "lambda"},
    "constant": {"kind", "lambda", "side"},
    "ratio_power": {"kind", "p"},
    "table": {"kind", "entries", "default", "side"},
    "product_profile_dyadic": {"kind", "exponents", "default", "side"},
}


def weight_spec_from_dict(d: Mapping) -> WeightSpec:
    if not isinstance(d, Mapping) or "kind" not in d:
        raise DomainError("weight spec must be an object with a 'kind' key")
    kind = d["kind"]
    if kind not in _FILE_KEYS:
        raise DomainError(f"unknown weight kind {kind!r}")
    extra = set(d) - _FILE_KEYS[kind]
    if extra:
        raise DomainError(f"unknown keys for {kind}: {sorted(extra)}")
    side = d.get("side", BILATERAL)
    if kind == "paper_blocks":
        return WeightSpec.paper_blocks()
    if kind == "rolewicz":
        return WeightSpec.rolewicz(d["lambda"])
    if kind == "constant":
        return WeightSpec.constant(d["lambda"], side)
    if kind == "ratio_power":
        return WeightSpec.ratio_power(d["p"])
    if kind == "table":
        return WeightSpec.table({int(k): v for k, v in d.get("entries", {}).items()},
                                d.get("default", 1.0), side)
    return WeightSpec.dyadic_profile({int(k): v for k, v in d.get("exponents", {}).items()},
                                     d.get("default", 0), side)


def weight_spec_to_dict(spec: WeightSpec) -> dict:
    k = spec.kind
    if k == "paper_blocks":
        return {"kind": k}
    if k == "rolewicz":
        return {"kind": k, "lambda": spec.lam}
    if k == "constant":
        return {"kind": k, "lambda": spec.lam, "side": spec.side}
    if k == "ratio_power":
        return {"kind": k, "p": spec.p}
    if k == "table":
        return {"kind": k, "entries": {str(j): w for j, w in spec.entries},
                "default": spec.default, "side": spec.side}
    return {"kind": k, "exponents": {str(j): e for j, e in spec.exponents},
            "default": spec.default_exponent, "side": spec.side}


def load_weight_spec(path) -> WeightSpec:
    with open(path) as fh:
        return weight_spec_from_dict(json.load(fh))
