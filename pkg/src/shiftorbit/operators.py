"""Weighted backward shifts ``B_w e_j = w_j e_{j-1}`` and their formal right inverses."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seqcore import (BILATERAL, UNILATERAL, CapacityError, DomainError, TruncationError,
                      WeightSpec, load_weight_spec, log2_weights, weight_at)
from .vectors import SpaceTag, SupportedVector

__all__ = ["ShiftOperator", "RightInverse", "apply", "right_inverse_apply", "iterate_norms",
           "iterate_apply", "basis_log2_norms", "truncated_matrix",
           "truncated_matrix_apply_power", "parse_operator", "BUILTINS"]

CHUNK = 1 << 16


@dataclass(frozen=True)
class ShiftOperator:
    weights: WeightSpec

    @property
    def side(self) -> str:
        return self.weights.side

    def describe(self) -> str:
        return self.weights.describe()

    @property
    def right_inverse(self) -> "RightInverse":
        return RightInverse(self)


@dataclass(frozen=True)
class RightInverse:
    """Formal right inverse ``S e_k = e_{k+1} / w_{k+1}`` on finitely supported vectors."""

    of: ShiftOperator


def _check_side(T: ShiftOperator, v: SupportedVector):
    if v.side != T.side:
        raise DomainError(f"vector is {v.side} but operator is {T.side}")


def apply(T: ShiftOperator, v: SupportedVector) -> SupportedVector:
    _check_side(T, v)
    w = T.weights
    out = {}
    for k, x in v.items:
        if T.side == UNILATERAL and k == 1:
            continue
        out[k - 1] = weight_at(w, k) * x
    return SupportedVector.from_dict(out, v.side)


def _divide_exactly(x: float, w: float) -> float:
    # pick c next to x / w so that w * c rounds back to x whenever some nearby c does
    c = x / w
    if w * c == x:
        return c
    lo = hi = c
    for _ in range(4):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
        if w * lo == x:
            return lo
        if w * hi == x:
            return hi
    return c


def right_inverse_apply(S, v: SupportedVector) -> SupportedVector:
    """Apply the right inverse of ``S`` (a :class:`RightInverse` or the shift itself).

    Coefficients are chosen so that ``apply(T, Sv)`` reproduces ``v`` bit for bit.
    """
    T = S.of if isinstance(S, RightInverse) else S
    _check_side(T, v)
    out = {k + 1: _divide_exactly(x, weight_at(T.weights, k + 1)) for k, x in v.items}
    return SupportedVector.from_dict(out, v.side)


def iterate_apply(T: ShiftOperator, v: SupportedVector, N: int) -> list:
    """``[T v, T^2 v, ..., T^N v]`` by repeated application."""
    out = []
    for _ in range(N):
        v = apply(T, v)
        out.append(v)
    return out


def _profile_chunks(spec: WeightSpec, k: int, n_alive: int):
    """Yield ``(i0, L)`` with ``L[t] = log2 prod_{m=k-(i0+t)+1}^{k} w_m`` chunk by chunk."""
    exact = spec.is_dyadic
    carry_e = 0
    s = c = 0.0
    for i0 in range(1, n_alive + 1, CHUNK):
        i1 = min(i0 + CHUNK - 1, n_alive)
        # powers i0..i1 add weights w_{k-i0+1} down to w_{k-i1+1}
        lg = log2_weights(spec, k - i1 + 1, k - i0 + 1)[::-1]
        if exact:
            L = np.cumsum(lg) + carry_e
            carry_e = int(L[-1])
        else:
            L = np.empty(lg.size)
            for t, x in enumerate(lg.tolist()):
                y = s + x
                if abs(s) >= abs(x):
                    c += (s - y) + x
                else:
                    c += (x - y) + s
                s = y
                L[t] = s + c
        yield i0, L


def basis_log2_norms(T: ShiftOperator, j: int, N: int) -> np.ndarray:
    """log2 of ``||T^i e_j||`` for ``i = 1..N``; ``-inf`` once the orbit has died.

    Integer-valued (and exact) for dyadic weights.
    """
    n_alive = N if T.side == BILATERAL else max(0, min(N, j - 1))
    out = np.full(N, -np.inf)
    for i0, L in _profile_chunks(T.weights, j, n_alive):
        out[i0 - 1:i0 - 1 + L.size] = L
    return out


def iterate_norms(T: ShiftOperator, v: SupportedVector, space: SpaceTag, N: int) -> np.ndarray:
    """``||T^i v||`` for ``i = 1..N``.

    ``(T^i v)_{k-i} = v_k * prod_{m=k-i+1}^{k} w_m``, so each support coordinate
    is carried by its own running weight product. Single-coordinate orbits of
    dyadic shifts are computed exactly.
    """
    if N < 1:
        raise DomainError(f"horizon must be >= 1, got {N}")
    _check_side(T, v)
    exact = T.weights.is_dyadic
    out = np.zeros(N)
    if not v.items:
        return out
    coords = []
    for k, x in v.items:
        n_alive = N if T.side == BILATERAL else max(0, min(N, k - 1))
        coords.append((abs(x), n_alive, _profile_chunks(T.weights, k, n_alive)))
    for c0 in range(0, N, CHUNK):
        c1 = min(c0 + CHUNK, N)
        vals = np.zeros((len(coords), c1 - c0))
        for row, (ax, n_alive, chunks) in enumerate(coords):
            if n_alive <= c0:
                continue
            _, L = next(chunks)
            if exact:
                with np.errstate(over="ignore"):
                    vals[row, :L.size] = np.ldexp(ax, np.clip(L, -2000, 2000).astype(np.int32))
            else:
                with np.errstate(over="ignore"):
                    vals[row, :L.size] = ax * np.exp2(L)
        m = vals.max(axis=0)
        if space.kind == "c0":
            nrm = m
        else:
            safe = np.where(m > 0, m, 1.0)
            with np.errstate(over="ignore", invalid="ignore"):
                nrm = m * np.sum((vals / safe) ** space.p, axis=0) ** (1.0 / space.p)
        if not np.all(np.isfinite(nrm)):
            step = c0 + 1 + int(np.argmax(~np.isfinite(nrm)))
            raise CapacityError("orbit norm overflows a float", step)
        out[c0:c1] = nrm
    return out


def truncated_matrix(T: ShiftOperator, K: int) -> np.ndarray:
    """Dense matrix of ``T`` on the window ``[-K, K]`` (bilateral) or ``[1, K]``."""
    if T.side == BILATERAL:
        idx = np.arange(-K, K + 1)
    else:
        idx = np.arange(1, K + 1)
    n = idx.size
    M = np.zeros((n, n))
    for t in range(1, n):
        M[t - 1, t] = weight_at(T.weights, int(idx[t]))
    return M


def truncated_matrix_apply_power(T: ShiftOperator, v: SupportedVector, i: int,
                                 K: int) -> SupportedVector:
    """``T^i v`` by ``i`` dense matrix-vector products on a finite window (oracle)."""
    _check_side(T, v)
    if i < 0:
        raise DomainError(f"power must be >= 0, got {i}")
    if not v.items:
        return v
    idx = v.indices
    lo = -K if T.side == BILATERAL else 1
    if idx.max() > K or idx.min() < lo:
        raise TruncationError(f"support of v leaves the window [{lo}, {K}]")
    if T.side == BILATERAL and idx.min() - i < -K:
        raise TruncationError(f"T^{i} v leaves the window [{-K}, {K}]; enlarge K")
    M = truncated_matrix(T, K)
    x = np.zeros(M.shape[0])
    x[idx - lo] = v.coefficients
    for _ in range(i):
        x = M @ x
    nz = np.nonzero(x)[0]
    return SupportedVector.from_dict({int(t) + lo: float(x[t]) for t in nz}, v.side)


BUILTINS = {
    "paper-blocks": "bilateral block-dyadic weight: 1/2 and 2 runs on negative indices, 2 on positive",
    "rolewicz:<lambda>": "lambda times the unilateral backward shift, lambda > 1",
    "ratio-power:<p>": "unilateral weights ((k+1)/k)^(1/p), p > 1",
    "constant:<lambda>[:side]": "constant weight lambda, side unilateral or bilateral",
    "@<file>": "weight-spec file (JSON)",
}


def parse_operator(text: str) -> ShiftOperator:
    """Operator designation: ``paper-blocks``, ``rolewicz:2.0``, ``ratio-power:2.0``,
    ``constant:1.0:bilateral`` or ``@file.spec``."""
    if text.startswith("@"):
        return ShiftOperator(load_weight_spec(text[1:]))
    parts = text.split(":")
    name = parts[0]
    try:
        if name == "paper-blocks" and len(parts) == 1:
            return ShiftOperator(WeightSpec.paper_blocks())
        if name == "rolewicz" and len(parts) == 2:
            return ShiftOperator(WeightSpec.rolewicz(float(parts[1])))
        if name == "ratio-power" and len(parts) == 2:
            return ShiftOperator(WeightSpec.ratio_power(float(parts[1])))
        if name == "constant" and len(parts) in (2, 3):
            side = parts[2] if len(parts) == 3 else BILATERAL
            return ShiftOperator(WeightSpec.constant(float(parts[1]), side))
    except ValueError as exc:
        raise DomainError(f"bad operator {text!r}: {exc}") from None
    raise DomainError(f"unknown operator {text!r}")
