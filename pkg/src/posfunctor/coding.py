"""Pairing, tuple and join codings used for every oracle in the package.

All codings are total injections into the naturals.  Pairs use the Cantor
pairing function, tuples are left-nested pairs and finite joins interleave
columns (``k*c + j`` for column ``j`` of ``k``).
"""
from __future__ import annotations

from math import isqrt
from typing import Iterable, Sequence

from .errors import CodingError


def cantor_pair(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise CodingError(f"pairing needs naturals, got ({x}, {y})")
    s = x + y
    return s * (s + 1) // 2 + y


def cantor_unpair(c: int) -> tuple[int, int]:
    if c < 0:
        raise CodingError(f"cannot unpair negative code {c}")
    w = (isqrt(8 * c + 1) - 1) // 2
    y = c - w * (w + 1) // 2
    return w - y, y


def tuple_encode(xs: Sequence[int], arity: int) -> int:
    if arity < 1 or len(xs) != arity:
        raise CodingError(f"expected a tuple of arity {arity}, got {tuple(xs)!r}")
    code = xs[0]
    if code < 0:
        raise CodingError(f"tuple entries must be naturals, got {tuple(xs)!r}")
    for x in xs[1:]:
        code = cantor_pair(code, x)
    return code


def tuple_decode(code: int, arity: int) -> tuple[int, ...]:
    if arity < 1:
        raise CodingError(f"arity must be positive, got {arity}")
    out = []
    for _ in range(arity - 1):
        code, last = cantor_unpair(code)
        out.append(last)
    out.append(code)
    return tuple(reversed(out))


def join(parts: Sequence[Iterable[int]], k: int | None = None) -> frozenset[int]:
    """Interleave ``parts`` as the columns of a k-fold join."""
    if k is None:
        k = len(parts)
    if len(parts) != k or k < 2:
        raise CodingError(f"join needs k >= 2 columns, got {len(parts)} parts for k={k}")
    return frozenset(k * c + j for j, part in enumerate(parts) for c in part)


def project(joined: Iterable[int], j: int, k: int) -> frozenset[int]:
    """Column ``j`` of a k-fold join."""
    if not 0 <= j < k:
        raise CodingError(f"column {j} out of range for a {k}-fold join")
    return frozenset(c // k for c in joined if c % k == j)


def split(joined: Iterable[int], k: int) -> tuple[frozenset[int], ...]:
    cols: list[set[int]] = [set() for _ in range(k)]
    for c in joined:
        cols[c % k].add(c // k)
    return tuple(frozenset(col) for col in cols)


def dual(code: int) -> int:
    """Partner of an atomic-diagram code: R(u) <-> not R(u)."""
    return code ^ 1


def graph_codes(mapping: dict[int, int]) -> frozenset[int]:
    """Coded graph ``{<x, f(x)>}`` of a finite map."""
    return frozenset(cantor_pair(x, y) for x, y in mapping.items())


def decode_graph(codes: Iterable[int]) -> list[tuple[int, int]]:
    return sorted(cantor_unpair(c) for c in codes)
