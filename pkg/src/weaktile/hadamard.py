"""Search for generalized log-Hadamard matrices and the spectral sets
they factor into.

A size x size matrix M over Z_p whose pairwise row differences hit every
residue exactly size/p times is exactly an exponent matrix of mutually
orthogonal character rows: a vanishing sum of size many p-th roots of
unity must distribute its exponents uniformly.  A rank <= dims
factorization M = S . B^T over Z_p then yields a point set B and spectrum
S inside Z_p^dims.

The search is a deterministic exact DFS over rows: the first nonzero row
is the sorted balanced vector (WLOG under column permutations), rows are
kept lexicographically increasing, every new row must keep all pairwise
differences balanced, and once the running row space reaches the target
rank the candidate pool is intersected with the span.  Found matrices are
factored and the factors re-verified before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .config import SETTINGS
from .fourier import GroupFunction, dft
from .group import GroupSpec, make_group


class SearchExhausted(Exception):
    """No solution within the node budget (or the full tree)."""


class VerificationFailed(Exception):
    pass


_TABLE_CAP = 5 * 10**6


@dataclass
class SearchStats:
    nodes: int
    exhausted: bool  # True when the whole (symmetry-reduced) tree was explored


def _balanced_vectors(p: int, size: int) -> np.ndarray:
    """All vectors in Z_p^size hitting every residue exactly size/p times."""
    m = size // p
    count = 1
    left = size
    for _ in range(p):
        count *= comb(left, m)
        left -= m
    if count > _TABLE_CAP:
        raise SearchExhausted(
            f"balanced-vector table would hold {count} rows; "
            "use File mode for parameters this large"
        )
    out = np.zeros((count, size), dtype=np.int8)
    row = 0

    def rec(positions: tuple[int, ...], residue: int, vec: np.ndarray):
        nonlocal row
        if residue == p:
            out[row] = vec
            row += 1
            return
        for chosen in itertools.combinations(positions, m):
            nxt = tuple(i for i in positions if i not in chosen)
            for i in chosen:
                vec[i] = residue
            rec(nxt, residue + 1, vec)
            for i in chosen:
                vec[i] = 0

    rec(tuple(range(size)), 1, np.zeros(size, dtype=np.int8))
    return out[:row]


def _balanced_mask(diffs: np.ndarray, p: int, mult: int) -> np.ndarray:
    ok = np.ones(len(diffs), dtype=bool)
    for r in range(p):
        ok &= (diffs == r).sum(axis=1) == mult
    return ok


def _row_reduce(rows: list[np.ndarray], p: int) -> list[np.ndarray]:
    basis: list[np.ndarray] = []
    for row in rows:
        r = row.astype(np.int64) % p
        for b in basis:
            lead = int(np.argmax(b != 0))
            if r[lead]:
                r = (r - int(r[lead]) * pow(int(b[lead]), -1, p) * b) % p
        if r.any():
            lead = int(np.argmax(r != 0))
            r = (r * pow(int(r[lead]), -1, p)) % p
            basis.append(r)
    return basis


def _span(basis: list[np.ndarray], p: int) -> np.ndarray:
    k = len(basis)
    coefs = np.stack(
        np.meshgrid(*[np.arange(p)] * k, indexing="ij"), -1
    ).reshape(-1, k)
    return (coefs @ np.array(basis)) % p


def _factor(matrix: np.ndarray, p: int, dims: int):
    """Factor M = S . B^T with points in Z_p^dims; None if degenerate."""
    basis = _row_reduce(list(matrix), p)
    rank = len(basis)
    if rank > dims:
        return None
    coeff_rows = []
    for row in matrix.astype(np.int64) % p:
        r = row.copy()
        coeff = [0] * rank
        for k, b in enumerate(basis):
            lead = int(np.argmax(b != 0))
            c = int(r[lead])
            coeff[k] = c
            r = (r - c * b) % p
        if r.any():
            return None
        coeff_rows.append(coeff)
    pad = dims - rank
    bmat = np.array(basis)
    points = [tuple(int(v) for v in bmat[:, j]) + (0,) * pad
              for j in range(matrix.shape[1])]
    spectrum = [tuple(int(v) for v in c) + (0,) * pad for c in coeff_rows]
    if len(set(points)) != len(points) or len(set(spectrum)) != len(spectrum):
        return None
    return points, spectrum


def search_spectral_pair(
    p: int, dims: int, size: int, budget: int | None = None
) -> tuple[list, list, SearchStats]:
    """Find (B, S) in Z_p^dims, |B| = |S| = size, S a spectrum of B.

    Deterministic; raises SearchExhausted when the budget runs out or the
    symmetry-reduced tree holds no admissible matrix.
    """
    if size % p:
        raise ValueError("size must be a multiple of p for a vanishing sum")
    budget = budget if budget is not None else SETTINGS.hadamard_search_budget
    mult = size // p
    bal = _balanced_vectors(p, size)
    order = np.lexsort(bal.T[::-1])
    bal = bal[order]

    first = np.repeat(np.arange(p, dtype=np.int8), mult)
    diffs = (bal - first) % p
    pool0 = bal[_balanced_mask(diffs, p, mult) & _lex_greater(bal, first)]

    need = size - 1  # nonzero rows
    nodes = 0
    budget_hit = False
    result: list | None = None

    def dfs(rows: list[np.ndarray], pool: np.ndarray) -> bool:
        nonlocal nodes, budget_hit, result
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return False
        depth = len(rows)
        if depth == need:
            matrix = np.vstack([np.zeros(size, np.int8)] + rows)
            fact = _factor(matrix, p, dims)
            if fact is None:
                return False
            result = fact
            return True
        if len(pool) < need - depth:
            return False
        basis = _row_reduce(rows, p)
        if len(basis) > dims:
            return False
        if len(basis) == dims:
            spanset = {v.astype(np.int8).tobytes() for v in _span(basis, p)}
            keep = np.fromiter(
                (v.tobytes() in spanset for v in pool), bool, len(pool)
            )
            pool = pool[keep]
            if len(pool) < need - depth:
                return False
        for i in range(len(pool)):
            cand = pool[i]
            d = (pool - cand) % p
            ok = _balanced_mask(d, p, mult)
            ok[: i + 1] = False
            rows.append(cand)
            if dfs(rows, pool[ok]):
                return True
            rows.pop()
            if budget_hit:
                return False
        return False

    if dfs([first], pool0):
        points, spectrum = result
        return points, spectrum, SearchStats(nodes=nodes, exhausted=False)
    raise SearchExhausted(
        f"no admissible matrix found ({'budget hit' if budget_hit else 'tree exhausted'}, "
        f"{nodes} nodes)"
    )


def _lex_greater(arr: np.ndarray, v: np.ndarray) -> np.ndarray:
    res = np.zeros(len(arr), dtype=bool)
    decided = np.zeros(len(arr), dtype=bool)
    for c in range(arr.shape[1]):
        gt = (~decided) & (arr[:, c] > v[c])
        lt = (~decided) & (arr[:, c] < v[c])
        res |= gt
        decided |= gt | lt
    return res


def verify_spectral_pair(
    spec: GroupSpec, points: list, spectrum: list, p: int
) -> None:
    """Exact re-verification of a claimed spectral pair.

    Each spectrum-pair difference is checked twice: the balanced-residue
    count (the combinatorial reason the root sum vanishes) and the exact
    cyclotomic zero-test of the transform itself.  Raises
    VerificationFailed on any discrepancy.
    """
    points = [tuple(x) for x in points]
    spectrum = [tuple(s) for s in spectrum]
    if len(set(points)) != len(points):
        raise VerificationFailed("point set has repeats")
    if len(set(spectrum)) != len(spectrum):
        raise VerificationFailed("spectrum has repeats")
    if len(points) != len(spectrum):
        raise VerificationFailed("|S| must equal |B|")
    if len(points) % p:
        raise VerificationFailed("|B| must be a multiple of p")
    mult = len(points) // p
    indicator = GroupFunction.indicator(spec, points)
    for s1, s2 in itertools.combinations(spectrum, 2):
        d = spec.sub(s1, s2)
        counts = [0] * p
        for x in points:
            counts[sum(c * v for c, v in zip(d, x)) % p] += 1
        if any(c != mult for c in counts):
            raise VerificationFailed(
                f"difference {d} does not balance residues: {counts}"
            )
        if not dft(indicator, d).is_zero():
            raise VerificationFailed(
                f"transform does not vanish at {d} despite balanced counts"
            )
