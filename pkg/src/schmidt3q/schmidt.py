"""Operator Schmidt machinery for multi-qubit operators.

The operator basis is the set of matrix units ``S_0 = |0><0|, S_1 = |0><1|,
S_2 = |1><0|, S_3 = |1><1|`` (index ``2*row + col``).  Expanding an operator
in that basis is a pure rearrangement of its entries, so the coefficient
tensors below are exact.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from math import prod
from typing import Sequence

import numpy as np

from .tensor import (
    RANK_TOL,
    Decomposition,
    as_matrix,
    as_tensor3,
    mode_flatten,
    numerical_rank,
    reconstruct_cp,
    svd,
)

Cut = tuple[tuple[int, ...], tuple[int, ...]]


def parse_cut(cut, n_systems: int) -> Cut:
    """Normalise a bipartition.

    ``cut`` is either a string such as ``"A|BC"`` (system letters A, B, C, ...)
    or a pair of index sequences.  Each side keeps its listed order.
    """
    if isinstance(cut, str):
        if cut.count("|") != 1:
            raise ValueError(f"invalid cut {cut!r}: expected exactly one '|'")
        letters = string.ascii_uppercase[:n_systems]
        sides = []
        for part in cut.split("|"):
            part = part.strip().upper()
            try:
                sides.append(tuple(letters.index(ch) for ch in part))
            except ValueError:
                raise ValueError(
                    f"invalid cut {cut!r}: systems are {', '.join(letters)}") from None
        left, right = sides
    else:
        left, right = (tuple(int(i) for i in side) for side in cut)
    everything = left + right
    if not left or not right:
        raise ValueError(f"invalid cut {cut!r}: both sides must be non-empty")
    if sorted(everything) != list(range(n_systems)):
        raise ValueError(f"invalid cut {cut!r}: must partition systems 0..{n_systems - 1}")
    return left, right


def _check_square(u, dims: Sequence[int]) -> np.ndarray:
    u = as_matrix(u)
    n = prod(dims)
    if u.shape != (n, n):
        raise ValueError(f"operator of shape {u.shape} does not act on dims {tuple(dims)}")
    return u


def realign(u, cut, dims: Sequence[int]) -> np.ndarray:
    """Coefficient matrix of ``u`` across a bipartite cut.

    Row index enumerates the matrix units of the left side (row-major over
    the left operator's entries, systems in listed order), column index the
    right side's.  Its rank is the operator Schmidt rank across the cut.
    """
    dims = tuple(dims)
    u = _check_square(u, dims)
    left, right = parse_cut(cut, len(dims))
    n = len(dims)
    t = u.reshape(dims + dims)
    order = ([i for i in left] + [n + i for i in left]
             + [i for i in right] + [n + i for i in right])
    dl = prod(dims[i] for i in left)
    dr = prod(dims[i] for i in right)
    return t.transpose(order).reshape(dl * dl, dr * dr)


@dataclass(frozen=True, eq=False)
class BipartiteSchmidt:
    """Operator Schmidt decomposition ``sum_i w_i L_i (x) R_i`` across a cut."""

    cut: Cut
    dims: tuple[int, ...]
    weights: np.ndarray
    left_ops: list[np.ndarray] = field(repr=False)
    right_ops: list[np.ndarray] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.weights)

    def to_matrix(self) -> np.ndarray:
        """Re-interleave the factors into an operator on the original systems."""
        left, right = self.cut
        order = left + right
        n = len(self.dims)
        total = prod(self.dims)
        acc = np.zeros((total, total), dtype=np.complex128)
        for w, lo, ro in zip(self.weights, self.left_ops, self.right_ops):
            acc += w * np.kron(lo, ro)
        # acc acts on systems in `order`; permute back to 0..n-1.
        pdims = tuple(self.dims[i] for i in order)
        t = acc.reshape(pdims + pdims)
        inv = [order.index(i) for i in range(n)]
        return t.transpose(inv + [n + i for i in inv]).reshape(total, total)


def bipartite_schmidt(u, cut, dims: Sequence[int], tol: float = RANK_TOL) -> BipartiteSchmidt:
    dims = tuple(dims)
    left, right = parse_cut(cut, len(dims))
    r = realign(u, (left, right), dims)
    uu, s, vh = svd(r)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol * s[0]))
    dl = prod(dims[i] for i in left)
    dr = prod(dims[i] for i in right)
    lops = [uu[:, i].reshape(dl, dl) for i in range(rank)]
    rops = [vh[i, :].reshape(dr, dr) for i in range(rank)]
    return BipartiteSchmidt((left, right), dims, s[:rank].copy(), lops, rops)


def operator_tensor3(u) -> np.ndarray:
    """4x4x4 matrix-unit coefficient tensor of a three-qubit operator.

    ``u = sum T[a, b, c] S_a (x) S_b (x) S_c``.
    """
    u = as_matrix(u)
    if u.shape != (8, 8):
        raise ValueError(f"expected an 8x8 three-qubit operator, got {u.shape}")
    return u.reshape((2,) * 6).transpose(0, 3, 1, 4, 2, 5).reshape(4, 4, 4)


def tensor3_to_operator(t) -> np.ndarray:
    """Inverse of :func:`operator_tensor3`."""
    t = as_tensor3(t)
    if t.shape != (4, 4, 4):
        raise ValueError(f"expected a 4x4x4 tensor, got {t.shape}")
    return t.reshape((2,) * 6).transpose(0, 2, 4, 1, 3, 5).reshape(8, 8)


def permute_systems(u, perm: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Relabel tensor factors: new system ``k`` is old system ``perm[k]``."""
    dims = tuple(dims)
    u = _check_square(u, dims)
    n = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} systems")
    nd = tuple(dims[p] for p in perm)
    t = u.reshape(dims + dims).transpose(perm + [n + p for p in perm])
    return t.reshape(prod(nd), prod(nd))


@dataclass(frozen=True)
class FlatteningBound:
    mode_ranks: tuple[int, int, int]

    @property
    def lower_bound(self) -> int:
        return max(self.mode_ranks)


def flattening_lower_bound(t, tol: float = RANK_TOL) -> FlatteningBound:
    """Ranks of the three unfoldings; their maximum bounds the CP rank from below."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = as_tensor3(t)
    return FlatteningBound(tuple(numerical_rank(mode_flatten(t, m), tol) for m in (1, 2, 3)))


def verify_decomposition(t, d: Decomposition) -> float:
    """Frobenius residual ``||t - reconstruct(d)||``.

    A residual at or below :data:`~schmidt3q.tensor.IDENTITY_TOL` certifies
    that ``t`` has CP rank at most ``len(d)``.
    """
    t = as_tensor3(t)
    return float(np.linalg.norm(t - reconstruct_cp(d, t.shape)))


_PERMS4 = list(itertools.permutations(range(4)))


def permutation_isomorphisms(t1, t2, tol: float = 1e-12, first_only: bool = False):
    """All triples ``(p1, p2, p3)`` with ``t1[p1[i], p2[j], p3[k]] == t2[i, j, k]``.

    Exhaustive over the 24**3 basis permutations of a 4x4x4 pair, in
    lexicographic order.
    """
    t1 = as_tensor3(t1)
    t2 = as_tensor3(t2)
    if t1.shape != (4, 4, 4) or t2.shape != (4, 4, 4):
        raise ValueError("permutation search needs two 4x4x4 tensors")
    p_arr = np.array(_PERMS4)
    found = []
    # Permuted slices: for fixed (p1, p2) evaluate all 24 mode-3 permutations at once.
    stacked_c = t1[:, :, p_arr]  # (4, 4, 24, 4)
    for p1 in _PERMS4:
        a = stacked_c[list(p1)]
        for p2 in _PERMS4:
            cand = a[:, list(p2)]  # (4, 4, 24, 4)
            dev = np.abs(cand - t2[:, :, None, :]).max(axis=(0, 1, 3))
            for idx in np.flatnonzero(dev <= tol):
                found.append((p1, p2, _PERMS4[idx]))
                if first_only:
                    return found
    return found


def invert_permutation(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, pi in enumerate(p):
        inv[pi] = i
    return tuple(inv)


def transport_decomposition(d: Decomposition, perms) -> Decomposition:
    """Move a decomposition of ``t2`` onto ``t1`` along an isomorphism.

    ``perms`` is a triple returned by :func:`permutation_isomorphisms`
    for the pair ``(t1, t2)``.
    """
    a, b, c = (m[list(invert_permutation(p))] for m, p in zip((d.a, d.b, d.c), perms))
    return Decomposition(a, b, c)
