"""Dense complex linear algebra shared by every other module.

Matrices are plain 2-D ``complex128`` numpy arrays and 3-mode tensors are
3-D ``complex128`` arrays.  All helpers return new arrays and never mutate
their inputs.

Flattening convention (used everywhere in the package)::

    mode 1 -> shape (d1, d2*d3), column index j*d3 + k
    mode 2 -> shape (d2, d1*d3), column index i*d3 + k
    mode 3 -> shape (d3, d1*d2), column index i*d2 + j

i.e. the remaining two indices are always enumerated lexicographically in
their natural order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

#: Absolute tolerance for exact matrix identities (max entry deviation).
IDENTITY_TOL = 1e-12
#: Relative singular-value threshold used for every numerical rank.
RANK_TOL = 1e-9


class SvdError(RuntimeError):
    """Raised when the SVD fails to converge."""


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite complex 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_tensor3(t) -> np.ndarray:
    arr = np.asarray(t, dtype=np.complex128)
    if arr.ndim != 3 or 0 in arr.shape:
        raise ValueError(f"expected a non-empty 3-mode tensor, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor has non-finite entries")
    return arr


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``[i*b.rows + k, j*b.cols + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats) -> np.ndarray:
    """Left-to-right Kronecker product of one or more matrices."""
    if not mats:
        raise ValueError("kron_all needs at least one factor")
    return reduce(kron, mats)


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = u @ diag(s) @ vh`` with ``s`` descending.

    Raises
    ------
    SvdError
        If LAPACK does not converge.
    """
    m = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(str(exc)) from exc
    return u, s, vh


def singular_values(a) -> np.ndarray:
    try:
        return np.linalg.svd(as_matrix(a), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(str(exc)) from exc


def numerical_rank(a, tol: float = RANK_TOL) -> int:
    """Number of singular values strictly above ``tol * max(s)``.

    The zero matrix has rank 0.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def max_deviation(a, b) -> float:
    """``max |a - b|`` over entries; shapes must agree."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def unitarity_defect(m) -> float:
    """``max |M M^dagger - I|``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("unitarity is only defined for square matrices")
    return max_deviation(m @ m.conj().T, np.eye(m.shape[0]))


def is_unitary(m, tol: float = IDENTITY_TOL) -> bool:
    return unitarity_defect(m) <= tol


def mode_flatten(t, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding (1-based) using the module's fixed layout."""
    t = as_tensor3(t)
    if mode not in (1, 2, 3):
        raise ValueError(f"invalid mode {mode!r}; expected 1, 2 or 3")
    axis = mode - 1
    rest = [ax for ax in range(3) if ax != axis]
    return t.transpose([axis] + rest).reshape(t.shape[axis], -1)


def khatri_rao(b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Column-wise Kronecker product with row index ``j*c.rows + k``.

    Works on stacks too: leading axes are broadcast, the last two are
    ``(rows, rank)``.
    """
    out = b[..., :, None, :] * c[..., None, :, :]
    return out.reshape(*out.shape[:-3], b.shape[-2] * c.shape[-2], b.shape[-1])


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Rank-``r`` CP term list ``sum_j a[:, j] o b[:, j] o c[:, j]``.

    Each factor matrix has shape ``(d_k, r)``.  For three-qubit operators the
    vectors hold matrix-unit coefficients, so the vector of a 2x2 operator
    ``M`` is simply ``M.reshape(4)``.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        mats = []
        for name in ("a", "b", "c"):
            m = np.array(getattr(self, name), dtype=np.complex128)
            if m.ndim != 2:
                raise ValueError(f"factor {name} must be 2-D (d, r), got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise ValueError(f"factor {name} has non-finite entries")
            m.setflags(write=False)
            object.__setattr__(self, name, m)
            mats.append(m)
        ranks = {m.shape[1] for m in mats}
        if len(ranks) != 1:
            raise ValueError(f"factor matrices disagree on rank: {[m.shape for m in mats]}")
        if ranks.pop() < 1:
            raise ValueError("a decomposition needs at least one term")

    @property
    def rank(self) -> int:
        return self.a.shape[1]

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.a.shape[0], self.b.shape[0], self.c.shape[0])

    def __len__(self) -> int:
        return self.rank

    def triples(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        return [(self.a[:, j], self.b[:, j], self.c[:, j]) for j in range(self.rank)]

    @classmethod
    def from_vectors(cls, triples: Iterable[Sequence]) -> "Decomposition":
        triples = list(triples)
        if not triples:
            raise ValueError("a decomposition needs at least one term")
        cols = list(zip(*triples))
        return cls(*(np.column_stack([np.asarray(v, dtype=np.complex128) for v in col])
                     for col in cols))

    @classmethod
    def from_operator_terms(cls, terms: Iterable[tuple]) -> "Decomposition":
        """Build from ``(coefficient, A, B, C)`` operator triples.

        The scalar is folded into the first factor.
        """
        triples = []
        for coef, a, b, c in terms:
            triples.append((coef * as_matrix(a).reshape(-1),
                            as_matrix(b).reshape(-1),
                            as_matrix(c).reshape(-1)))
        return cls.from_vectors(triples)

    def padded(self, rank: int) -> "Decomposition":
        """Same tensor, padded with zero triples up to ``rank`` terms."""
        extra = rank - self.rank
        if extra < 0:
            raise ValueError("cannot pad to a smaller rank")
        pad = lambda m: np.hstack([m, np.zeros((m.shape[0], extra), dtype=np.complex128)])
        return Decomposition(pad(self.a), pad(self.b), pad(self.c))


def reconstruct_cp(d: Decomposition, dims: Sequence[int] | None = None) -> np.ndarray:
    """Sum of the outer products of ``d``'s factor triples."""
    if dims is not None and tuple(dims) != d.dims:
        raise ValueError(f"decomposition dims {d.dims} do not match {tuple(dims)}")
    return np.einsum("ir,jr,kr->ijk", d.a, d.b, d.c)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
