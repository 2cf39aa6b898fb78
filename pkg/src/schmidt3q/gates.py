"""Catalog of the elementary gates and the constructed three-qubit operators.

Ordering convention: the leftmost tensor factor is system A and is the most
significant bit of the row index.  Matrix units are ``S0 = |0><0|``,
``S1 = |0><1|``, ``S2 = |1><0|``, ``S3 = |1><1|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from math import prod, sqrt
from typing import Optional, Union

import numpy as np

from .circuit import embed
from .schmidt import operator_tensor3, permutation_isomorphisms, transport_decomposition
from .tensor import Decomposition, kron_all, unitarity_defect, IDENTITY_TOL


def _frozen(m) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


I2 = _frozen(np.eye(2))
S0 = _frozen([[1, 0], [0, 0]])
S1 = _frozen([[0, 1], [0, 0]])
S2 = _frozen([[0, 0], [1, 0]])
S3 = _frozen([[0, 0], [0, 1]])
MATRIX_UNITS = (S0, S1, S2, S3)
X = _frozen([[0, 1], [1, 0]])
Y = _frozen([[0, -1j], [1j, 0]])
Z = _frozen([[1, 0], [0, -1]])
H = _frozen(np.array([[1, 1], [1, -1]]) / sqrt(2))

CNOT = _frozen(np.kron(S0, I2) + np.kron(S3, X))
CZ = _frozen(np.diag([1, 1, 1, -1]))
SWAP = _frozen(np.eye(4)[[0, 2, 1, 3]])
TOFFOLI = _frozen(np.kron(S0, np.eye(4)) + np.kron(S3, CNOT))
FREDKIN = _frozen(np.kron(S0, np.eye(4)) + np.kron(S3, SWAP))

_ELEMENTARY = {
    "I2": I2, "S0": S0, "S1": S1, "S2": S2, "S3": S3,
    "X": X, "Y": Y, "Z": Z, "H": H,
    "CNOT": CNOT, "CZ": CZ, "SWAP": SWAP, "TOFFOLI": TOFFOLI, "FREDKIN": FREDKIN,
}
ELEMENTARY_NAMES = tuple(_ELEMENTARY)


def elementary(name: str) -> np.ndarray:
    """Read-only matrix of a standard gate or matrix unit."""
    try:
        return _ELEMENTARY[name]
    except KeyError:
        raise KeyError(f"unknown elementary gate {name!r}") from None


# A product term: (scalar, (factor_A, factor_B, ...)).
Term = tuple[complex, tuple[np.ndarray, ...]]
RankClaim = Union[int, frozenset, None]


def sum_terms(terms) -> np.ndarray:
    return sum(coef * kron_all(*factors) for coef, factors in terms)


@dataclass(frozen=True, eq=False)
class GateEntry:
    name: str
    systems: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    expansion: tuple = field(default=(), repr=False)
    certificate: Optional[Decomposition] = field(default=None, repr=False)
    claimed_rank: RankClaim = None
    claimed_unitary: bool = True
    anchor: str = ""
    variants: dict = field(default_factory=dict, repr=False)
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        m = _frozen(self.matrix)
        n = prod(self.systems)
        if m.shape != (n, n):
            raise ValueError(f"{self.name}: matrix {m.shape} does not match systems {self.systems}")
        object.__setattr__(self, "matrix", m)

    @property
    def n_qubits(self) -> int:
        return len(self.systems)

    @property
    def has_tensor3(self) -> bool:
        return self.systems == (2, 2, 2)

    def tensor(self) -> np.ndarray:
        if not self.has_tensor3:
            raise ValueError(f"{self.name} acts on {self.systems}; no 4x4x4 tensor view")
        return operator_tensor3(self.matrix)

    @property
    def claimed_max(self) -> Optional[int]:
        if self.claimed_rank is None:
            return None
        if isinstance(self.claimed_rank, frozenset):
            return max(self.claimed_rank)
        return self.claimed_rank

    def unitarity_defect(self) -> float:
        return unitarity_defect(self.matrix)


def matmul_tensor() -> np.ndarray:
    """The 2x2 matrix multiplication tensor ``sum e_ij (x) e_jk (x) e_ki``.

    ``e_ij`` sits at coefficient index ``2*i + j``.
    """
    t = np.zeros((4, 4, 4), dtype=np.complex128)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                t[2 * i + j, 2 * j + k, 2 * k + i] = 1
    return t


# Strassen's seven products as ({A entries}, {B entries}, {C entries}) with signs.
_STRASSEN = (
    ({(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (1, 1): 1}, {(0, 0): 1, (1, 1): 1}),
    ({(1, 0): 1, (1, 1): 1}, {(0, 0): 1}, {(1, 0): 1, (1, 1): -1}),
    ({(0, 0): 1}, {(0, 1): 1, (1, 1): -1}, {(0, 1): 1, (1, 1): 1}),
    ({(1, 1): 1}, {(1, 0): 1, (0, 0): -1}, {(0, 0): 1, (1, 0): 1}),
    ({(0, 0): 1, (0, 1): 1}, {(1, 1): 1}, {(0, 0): -1, (0, 1): 1}),
    ({(1, 0): 1, (0, 0): -1}, {(0, 0): 1, (0, 1): 1}, {(1, 1): 1}),
    ({(0, 1): 1, (1, 1): -1}, {(1, 0): 1, (1, 1): 1}, {(0, 0): 1}),
)


def strassen_certificate() -> Decomposition:
    """Seven-term decomposition of :func:`matmul_tensor`.

    The product ``C = A B`` contributes ``c_ik`` on the third factor at
    index ``2*k + i`` (the tensor is cyclic in ``e_ki``).
    """
    triples = []
    for a_part, b_part, c_part in _STRASSEN:
        u = np.zeros(4)
        v = np.zeros(4)
        w = np.zeros(4)
        for (i, j), s in a_part.items():
            u[2 * i + j] = s
        for (j, k), s in b_part.items():
            v[2 * j + k] = s
        for (i, k), s in c_part.items():
            w[2 * k + i] = s
        triples.append((u, v, w))
    return Decomposition.from_vectors(triples)


def _cert(terms) -> Decomposition:
    return Decomposition.from_operator_terms((c, *f) for c, f in terms)


def _units(*idx_triples) -> tuple:
    return tuple((1, tuple(MATRIX_UNITS[i] for i in t)) for t in idx_triples)


def _strassen_transport(matrix) -> Decomposition:
    """Seven-term certificate for a tensor basis-permutation-equivalent to matmul."""
    iso = permutation_isomorphisms(operator_tensor3(matrix), matmul_tensor(), first_only=True)
    if not iso:
        raise ValueError("operator is not permutation-isomorphic to the matmul tensor")
    return transport_decomposition(strassen_certificate(), iso[0])


def _right_multiply(d: Decomposition, ra, rb, rc) -> Decomposition:
    """Certificate for ``U (ra (x) rb (x) rc)`` given one for ``U``."""
    def mul(m, r):
        cols = [(m[:, j].reshape(2, 2) @ r).reshape(4) for j in range(m.shape[1])]
        return np.column_stack(cols)
    return Decomposition(mul(d.a, ra), mul(d.b, rb), mul(d.c, rc))


T_AB = np.kron(CNOT, I2)
T_BC = np.kron(I2, CNOT)
T_AC = embed(CNOT, (0, 2), 3)
T_CA = embed(CNOT, (2, 0), 3)


def _u3_pauli() -> GateEntry:
    s = 1 / sqrt(3)
    terms = ((s, (I2, I2, I2)), (1j * s, (X, X, X)), (1j * s, (Z, Z, Z)))
    return GateEntry("U3_pauli", (2, 2, 2), sum_terms(terms), terms, _cert(terms), 3,
                     anchor="(III + i XXX + i ZZZ)/sqrt(3)")


def _u5_thm1() -> GateEntry:
    terms = ((0.5, (S0, I2, I2)), (0.5, (S0, X, X)), (1, (S3, I2, X)),
             (0.5, (S0, Y, Y)), (0.5, (S0, Z, Z)))
    return GateEntry("U5_thm1", (2, 2, 2), sum_terms(terms), terms, _cert(terms), 5,
                     anchor="1/2 S0 (x) (II+XX+YY+ZZ) + S3 (x) I (x) X")


def _u6_thm1() -> GateEntry:
    r = 1 / sqrt(2)
    terms = ((0.5, (S0, I2, I2)), (0.5, (S0, X, X)), (r, (S3, I2, X)),
             (0.5, (S0, Y, Y)), (0.5, (S0, Z, Z)), (r, (S3, Y, Z)))
    return GateEntry("U6_thm1", (2, 2, 2), sum_terms(terms), terms, _cert(terms), 6,
                     anchor="1/2 S0 (x) (II+XX+YY+ZZ) + 1/sqrt2 S3 (x) (I (x) X + Y (x) Z)")


def _u7() -> GateEntry:
    terms = _units((1, 2, 0), (2, 3, 0), (0, 0, 1), (3, 1, 1),
                   (1, 1, 2), (2, 0, 2), (0, 3, 3), (3, 2, 3))
    m = sum_terms(terms)
    return GateEntry("U7", (2, 2, 2), m, terms, _strassen_transport(m), 7,
                     anchor="eight matrix-unit triples, basis-permutation of the matmul tensor",
                     notes={"certificate": "Strassen scheme transported along a basis permutation"})


def _u8() -> GateEntry:
    terms = _units((0, 0, 0), (1, 3, 0), (2, 0, 1), (3, 2, 1),
                   (0, 1, 2), (1, 2, 2), (2, 1, 3), (3, 3, 3))
    return GateEntry("U8", (2, 2, 2), sum_terms(terms), terms, _cert(terms), frozenset({7, 8}),
                     anchor="eight matrix-unit triples; rank 7 or 8")


def _t_lemma2() -> GateEntry:
    terms = _units((1, 3, 0), (2, 0, 1), (3, 2, 1), (1, 2, 2), (2, 1, 3), (3, 3, 3))
    return GateEntry("T_lemma2", (2, 2, 2), sum_terms(terms), terms, _cert(terms), 6,
                     claimed_unitary=False,
                     anchor="U8 with its S0 slice on system A removed")


def _finagler() -> GateEntry:
    r = 1 / sqrt(2)
    terms = ((r, (S0, I2, I2)), (r, (S1, Z, Z)), (r, (S2, X, X)), (r, (S3, Y, Y)))
    return GateEntry("finagler", (2, 2, 2), sum_terms(terms), terms, _cert(terms), 4,
                     anchor="(S0 II + S1 ZZ + S2 XX + S3 YY)/sqrt2")


_B16_D = (
    _frozen([[1, 1j], [0, 0]]),
    _frozen([[0, 0], [1, 1j]]),
    _frozen([[0, 0], [1, -1j]]),
    _frozen([[-1, 1j], [0, 0]]),
)
_B16_GROUPS = (
    ((0, 0, 0, 1), (0, 1, 2, 1), (1, 2, 0, 1), (1, 3, 2, 1)),
    ((0, 0, 1, 1), (0, 1, 3, 1), (1, 2, 1, 1), (1, 3, 3, 1)),
    ((2, 2, 2, 1), (2, 3, 0, -1), (3, 0, 2, -1), (3, 1, 0, 1)),
    ((2, 2, 3, 1), (2, 3, 1, -1), (3, 0, 3, -1), (3, 1, 1, 1)),
)


def _bullock16_terms(first_group_scale: float, other_scale: float) -> tuple:
    terms = []
    for g, (group, d) in enumerate(zip(_B16_GROUPS, _B16_D)):
        scale = first_group_scale if g == 0 else other_scale
        for a, b, c, sign in group:
            terms.append((scale * sign, (MATRIX_UNITS[a], MATRIX_UNITS[b], MATRIX_UNITS[c], d)))
    return tuple(terms)


def _bullock16() -> GateEntry:
    r = 1 / sqrt(2)
    literal = _bullock16_terms(r, 1.0)
    scaled = _bullock16_terms(r, r)
    m_lit = sum_terms(literal)
    m_scaled = sum_terms(scaled)
    defects = {"literal": unitarity_defect(m_lit), "global_scale": unitarity_defect(m_scaled)}
    unitary = sorted(k for k, v in defects.items() if v <= IDENTITY_TOL)
    return GateEntry(
        "bullock16", (2, 2, 2, 2), m_scaled, scaled, None, None,
        anchor="sixteen product terms; 1/sqrt2 printed on the first group only",
        variants={"literal": _frozen(m_lit), "global_scale": _frozen(m_scaled)},
        notes={"rank_upper_bound": 16, "unitarity_defect": defects, "unitary_variants": unitary,
               "matrix_variant": "global_scale"},
    )


def _u2() -> GateEntry:
    terms = ((1, (I2, S0, I2)), (1, (I2, S3, X)))
    return GateEntry("U2", (2, 2, 2), T_BC, terms, _cert(terms), 2, anchor="I_A (x) T_BC")


def _t3() -> GateEntry:
    hp1h = H @ S3 @ H
    terms = ((1, (I2, I2, I2)), (-2, (S3, S3, hp1h)))
    return GateEntry("T3", (2, 2, 2), TOFFOLI, terms, _cert(terms), 2,
                     anchor="(I I H)(I - 2|111><111|)(I I H)")


def _f3() -> GateEntry:
    terms = ((1, (S0 + 0.5 * S3, I2, I2)), (0.5, (S3, Z, Z)), (1, (S3, S1, S2)), (1, (S3, S2, S1)))
    return GateEntry("F3", (2, 2, 2), FREDKIN, terms, _cert(terms), 4,
                     anchor="controlled swap as four product terms")


def _u3_circ() -> GateEntry:
    m = np.kron(CNOT, H) @ TOFFOLI @ kron_all(I2, I2, H)
    terms = ((1, (S0, I2, I2)), (1, (S3, X, I2)), (-2, (S3, S1, S3)))
    return GateEntry("U3_circ", (2, 2, 2), m, terms, _cert(terms), 3,
                     anchor="(T_AB (x) H) T3 (I (x) I (x) H)")


def _u4() -> GateEntry:
    m = T_AB @ T_BC
    terms = ((1, (S0, S0, I2)), (1, (S0, S3, X)), (1, (S3, S2, I2)), (1, (S3, S1, X)))
    return GateEntry("U4", (2, 2, 2), m, terms, _cert(terms), 4,
                     anchor="(T_AB (x) I_C)(I_A (x) T_BC)")


def _u5_circ() -> GateEntry:
    m = T_AB @ FREDKIN
    terms = ((1, (S0, I2, I2)), (0.5, (S3, X, I2)), (0.5, (S3, X @ Z, Z)),
             (1, (S3, S3, S2)), (1, (S3, S0, S1)))
    return GateEntry("U5_circ", (2, 2, 2), m, terms, _cert(terms), 5,
                     anchor="(T_AB (x) I) F3")


def _u6_circ() -> GateEntry:
    m = T_AC @ kron_all(H, I2, I2) @ _u3_circ().matrix
    r = 1 / sqrt(2)
    terms = ((r, (S0, I2, I2)), (r, (S1, X, I2)), (-2 * r, (S1, S1, S3)),
             (r, (S2, I2, X)), (2 * r, (S3, S1, S1)), (-r, (S3, X, X)))
    return GateEntry("U6_circ", (2, 2, 2), m, terms, _cert(terms), 6,
                     anchor="(T_AC (x) I_B)(H (x) I (x) I) U3")


def _m3() -> GateEntry:
    m = T_AB @ T_BC @ T_CA
    return GateEntry("M3", (2, 2, 2), m, (), _strassen_transport(m), 7,
                     anchor="(T_AB (x) I_C)(I_A (x) T_BC)(T_CA (x) I_B)",
                     notes={"certificate": "Strassen scheme transported along a basis permutation"})


def _m3_dressed() -> GateEntry:
    hih = kron_all(H, I2, H)
    m = T_AB @ T_BC @ hih @ T_AC
    # T_AC conjugated by H (x) H on A, C is T_CA, so this is M3 (H (x) I (x) H).
    cert = _right_multiply(_m3().certificate, H, I2, H)
    return GateEntry("M3_dressed", (2, 2, 2), m, (), cert, 7,
                     anchor="T_AB T_BC (H (x) I (x) H) T_AC, the Hadamard-dressed three-CNOT gate")


_BUILDERS = {
    "U2": _u2,
    "U3_pauli": _u3_pauli,
    "U5_thm1": _u5_thm1,
    "U6_thm1": _u6_thm1,
    "U7": _u7,
    "U8": _u8,
    "finagler": _finagler,
    "bullock16": _bullock16,
    "T_lemma2": _t_lemma2,
    "T3": _t3,
    "F3": _f3,
    "U3_circ": _u3_circ,
    "U4": _u4,
    "U5_circ": _u5_circ,
    "U6_circ": _u6_circ,
    "M3": _m3,
    "M3_dressed": _m3_dressed,
}
PAPER_GATE_NAMES = tuple(_BUILDERS)


@cache
def paper_gate(name: str) -> GateEntry:
    """Catalog entry for a constructed operator (cached, read-only)."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown gate {name!r}") from None
    return builder()


def catalog_matrix(name: str) -> np.ndarray:
    """Matrix for any catalog name, elementary or constructed."""
    if name in _ELEMENTARY:
        return _ELEMENTARY[name]
    return paper_gate(name).matrix
