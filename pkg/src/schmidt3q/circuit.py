"""Plain-text qubit circuits.

Format (one instruction per line, ``#`` starts a comment)::

    qubits 3          # optional header; 3 qubits if absent
    h 2
    toffoli 0 1 2     # controls first, target last
    cnot 0 1
    gate U8 0 1 2     # whole catalog gate on the listed qubits

Lines run in time order from top to bottom, so the circuit's matrix is
``M_k ... M_2 M_1``.  Qubit 0 is the leftmost tensor factor (most significant
bit).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2

import numpy as np

from .tensor import as_matrix

# text keyword -> elementary catalog name
GATE_KEYWORDS = {
    "h": "H", "x": "X", "y": "Y", "z": "Z",
    "cnot": "CNOT", "cz": "CZ", "swap": "SWAP",
    "toffoli": "TOFFOLI", "fredkin": "FREDKIN",
}
_KEYWORD_OF = {v: k for k, v in GATE_KEYWORDS.items()}
DEFAULT_QUBITS = 3


class CircuitError(ValueError):
    """Malformed circuit text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass(frozen=True)
class PlacedGate:
    gate: str  # catalog name, e.g. "CNOT" or "U8"
    positions: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    n_qubits: int = DEFAULT_QUBITS
    steps: tuple[PlacedGate, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise CircuitError("n_qubits must be positive")
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            _check_positions(step.positions, self.n_qubits)


def _check_positions(positions, n_qubits, line=None):
    for q in positions:
        if not 0 <= q < n_qubits:
            raise CircuitError(f"index out of range: qubit {q} (circuit has {n_qubits})", line)
    if len(set(positions)) != len(positions):
        raise CircuitError(f"duplicate index in {list(positions)}", line)


def gate_arity(name: str) -> int:
    from .gates import catalog_matrix

    dim = catalog_matrix(name).shape[0]
    k = int(round(log2(dim)))
    if 2 ** k != dim:
        raise CircuitError(f"gate {name} is not a qubit gate")
    return k


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitError(f"bad qubit index {tok!r}", lineno) from None


def parse(text: str) -> Circuit:
    n_qubits = None
    pending: list[tuple[int, str, tuple[int, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "qubits":
            if n_qubits is not None or pending:
                raise CircuitError("'qubits' header must come first and only once", lineno)
            if len(toks) != 2:
                raise CircuitError("expected 'qubits N'", lineno)
            n_qubits = _parse_int(toks[1], lineno)
            if n_qubits < 1:
                raise CircuitError("qubit count must be positive", lineno)
            continue
        if head == "gate":
            if len(toks) < 2:
                raise CircuitError("expected 'gate <name> <qubits...>'", lineno)
            name = toks[1]
            args = toks[2:]
            try:
                arity = gate_arity(name)
            except KeyError:
                raise CircuitError(f"unknown gate {name!r}", lineno) from None
        elif head in GATE_KEYWORDS:
            name = GATE_KEYWORDS[head]
            args = toks[1:]
            arity = gate_arity(name)
        else:
            raise CircuitError(f"unknown gate {head!r}", lineno)
        positions = tuple(_parse_int(t, lineno) for t in args)
        if len(positions) != arity:
            raise CircuitError(
                f"arity mismatch: {name} acts on {arity} qubits, got {len(positions)}", lineno)
        pending.append((lineno, name, positions))
    if n_qubits is None:
        n_qubits = DEFAULT_QUBITS
    steps = []
    for lineno, name, positions in pending:
        _check_positions(positions, n_qubits, lineno)
        steps.append(PlacedGate(name, positions))
    return Circuit(n_qubits, tuple(steps))


def format_circuit(c: Circuit) -> str:
    """Canonical text; ``parse(format_circuit(c)) == c``."""
    lines = [f"qubits {c.n_qubits}"]
    for step in c.steps:
        qs = " ".join(str(q) for q in step.positions)
        kw = _KEYWORD_OF.get(step.gate)
        lines.append(f"{kw} {qs}" if kw else f"gate {step.gate} {qs}")
    return "\n".join(lines) + "\n"


def embed(gate, positions, n_qubits: int) -> np.ndarray:
    """Lift a ``2**k`` gate onto ``positions`` of an ``n_qubits`` register.

    The gate's j-th tensor factor acts on qubit ``positions[j]``; all other
    qubits get the identity.  Pure index permutation, no arithmetic beyond
    one Kronecker product with an identity.
    """
    g = as_matrix(gate)
    positions = tuple(int(q) for q in positions)
    k = len(positions)
    if g.shape != (2 ** k, 2 ** k):
        raise ValueError(f"gate of shape {g.shape} does not act on {k} qubits")
    _check_positions(positions, n_qubits)
    rest = [q for q in range(n_qubits) if q not in positions]
    full = np.kron(g, np.eye(2 ** (n_qubits - k)))
    # axis i of `full` is qubit order[i]; move each qubit back to its own axis.
    order = list(positions) + rest
    inv = [order.index(q) for q in range(n_qubits)]
    t = full.reshape((2,) * (2 * n_qubits))
    t = t.transpose(inv + [n_qubits + i for i in inv])
    return t.reshape(2 ** n_qubits, 2 ** n_qubits)


def evaluate(c: Circuit) -> np.ndarray:
    """Register unitary of ``c``; the first step is applied first."""
    from .gates import catalog_matrix

    u = np.eye(2 ** c.n_qubits, dtype=np.complex128)
    for step in c.steps:
        u = embed(catalog_matrix(step.gate), step.positions, c.n_qubits) @ u
    return u
