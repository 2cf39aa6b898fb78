"""Schmidt rank of three-qubit gates built from CNOTs and local unitaries."""

__version__ = "0.1.0"
