"""Signed Pauli strings and their phase-tracked product algebra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import ID2, PAULI_X, PAULI_Y, PAULI_Z, tensor

_LETTER_MATRIX = {"I": ID2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

# Single-qubit products: (a, b) -> (letter of a*b, phase in {1, i, -1, -i}).
_MUL_TABLE = {
    ("I", "I"): ("I", 1),
    ("I", "X"): ("X", 1),
    ("I", "Y"): ("Y", 1),
    ("I", "Z"): ("Z", 1),
    ("X", "I"): ("X", 1),
    ("Y", "I"): ("Y", 1),
    ("Z", "I"): ("Z", 1),
    ("X", "X"): ("I", 1),
    ("Y", "Y"): ("I", 1),
    ("Z", "Z"): ("I", 1),
    ("X", "Y"): ("Z", 1j),
    ("Y", "X"): ("Z", -1j),
    ("Y", "Z"): ("X", 1j),
    ("Z", "Y"): ("X", -1j),
    ("Z", "X"): ("Y", 1j),
    ("X", "Z"): ("Y", -1j),
}


@dataclass(frozen=True)
class PauliString:
    """A +/-1-signed word over {I, X, Y, Z}, one letter per qubit."""

    letters: str
    sign: int = +1

    def __post_init__(self) -> None:
        if len(self.letters) < 1:
            raise ValueError("a Pauli string needs at least one letter")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters: {sorted(bad)}")
        if self.sign not in (+1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        """Dense 2**n matrix of the signed string."""
        return self.sign * tensor([_LETTER_MATRIX[ch] for ch in self.letters])

    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity letter."""
        return tuple(q for q, ch in enumerate(self.letters) if ch != "I")

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.letters


def pauli_matrix(ps: PauliString | str, sign: int = +1) -> np.ndarray:
    """Dense matrix of a Pauli string given as object or bare letters."""
    if isinstance(ps, str):
        ps = PauliString(ps, sign)
    return ps.matrix()


def multiply(a: PauliString, b: PauliString) -> tuple[str, complex]:
    """Letters and accumulated phase of the operator product ``a @ b``.

    The phase includes both input signs; it is one of ``1, -1, 1j, -1j``.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError("cannot multiply strings on different qubit counts")
    phase = complex(a.sign * b.sign)
    letters = []
    for la, lb in zip(a.letters, b.letters):
        letter, ph = _MUL_TABLE[(la, lb)]
        letters.append(letter)
        phase *= ph
    return "".join(letters), phase


def compose(strings: Sequence[PauliString]) -> PauliString:
    """Multiply out a product of strings into one signed string.

    Raises if the accumulated phase is imaginary: products used as observables
    must stay Hermitian, so an ``i`` phase signals a malformed operator list.
    """
    if len(strings) == 0:
        raise ValueError("empty product")
    acc = strings[0]
    phase = complex(acc.sign)
    letters = acc.letters
    for nxt in strings[1:]:
        letters, step = multiply(PauliString(letters, +1), nxt)
        phase *= step
    if phase == 1:
        return PauliString(letters, +1)
    if phase == -1:
        return PauliString(letters, -1)
    raise ValueError(f"product accumulated a non-real phase {phase}")
