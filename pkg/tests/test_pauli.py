from __future__ import annotations

import numpy as np
import pytest

from ctxcert import mabk
from ctxcert.pauli import PauliString, compose, multiply, pauli_matrix


def test_yxx_on_ghz3():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = 1 / np.sqrt(2)
    ghz[7] = 1j / np.sqrt(2)
    mat = pauli_matrix("YXX")
    assert (ghz.conj() @ mat @ ghz).real == pytest.approx(1.0, abs=1e-12)


def test_identity_string():
    assert np.allclose(pauli_matrix("III"), np.eye(8))


def test_anticommutation():
    z = pauli_matrix("Z")
    x = pauli_matrix("X")
    assert np.allclose(z @ x, -(x @ z))


@pytest.mark.parametrize("letters", ["X", "ZY", "XYZ", "IXIZ"])
def test_strings_are_hermitian_involutions(letters):
    mat = pauli_matrix(letters)
    dim = mat.shape[0]
    assert np.max(np.abs(mat - mat.conj().T)) < 1e-15
    assert np.allclose(mat @ mat, np.eye(dim))
    if set(letters) != {"I"}:
        assert abs(np.trace(mat)) < 1e-15


def test_multiply_tracks_phase():
    letters, phase = multiply(PauliString("X"), PauliString("Y"))
    assert letters == "Z" and phase == 1j
    letters, phase = multiply(PauliString("ZZ", -1), PauliString("ZZ", -1))
    assert letters == "II" and phase == 1


def test_multiply_matches_matrices():
    rng = np.random.default_rng(4)
    alphabet = "IXYZ"
    for _ in range(30):
        a = PauliString("".join(rng.choice(list(alphabet), size=3)),
                        int(rng.choice([1, -1])))
        b = PauliString("".join(rng.choice(list(alphabet), size=3)),
                        int(rng.choice([1, -1])))
        letters, phase = multiply(a, b)
        assert np.allclose(a.matrix() @ b.matrix(),
                           phase * pauli_matrix(letters))


def test_compose_real_products():
    ps = compose([PauliString("XZZ"), PauliString("ZXI")])
    assert ps.letters == "YYZ" and ps.sign == 1
    ps = compose([PauliString("ZXZ"), PauliString("ZZX"), PauliString("XZZ")])
    assert ps.sign in (1, -1)


def test_compose_rejects_imaginary_phase():
    with pytest.raises(ValueError, match="phase"):
        compose([PauliString("X"), PauliString("Y")])


def test_validation():
    with pytest.raises(ValueError, match="letters"):
        PauliString("XQ")
    with pytest.raises(ValueError, match="sign"):
        PauliString("X", 2)
    with pytest.raises(ValueError, match="letter"):
        PauliString("")


def test_mabk_operator_matches_term_sum(family3):
    inst = mabk.build_mabk(3)
    total = sum(term.matrix() for term in inst.terms)
    assert np.allclose(total, inst.operator)
