import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ftaqc.encoding import encode
from ftaqc.errors import NumericalError
from ftaqc.pauli import PauliSum
from ftaqc.spectral import (
    Schedule,
    classify_sectors,
    degenerate_clusters,
    diagonalize,
    gap_profile,
    min_gap_along_path,
)

from oracles import pauli_matrix

MX = PauliSum.from_text("-1 X")
MZ = PauliSum.from_text("-1 Z")


def test_diagonalize_z():
    np.testing.assert_allclose(diagonalize(PauliSum.from_text("1 Z")).eigenvalues, [-1, 1])


def test_min_gap_x_to_z():
    s, gap = min_gap_along_path(Schedule(MX, MZ, 1.0), samples=201)
    assert s == pytest.approx(0.5)
    assert gap == pytest.approx(np.sqrt(2), abs=1e-12)
    # closed form 2 sqrt((1-s)^2 + s^2) on the grid
    for row in gap_profile(Schedule(MX, MZ, 1.0), samples=11):
        assert row.gap == pytest.approx(2 * np.hypot(1 - row.s, row.s), abs=1e-12)


def test_static_schedule_gap():
    h = PauliSum.from_text("0.4 ZZ\n-1 XI\n0.3 IX")
    w = np.linalg.eigvalsh(h.to_matrix())
    rows = gap_profile(Schedule(h, h, 1.0), samples=5)
    assert all(r.gap == pytest.approx(w[1] - w[0], abs=1e-12) for r in rows)


def test_degenerate_gap_is_zero():
    rows = gap_profile(Schedule(PauliSum.from_text("1 ZZ"), PauliSum.from_text("1 ZZ"), 1.0), 2)
    assert rows[0].gap == 0.0


def test_encoded_codespace_gap_matches_bare(code4):
    bare = gap_profile(Schedule(MX, MZ, 1.0), samples=21)
    e0, e1 = encode(MX, code4, 4.0), encode(MZ, code4, 4.0)
    enc = gap_profile(Schedule(e0.h_s, e1.h_s, 1.0), samples=21, projector=e0.projector(), jobs=3)
    for b, e in zip(bare, enc):
        assert abs(b.gap - e.gap_in_codespace) < 1e-8
        assert e.gap == pytest.approx(e.gap_in_codespace, abs=1e-8)


def test_classify_penalty_only(code4):
    enc = encode(PauliSum.zero(1), code4, 1.0)
    spec = classify_sectors(diagonalize(enc.h_s), enc.projector())
    assert spec.sector_flags.sum() == 2
    proj = spec.eigenvectors[:, spec.sector_flags]
    np.testing.assert_allclose(proj @ proj.conj().T, enc.projector(), atol=1e-10)


def test_classify_identity_projector():
    spec = classify_sectors(diagonalize(PauliSum.from_text("1 XZ")), np.eye(4))
    assert spec.sector_flags.all()


def test_classify_encoded_z(code4):
    enc = encode(PauliSum.from_text("1 Z"), code4, 1.0)
    spec = classify_sectors(diagonalize(enc.h_s), enc.projector())
    assert spec.sector_flags[:2].all() and spec.sector_flags.sum() == 2


def test_classify_raises_when_not_commuting():
    spec = diagonalize(PauliSum.from_text("1 Z"))
    with pytest.raises(NumericalError):
        classify_sectors(spec, 0.5 * (np.eye(2) + pauli_matrix("X")))


def test_clusters():
    groups = degenerate_clusters(np.array([-1.0, -1.0 + 1e-12, 0.0, 2.0, 2.0]))
    assert [g.tolist() for g in groups] == [[0, 1], [2], [3, 4]]


@settings(max_examples=25)
@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=3, max_size=3),
       st.floats(-5, 5, allow_nan=False))
def test_shift_and_trace(coeffs, c):
    text = "\n".join(f"{a!r} {lab}" for a, lab in zip(coeffs, ("XZ", "ZI", "YY")))
    h = PauliSum.from_text(text)
    a = diagonalize(h)
    b = diagonalize(h + PauliSum.from_text(f"{c!r} II"))
    np.testing.assert_allclose(b.eigenvalues, a.eigenvalues + c, atol=1e-10)
    assert a.eigenvalues.sum() == pytest.approx(h.trace(), abs=1e-10)
