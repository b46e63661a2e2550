import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diractomo import (BilinearSet, DegenerateAnchor, DiracSpinor, RepKind,
                       bilinears, crawford_reconstruct,
                       crawford_reconstruct_auto, fierz_residuals,
                       make_representation, phase_distance, random_spinor,
                       rho_from_bilinears, rho_from_spinor)
from diractomo.spinor import ANCHOR_SEQUENCE

finite_reals = st.floats(min_value=-10.0, max_value=10.0,
                         allow_nan=False, allow_infinity=False)


@st.composite
def spinors(draw, min_norm=1e-3):
    vals = draw(st.lists(finite_reals, min_size=8, max_size=8))
    v = np.array(vals[:4]) + 1j * np.array(vals[4:])
    if np.linalg.norm(v) < min_norm:
        v = v + 1.0
    return DiracSpinor(v)


@settings(max_examples=60, deadline=None)
@given(spinors())
def test_bilinears_real_and_timelike_J(psi):
    for kind in (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL):
        rep = make_representation(kind)
        B = bilinears(psi, rep)
        assert B.J[0] == pytest.approx(psi.norm**2, rel=1e-12, abs=1e-12)
        JJ = B.J @ np.diag([1.0, -1, -1, -1]) @ B.J
        assert JJ > -1e-9 * psi.norm**4


@settings(max_examples=60, deadline=None)
@given(spinors())
def test_fierz_identities(psi):
    rep = make_representation(RepKind.STANDARD)
    scale = max(1.0, psi.norm**4)
    assert np.max(np.abs(fierz_residuals(bilinears(psi, rep)))) < 1e-10 * scale


@settings(max_examples=40, deadline=None)
@given(spinors())
def test_rho_paths_agree(psi):
    rep = make_representation(RepKind.MAJORANA)
    r1 = rho_from_spinor(psi, rep).matrix
    r2 = rho_from_bilinears(bilinears(psi, rep), rep).matrix
    assert np.max(np.abs(r1 - r2)) < 1e-10 * max(1.0, psi.norm**2)


@settings(max_examples=40, deadline=None)
@given(spinors())
def test_crawford_roundtrip(psi):
    rep = make_representation(RepKind.STANDARD)
    rho = rho_from_spinor(psi, rep)
    rec = crawford_reconstruct_auto(rho, rep)
    assert phase_distance(rec, psi) < 1e-9 * max(1.0, psi.norm)


def test_crawford_anchor_fallback():
    """For psi = e4 (standard rep) the pairing degenerates for the first
    three canonical anchors and only e4 itself works."""
    rep = make_representation(RepKind.STANDARD)
    psi = DiracSpinor([0, 0, 0, 1])
    rho = rho_from_spinor(psi, rep)
    for eta in ANCHOR_SEQUENCE[:3]:
        with pytest.raises(DegenerateAnchor):
            crawford_reconstruct(rho, rep, eta)
    rec = crawford_reconstruct(rho, rep, ANCHOR_SEQUENCE[3])
    assert phase_distance(rec, psi) < 1e-12
    assert phase_distance(crawford_reconstruct_auto(rho, rep), psi) < 1e-12


def test_rho_trace_properties(rng):
    rep = make_representation(RepKind.CHIRAL)
    psi = random_spinor(rng)
    rho = rho_from_spinor(psi, rep)
    B = bilinears(psi, rep)
    # trace picks out 4*omega1; gamma^0-weighted trace picks out 4*J^0
    assert np.trace(rho.matrix).real == pytest.approx(4.0 * B.omega1, abs=1e-12)
    assert np.trace(rep.gamma0 @ rho.matrix).real == pytest.approx(
        4.0 * B.J[0], abs=1e-12)


def test_phase_distance_properties(rng):
    psi = random_spinor(rng)
    rotated = DiracSpinor(np.exp(0.7j) * psi.components)
    assert phase_distance(psi, rotated) < 1e-14
    other = random_spinor(rng)
    direct = min(np.linalg.norm(psi.components
                                - np.exp(1j * a) * other.components)
                 for a in np.linspace(0, 2 * np.pi, 20000, endpoint=False))
    assert phase_distance(psi, other) == pytest.approx(direct, abs=1e-6)


def test_spinor_json_roundtrip(rng):
    psi = random_spinor(rng, normalize=False)
    back = DiracSpinor.from_json(psi.to_json())
    assert np.array_equal(back.components, psi.components)


def test_bilinear_set_vector_roundtrip(rng):
    vec = rng.standard_normal(16)
    assert np.array_equal(BilinearSet.from_vector(vec).as_vector(), vec)


def test_bilinear_set_json_roundtrip(rng):
    rep = make_representation(RepKind.MAJORANA)
    B = bilinears(random_spinor(rng), rep)
    back = BilinearSet.from_json(B.to_json())
    assert np.max(np.abs(back.as_vector() - B.as_vector())) == 0.0


def test_zero_spinor_rejected():
    with pytest.raises(ValueError):
        DiracSpinor([0, 0, 0, 0]).normalized()
    with pytest.raises(ValueError):
        DiracSpinor([np.nan, 0, 0, 0])
