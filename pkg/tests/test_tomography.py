import numpy as np
import pytest

from diractomo import (DiracSpinor, NegativeWeight, Protocol, RepKind,
                       bilinears, boost, frame_set, make_representation,
                       marginal_coefficients, marginal_formula_check,
                       marginals, projectors, random_spinor, records_to_csv,
                       records_to_json, rotation, sample_shots)
from diractomo.lorentz import ROT_X, ROT_Y, IDENTITY_FRAME
from diractomo.tomography import MarginalRecord

KINDS = (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL)


def random_axis(rng):
    a = rng.standard_normal(3)
    return a / np.linalg.norm(a)


def test_projector_set():
    projectors().validate()


@pytest.mark.parametrize("kind", KINDS)
def test_marginals_normalize(kind, rng):
    rep = make_representation(kind)
    psi = random_spinor(rng)
    for fr in (IDENTITY_FRAME, ROT_X, rotation(random_axis(rng), 0.9)):
        rec = marginals(psi, fr, rep)
        assert np.all(rec.w >= -1e-14)
        assert np.sum(rec.w) == pytest.approx(1.0, abs=1e-12)


def test_identity_frame_marginals_are_component_moduli(rng):
    rep = make_representation(RepKind.STANDARD)
    psi = random_spinor(rng)
    rec = marginals(psi, IDENTITY_FRAME, rep)
    assert np.max(np.abs(rec.w - np.abs(psi.components) ** 2)) < 1e-14


@pytest.mark.parametrize("kind", KINDS)
def test_marginal_coefficients_reproduce_marginals(kind, rng):
    """w = C . covariants exactly, including under boosts."""
    rep = make_representation(kind)
    psi = random_spinor(rng)
    vec = bilinears(psi, rep).as_vector()
    for fr in (ROT_Y, boost(random_axis(rng), 0.6),
               rotation(random_axis(rng), 2.2)):
        C = marginal_coefficients(rep, fr)
        w = marginals(psi, fr, rep).w
        assert np.max(np.abs(C @ vec - w)) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
def test_marginal_formulas(kind, rng):
    """The per-representation four-term covariant formulas hold in every
    frame, rotations and boosts alike."""
    for _ in range(5):
        psi = random_spinor(rng)
        for fr in (IDENTITY_FRAME, ROT_X, rotation(random_axis(rng), 1.1),
                   boost(random_axis(rng), 0.8)):
            assert marginal_formula_check(psi, fr, kind) < 1e-12


def test_sample_shots_deterministic(rng):
    rep = make_representation(RepKind.MAJORANA)
    rec = marginals(random_spinor(rng), ROT_X, rep)
    a = sample_shots(rec, 10_000, seed=5, trial=3)
    b = sample_shots(rec, 10_000, seed=5, trial=3)
    assert np.array_equal(a.w, b.w)
    assert a.shots == 10_000
    c = sample_shots(rec, 10_000, seed=5, trial=4)
    assert not np.array_equal(a.w, c.w)
    assert np.sum(a.w) == pytest.approx(1.0)


def test_sample_shots_frame_keyed(rng):
    """Streams are keyed by frame label, so adding frames to a schedule
    does not shift existing draws."""
    rep = make_representation(RepKind.MAJORANA)
    psi = random_spinor(rng)
    rec_x = marginals(psi, ROT_X, rep)
    rec_y = marginals(psi, ROT_Y, rep)
    first = sample_shots(rec_x, 1000, seed=7).w
    sample_shots(rec_y, 1000, seed=7)  # interleaved draw from another frame
    assert np.array_equal(sample_shots(rec_x, 1000, seed=7).w, first)


def test_sample_shots_negative_weight():
    rec = MarginalRecord(frame="I", w=[0.5, 0.6, -0.1, 0.0])
    with pytest.raises(NegativeWeight):
        sample_shots(rec, 100, seed=0)


def test_frame_sets():
    frames = frame_set(Protocol.DISCRETE_MAJORANA)
    assert [f.label for f in frames] == ["I", "Rx", "Ry", "Rz"]
    assert len(frame_set("continuous-grid", grid=(4, 8))) == 32


def test_records_csv_and_json(tmp_path, rng):
    rep = make_representation(RepKind.MAJORANA)
    psi = random_spinor(rng)
    recs = [marginals(psi, fr, rep) for fr in frame_set("discrete-majorana")]
    path = tmp_path / "marg.csv"
    records_to_csv(recs, path, header_lines=["seed=1"])
    lines = path.read_text().splitlines()
    assert lines[0] == "# seed=1"
    assert lines[1] == "frame,k,w,N"
    assert len(lines) == 2 + 16
    # 17 significant digits round-trip doubles exactly
    frame, k, w, n = lines[2].split(",")
    assert float(w) == recs[0].w[0]
    doc = records_to_json(recs)
    assert len(doc) == 4 and doc[0]["frame"] == "I" and doc[0]["N"] is None
