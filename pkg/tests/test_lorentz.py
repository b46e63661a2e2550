import numpy as np
import pytest

from diractomo import (BadAxis, GridMismatch, RepKind, bilinears, boost,
                       kernel_vector_recon, lift_check, make_representation,
                       parse_frame_label, random_spinor, rotation, spinor_lift,
                       transform_bilinears)
from diractomo.lorentz import (GRID_TILT, IDENTITY_FRAME, ROT_X, ROT_Y, ROT_Z,
                               DirectionSample, QuadratureScheme,
                               direction_frame, discrete_vector_recon,
                               field_kernel_recon, parse_scheme)
from diractomo.spinor import DiracSpinor

KINDS = (RepKind.MAJORANA, RepKind.STANDARD, RepKind.CHIRAL)


def random_axis(rng):
    a = rng.standard_normal(3)
    return a / np.linalg.norm(a)


def test_frame_validation(rng):
    for _ in range(10):
        rotation(random_axis(rng), rng.uniform(-np.pi, np.pi)).validate()
        boost(random_axis(rng), rng.uniform(-2, 2)).validate()
    assert ROT_X.is_rotation() and not boost([1, 0, 0], 0.5).is_rotation()


def test_bad_axis():
    with pytest.raises(BadAxis):
        rotation([1.0, 1.0, 0.0], 0.3)


@pytest.mark.parametrize("kind", KINDS)
def test_lift_equivariance(kind, rng):
    rep = make_representation(kind)
    for _ in range(10):
        fr = rotation(random_axis(rng), rng.uniform(-np.pi, np.pi))
        assert lift_check(spinor_lift(fr, rep), rep) < 1e-11
        fr = boost(random_axis(rng), rng.uniform(-1.5, 1.5))
        assert lift_check(spinor_lift(fr, rep), rep) < 1e-11


def test_rotation_lift_unitary_boost_not():
    rep = make_representation(RepKind.STANDARD)
    L = spinor_lift(ROT_Z, rep).L
    assert np.max(np.abs(np.conj(L.T) @ L - np.eye(4))) < 1e-11
    Lb = spinor_lift(boost([0, 0, 1.0], 1.0), rep).L
    assert np.max(np.abs(np.conj(Lb.T) @ Lb - np.eye(4))) > 0.1


def test_two_pi_rotation_lifts_to_minus_identity():
    """The double cover: a full turn acts as -I on spinors."""
    rep = make_representation(RepKind.MAJORANA)
    fr = rotation([0.0, 0.0, 1.0], 2.0 * np.pi)
    assert np.max(np.abs(fr.lam - np.eye(4))) < 1e-12
    L = spinor_lift(fr, rep).L
    assert np.max(np.abs(L + np.eye(4))) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
def test_bilinear_equivariance(kind, rng):
    """bilinears(L psi) equals the tensor transport of bilinears(psi)."""
    rep = make_representation(kind)
    psi = random_spinor(rng)
    for fr in (ROT_X, boost(random_axis(rng), 0.8),
               rotation(random_axis(rng), 1.3)):
        L = spinor_lift(fr, rep).L
        Bt = bilinears(DiracSpinor(L @ psi.components), rep)
        Bexp = transform_bilinears(bilinears(psi, rep), fr)
        assert np.max(np.abs(Bt.as_vector() - Bexp.as_vector())) < 1e-11


def test_compose_and_inverse():
    fr = ROT_X.compose(ROT_Y)
    fr.validate()
    assert np.max(np.abs(fr.lam - ROT_X.lam @ ROT_Y.lam)) == 0.0


def test_discrete_vector_recon():
    assert np.array_equal(discrete_vector_recon(1.0, -2.0, 3.0),
                          [1.0, -2.0, 3.0])


def test_parse_frame_label_grammar():
    assert parse_frame_label("I").label == "I"
    for lb in ("Rx", "Ry", "Rz"):
        assert parse_frame_label(lb).label == lb
    fr = parse_frame_label("rot(0,0,1;1.5)")
    assert np.max(np.abs(fr.lam - rotation([0, 0, 1.0], 1.5).lam)) < 1e-15
    fr = parse_frame_label("boost(1,0,0;0.7)")
    assert fr.lam[0, 0] == pytest.approx(np.cosh(0.7))
    fr = parse_frame_label("dir(0.5,1.25)")
    assert np.max(np.abs(fr.lam - direction_frame(0.5, 1.25).lam)) < 1e-12
    with pytest.raises(ValueError):
        parse_frame_label("spin(1,2)")


def test_direction_frame_geometry():
    """Row 3 of the untilted frame points along (theta, phi); the default
    tilt rotates the rows about the local third axis's normal plane."""
    fr = direction_frame(0.4, 2.1, tilt=0.0)
    n = np.array([np.sin(0.4) * np.cos(2.1), np.sin(0.4) * np.sin(2.1),
                  np.cos(0.4)])
    assert np.max(np.abs(fr.spatial[2] - n)) < 1e-12
    tilted = direction_frame(0.4, 2.1)
    tilted.validate()
    assert tilted.is_rotation()
    # the generator stays consistent with the matrix
    from scipy.linalg import expm
    assert np.max(np.abs(expm(tilted.generator) - tilted.lam)) < 1e-12


def test_quadrature_polynomial_exactness():
    scheme = QuadratureScheme(16, 32)
    thetas, wt, phis, wp = scheme.nodes()
    T, P = np.meshgrid(thetas, phis, indexing="ij")
    W = scheme.weights_grid()
    assert np.sum(W) == pytest.approx(4.0 * np.pi, rel=1e-13)
    # int cos^2(theta) dOmega = 4 pi / 3
    assert np.sum(W * np.cos(T) ** 2) == pytest.approx(4 * np.pi / 3, rel=1e-13)
    assert abs(np.sum(W * np.sin(T) * np.cos(P))) < 1e-13


def test_parse_scheme():
    assert parse_scheme("gl8x16") == QuadratureScheme(8, 16)
    assert parse_scheme((8, 16)).id == "gl8x16"
    with pytest.raises(ValueError):
        parse_scheme("lobatto4")


def test_kernel_vector_recon_exact(rng):
    scheme = QuadratureScheme(32, 64)
    thetas, _, phis, _ = scheme.nodes()
    for _ in range(10):
        v = rng.standard_normal(3)
        samples = [DirectionSample(t, p, v @ np.array(
            [np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)]))
            for t in thetas for p in phis]
        assert np.max(np.abs(kernel_vector_recon(samples, scheme) - v)) < 1e-10


def test_kernel_grid_mismatch():
    scheme = QuadratureScheme(8, 8)
    samples = [DirectionSample(0.3, 0.0, 1.0)]
    with pytest.raises(GridMismatch):
        kernel_vector_recon(samples, scheme)


def test_field_kernel_recon_tilted_rows(rng):
    """The generalized kernel recovers vectors sampled along each row of the
    tilted grid frames (the fields actually used by the continuous protocol)."""
    scheme = QuadratureScheme(16, 32)
    thetas, _, phis, _ = scheme.nodes()
    shape = (scheme.n_theta, scheme.n_phi)
    for row in range(3):
        dirs = np.empty(shape + (3,))
        for i, t in enumerate(thetas):
            for j, p in enumerate(phis):
                dirs[i, j] = direction_frame(t, p).spatial[row]
        v = rng.standard_normal(3)
        nu = np.einsum("tpc,c->tp", dirs, v)
        assert np.max(np.abs(field_kernel_recon(nu, dirs, scheme) - v)) < 1e-12
