"""Restricted Lorentz transformations, their spin lifts, tensor transport of
bilinear sets, and the generic 3-vector reconstruction methods.

Rotation convention: ``rotation(axis, angle)`` is the *frame* rotation, i.e.
its spatial block is the inverse of the active right-handed rotation by
``angle``.  This is the orientation under which the discrete protocol's
cross-frame identities (J3 = J2 in the x-rotated frame, etc.) all hold.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, logm
from scipy.special import roots_legendre

from .clifford import METRIC, GammaRep
from .errors import BadAxis, GridMismatch, NotConnected, Singular
from .spinor import BilinearSet

FRAME_TOL = 1e-12
LIFT_TOL = 1e-11


@dataclass(frozen=True)
class LorentzFrame:
    """A restricted Lorentz matrix Lambda^mu_nu with an optional generator.

    ``generator`` is a real matrix m with Lambda = exp(m); constructors fill
    it in so that spin lifts stay on the right sheet of the double cover
    (a 2*pi rotation lifts to -I, which a matrix log cannot see).
    """

    lam: np.ndarray
    label: str = ""
    generator: np.ndarray | None = None

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float).reshape(4, 4)
        object.__setattr__(self, "lam", lam)

    def validate(self, tol: float = FRAME_TOL) -> None:
        lam = self.lam
        if np.max(np.abs(lam.T @ METRIC @ lam - METRIC)) > tol:
            raise NotConnected("Lambda does not preserve the metric")
        if abs(np.linalg.det(lam) - 1.0) > 1e-10:
            raise NotConnected("det Lambda != +1")
        if lam[0, 0] < 1.0 - tol:
            raise NotConnected("Lambda is not orthochronous")

    @property
    def spatial(self) -> np.ndarray:
        return self.lam[1:, 1:]

    def is_rotation(self, tol: float = 1e-10) -> bool:
        return (abs(self.lam[0, 0] - 1.0) < tol
                and np.max(np.abs(self.lam[0, 1:])) < tol
                and np.max(np.abs(self.lam[1:, 0])) < tol)

    def compose(self, other: "LorentzFrame") -> "LorentzFrame":
        gen = None
        if self.generator is not None and other.generator is not None:
            # commuting generators compose additively; otherwise recompute
            g1, g2 = self.generator, other.generator
            if np.max(np.abs(g1 @ g2 - g2 @ g1)) < 1e-13:
                gen = g1 + g2
        return LorentzFrame(lam=self.lam @ other.lam,
                            label=f"{self.label}*{other.label}", generator=gen)


def _cross_matrix(axis: np.ndarray) -> np.ndarray:
    x, y, z = axis
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def _check_unit(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float).reshape(3)
    if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
        raise BadAxis(f"axis norm {np.linalg.norm(axis)} != 1")
    return axis


def rotation(axis, angle: float, label: str = "") -> LorentzFrame:
    """Frame rotation by ``angle`` about ``axis`` (time row/column trivial)."""
    axis = _check_unit(axis)
    gen = np.zeros((4, 4))
    gen[1:, 1:] = -angle * _cross_matrix(axis)
    lam = expm(gen)
    if not label:
        label = f"rot({axis[0]:g},{axis[1]:g},{axis[2]:g};{angle:g})"
    return LorentzFrame(lam=lam, label=label, generator=gen)


def boost(direction, rapidity: float, label: str = "") -> LorentzFrame:
    """Pure boost with Lambda^0_0 = cosh(rapidity) along ``direction``."""
    direction = _check_unit(direction)
    gen = np.zeros((4, 4))
    gen[0, 1:] = -rapidity * direction
    gen[1:, 0] = -rapidity * direction
    lam = expm(gen)
    if not label:
        label = f"boost({direction[0]:g},{direction[1]:g},{direction[2]:g};{rapidity:g})"
    return LorentzFrame(lam=lam, label=label, generator=gen)


IDENTITY_FRAME = LorentzFrame(lam=np.eye(4), label="I", generator=np.zeros((4, 4)))

ROT_X = rotation([1.0, 0.0, 0.0], np.pi / 2, label="Rx")
ROT_Y = rotation([0.0, 1.0, 0.0], np.pi / 2, label="Ry")
ROT_Z = rotation([0.0, 0.0, 1.0], np.pi / 2, label="Rz")

# Tilt applied to continuous-grid frames so that all three measured direction
# fields (rows of the spatial block) sweep the full sphere.  Without it the
# row sampling the current 3-vector stays in the equatorial plane and its
# z-component is never measured.
GRID_TILT = np.pi / 4


def direction_frame(theta: float, phi: float, tilt: float = GRID_TILT) -> LorentzFrame:
    """Grid frame whose third spatial row is tilted toward e3'(theta, phi)."""
    fz = rotation([0.0, 0.0, 1.0], phi)
    fy = rotation([0.0, 1.0, 0.0], theta)
    fx = rotation([1.0, 0.0, 0.0], -tilt)
    frame = fx.compose(fy.compose(fz))
    # rotvec-based generator is stable even when logm would sit near the
    # angle-pi branch cut
    from scipy.spatial.transform import Rotation
    rotvec = Rotation.from_matrix(frame.spatial).as_rotvec()
    gen = np.zeros((4, 4))
    gen[1:, 1:] = _cross_matrix(rotvec)
    return LorentzFrame(lam=frame.lam, label=f"dir({theta:.12g},{phi:.12g})",
                        generator=gen)


def spinor_lift(frame: LorentzFrame, rep: GammaRep):
    """Spin-space matrix L with L^-1 gamma^mu L = Lambda^mu_nu gamma^nu."""
    frame.validate(tol=1e-10)
    m = frame.generator
    if m is None:
        m = np.real(logm(frame.lam))
        if np.max(np.abs(expm(m) - frame.lam)) > 1e-9:
            raise NotConnected("could not take a real logarithm of Lambda")
    omega = METRIC @ m  # lower the first index
    G = np.zeros((4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            if omega[mu, nu] != 0.0:
                G += 0.25 * omega[mu, nu] * rep.gamma_munu(mu, nu)
    L = expm(G)
    return SpinorLift(L=L, frame=frame, rep_kind=rep.kind)


@dataclass(frozen=True)
class SpinorLift:
    L: np.ndarray
    frame: LorentzFrame
    rep_kind: object


def lift_check(lift: SpinorLift, rep: GammaRep) -> float:
    """max_mu || L^-1 gamma^mu L - Lambda^mu_nu gamma^nu ||."""
    try:
        Linv = np.linalg.inv(lift.L)
    except np.linalg.LinAlgError as exc:
        raise Singular("lift matrix is singular") from exc
    if not np.all(np.isfinite(Linv)):
        raise Singular("lift matrix is singular")
    lam = lift.frame.lam
    res = 0.0
    for mu in range(4):
        target = sum(lam[mu, nu] * rep.gammas[nu] for nu in range(4))
        res = max(res, np.max(np.abs(Linv @ rep.gammas[mu] @ lift.L - target)))
    return float(res)


def transform_bilinears(B: BilinearSet, frame: LorentzFrame) -> BilinearSet:
    """Tensor transport: scalars fixed, J and K one Lambda factor, S two."""
    lam = frame.lam
    return BilinearSet(
        omega1=B.omega1,
        J=lam @ B.J,
        S=_pack_S(lam @ B.S_matrix() @ lam.T),
        K=lam @ B.K,
        omega2=B.omega2,
    )


def _pack_S(M: np.ndarray) -> np.ndarray:
    from .clifford import S_PAIRS
    return np.array([M[mu, nu] for mu, nu in S_PAIRS])


@dataclass(frozen=True)
class DirectionSample:
    """One measured third-axis component at grid direction (theta, phi)."""

    theta: float
    phi: float
    nu: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi):
            raise ValueError("theta out of [0, pi]")
        if not (0.0 <= self.phi < 2.0 * np.pi):
            raise ValueError("phi out of [0, 2*pi)")


def discrete_vector_recon(nu_x: float, nu_y: float, nu_z: float) -> np.ndarray:
    """Exact three-direction reconstruction: components are the projections
    onto the coordinate axes."""
    return np.array([nu_x, nu_y, nu_z], dtype=float)


@dataclass(frozen=True)
class QuadratureScheme:
    """Product rule: Gauss-Legendre in theta x uniform trapezoid in phi.

    The theta weights absorb the sin(theta) solid-angle factor.  The
    integrands produced by the kernel method are entire trigonometric
    functions, for which this rule reaches roundoff by ~16 nodes.
    """

    n_theta: int
    n_phi: int

    @property
    def id(self) -> str:
        return f"gl{self.n_theta}x{self.n_phi}"

    def nodes(self):
        x, wx = roots_legendre(self.n_theta)
        thetas = 0.5 * np.pi * (x + 1.0)
        w_theta = 0.5 * np.pi * wx * np.sin(thetas)
        phis = 2.0 * np.pi * np.arange(self.n_phi) / self.n_phi
        w_phi = np.full(self.n_phi, 2.0 * np.pi / self.n_phi)
        return thetas, w_theta, phis, w_phi

    def weights_grid(self) -> np.ndarray:
        _, wt, _, wp = self.nodes()
        return np.outer(wt, wp)

    def directions(self) -> np.ndarray:
        """e3'(theta, phi) at each node, shape (n_theta, n_phi, 3)."""
        thetas, _, phis, _ = self.nodes()
        T, P = np.meshgrid(thetas, phis, indexing="ij")
        return np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P),
                         np.cos(T)], axis=-1)


def parse_scheme(scheme) -> QuadratureScheme:
    if isinstance(scheme, QuadratureScheme):
        return scheme
    if isinstance(scheme, (tuple, list)) and len(scheme) == 2:
        return QuadratureScheme(int(scheme[0]), int(scheme[1]))
    m = re.fullmatch(r"gl(\d+)x(\d+)", str(scheme))
    if not m:
        raise ValueError(f"unknown quadrature scheme {scheme!r}")
    return QuadratureScheme(int(m.group(1)), int(m.group(2)))


def _samples_to_grid(samples, scheme: QuadratureScheme) -> np.ndarray:
    thetas, _, phis, _ = scheme.nodes()
    st = np.fromiter((s.theta for s in samples), dtype=float, count=len(samples))
    sp = np.fromiter((s.phi for s in samples), dtype=float, count=len(samples))
    nu = np.fromiter((s.nu for s in samples), dtype=float, count=len(samples))
    ii = np.argmin(np.abs(st[:, None] - thetas[None, :]), axis=1)
    dphi = np.abs((sp[:, None] - phis[None, :] + np.pi) % (2 * np.pi) - np.pi)
    jj = np.argmin(dphi, axis=1)
    off = (np.abs(thetas[ii] - st) > 1e-9) | \
        (dphi[np.arange(len(samples)), jj] > 1e-9)
    if np.any(off):
        k = int(np.argmax(off))
        raise GridMismatch(f"sample at ({st[k]}, {sp[k]}) off the grid")
    grid = np.full((scheme.n_theta, scheme.n_phi), np.nan)
    grid[ii, jj] = nu
    if np.any(np.isnan(grid)):
        raise GridMismatch("samples do not cover all quadrature nodes")
    return grid


def sphere_kernel(theta, phi) -> np.ndarray:
    """The integral-transform kernel (2/pi^2 cos phi, 2/pi^2 sin phi,
    3/(4 pi) cos theta)."""
    return np.stack([
        2.0 / np.pi**2 * np.cos(phi),
        2.0 / np.pi**2 * np.sin(phi),
        3.0 / (4.0 * np.pi) * np.cos(theta),
    ], axis=-1)


def kernel_vector_recon(samples, quadrature) -> np.ndarray:
    """Recover v from samples nu(theta, phi) = v . e3'(theta, phi) by the
    spherical integral transform with the fixed kernel."""
    scheme = parse_scheme(quadrature)
    grid = _samples_to_grid(samples, scheme)
    thetas, _, phis, _ = scheme.nodes()
    T, P = np.meshgrid(thetas, phis, indexing="ij")
    A = sphere_kernel(T, P)
    W = scheme.weights_grid()
    return np.einsum("tp,tpc,tp->c", W, A, grid)


def field_kernel_recon(nu_grid: np.ndarray, dirs: np.ndarray,
                       scheme: QuadratureScheme) -> np.ndarray:
    """Generalized kernel reconstruction for an arbitrary direction field.

    Given nu(theta, phi) = v . d(theta, phi), uses the kernel A = M^-1 d with
    M = int d d^T dOmega (evaluated on the same quadrature, exact for the
    trigonometric fields used here).
    """
    W = scheme.weights_grid()
    M = np.einsum("tp,tpa,tpb->ab", W, dirs, dirs)
    rhs = np.einsum("tp,tpa,tp->a", W, dirs, nu_grid)
    return np.linalg.solve(M, rhs)


_ROT_RE = re.compile(r"rot\(([^;]+);([^)]+)\)")
_BOOST_RE = re.compile(r"boost\(([^;]+);([^)]+)\)")
_DIR_RE = re.compile(r"dir\(([^,]+),([^)]+)\)")


def parse_frame_label(label: str) -> LorentzFrame:
    """Parse the CLI frame grammar: I, Rx, Ry, Rz, rot(ax,ay,az;angle),
    boost(bx,by,bz;chi), dir(theta,phi)."""
    label = label.strip()
    fixed = {"I": IDENTITY_FRAME, "Rx": ROT_X, "Ry": ROT_Y, "Rz": ROT_Z}
    if label in fixed:
        return fixed[label]
    m = _ROT_RE.fullmatch(label)
    if m:
        axis = [float(x) for x in m.group(1).split(",")]
        return rotation(axis, float(m.group(2)), label=label)
    m = _BOOST_RE.fullmatch(label)
    if m:
        axis = [float(x) for x in m.group(1).split(",")]
        return boost(axis, float(m.group(2)), label=label)
    m = _DIR_RE.fullmatch(label)
    if m:
        return direction_frame(float(m.group(1)), float(m.group(2)))
    raise ValueError(f"unrecognized frame label {label!r}")
