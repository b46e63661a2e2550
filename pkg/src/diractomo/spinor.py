"""Dirac spinor values, bilinear covariants, Fierz identities and the
rho-operator route for recovering a spinor from its covariants."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import (EPSILON, METRIC, S_PAIRS, GammaRep, dirac_bar,
                       expansion_basis, gamma_basis)
from .errors import DegenerateAnchor, NonRealCovariant

TAU_FIERZ = 1e-10
TAU_ANCHOR_REL = 1e-10


@dataclass(frozen=True)
class DiracSpinor:
    """A 4-component complex probability-amplitude vector."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=complex).reshape(4)
        if not np.all(np.isfinite(c.view(float))):
            raise ValueError("spinor components must be finite")
        object.__setattr__(self, "components", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def normalized(self) -> "DiracSpinor":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero spinor")
        return DiracSpinor(self.components / n)

    def bar(self, rep: GammaRep) -> np.ndarray:
        """Dirac conjugate row vector psi^dagger gamma_0."""
        return np.conj(self.components) @ rep.gamma0

    def to_json(self) -> list:
        out = []
        for z in self.components:
            out += [float(z.real), float(z.imag)]
        return out

    @classmethod
    def from_json(cls, data) -> "DiracSpinor":
        vals = np.asarray(data, dtype=float).reshape(4, 2)
        return cls(vals[:, 0] + 1j * vals[:, 1])


def random_spinor(rng: np.random.Generator, normalize: bool = True) -> DiracSpinor:
    """Draw 8 standard normals; optionally project to the unit 7-sphere."""
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi = DiracSpinor(v)
    return psi.normalized() if normalize else psi


@dataclass(frozen=True)
class BilinearSet:
    """The 16 real bilinear covariants, stored with upper indices.

    ``S`` is ordered (S^01, S^02, S^03, S^12, S^23, S^31).
    """

    omega1: float
    J: np.ndarray
    S: np.ndarray
    K: np.ndarray
    omega2: float

    def __post_init__(self):
        object.__setattr__(self, "J", np.asarray(self.J, dtype=float).reshape(4))
        object.__setattr__(self, "S", np.asarray(self.S, dtype=float).reshape(6))
        object.__setattr__(self, "K", np.asarray(self.K, dtype=float).reshape(4))

    def as_vector(self) -> np.ndarray:
        """All 16 covariants in basis order (omega1, J, S, K, omega2)."""
        return np.concatenate([[self.omega1], self.J, self.S, self.K, [self.omega2]])

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "BilinearSet":
        v = np.asarray(v, dtype=float).reshape(16)
        return cls(omega1=float(v[0]), J=v[1:5], S=v[5:11], K=v[11:15],
                   omega2=float(v[15]))

    def S_matrix(self) -> np.ndarray:
        """Full antisymmetric S^{mu nu}."""
        M = np.zeros((4, 4))
        for val, (mu, nu) in zip(self.S, S_PAIRS):
            M[mu, nu] = val
            M[nu, mu] = -val
        return M

    def dual_S(self) -> np.ndarray:
        """(*S)_{mu nu} = -(1/2) eps_{mu nu alpha beta} S^{alpha beta}."""
        return -0.5 * np.einsum("mnab,ab->mn", EPSILON, self.S_matrix())

    def lower_J(self) -> np.ndarray:
        return METRIC @ self.J

    def lower_K(self) -> np.ndarray:
        return METRIC @ self.K

    def lower_S(self) -> np.ndarray:
        return METRIC @ self.S_matrix() @ METRIC

    def to_json(self) -> dict:
        return {
            "omega1": float(self.omega1),
            "J": [float(x) for x in self.J],
            "S": [float(x) for x in self.S],
            "K": [float(x) for x in self.K],
            "omega2": float(self.omega2),
        }

    @classmethod
    def from_json(cls, data) -> "BilinearSet":
        return cls(omega1=data["omega1"], J=data["J"], S=data["S"], K=data["K"],
                   omega2=data["omega2"])


def bilinears(psi: DiracSpinor, rep: GammaRep) -> BilinearSet:
    """All 16 covariants <psibar| Gamma^a |psi>."""
    basis = gamma_basis(rep)
    bar = psi.bar(rep)
    raw = np.array([bar @ G @ psi.components for G in basis.elements])
    im = np.max(np.abs(raw.imag))
    scale = max(1.0, psi.norm**2)
    if im > 1e-9 * scale:
        raise NonRealCovariant(f"covariant imaginary part {im:.3e} exceeds tolerance")
    return BilinearSet.from_vector(raw.real)


def fierz_residuals(B: BilinearSet) -> np.ndarray:
    """Residuals of the 9 quadratic Fierz constraints.

    Order: J.J - omega1^2 - omega2^2, J.J + K.K, J.K, then the six
    independent components of the antisymmetric tensor identity.
    """
    Jl, Kl = B.lower_J(), B.lower_K()
    JJ = float(B.J @ Jl)
    KK = float(B.K @ Kl)
    JK = float(B.J @ Kl)
    r = [JJ - B.omega1**2 - B.omega2**2, JJ + KK, JK]
    Sl = B.lower_S()
    half_eps_S = 0.5 * np.einsum("mnab,ab->mn", EPSILON, B.S_matrix())
    T = (np.outer(Jl, Kl) - np.outer(Kl, Jl)
         + B.omega2 * Sl + B.omega1 * half_eps_S)
    r += [T[mu, nu] for mu, nu in S_PAIRS]
    return np.array(r)


@dataclass(frozen=True)
class RhoOperator:
    """rho = 4 |psi><psibar| (or its reassembly from covariants)."""

    matrix: np.ndarray
    anchor: DiracSpinor | None = None
    scale: float | None = None

    def coefficients(self, rep: GammaRep) -> np.ndarray:
        """Real expansion coefficients rho^a over the 16-element basis."""
        basis = gamma_basis(rep)
        coeffs = np.array([np.trace(G @ self.matrix) / 4.0 for G in basis.elements])
        # tr(Gamma^a rho)/4 = rho^a for rho built from a spinor
        return coeffs.real


def rho_from_spinor(psi: DiracSpinor, rep: GammaRep) -> RhoOperator:
    return RhoOperator(matrix=4.0 * np.outer(psi.components, psi.bar(rep)))


def rho_from_bilinears(B: BilinearSet, rep: GammaRep) -> RhoOperator:
    """Assemble rho = omega1 + J + iS + iK gamma_0123 + omega2 gamma_0123."""
    elems = expansion_basis(rep)
    vec = B.as_vector()
    M = np.zeros((4, 4), dtype=complex)
    for c, E in zip(vec, elems):
        M = M + c * E
    return RhoOperator(matrix=M)


ANCHOR_SEQUENCE = tuple(DiracSpinor(np.eye(4)[k]) for k in range(4))


def crawford_reconstruct(rho: RhoOperator, rep: GammaRep,
                         eta: DiracSpinor) -> DiracSpinor:
    """Recover psi (up to global phase) as omega * rho |eta>.

    Raises :class:`DegenerateAnchor` when <etabar|rho|eta> is too small;
    callers should then retry with the next anchor in ``ANCHOR_SEQUENCE``.
    """
    pairing = eta.bar(rep) @ rho.matrix @ eta.components
    scale = np.max(np.abs(rho.matrix))
    tau = TAU_ANCHOR_REL * max(scale, 1e-300)
    if not (pairing.real > tau):
        raise DegenerateAnchor(f"<etabar|rho|eta> = {pairing:.3e} below threshold")
    omega = (4.0 * pairing.real) ** (-0.5)
    psi = omega * (rho.matrix @ eta.components)
    return _fix_phase(DiracSpinor(psi))


def crawford_reconstruct_auto(rho: RhoOperator, rep: GammaRep) -> DiracSpinor:
    """Crawford reconstruction over the canonical anchor fallback sequence."""
    last = None
    for eta in ANCHOR_SEQUENCE:
        try:
            return crawford_reconstruct(rho, rep, eta)
        except DegenerateAnchor as exc:
            last = exc
    raise DegenerateAnchor("all canonical anchors degenerate") from last


def _fix_phase(psi: DiracSpinor) -> DiracSpinor:
    """Deterministic output convention: largest component real positive."""
    c = psi.components
    k = int(np.argmax(np.abs(c)))
    if abs(c[k]) == 0:
        return psi
    phase = c[k] / abs(c[k])
    return DiracSpinor(c / phase)


def phase_distance(a: DiracSpinor, b: DiracSpinor) -> float:
    """min over alpha of ||a - e^{i alpha} b||_2.

    The optimal alpha is the argument of <a|b>; forming the difference
    explicitly avoids the square-root-of-cancellation loss of the closed
    form ``sqrt(|a|^2 + |b|^2 - 2|<a|b>|)``.
    """
    overlap = np.vdot(b.components, a.components)
    if overlap == 0:
        return float(np.sqrt(a.norm**2 + b.norm**2))
    phase = overlap / abs(overlap)
    return float(np.linalg.norm(a.components - phase * b.components))
