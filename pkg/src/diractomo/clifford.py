"""Gamma matrix representations and the 16-element Dirac algebra basis.

Everything downstream (bilinear covariants, spin lifts, marginal formulas)
is expressed through a :class:`GammaRep`, so conventions are fixed here once:
metric diag(+,-,-,-), epsilon_{0123} = +1, and explicit matrix blocks for the
three built-in representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import NonUnitary, UnsupportedRep

TAU_ALG = 1e-12

# Pauli matrices
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


def _epsilon4() -> np.ndarray:
    """Totally antisymmetric epsilon_{munu alpha beta} with epsilon_{0123} = +1."""
    eps = np.zeros((4, 4, 4, 4))
    for perm, sign in _permutations_with_sign(4):
        eps[perm] = sign
    return eps


def _permutations_with_sign(n):
    from itertools import permutations

    base = tuple(range(n))
    for p in permutations(base):
        # count inversions for parity
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        yield p, (-1.0) ** inv


EPSILON = _epsilon4()


@dataclass(frozen=True)
class Conventions:
    """Metric and orientation conventions shared by every representation."""

    metric: np.ndarray = field(default_factory=lambda: METRIC.copy())
    epsilon0123: float = 1.0


class RepKind(str, Enum):
    MAJORANA = "majorana"
    STANDARD = "standard"
    CHIRAL = "chiral"
    CUSTOM = "custom"


def _block(a, b, c, d) -> np.ndarray:
    return np.block([[np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)],
                     [np.asarray(c, dtype=complex), np.asarray(d, dtype=complex)]])


_I2 = np.eye(2, dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)


def _standard_gammas():
    g0 = _block(_I2, _Z2, _Z2, -_I2)
    gk = [_block(_Z2, SIGMA[k], -SIGMA[k], _Z2) for k in range(3)]
    return [g0] + gk


def _chiral_gammas():
    g0 = _block(_Z2, _I2, _I2, _Z2)
    gk = [_block(_Z2, SIGMA[k], -SIGMA[k], _Z2) for k in range(3)]
    return [g0] + gk


def _majorana_gammas():
    s1, s2, s3 = SIGMA
    g0 = _block(_Z2, s2, s2, _Z2)
    g1 = _block(-1j * s3, _Z2, _Z2, -1j * s3)
    g2 = _block(_Z2, s2, -s2, _Z2)
    g3 = _block(1j * s1, _Z2, _Z2, 1j * s1)
    return [g0, g1, g2, g3]


@dataclass(frozen=True)
class GammaRep:
    """A concrete gamma matrix representation.

    ``gammas`` holds the four upper-index matrices gamma^0..gamma^3.
    ``change_of_basis`` is the unitary U with gamma_mu = U gamma_mu^st U^-1
    (identity for the standard representation).  ``u`` and ``sigma`` are the
    conjugated projector generators U^-1 gamma_0^st U and U^-1 gamma_12^st U
    used by the general-representation feasibility criterion.
    """

    kind: RepKind
    gammas: tuple
    change_of_basis: np.ndarray
    conventions: Conventions = field(default_factory=Conventions)

    @property
    def gamma0(self) -> np.ndarray:
        return self.gammas[0]

    @property
    def u(self) -> np.ndarray:
        U = self.change_of_basis
        g0_st = _standard_gammas()[0]
        return np.conj(U.T) @ g0_st @ U

    @property
    def sigma(self) -> np.ndarray:
        U = self.change_of_basis
        st = _standard_gammas()
        g12_st = 0.5 * (st[1] @ st[2] - st[2] @ st[1])
        return np.conj(U.T) @ g12_st @ U

    def lower(self, mu: int) -> np.ndarray:
        """gamma_mu with index lowered by the metric."""
        return METRIC[mu, mu] * self.gammas[mu]

    @property
    def gamma0123(self) -> np.ndarray:
        """gamma_0 gamma_1 gamma_2 gamma_3 (all indices lower)."""
        g = [self.lower(mu) for mu in range(4)]
        return g[0] @ g[1] @ g[2] @ g[3]

    def gamma_munu(self, mu: int, nu: int) -> np.ndarray:
        """Antisymmetrized product (1/2)[gamma^mu, gamma^nu] (upper indices)."""
        a, b = self.gammas[mu], self.gammas[nu]
        return 0.5 * (a @ b - b @ a)

    def validate(self, tol: float = TAU_ALG) -> None:
        for mu in range(4):
            for nu in range(4):
                anti = self.gammas[mu] @ self.gammas[nu] + self.gammas[nu] @ self.gammas[mu]
                target = 2.0 * METRIC[mu, nu] * np.eye(4)
                if np.max(np.abs(anti - target)) > tol:
                    raise ValueError(f"Clifford relation broken at mu={mu}, nu={nu}")
        g0 = self.gammas[0]
        if np.max(np.abs(np.conj(g0.T) - g0)) > tol:
            raise ValueError("gamma^0 is not Hermitian")
        for k in range(1, 4):
            gk = self.gammas[k]
            if np.max(np.abs(np.conj(gk.T) + gk)) > tol:
                raise ValueError(f"gamma^{k} is not anti-Hermitian")


def _intertwiner_to_standard(gammas) -> np.ndarray:
    """Unitary U with gamma_mu = U gamma_mu^st U^-1, found as the (unique up to
    phase) null vector of the stacked intertwining equations."""
    st = _standard_gammas()
    rows = []
    for mu in range(4):
        # gamma_mu U - U gamma_mu^st = 0, vectorized over U
        rows.append(np.kron(np.eye(4), gammas[mu]) - np.kron(st[mu].T, np.eye(4)))
    A = np.vstack(rows)
    _, s, vh = np.linalg.svd(A)
    v = vh[-1].conj()
    U = v.reshape(4, 4, order="F")
    # scale to unitary (U is proportional to a unitary by Schur's lemma)
    scale = np.sqrt(np.real(np.trace(np.conj(U.T) @ U)) / 4.0)
    return U / scale


def make_representation(kind: RepKind | str) -> GammaRep:
    """Build one of the built-in gamma representations."""
    kind = RepKind(kind)
    if kind == RepKind.MAJORANA:
        gammas = _majorana_gammas()
    elif kind == RepKind.STANDARD:
        gammas = _standard_gammas()
    elif kind == RepKind.CHIRAL:
        gammas = _chiral_gammas()
    else:
        raise ValueError("make_representation only builds Majorana/Standard/Chiral")
    if kind == RepKind.STANDARD:
        U = np.eye(4, dtype=complex)
    else:
        U = _intertwiner_to_standard(gammas)
    rep = GammaRep(kind=kind, gammas=tuple(gammas), change_of_basis=U)
    rep.validate()
    return rep


def conjugate_representation(base: GammaRep, U: np.ndarray) -> GammaRep:
    """Representation with gamma_mu -> U gamma_mu U^-1 for unitary U."""
    U = np.asarray(U, dtype=complex)
    if np.max(np.abs(np.conj(U.T) @ U - np.eye(4))) > TAU_ALG:
        raise NonUnitary("change-of-basis matrix is not unitary")
    Uinv = np.conj(U.T)
    gammas = tuple(U @ g @ Uinv for g in base.gammas)
    rep = GammaRep(kind=RepKind.CUSTOM, gammas=gammas,
                   change_of_basis=U @ base.change_of_basis)
    rep.validate(tol=1e-11)
    return rep


def dirac_bar(A: np.ndarray, rep: GammaRep) -> np.ndarray:
    """Dirac conjugate gamma_0 A^dagger gamma_0 of a 4x4 matrix."""
    g0 = rep.gamma0
    return g0 @ np.conj(A.T) @ g0


def trace_inner_product(A: np.ndarray, B: np.ndarray, rep: GammaRep) -> complex:
    """(A, B) = (1/4) tr(A Bbar), the natural inner product on the algebra."""
    return 0.25 * np.trace(A @ dirac_bar(B, rep))


# Ordered labels for the 16 covariant slots. S pairs and K/J components
# follow the storage order used by BilinearSet.
BASIS_LABELS = (
    "omega1",
    "J0", "J1", "J2", "J3",
    "S01", "S02", "S03", "S12", "S23", "S31",
    "K0", "K1", "K2", "K3",
    "omega2",
)

S_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1))


@dataclass(frozen=True)
class GammaBasis:
    """The 16 matrices Gamma^a whose sandwiches give the bilinear covariants."""

    elements: tuple
    labels: tuple = BASIS_LABELS

    def gram(self, rep: GammaRep) -> np.ndarray:
        n = len(self.elements)
        G = np.empty((n, n), dtype=complex)
        for i, A in enumerate(self.elements):
            for j, B in enumerate(self.elements):
                G[i, j] = trace_inner_product(A, B, rep)
        return G


def gamma_basis(rep: GammaRep) -> GammaBasis:
    """Upper-slot basis: 1, gamma^mu, i gamma^{mu nu}, i gamma_0123 gamma^mu,
    -gamma_0123."""
    g0123 = rep.gamma0123
    elems = [np.eye(4, dtype=complex)]
    elems += [rep.gammas[mu] for mu in range(4)]
    elems += [1j * rep.gamma_munu(mu, nu) for mu, nu in S_PAIRS]
    elems += [1j * g0123 @ rep.gammas[mu] for mu in range(4)]
    elems += [-g0123]
    return GammaBasis(elements=tuple(elems))


def expansion_basis(rep: GammaRep) -> tuple:
    """Lower-index basis used to assemble rho = sum_a rho^a Gamma_a:
    1, gamma_mu, (i/...) handled by the caller; here we return the matrices
    multiplying each stored covariant slot (upper-index storage)."""
    g = rep.gammas
    g0123 = rep.gamma0123
    low = [rep.lower(mu) for mu in range(4)]

    def low_munu(mu, nu):
        return METRIC[mu, mu] * METRIC[nu, nu] * rep.gamma_munu(mu, nu)

    elems = [np.eye(4, dtype=complex)]
    elems += low
    # i * gamma_{mu nu} with a factor arising from (1/2) S^{mu nu} gamma_{mu nu}
    # over the full antisymmetric sum = sum over ordered pairs once
    elems += [1j * low_munu(mu, nu) for mu, nu in S_PAIRS]
    elems += [1j * low[mu] @ g0123 for mu in range(4)]
    elems += [g0123]
    return tuple(elems)


# Sign tables for the projector factorizations.  Each entry maps outcome k
# (1..4) to the (s1, s2) pair in (1/2)(1 + s1*F1)(1/2)(1 + s2*F2), with the
# factors built from upper-index gamma products (the explicit matrix blocks).
FACTORIZATION_SIGNS = {
    RepKind.MAJORANA: ((+1, +1), (+1, -1), (-1, +1), (-1, -1)),
    RepKind.STANDARD: ((+1, +1), (+1, -1), (-1, +1), (-1, -1)),
    RepKind.CHIRAL: ((+1, +1), (-1, +1), (-1, -1), (+1, -1)),
}


def _factorization_factors(rep: GammaRep):
    """The two commuting factors (F1, F2) of the projector factorization for
    each built-in representation."""
    g = rep.gammas
    if rep.kind == RepKind.MAJORANA:
        return g[2] @ g[0], 1j * g[1]
    if rep.kind == RepKind.STANDARD:
        return g[0], 1j * g[1] @ g[2]
    if rep.kind == RepKind.CHIRAL:
        return g[3] @ g[0], 1j * rep.gamma0123
    raise UnsupportedRep("projector factorization is only defined for built-in kinds")


def projector_factorization_check(rep: GammaRep) -> np.ndarray:
    """Max elementwise deviation of each factorized projector from the
    canonical diagonal P_k, returned as an array of four residuals."""
    F1, F2 = _factorization_factors(rep)
    eye = np.eye(4, dtype=complex)
    residuals = np.empty(4)
    for k, (s1, s2) in enumerate(FACTORIZATION_SIGNS[rep.kind]):
        P = 0.5 * (eye + s1 * F1) @ (0.5 * (eye + s2 * F2))
        canonical = np.zeros((4, 4), dtype=complex)
        canonical[k, k] = 1.0
        residuals[k] = np.max(np.abs(P - canonical))
    return residuals


def matrix_to_json(A: np.ndarray) -> list:
    """Row-major nested list of [re, im] pairs."""
    A = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])
