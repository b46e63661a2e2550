"""Projective marginal distributions in arbitrary frames, their
covariant-combination formulas, and shot-noise sampling."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .clifford import GammaRep, RepKind, expansion_basis
from .errors import NegativeWeight
from .lorentz import (IDENTITY_FRAME, ROT_X, ROT_Y, ROT_Z, LorentzFrame,
                      QuadratureScheme, direction_frame, spinor_lift,
                      transform_bilinears)
from .spinor import BilinearSet, DiracSpinor, bilinears

DUAL_PATH_TOL = 1e-12


@dataclass(frozen=True)
class ProjectorSet:
    """The four canonical diagonal projectors of the component measurement."""

    P: tuple

    def validate(self, tol: float = 1e-13) -> None:
        total = sum(self.P)
        assert np.max(np.abs(total - np.eye(4))) < tol
        for j, Pj in enumerate(self.P):
            assert np.max(np.abs(Pj @ Pj - Pj)) < tol
            assert np.max(np.abs(np.conj(Pj.T) - Pj)) < tol
            for k, Pk in enumerate(self.P):
                if j != k:
                    assert np.max(np.abs(Pj @ Pk)) < tol


def projectors() -> ProjectorSet:
    mats = []
    for k in range(4):
        P = np.zeros((4, 4), dtype=complex)
        P[k, k] = 1.0
        mats.append(P)
    return ProjectorSet(P=tuple(mats))


@dataclass(frozen=True)
class MarginalRecord:
    """Four outcome probabilities attached to a frame (and optionally a
    representation kind and a shot count; shots absent means exact)."""

    frame: str
    w: np.ndarray
    shots: int | None = None
    rep_kind: RepKind | None = None

    def __post_init__(self):
        object.__setattr__(self, "w", np.asarray(self.w, dtype=float).reshape(4))

    def to_json(self) -> dict:
        d = {"frame": self.frame, "w": [float(x) for x in self.w],
             "N": self.shots}
        if self.rep_kind is not None:
            d["rep"] = self.rep_kind.value
        return d


def marginals(psi: DiracSpinor, frame: LorentzFrame, rep: GammaRep) -> MarginalRecord:
    """w_k = |(L psi)_k|^2, cross-checked against the projector path
    <psibar| L^-1 gamma_0 P_k L |psi>."""
    lift = spinor_lift(frame, rep)
    transformed = lift.L @ psi.components
    w_direct = np.abs(transformed) ** 2

    Linv = np.linalg.inv(lift.L)
    bar = psi.bar(rep)
    w_proj = np.empty(4)
    for k, Pk in enumerate(projectors().P):
        w_proj[k] = np.real(bar @ Linv @ rep.gamma0 @ Pk @ lift.L @ psi.components)
    scale = max(1.0, psi.norm**2)
    if np.max(np.abs(w_direct - w_proj)) > DUAL_PATH_TOL * scale * max(
            1.0, np.max(np.abs(lift.L))**2):
        raise AssertionError("projector and component marginal paths disagree")
    return MarginalRecord(frame=frame.label, w=w_direct,
                          rep_kind=rep.kind if rep.kind != RepKind.CUSTOM else None)


def marginal_coefficients(rep: GammaRep, frame: LorentzFrame) -> np.ndarray:
    """4x16 matrix C with w_k = C[k] . (16 covariants, upper-index order).

    Rows are tr(L^-1 gamma_0 P_k L Gamma_a)/4 over the expansion basis; this
    is how the per-representation marginal formulas are generated without
    hand-maintained sign tables.
    """
    lift = spinor_lift(frame, rep)
    Linv = np.linalg.inv(lift.L)
    basis = expansion_basis(rep)
    C = np.empty((4, 16))
    for k, Pk in enumerate(projectors().P):
        M = Linv @ rep.gamma0 @ Pk @ lift.L
        row = np.array([np.trace(M @ G) / 4.0 for G in basis])
        if np.max(np.abs(row.imag)) > 1e-10:
            raise AssertionError("marginal coefficients came out complex")
        C[k] = row.real
    return C


# Per-representation marginal formulas as combinations of the transformed
# covariants (components in the package's storage convention).
def _formula_weights(kind: RepKind, Bt: BilinearSet) -> np.ndarray:
    if kind == RepKind.MAJORANA:
        j0, j2, s01, s12 = Bt.J[0], Bt.J[2], Bt.S[0], Bt.S[3]
        return 0.25 * np.array([
            j0 - j2 + s01 + s12,
            j0 - j2 - s01 - s12,
            j0 + j2 + s01 - s12,
            j0 + j2 - s01 + s12,
        ])
    if kind == RepKind.STANDARD:
        o1, j0, s12, k3 = Bt.omega1, Bt.J[0], Bt.S[3], Bt.K[3]
        return 0.25 * np.array([
            j0 + o1 + s12 + k3,
            j0 + o1 - s12 - k3,
            j0 - o1 - s12 + k3,
            j0 - o1 + s12 - k3,
        ])
    if kind == RepKind.CHIRAL:
        j0, j3, k0, k3 = Bt.J[0], Bt.J[3], Bt.K[0], Bt.K[3]
        return 0.25 * np.array([
            j0 - j3 - k0 + k3,
            j0 + j3 - k0 - k3,
            j0 + j3 + k0 + k3,
            j0 - j3 + k0 - k3,
        ])
    raise ValueError("formula check only defined for built-in kinds")


def marginal_formula_check(psi: DiracSpinor, frame: LorentzFrame,
                           kind: RepKind | str) -> float:
    """Max |covariant-combination formula - direct marginal| for the given
    built-in representation."""
    from .clifford import make_representation

    kind = RepKind(kind)
    rep = make_representation(kind)
    Bt = transform_bilinears(bilinears(psi, rep), frame)
    w_formula = _formula_weights(kind, Bt)
    w_direct = marginals(psi, frame, rep).w
    return float(np.max(np.abs(w_formula - w_direct)))


def _philox_key(seed: int, frame_label: str, trial: int) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}|{frame_label}|{trial}".encode()).digest()
    key = np.frombuffer(digest[:16], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_shots(record: MarginalRecord, N: int, seed: int,
                 trial: int = 0) -> MarginalRecord:
    """Multinomial shot simulation, deterministic per (seed, frame, trial).

    The counter-based Philox stream keyed on (seed, frame label, trial)
    makes results independent of evaluation order.
    """
    w = record.w
    if np.min(w) < -1e-12:
        raise NegativeWeight(f"marginal weight {np.min(w)} is negative")
    w = np.clip(w, 0.0, None)
    p = w / np.sum(w)
    rng = _philox_key(seed, record.frame, trial)
    counts = rng.multinomial(N, p)
    return MarginalRecord(frame=record.frame, w=counts / float(N), shots=N,
                          rep_kind=record.rep_kind)


class Protocol(str, Enum):
    DISCRETE_MAJORANA = "discrete-majorana"
    COMBINED_ST_CHIRAL = "combined-st-chiral"
    CONTINUOUS_GRID = "continuous-grid"


DISCRETE_FRAMES = (IDENTITY_FRAME, ROT_X, ROT_Y, ROT_Z)


def frame_set(protocol: Protocol | str,
              grid: tuple[int, int] | None = None) -> list[LorentzFrame]:
    """The measurement frames of each protocol."""
    protocol = Protocol(protocol)
    if protocol in (Protocol.DISCRETE_MAJORANA, Protocol.COMBINED_ST_CHIRAL):
        return list(DISCRETE_FRAMES)
    if protocol == Protocol.CONTINUOUS_GRID:
        if grid is None:
            grid = (32, 64)
        scheme = QuadratureScheme(*grid)
        thetas, _, phis, _ = scheme.nodes()
        return [direction_frame(t, p) for t in thetas for p in phis]
    raise ValueError(protocol)


def records_to_csv(records, path, header_lines=()) -> None:
    """CSV with columns frame,k,w,N (N empty for exact records)."""
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("frame,k,w,N\n")
        for rec in records:
            for k in range(4):
                n = "" if rec.shots is None else str(rec.shots)
                fh.write(f"{rec.frame},{k + 1},{rec.w[k]:.17g},{n}\n")


def records_to_json(records) -> list:
    return [rec.to_json() for rec in records]
