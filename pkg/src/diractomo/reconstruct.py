"""Reconstruction of a Dirac spinor from rotated marginal datasets, plus the
feasibility and ambiguity audits of the representation-dependence claims."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .clifford import (BASIS_LABELS, GammaRep, RepKind, make_representation)
from .errors import (GridMismatch, InconsistentInput, MissingFrame,
                     NoValidCandidate)
from .lorentz import (LorentzFrame, QuadratureScheme, boost, field_kernel_recon,
                      parse_frame_label, rotation, spinor_lift)
from .spinor import (BilinearSet, DegenerateAnchor, DiracSpinor, bilinears,
                     crawford_reconstruct_auto, fierz_residuals, phase_distance,
                     random_spinor, rho_from_bilinears)
from .tomography import (MarginalRecord, Protocol, frame_set,
                         marginal_coefficients, marginals, sample_shots)

TAU_RECON = 1e-10
TAU_NULL = 1e-10

_REP_CACHE: dict = {}
_LIFT_CACHE: dict = {}
_COEFF_CACHE: dict = {}


def _rep(kind: RepKind) -> GammaRep:
    if kind not in _REP_CACHE:
        _REP_CACHE[kind] = make_representation(kind)
    return _REP_CACHE[kind]


def _lift_matrix(kind: RepKind, frame_label: str) -> np.ndarray:
    key = (kind, frame_label)
    if key not in _LIFT_CACHE:
        frame = parse_frame_label(frame_label)
        _LIFT_CACHE[key] = spinor_lift(frame, _rep(kind)).L
    return _LIFT_CACHE[key]


def _coeffs(kind: RepKind, frame_label: str) -> np.ndarray:
    key = (kind, frame_label)
    if key not in _COEFF_CACHE:
        frame = parse_frame_label(frame_label)
        _COEFF_CACHE[key] = marginal_coefficients(_rep(kind), frame)
    return _COEFF_CACHE[key]


@dataclass(frozen=True)
class MarginalDataset:
    """Measured (or exact) marginal records keyed by (rep kind, frame label)."""

    records: tuple
    protocol: Protocol
    grid: tuple | None = None

    def __post_init__(self):
        keys = [(r.rep_kind, r.frame) for r in self.records]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (rep, frame) keys in dataset")

    def by_rep(self, kind: RepKind) -> dict:
        return {r.frame: r for r in self.records if r.rep_kind == kind}

    @property
    def shots(self) -> int | None:
        return self.records[0].shots if self.records else None


def simulate_dataset(psi: DiracSpinor, protocol: Protocol | str,
                     shots: int | None = None, seed: int = 0, trial: int = 0,
                     grid: tuple[int, int] | None = None) -> MarginalDataset:
    """Simulate a protocol run on ``psi``.

    ``psi`` is given in the components of the protocol's primary
    representation (Majorana for the discrete and continuous protocols,
    standard for the combined protocol, where the chiral components are
    obtained by the inter-representation basis change).
    """
    protocol = Protocol(protocol)
    frames = frame_set(protocol, grid=grid)
    records = []
    if protocol == Protocol.COMBINED_ST_CHIRAL:
        st, ch = _rep(RepKind.STANDARD), _rep(RepKind.CHIRAL)
        U = ch.change_of_basis  # standard -> chiral component map
        psi_ch = DiracSpinor(U @ psi.components)
        pairs = [(st, psi), (ch, psi_ch)]
    else:
        pairs = [(_rep(RepKind.MAJORANA), psi)]
    for rep, state in pairs:
        for fr in frames:
            rec = marginals(state, fr, rep)
            if shots is not None:
                rec = sample_shots(rec, shots, seed, trial=trial)
            records.append(rec)
    return MarginalDataset(records=tuple(records), protocol=protocol, grid=grid)


@dataclass
class ReconstructionReport:
    candidates: list
    covariants: list
    marginal_residuals: list
    constraint_residuals: np.ndarray | None
    fierz: np.ndarray | None
    ambiguity_flag: bool
    diagnostics: str = ""

    @property
    def best(self) -> DiracSpinor:
        return self.candidates[0]

    def to_json(self) -> dict:
        return {
            "candidates": [c.to_json() for c in self.candidates],
            "covariants": [b.to_json() for b in self.covariants],
            "marginal_residuals": [float(r) for r in self.marginal_residuals],
            "constraint_residuals": None if self.constraint_residuals is None
            else [float(r) for r in self.constraint_residuals],
            "fierz_residuals": None if self.fierz is None
            else [float(r) for r in self.fierz],
            "ambiguity_flag": bool(self.ambiguity_flag),
            "diagnostics": self.diagnostics,
        }


def _require_frames(data: MarginalDataset, kind: RepKind, labels) -> dict:
    recs = data.by_rep(kind)
    missing = [lb for lb in labels if lb not in recs]
    if missing:
        raise MissingFrame(f"{kind.value} records missing frames {missing}")
    return recs


DISCRETE_LABELS = ("I", "Rx", "Ry", "Rz")

# column index slices in the 16-covariant vector
_COL_J = slice(1, 5)
_COL_S = slice(5, 11)


def _stacked_system(data: MarginalDataset, kinds) -> tuple:
    rows, w = [], []
    for kind in kinds:
        recs = _require_frames(data, kind, DISCRETE_LABELS)
        for lb in DISCRETE_LABELS:
            rows.append(_coeffs(kind, lb))
            w.append(recs[lb].w)
    return np.vstack(rows), np.concatenate(w)


def recover_JS_majorana(data: MarginalDataset) -> tuple:
    """J and S (ten covariants) from the four-frame Majorana marginals, by
    least squares on the stacked linear system."""
    C, w = _stacked_system(data, [RepKind.MAJORANA])
    sub = np.concatenate([np.arange(16)[_COL_J], np.arange(16)[_COL_S]])
    # the remaining covariants never enter Majorana marginals
    assert np.max(np.abs(np.delete(C, sub, axis=1))) < 1e-12
    sol, *_ = np.linalg.lstsq(C[:, sub], w, rcond=None)
    return sol[:4].copy(), sol[4:].copy()


def fierz_completion(J, S, tol: float = 0.05) -> list:
    """Solve for (omega1, omega2, K) given J and S.

    The Fierz tensor identity and J.K = 0 are linear in the unknowns, so the
    solutions form the null space of a 7x6 system; the physical scale comes
    from omega1^2 + omega2^2 = J.J.  Returns both global-sign candidates
    (the identities cannot tell them apart), or a degenerate-class candidate
    set when J.J is null.
    """
    J = np.asarray(J, dtype=float).reshape(4)
    S = np.asarray(S, dtype=float).reshape(6)

    def resid(x):
        B = BilinearSet(omega1=x[0], J=J, S=S, K=x[2:6], omega2=x[1])
        r = fierz_residuals(B)
        return np.concatenate([r[3:], [r[2]]])

    M = np.column_stack([resid(e) for e in np.eye(6)])
    JJ = float(J @ (np.diag([1.0, -1, -1, -1]) @ J))
    scale = float(np.max(np.abs(J)) ** 2 + np.max(np.abs(S)))

    if JJ < TAU_NULL * max(scale, 1e-300):
        # null (Weyl/Majorana) class: omega1 = omega2 = 0; K is either +-J
        # (Weyl) or zero (Majorana class); let downstream validation decide
        cands = [(0.0, 0.0, J.copy()), (0.0, 0.0, -J.copy()),
                 (0.0, 0.0, np.zeros(4))]
        return [_CompletionCandidate(o1, o2, K, degenerate=True)
                for o1, o2, K in cands]

    _, sv, vh = np.linalg.svd(M)
    if sv[-1] > tol * max(sv[0], 1e-300):
        raise InconsistentInput(
            f"no consistent (omega, K) completion (sv ratio {sv[-1] / sv[0]:.2e})")
    v = vh[-1]
    onorm2 = v[0] ** 2 + v[1] ** 2
    if onorm2 <= 0:
        raise InconsistentInput("degenerate completion direction")
    t = np.sqrt(JJ / onorm2)
    out = []
    for s in (+1.0, -1.0):
        x = s * t * v
        out.append(_CompletionCandidate(float(x[0]), float(x[1]), x[2:6].copy(),
                                        degenerate=False))
    return out


@dataclass(frozen=True)
class _CompletionCandidate:
    omega1: float
    omega2: float
    K: np.ndarray
    degenerate: bool = False


def convert_spinor(psi: DiracSpinor, from_kind: RepKind,
                   to_kind: RepKind) -> DiracSpinor:
    """Component change between representations: psi' = U_to U_from^-1 psi."""
    if from_kind == to_kind:
        return psi
    Uf = _rep(from_kind).change_of_basis
    Ut = _rep(to_kind).change_of_basis
    return DiracSpinor(Ut @ np.conj(Uf.T) @ psi.components)


def _model_marginals(psi: DiracSpinor, kind: RepKind, frame_label: str) -> np.ndarray:
    L = _lift_matrix(kind, frame_label)
    return np.abs(L @ psi.components) ** 2


def _validate_candidate(psi: DiracSpinor, recon_kind: RepKind,
                        data: MarginalDataset, labels_by_kind: dict) -> float:
    worst = 0.0
    for kind, labels in labels_by_kind.items():
        state = convert_spinor(psi, recon_kind, kind)
        recs = data.by_rep(kind)
        for lb in labels:
            res = np.max(np.abs(_model_marginals(state, kind, lb) - recs[lb].w))
            worst = max(worst, res)
    return worst


def _lsq_polish(psi0: DiracSpinor, recon_kind: RepKind, data: MarginalDataset,
                labels_by_kind: dict) -> DiracSpinor:
    """Least-squares fit of the spinor to the measured marginals, seeded at
    ``psi0`` (used only for shot-sampled data)."""
    from scipy.optimize import least_squares

    mats, targets = [], []
    for kind, labels in labels_by_kind.items():
        T = np.eye(4, dtype=complex)
        if kind != recon_kind:
            T = _rep(kind).change_of_basis @ \
                np.conj(_rep(recon_kind).change_of_basis.T)
        recs = data.by_rep(kind)
        for lb in labels:
            mats.append(_lift_matrix(kind, lb) @ T)
            targets.append(recs[lb].w)
    target = np.concatenate(targets)
    stack = np.stack(mats)

    def fun(x):
        c = x[:4] + 1j * x[4:]
        return (np.abs(stack @ c) ** 2).ravel() - target

    x0 = np.concatenate([psi0.components.real, psi0.components.imag])
    sol = least_squares(fun, x0, xtol=1e-14, ftol=1e-14, gtol=1e-14)
    from .spinor import _fix_phase
    return _fix_phase(DiracSpinor(sol.x[:4] + 1j * sol.x[4:]))


def _recon_tolerance(data: MarginalDataset) -> float:
    if data.shots is None:
        return TAU_RECON
    return 3.0 / np.sqrt(data.shots)


def _candidates_to_report(data, cand_sets, kind_labels, recon_rep,
                          constraint=None, diagnostics="") -> ReconstructionReport:
    tau = _recon_tolerance(data)
    evaluated = []
    for comp in cand_sets:
        B = comp["bilinears"]
        try:
            psi_c = crawford_reconstruct_auto(rho_from_bilinears(B, recon_rep),
                                              recon_rep)
        except DegenerateAnchor:
            continue
        res = _validate_candidate(psi_c, recon_rep.kind, data, kind_labels)
        evaluated.append((res, psi_c, B))
    evaluated.sort(key=lambda t: t[0])
    valid = [e for e in evaluated if e[0] < tau]
    if not valid and data.shots is not None and evaluated:
        # noisy data can push the algebraic completion off target; polish the
        # best candidate by least squares on the measured marginals
        res, psi_c, B = evaluated[0]
        psi_c = _lsq_polish(psi_c, recon_rep.kind, data, kind_labels)
        res = _validate_candidate(psi_c, recon_rep.kind, data, kind_labels)
        if res < tau:
            diagnostics = (diagnostics + "; " if diagnostics else "") + \
                "least-squares polish applied"
            valid = [(res, psi_c, B)]
    if not valid:
        if not evaluated:
            raise NoValidCandidate("no candidate survived reconstruction")
        raise NoValidCandidate(
            f"best candidate misses marginals by {evaluated[0][0]:.3e} (tau {tau:.3e})")
    # drop phase-duplicates
    unique = []
    for res, psi_c, B in valid:
        if all(phase_distance(psi_c, u[1]) > 1e-8 for u in unique):
            unique.append((res, psi_c, B))
    ambiguity = len(unique) > 1
    best_B = unique[0][2]
    return ReconstructionReport(
        candidates=[u[1] for u in unique],
        covariants=[u[2] for u in unique],
        marginal_residuals=[u[0] for u in unique],
        constraint_residuals=constraint,
        fierz=fierz_residuals(best_B),
        ambiguity_flag=ambiguity,
        diagnostics=diagnostics,
    )


def reconstruct_majorana(data: MarginalDataset,
                         rep: GammaRep | None = None) -> ReconstructionReport:
    """Discrete four-frame protocol: linear recovery of J and S, Fierz
    completion of the rest, then the rho-anchor reconstruction."""
    if data.protocol != Protocol.DISCRETE_MAJORANA:
        raise ValueError("dataset protocol is not the discrete Majorana protocol")
    rep = rep or _rep(RepKind.MAJORANA)
    J, S = recover_JS_majorana(data)
    comps = fierz_completion(J, S)
    cand_sets = [{"bilinears": BilinearSet(omega1=c.omega1, J=J, S=S, K=c.K,
                                           omega2=c.omega2)} for c in comps]
    diag = "null-class input" if comps and comps[0].degenerate else ""
    return _candidates_to_report(
        data, cand_sets, {RepKind.MAJORANA: DISCRETE_LABELS}, rep,
        constraint=constraint_residuals(data), diagnostics=diag)


def _complete_polar_omega2(known: BilinearSet) -> BilinearSet:
    """Fill in S^{0k} and omega2 via the contracted Fierz identities
    J.(*S) = omega1 K, -J.S = omega2 K, K.(*S) = omega1 J, -K.S = omega2 J,
    which are linear in the unknowns once omega1, J, the axial S block and
    K are known."""
    def resid(x):
        S = known.S.copy()
        S[0:3] = x[0:3]
        B = BilinearSet(omega1=known.omega1, J=known.J, S=S, K=known.K,
                        omega2=x[3])
        dS, Sl = B.dual_S(), B.lower_S()
        Jl, Kl = B.lower_J(), B.lower_K()
        return np.concatenate([
            B.J @ dS - B.omega1 * Kl,
            -B.J @ Sl - B.omega2 * Kl,
            B.K @ dS - B.omega1 * Jl,
            -B.K @ Sl - B.omega2 * Jl,
        ])

    base = resid(np.zeros(4))
    M = np.column_stack([resid(e) - base for e in np.eye(4)])
    sol, *_ = np.linalg.lstsq(M, -base, rcond=None)
    S = known.S.copy()
    S[0:3] = sol[0:3]
    return BilinearSet(omega1=known.omega1, J=known.J, S=S, K=known.K,
                       omega2=float(sol[3]))


def reconstruct_combined(data: MarginalDataset) -> ReconstructionReport:
    """Standard+chiral rotation protocol: omega1, J, axial S and K come out
    of the stacked linear system with their signs, so the reconstruction is
    unique; the polar S block and omega2 follow from the Fierz identities."""
    if data.protocol != Protocol.COMBINED_ST_CHIRAL:
        raise ValueError("dataset protocol is not the combined protocol")
    kinds = [RepKind.STANDARD, RepKind.CHIRAL]
    C, w = _stacked_system(data, kinds)
    active = np.where(np.max(np.abs(C), axis=0) > 1e-12)[0]
    sol, *_ = np.linalg.lstsq(C[:, active], w, rcond=None)
    vec = np.zeros(16)
    vec[active] = sol
    partial = BilinearSet.from_vector(vec)
    B = _complete_polar_omega2(partial)
    cand_sets = [{"bilinears": B}]
    return _candidates_to_report(
        data, cand_sets, {k: DISCRETE_LABELS for k in kinds},
        _rep(RepKind.STANDARD),
        diagnostics="combined standard+chiral rotation protocol")


# frame-local combinations of the four marginals (rows of the inverse of the
# discrete marginal formula): J0, J2-like, S01-like, S12-like
_COMBO = np.array([
    [1.0, 1.0, 1.0, 1.0],
    [-1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
])


def reconstruct_continuous(data: MarginalDataset,
                           rep: GammaRep | None = None) -> ReconstructionReport:
    """Continuous protocol: the frame-local combinations sample the current,
    polar-S and axial-S 3-vectors along the rows of each grid frame; each is
    recovered by the spherical kernel transform, then completion proceeds as
    in the discrete protocol."""
    if data.protocol != Protocol.CONTINUOUS_GRID:
        raise ValueError("dataset protocol is not the continuous protocol")
    rep = rep or _rep(RepKind.MAJORANA)
    grid = data.grid or (32, 64)
    scheme = QuadratureScheme(*grid)
    thetas, _, phis, _ = scheme.nodes()
    recs = data.by_rep(RepKind.MAJORANA)

    shape = (scheme.n_theta, scheme.n_phi)
    combos = np.full((4,) + shape, np.nan)
    rows = {ax: np.empty(shape + (3,)) for ax in range(3)}
    for i, t in enumerate(thetas):
        for j, p in enumerate(phis):
            label = f"dir({t:.12g},{p:.12g})"
            if label not in recs:
                raise GridMismatch(f"dataset missing grid frame {label}")
            frame = parse_frame_label(label)
            combos[:, i, j] = _COMBO @ recs[label].w
            for ax in range(3):
                rows[ax][i, j] = frame.spatial[ax]
    W = scheme.weights_grid()
    J0 = float(np.sum(W * combos[0]) / (4.0 * np.pi))
    Jvec = field_kernel_recon(combos[1], rows[1], scheme)
    Pvec = field_kernel_recon(combos[2], rows[0], scheme)
    Avec = field_kernel_recon(combos[3], rows[2], scheme)
    J = np.concatenate([[J0], Jvec])
    S = np.array([Pvec[0], Pvec[1], Pvec[2], Avec[2], Avec[0], Avec[1]])

    comps = fierz_completion(J, S)
    cand_sets = [{"bilinears": BilinearSet(omega1=c.omega1, J=J, S=S, K=c.K,
                                           omega2=c.omega2)} for c in comps]
    # validate against a thinned frame subset to keep the cost bounded
    labels = list(recs)[:: max(1, len(recs) // 64)]
    diag = f"continuous grid {grid[0]}x{grid[1]}"
    if comps and comps[0].degenerate:
        diag += "; null-class input"
    return _candidates_to_report(data, cand_sets,
                                 {RepKind.MAJORANA: labels}, rep,
                                 diagnostics=diag)


def constraint_residuals(data: MarginalDataset) -> np.ndarray:
    """The six redundancy relations among the 16 discrete-protocol marginals:
    J0 agrees across all four frames, and one covariant per rotated frame
    repeats a frame-I value."""
    recs = _require_frames(data, RepKind.MAJORANA, DISCRETE_LABELS)
    c = {lb: _COMBO @ recs[lb].w for lb in DISCRETE_LABELS}
    return np.array([
        c["I"][0] - c["Rx"][0],
        c["I"][0] - c["Ry"][0],
        c["I"][0] - c["Rz"][0],
        c["I"][2] - c["Rx"][2],   # polar S component repeats under Rx
        c["I"][1] - c["Ry"][1],   # current component repeats under Ry
        c["I"][3] - c["Rz"][3],   # axial S component repeats under Rz
    ])


class TomographicGroup(str, Enum):
    ROTATIONS = "rotations"
    FULL_RESTRICTED_LORENTZ = "full-restricted-lorentz"


class Verdict(str, Enum):
    COMPLETE = "complete"
    INCOMPLETE = "incomplete"


@dataclass
class FeasibilityReport:
    rep_kind: RepKind
    group: TomographicGroup
    recoverable_slots: list
    span_rank: int
    target_rank: int
    verdict: Verdict


def _group_frames(group: TomographicGroup, rng: np.random.Generator,
                  n_frames: int) -> list:
    frames = []
    for _ in range(n_frames):
        a = rng.standard_normal(3)
        a /= np.linalg.norm(a)
        fr = rotation(a, rng.uniform(-np.pi, np.pi))
        if group == TomographicGroup.FULL_RESTRICTED_LORENTZ and rng.random() < 0.5:
            d = rng.standard_normal(3)
            d /= np.linalg.norm(d)
            fr = boost(d, rng.uniform(-1.0, 1.0)).compose(fr)
        frames.append(fr)
    return frames


def _marginal_gradients(psi: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Gradient of psi^dag M psi over (Re psi, Im psi) for Hermitian M."""
    Mp = M @ psi
    return np.concatenate([2.0 * Mp.real, 2.0 * Mp.imag])


def representation_feasibility(rep_kind: RepKind | str,
                               group: TomographicGroup | str,
                               seed: int = 0, n_frames: int = 40,
                               n_base: int = 3,
                               weyl_class: bool = False,
                               rep: GammaRep | None = None) -> FeasibilityReport:
    """Generic rank of the marginal-gradient span over the tomographic group,
    modulo the global phase direction.

    With ``weyl_class`` the base points and tangent directions are restricted
    to one chirality block (chiral representation), and the target rank is
    the class dimension minus the phase.
    """
    rep_kind = RepKind(rep_kind)
    group = TomographicGroup(group)
    rep = rep or _rep(rep_kind)
    rng = np.random.default_rng(seed)
    frames = _group_frames(group, rng, n_frames)
    lifts = [spinor_lift(fr, rep).L for fr in frames]

    P = np.eye(4)
    if weyl_class:
        mask = np.zeros(8, dtype=bool)
        mask[[0, 1, 4, 5]] = True  # Re/Im of the first chirality block
        target = 3
    else:
        mask = np.ones(8, dtype=bool)
        target = 7

    rank = 0
    for _ in range(n_base):
        if weyl_class:
            comp = np.zeros(4, dtype=complex)
            comp[:2] = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            psi = comp / np.linalg.norm(comp)
        else:
            psi = random_spinor(rng).components
        rows = []
        for L in lifts:
            for k in range(4):
                Mk = np.conj(L.T) @ (np.outer(P[k], P[k]) * 1.0) @ L
                rows.append(_marginal_gradients(psi, Mk))
        G = np.array(rows)[:, mask]
        phase = np.concatenate([-psi.imag, psi.real])[mask]
        phase = phase / np.linalg.norm(phase)
        G = G - np.outer(G @ phase, phase)
        sv = np.linalg.svd(G, compute_uv=False)
        rank = max(rank, int(np.sum(sv > 1e-8 * sv[0])))

    slots = _recoverable_slots(rep_kind, group, frames)
    verdict = Verdict.COMPLETE if rank >= target else Verdict.INCOMPLETE
    return FeasibilityReport(rep_kind=rep_kind, group=group,
                             recoverable_slots=slots, span_rank=rank,
                             target_rank=target, verdict=verdict)


def _recoverable_slots(rep_kind: RepKind, group, frames) -> list:
    """Covariant slots that enter the group-transformed marginals at all
    (the nonzero columns of the stacked coefficient matrix)."""
    if rep_kind == RepKind.CUSTOM:
        return []
    rep = _rep(rep_kind)
    C = np.vstack([marginal_coefficients(rep, fr) for fr in frames[:12]])
    cols = np.max(np.abs(C), axis=0) > 1e-10
    return [lb for lb, on in zip(BASIS_LABELS, cols) if on]


@dataclass
class AmbiguityReport:
    found: bool
    psi: DiracSpinor
    counterpart: DiracSpinor | None
    mismatch: float
    distance: float
    strategy: str = ""


def _marginal_mismatch(psi_a, psi_b, lifts) -> float:
    worst = 0.0
    for L in lifts:
        wa = np.abs(L @ psi_a.components) ** 2
        wb = np.abs(L @ psi_b.components) ** 2
        worst = max(worst, float(np.max(np.abs(wa - wb))))
    return worst


def ambiguity_probe(psi: DiracSpinor, rep_kind: RepKind | str,
                    group: TomographicGroup | str, seed: int = 0,
                    n_frames: int = 60, refine: bool = True) -> AmbiguityReport:
    """Search for a distinct spinor whose group marginals all agree with
    ``psi``'s.

    Candidate seeds: the opposite global-sign Fierz completion, and relative
    phases between the upper and lower component pairs; candidates close to
    agreement are polished by local least squares on the marginal mismatch.
    """
    rep_kind = RepKind(rep_kind)
    group = TomographicGroup(group)
    rep = _rep(rep_kind)
    rng = np.random.default_rng(seed)
    frames = _group_frames(group, rng, n_frames)
    lifts = [spinor_lift(fr, rep).L for fr in frames]

    candidates = []
    # (a) global-sign flip of (omega1, omega2, K) at fixed J, S
    B = bilinears(psi, rep)
    flipped = BilinearSet(omega1=-B.omega1, J=B.J, S=B.S, K=-B.K,
                          omega2=-B.omega2)
    try:
        candidates.append(("sign-flip", crawford_reconstruct_auto(
            rho_from_bilinears(flipped, rep), rep)))
    except DegenerateAnchor:
        pass
    # (b) relative phase between the two component pairs
    for beta in (np.pi / 2, np.pi, 1.0, 2.5):
        c = psi.components.copy()
        c[2:] *= np.exp(1j * beta)
        candidates.append((f"half-phase({beta:.3g})", DiracSpinor(c)))

    best = None
    for strategy, cand in candidates:
        d = phase_distance(cand, psi)
        if d <= 0.1:
            continue
        mm = _marginal_mismatch(psi, cand, lifts)
        if refine and 1e-9 < mm < 1e-2:
            cand = _refine_candidate(psi, cand, lifts)
            d = phase_distance(cand, psi)
            mm = _marginal_mismatch(psi, cand, lifts)
            if d <= 0.1:
                continue
        if best is None or mm < best[1]:
            best = (strategy, mm, d, cand)
    if best is not None and best[1] < 1e-9:
        return AmbiguityReport(found=True, psi=psi, counterpart=best[3],
                               mismatch=best[1], distance=best[2],
                               strategy=best[0])
    return AmbiguityReport(found=False, psi=psi, counterpart=None,
                           mismatch=np.inf if best is None else best[1],
                           distance=0.0 if best is None else best[2],
                           strategy="" if best is None else best[0])


def _refine_candidate(psi, cand, lifts) -> DiracSpinor:
    from scipy.optimize import least_squares

    targets = [np.abs(L @ psi.components) ** 2 for L in lifts]

    def fun(x):
        c = x[:4] + 1j * x[4:]
        return np.concatenate([np.abs(L @ c) ** 2 - t
                               for L, t in zip(lifts, targets)])

    x0 = np.concatenate([cand.components.real, cand.components.imag])
    res = least_squares(fun, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return DiracSpinor(res.x[:4] + 1j * res.x[4:])
