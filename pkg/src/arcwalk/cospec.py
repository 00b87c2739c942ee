"""Strong cospectrality between a vertex start state and a target state.

Two routes are provided and must agree. The adjacency-level route checks,
for the start state x_a of vertex a and a candidate target y, the vertex
space equations

    sqrt(k) E_0 e_a            = +- E_0 T y  = +- E_0 H y
    sqrt(k) cos(delta_r) E_r e_a             = E_r T y
    sqrt(k) cos(delta_r + theta_r) E_r e_a   = E_r H y

with T, H the tail and head incidence maps, one phase delta_r per
eigenvalue class in the support of a. Classes outside the support must
annihilate T y as well. The walk-level route checks F x_a = e^{i delta}
F y directly on each walk projection F.

Targets of interest are real up to a global sign; the adjacency-level
equations are stated with real coefficients, so a target carrying a
non-real global phase is reported as not cospectral here even though
the walk-level route is phase invariant. Use the direct route when phase
freedom matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectra import SpectralDecomposition, eigenvalue_support
from .walk import ArcSpace, State, WalkSpectrum

#: tolerance for cospectrality residuals and phase consistency
TAU_COSP = 1e-8
#: below this |sin delta| the sign of delta is unobservable and it is
#: snapped to 0 or pi
SIN_SNAP = 1e-6
#: flatness tolerance for candidate targets, max entrywise deviation from +-1
TAU_FLAT = 1e-6

NOT_COSPECTRAL = "not cospectral"


@dataclass(frozen=True)
class SignPattern:
    """Sign assignment over eigenvalue classes: a global sign on the
    valency class and a parity bit sigma_r per remaining class, encoding
    the coefficient (-1)^{sigma_r}."""

    sign_e0: int
    sigmas: tuple[int, ...]

    def __post_init__(self):
        if self.sign_e0 not in (-1, 1):
            raise ValueError(f"sign_e0 must be +1 or -1, got {self.sign_e0}")
        if any(s not in (0, 1) for s in self.sigmas):
            raise ValueError(f"sigmas must be 0/1 bits, got {self.sigmas}")
        object.__setattr__(self, "sigmas", tuple(int(s) for s in self.sigmas))

    def encode(self) -> int:
        """Total order key: sign bit then sigma bits, most significant first."""
        code = 0 if self.sign_e0 == 1 else 1
        for s in self.sigmas:
            code = (code << 1) | s
        return code

    def negated(self) -> "SignPattern":
        return SignPattern(-self.sign_e0, tuple(1 - s for s in self.sigmas))

    def canonical(self) -> "SignPattern":
        """Representative of the {p, -p} orbit with the smaller encoding."""
        other = self.negated()
        return self if self.encode() <= other.encode() else other

    def label(self) -> str:
        """Compact sign string, one character per class starting with E_0."""
        bits = [self.sign_e0] + [1 - 2 * s for s in self.sigmas]
        return "".join("+" if b == 1 else "-" for b in bits)

    def signs(self) -> np.ndarray:
        """Coefficients (+-1) for all classes including the valency class."""
        return np.array([self.sign_e0] + [1 - 2 * s for s in self.sigmas])


@dataclass(frozen=True, eq=False)
class ColumnTarget:
    """Candidate flat-target profile built from a sign pattern.

    ``vector`` is v = (+-E_0 + sum_r (-1)^{sigma_r} E_r) e_a on vertices.
    ``flat`` reports whether sqrt(n) v is entrywise +-1 within tolerance;
    when it is, ``sign_vector`` holds the rounded +-1 vector whose arc
    lift T^T sign_vector / sqrt(nk) is the unit flat target.
    """

    vector: np.ndarray
    flat: bool
    deviation: float
    sign_vector: np.ndarray | None


def flat_target_profile(
    dec: SpectralDecomposition,
    a: int,
    signs: SignPattern,
    tau_flat: float = TAU_FLAT,
) -> ColumnTarget:
    """Evaluate the signed idempotent combination at vertex a and test
    flatness of sqrt(n) v against +-1 entries."""
    if len(signs.sigmas) != dec.num_classes - 1:
        raise ValueError(
            f"pattern has {len(signs.sigmas)} sigma bits, "
            f"decomposition has {dec.num_classes - 1} non-valency classes"
        )
    if not 0 <= a < dec.n:
        raise ValueError(f"vertex {a} out of range [0, {dec.n})")
    coeffs = signs.signs()
    v = np.zeros(dec.n)
    for r, E in enumerate(dec.idempotents):
        v = v + coeffs[r] * E[:, a]
    scaled = np.sqrt(dec.n) * v
    deviation = float(np.abs(np.abs(scaled) - 1.0).max())
    flat = deviation <= tau_flat
    sign_vector = None
    if flat:
        sign_vector = np.where(scaled >= 0, 1, -1).astype(np.int64)
        sign_vector.setflags(write=False)
    v.setflags(write=False)
    return ColumnTarget(vector=v, flat=flat, deviation=deviation, sign_vector=sign_vector)


@dataclass(frozen=True, eq=False)
class CospectralityWitness:
    """Accepted adjacency-level witness.

    ``deltas`` maps each non-valency class index to its phase, or None
    when the class is outside the support of a (unconstrained there).
    ``residuals`` records the worst deviation per checked equation.
    """

    sign_e0: int
    deltas: dict[int, float | None]
    residuals: dict[str, float]


@dataclass(frozen=True, eq=False)
class DirectWitness:
    """Accepted walk-level witness: one phase per walk projection with
    F x nonzero, None where both F x and F y vanish."""

    phases: dict[str, float | None]
    max_residual: float


def _projected_ratio(E_col: np.ndarray, vec: np.ndarray) -> complex:
    """Least-squares coefficient c with vec ~ c * E_col."""
    denom = float(E_col @ E_col)
    return complex(np.vdot(E_col, vec)) / denom


def check_strong_cospectrality(
    dec: SpectralDecomposition,
    arc_space: ArcSpace,
    a: int,
    y: State,
    tau: float = TAU_COSP,
):
    """Adjacency-level strong cospectrality check of (x_a, y).

    Returns a :class:`CospectralityWitness` when every equation holds
    within ``tau``, the string ``"not cospectral"`` otherwise. Bipartite
    graphs are rejected with ValueError since the head equation for the
    -k class degenerates there.
    """
    if dec.has_minus_k:
        raise ValueError("adjacency-level check is restricted to non-bipartite graphs")
    if not 0 <= a < dec.n:
        raise ValueError(f"vertex {a} out of range [0, {dec.n})")
    if len(y) != arc_space.num_arcs:
        raise ValueError("target state lives on the wrong number of arcs")
    sqrt_k = np.sqrt(dec.k)
    Ty = arc_space.tail_incidence @ y.amplitudes
    Hy = arc_space.head_incidence @ y.amplitudes
    support = set(eigenvalue_support(dec, a))
    residuals: dict[str, float] = {}

    # valency class: sqrt(k) E_0 e_a = +- E_0 T y = +- E_0 H y, same sign
    e0_col = dec.idempotents[0][:, a]
    ratio = _projected_ratio(e0_col, Ty) / sqrt_k
    if abs(ratio.imag) > tau or abs(abs(ratio.real) - 1.0) > tau:
        return NOT_COSPECTRAL
    sign_e0 = 1 if ratio.real > 0 else -1
    res_tail = float(np.linalg.norm(dec.idempotents[0] @ Ty - sign_e0 * sqrt_k * e0_col))
    res_head = float(np.linalg.norm(dec.idempotents[0] @ Hy - sign_e0 * sqrt_k * e0_col))
    residuals["class0"] = max(res_tail, res_head)
    if residuals["class0"] > tau:
        return NOT_COSPECTRAL

    deltas: dict[int, float | None] = {}
    for r in range(1, dec.num_classes):
        E = dec.idempotents[r]
        proj_tail = E @ Ty
        proj_head = E @ Hy
        if r not in support:
            # no constraint on delta_r, but the class must annihilate the
            # target's incidence images as it does e_a
            off = max(float(np.linalg.norm(proj_tail)), float(np.linalg.norm(proj_head)))
            residuals[f"class{r}"] = off
            if off > tau:
                return NOT_COSPECTRAL
            deltas[r] = None
            continue

        E_col = E[:, a]
        theta = float(dec.angles[r])
        ct = _projected_ratio(E_col, proj_tail) / sqrt_k
        ch = _projected_ratio(E_col, proj_head) / sqrt_k
        if abs(ct.imag) > tau or abs(ch.imag) > tau:
            return NOT_COSPECTRAL
        cos_tail, cos_head = ct.real, ch.real
        if abs(cos_tail) > 1.0 + tau or abs(cos_head) > 1.0 + tau:
            return NOT_COSPECTRAL
        res_tail = float(np.linalg.norm(proj_tail - sqrt_k * cos_tail * E_col))
        res_head = float(np.linalg.norm(proj_head - sqrt_k * cos_head * E_col))
        if max(res_tail, res_head) > tau:
            return NOT_COSPECTRAL

        base = float(np.arccos(np.clip(cos_tail, -1.0, 1.0)))
        if abs(np.sin(base)) < SIN_SNAP:
            # sign of delta unobservable here; snap to 0 or pi
            delta = 0.0 if cos_tail > 0 else np.pi
        else:
            # head equation disambiguates the sign of delta
            err_plus = abs(np.cos(base + theta) - cos_head)
            err_minus = abs(np.cos(-base + theta) - cos_head)
            delta = base if err_plus <= err_minus else -base
        head_err = abs(np.cos(delta + theta) - cos_head)
        residuals[f"class{r}"] = max(res_tail, res_head, head_err)
        if head_err > tau:
            return NOT_COSPECTRAL
        deltas[r] = delta

    return CospectralityWitness(sign_e0=sign_e0, deltas=deltas, residuals=residuals)


def check_strong_cospectrality_direct(
    ws: WalkSpectrum,
    x: State,
    y: State,
    tau: float = TAU_COSP,
):
    """Walk-level strong cospectrality: F x = e^{i delta} F y for every
    walk projection F.

    Returns a :class:`DirectWitness` or ``"not cospectral"``. Projections
    annihilating both states are unconstrained; a projection annihilating
    exactly one of them is a rejection.
    """
    if len(x) != ws.num_arcs or len(y) != ws.num_arcs:
        raise ValueError("states live on the wrong number of arcs")
    labels_and_projs: list[tuple[str, np.ndarray]] = [
        ("plus1", ws.proj_plus1),
        ("minus1", ws.proj_minus1),
    ]
    for pair in ws.pairs:
        labels_and_projs.append((f"pair{pair.index}+", pair.plus))
        labels_and_projs.append((f"pair{pair.index}-", pair.minus))

    phases: dict[str, float | None] = {}
    worst = 0.0
    for label, P in labels_and_projs:
        Px = P @ x.amplitudes
        Py = P @ y.amplitudes
        nx = float(np.linalg.norm(Px))
        ny = float(np.linalg.norm(Py))
        if nx <= tau and ny <= tau:
            phases[label] = None
            continue
        if min(nx, ny) <= tau < max(nx, ny):
            return NOT_COSPECTRAL
        inner = complex(np.vdot(Py, Px))
        if abs(inner) == 0.0:
            return NOT_COSPECTRAL
        phase = inner / abs(inner)
        res = float(np.linalg.norm(Px - phase * Py))
        worst = max(worst, res)
        if res > tau:
            return NOT_COSPECTRAL
        phases[label] = float(np.angle(phase))
    return DirectWitness(phases=phases, max_residual=worst)
