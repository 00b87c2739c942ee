"""Arc space, transition operator, and spectral evolution of the walk.

The walk lives on the nk arcs (ordered vertex pairs along edges) of a
connected k-regular graph. One step applies the Grover coin at each
vertex followed by arc reversal:

    U = R (2/k * T^T T - I)

where T is the n x nk tail incidence matrix and R the reversal
permutation. U decomposes into eigenprojections derived from the
adjacency idempotents: a projection for eigenvalue +1, one for -1
(nonzero on bipartite graphs and on cycles of the reversal structure),
and a conjugate pair for each adjacency angle theta in (0, pi) with
walk eigenvalues e^{+-i theta}.

Real powers U^t are taken with the principal branch, e^{i t theta} per
projection, so (-1)^t means e^{i pi t}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .spectra import SpectralDecomposition

#: tolerance for the walk projection suite and spectral resolution of U
TAU_WALK = 1e-9
#: unit-norm tolerance enforced by State
STATE_NORM_TOL = 1e-12


class WalkSpectrumError(ValueError):
    """Walk projections failed verification; carries residual diagnostics."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


@dataclass(frozen=True, eq=False)
class ArcSpace:
    """Indexed arcs of a regular graph with incidence and reversal operators.

    Arcs are ordered lexicographically by (tail, head). ``tail_incidence``
    and ``head_incidence`` are n x nk 0/1 matrices; ``reversal`` is the
    nk x nk permutation matrix swapping (u, v) with (v, u).
    """

    n: int
    k: int
    arcs: tuple[tuple[int, int], ...]
    tail_incidence: np.ndarray
    head_incidence: np.ndarray
    reversal: np.ndarray
    reversal_perm: np.ndarray

    @property
    def num_arcs(self) -> int:
        return len(self.arcs)

    def arc_index(self, u: int, v: int) -> int:
        """Position of arc (u, v); raises KeyError for a non-arc."""
        idx = self._index.get((u, v))
        if idx is None:
            raise KeyError(f"({u}, {v}) is not an arc of the graph")
        return idx

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {arc: i for i, arc in enumerate(self.arcs)}
        )


def build_arc_space(g: Graph) -> ArcSpace:
    """Enumerate arcs of a regular graph and build the incidence operators.

    The exact identities T T^T = H H^T = kI, T H^T = A, R^2 = I, and
    R T^T = H^T (arc reversal swaps tails with heads) are asserted in
    integer arithmetic before returning.
    """
    if g.degree is None:
        raise ValueError("arc space requires a regular graph")
    if g.degree < 1:
        raise ValueError("arc space requires valency at least 1")
    n, k = g.n, g.degree
    arcs = [
        (u, int(v)) for u in range(n) for v in np.flatnonzero(g.adjacency[u])
    ]
    m = len(arcs)

    tails = np.zeros((n, m), dtype=np.int64)
    heads = np.zeros((n, m), dtype=np.int64)
    index = {arc: i for i, arc in enumerate(arcs)}
    perm = np.zeros(m, dtype=np.int64)
    for i, (u, v) in enumerate(arcs):
        tails[u, i] = 1
        heads[v, i] = 1
        perm[i] = index[(v, u)]
    reversal = np.zeros((m, m), dtype=np.int64)
    reversal[perm, np.arange(m)] = 1

    eye = np.eye(m, dtype=np.int64)
    checks = {
        "tail gram": np.array_equal(tails @ tails.T, k * np.eye(n, dtype=np.int64)),
        "head gram": np.array_equal(heads @ heads.T, k * np.eye(n, dtype=np.int64)),
        "tail-head product": np.array_equal(tails @ heads.T, g.adjacency),
        "reversal involution": np.array_equal(reversal @ reversal, eye),
        "reversal swaps incidence": np.array_equal(reversal @ tails.T, heads.T),
    }
    bad = [name for name, ok in checks.items() if not ok]
    if bad:
        raise RuntimeError(f"arc space identities failed: {', '.join(bad)}")

    tails.setflags(write=False)
    heads.setflags(write=False)
    reversal.setflags(write=False)
    perm.setflags(write=False)
    return ArcSpace(
        n=n,
        k=k,
        arcs=tuple(arcs),
        tail_incidence=tails,
        head_incidence=heads,
        reversal=reversal,
        reversal_perm=perm,
    )


def transition_matrix(arc_space: ArcSpace) -> np.ndarray:
    """One-step walk operator U = R (2/k * T^T T - I), real orthogonal."""
    T = arc_space.tail_incidence.astype(float)
    coin = (2.0 / arc_space.k) * (T.T @ T) - np.eye(arc_space.num_arcs)
    return arc_space.reversal.astype(float) @ coin


@dataclass(frozen=True, eq=False)
class EigenphasePair:
    """Conjugate projection pair for walk eigenvalues e^{+-i theta}.

    ``index`` is the position of the source eigenvalue class in the
    adjacency decomposition.
    """

    index: int
    theta: float
    plus: np.ndarray
    minus: np.ndarray


@dataclass(frozen=True, eq=False)
class WalkSpectrum:
    """Spectral projections of U: the +-1 projections and one conjugate
    pair per adjacency angle in (0, pi)."""

    proj_plus1: np.ndarray
    proj_minus1: np.ndarray
    pairs: tuple[EigenphasePair, ...]

    @property
    def num_arcs(self) -> int:
        return self.proj_plus1.shape[0]


def walk_spectrum_residuals(
    dec: SpectralDecomposition,
    arc_space: ArcSpace,
    ws: WalkSpectrum,
    U: np.ndarray | None = None,
    bipartite: bool | None = None,
) -> dict[str, float]:
    """Max-norm residuals of the walk projection suite.

    Covers hermiticity, idempotency, pairwise orthogonality, completeness,
    spectral resolution of U, and the tail-incidence correspondence
    T F_{+-theta} T^T = (k/2) E_r, T F_{+1} T^T = k E_0, and on bipartite
    graphs T F_{-1} T^T = k E_{-k}.
    """
    if U is None:
        U = transition_matrix(arc_space)
    if bipartite is None:
        bipartite = dec.has_minus_k
    m = arc_space.num_arcs
    k = arc_space.k
    T = arc_space.tail_incidence.astype(float)

    projections = [ws.proj_plus1, ws.proj_minus1]
    projections.extend(p for pair in ws.pairs for p in (pair.plus, pair.minus))

    herm = max(float(np.abs(P - P.conj().T).max()) for P in projections)
    idem = max(float(np.abs(P @ P - P).max()) for P in projections)
    orth = 0.0
    for i, P in enumerate(projections):
        for Q in projections[i + 1 :]:
            orth = max(orth, float(np.abs(P @ Q).max()))
    total = sum(projections)
    completeness = float(np.abs(total - np.eye(m)).max())

    recon = ws.proj_plus1.astype(complex) - ws.proj_minus1
    for pair in ws.pairs:
        recon = recon + np.exp(1j * pair.theta) * pair.plus
        recon = recon + np.exp(-1j * pair.theta) * pair.minus
    resolution = float(np.abs(recon - U).max())

    correspondence = float(
        np.abs(T @ ws.proj_plus1 @ T.T - k * dec.idempotents[0]).max()
    )
    for pair in ws.pairs:
        E = dec.idempotents[pair.index]
        for P in (pair.plus, pair.minus):
            correspondence = max(
                correspondence, float(np.abs(T @ P @ T.T - (k / 2.0) * E).max())
            )

    residuals = {
        "hermiticity": herm,
        "idempotency": idem,
        "orthogonality": orth,
        "completeness": completeness,
        "resolution": resolution,
        "correspondence": correspondence,
    }
    if bipartite:
        residuals["minus_one_correspondence"] = float(
            np.abs(T @ ws.proj_minus1 @ T.T - k * dec.idempotents[-1]).max()
        )
    return residuals


def walk_spectrum(
    dec: SpectralDecomposition,
    arc_space: ArcSpace,
    verify: bool = True,
    tau: float = TAU_WALK,
) -> WalkSpectrum:
    """Build the walk projections from the adjacency decomposition.

    For each adjacency angle theta in (0, pi) with idempotent E,

        F_{+theta} = (T - e^{+i theta} H)^T E (T - e^{-i theta} H)
                     / (2 k sin^2 theta)

    and F_{-theta} is its conjugate. The +-1 projections are recovered by
    splitting the residual complement P = I - sum(F_{+theta} + F_{-theta})
    into F_{+1} = (P + UP)/2 and F_{-1} = (P - UP)/2; this captures both
    the lifts of the +-k adjacency classes and the kernel components of
    the incidence maps.
    """
    k = arc_space.k
    T = arc_space.tail_incidence.astype(float)
    H = arc_space.head_incidence.astype(float)
    m = arc_space.num_arcs

    pairs = []
    for r in range(1, dec.num_classes):
        theta = float(dec.angles[r])
        if dec.has_minus_k and r == dec.num_classes - 1:
            continue
        E = dec.idempotents[r]
        phase = np.exp(1j * theta)
        left = T.T - phase * H.T
        right = T - np.conj(phase) * H
        plus = (left @ E @ right) / (2.0 * k * np.sin(theta) ** 2)
        minus = plus.conj()
        plus.setflags(write=False)
        minus.setflags(write=False)
        pairs.append(EigenphasePair(index=r, theta=theta, plus=plus, minus=minus))

    U = transition_matrix(arc_space)
    residual = np.eye(m, dtype=complex)
    for pair in pairs:
        residual = residual - pair.plus - pair.minus
    plus1 = (residual + U @ residual) / 2.0
    minus1 = residual - plus1
    plus1.setflags(write=False)
    minus1.setflags(write=False)

    ws = WalkSpectrum(proj_plus1=plus1, proj_minus1=minus1, pairs=tuple(pairs))
    if verify:
        residuals = walk_spectrum_residuals(dec, arc_space, ws, U=U)
        bad = {name: val for name, val in residuals.items() if val > tau}
        if bad:
            raise WalkSpectrumError(
                "walk projection suite failed: "
                + ", ".join(f"{name}={val:.3e}" for name, val in bad.items()),
                residuals,
            )
    return ws


@dataclass(frozen=True, eq=False)
class State:
    """Unit vector over arcs, stored as a read-only complex array."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1:
            raise ValueError(f"state must be a vector, got shape {amp.shape}")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {STATE_NORM_TOL}")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    def __len__(self) -> int:
        return len(self.amplitudes)


def initial_state(arc_space: ArcSpace, a: int) -> State:
    """Uniform superposition over the arcs leaving vertex a."""
    if not 0 <= a < arc_space.n:
        raise ValueError(f"vertex {a} out of range [0, {arc_space.n})")
    amp = arc_space.tail_incidence[a].astype(complex) / np.sqrt(arc_space.k)
    return State(amp)


def flat_arc_state(arc_space: ArcSpace, w: np.ndarray) -> State:
    """Lift a +-1 vertex vector w to the flat arc state T^T w / sqrt(nk)."""
    w = np.asarray(w)
    if w.shape != (arc_space.n,):
        raise ValueError(f"sign vector must have shape ({arc_space.n},)")
    if not np.isin(w, (-1, 1)).all():
        raise ValueError("sign vector entries must be +1 or -1")
    amp = arc_space.tail_incidence.T.astype(complex) @ w.astype(complex)
    return State(amp / np.sqrt(arc_space.n * arc_space.k))


def _minus_one_power(t: float) -> complex:
    # exact +-1 at integer times, principal branch e^{i pi t} otherwise
    if float(t) == int(t):
        return complex((-1.0) ** (int(t) % 2))
    return np.exp(1j * np.pi * t)


def evolve(ws: WalkSpectrum, x: State, t: float) -> State:
    """Apply U^t through the spectral projections (principal branch)."""
    amp = x.amplitudes
    out = ws.proj_plus1 @ amp + _minus_one_power(t) * (ws.proj_minus1 @ amp)
    for pair in ws.pairs:
        out = out + np.exp(1j * pair.theta * t) * (pair.plus @ amp)
        out = out + np.exp(-1j * pair.theta * t) * (pair.minus @ amp)
    return State(out)


def evolve_operator(ws: WalkSpectrum, M: np.ndarray, t: float) -> np.ndarray:
    """Apply U^t to each column of a matrix, same branch as :func:`evolve`."""
    M = np.asarray(M, dtype=complex)
    out = ws.proj_plus1 @ M + _minus_one_power(t) * (ws.proj_minus1 @ M)
    for pair in ws.pairs:
        out = out + np.exp(1j * pair.theta * t) * (pair.plus @ M)
        out = out + np.exp(-1j * pair.theta * t) * (pair.minus @ M)
    return out


def entry_formula(
    dec: SpectralDecomposition, arc_space: ArcSpace, a: int, t: float
) -> State:
    """Closed form for U^t x_a from adjacency idempotents alone.

    The amplitude on arc (u, v) is

        1/sqrt(k) * ( sum_{theta_r in (0, pi)} [ sin(t theta_r) (E_r)_{va}
                      - sin((t-1) theta_r) (E_r)_{ua} ] / sin(theta_r)
                      + (E_0)_{ua} + (-1)^t (E_{-k})_{ua} )

    with the bipartite term present only when -k is an eigenvalue. Real t
    uses the principal branch, matching :func:`evolve`.
    """
    if not 0 <= a < dec.n:
        raise ValueError(f"vertex {a} out of range [0, {dec.n})")
    k = arc_space.k
    tail_part = dec.idempotents[0][:, a].astype(complex)
    if dec.has_minus_k:
        tail_part = tail_part + _minus_one_power(t) * dec.idempotents[-1][:, a]
    head_part = np.zeros(dec.n, dtype=complex)
    for r in range(1, dec.num_classes):
        if dec.has_minus_k and r == dec.num_classes - 1:
            continue
        theta = dec.angles[r]
        column = dec.idempotents[r][:, a]
        head_part = head_part + (np.sin(t * theta) / np.sin(theta)) * column
        tail_part = tail_part - (np.sin((t - 1) * theta) / np.sin(theta)) * column
    amp = (
        arc_space.tail_incidence.T @ tail_part
        + arc_space.head_incidence.T @ head_part
    ) / np.sqrt(k)
    return State(amp)


def arc_distribution(x: State) -> np.ndarray:
    """Probability vector |amplitude|^2 over arcs."""
    return np.abs(x.amplitudes) ** 2


def flatness_deficit(x: State) -> float:
    """Max deviation of |amplitude| from the uniform value 1/sqrt(num arcs)."""
    target = 1.0 / np.sqrt(len(x))
    return float(np.abs(np.abs(x.amplitudes) - target).max())


def realness_deficit(x: State) -> float:
    """Max |imaginary part| over arcs."""
    return float(np.abs(x.amplitudes.imag).max())


def imaginary_flatness_deficit(
    g: Graph, arc_space: ArcSpace, x: State, a: int, t: float
) -> float:
    """Deviation of Im(x) from the bipartite prediction.

    On a connected bipartite k-regular graph the imaginary part of
    U^t x_a is constant in modulus: the arc (u, v) carries
    sin(pi t) chi_u chi_a / (n sqrt(k)) where chi is the +-1 color class.
    Returns the max absolute deviation from that profile.
    """
    if not g.is_bipartite or g.color_class is None:
        raise ValueError("imaginary flatness profile requires a bipartite graph")
    chi = g.color_class
    tails = np.array([arc[0] for arc in arc_space.arcs])
    predicted = np.sin(np.pi * t) * chi[tails] * chi[a] / (g.n * np.sqrt(arc_space.k))
    return float(np.abs(x.amplitudes.imag - predicted).max())


def state_to_json(x: State) -> list[list[float]]:
    """Serialize amplitudes as [re, im] pairs in arc order."""
    return [[float(z.real), float(z.imag)] for z in x.amplitudes]


def state_from_json(data) -> State:
    """Inverse of :func:`state_to_json`."""
    amp = np.array([complex(re, im) for re, im in data])
    return State(amp)
