"""Graphs, their associated classical-quantum channels, and certificates for the
maximal-entanglement-assisted one-shot zero-error capacity.

Pipeline: graph -> confusability matrix A (1 on the diagonal and on edges)
-> alpha = |min eig A| -> unit vectors with Gram matrix (alpha I + A)/(1 + alpha)
-> c-q channel |v><v| -> |psi_v><psi_v|.

A perfect strategy for the t-question independent set game, given as PVM
families {P^i_v}, turns into q-c encoders, and the encoded halves of a
maximally entangled state are pairwise orthogonal after the channel. That
certifies ``C >= log2 t``. The classical independence number supplies such a
strategy for free, so ``log2 alpha(G)`` is always a certified lower bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag

from . import linmath as lm
from .channels import KrausChannel, apply_adjoint, choi, compose, dephasing
from .errors import DimensionMismatch, FormatError, SizeCap

MAX_EXACT_VERTICES = 40
MAX_BRUTE_FORCE_VERTICES = 20
MAX_CERT_DIM = 8
PVM_TOL = 1e-8
CERT_TOL = 1e-8


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise FormatError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FormatError(f"edge ({u}, {v}) out of range for {self.n} vertices")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def confusable(self, u: int, v: int) -> bool:
        return u == v or self.adjacent(u, v)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def neighbor_masks(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def is_independent(self, vertices) -> bool:
        return not any(self.adjacent(u, v) for u, v in itertools.combinations(vertices, 2))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(k, (k + 1) % n) for k in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def petersen_graph() -> Graph:
    outer = [(k, (k + 1) % 5) for k in range(5)]
    spokes = [(k, k + 5) for k in range(5)]
    inner = [(5 + k, 5 + (k + 2) % 5) for k in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


# -- file formats -----------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse DIMACS (``p edge n m`` / ``e u v``, 1-indexed) or an edge list
    (``n m`` header then ``u v`` lines, 0-indexed). The format is detected
    from the presence of a ``p`` line."""
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln[0].startswith(("#", "c"))]
    if not lines:
        raise FormatError("empty graph file")
    try:
        if any(ln[0] == "p" for ln in lines):
            return _parse_dimacs(lines)
        return _parse_edge_list(lines)
    except (ValueError, IndexError) as exc:
        raise FormatError(f"malformed graph file: {exc}") from None


def _parse_dimacs(lines) -> Graph:
    header = [ln for ln in lines if ln[0] == "p"]
    if len(header) != 1 or len(header[0]) != 4:
        raise FormatError("DIMACS file needs exactly one 'p edge n m' line")
    n, m = int(header[0][2]), int(header[0][3])
    edges = []
    for ln in lines:
        if ln[0] == "e":
            edges.append((int(ln[1]) - 1, int(ln[2]) - 1))
        elif ln[0] != "p":
            raise FormatError(f"unexpected DIMACS line {' '.join(ln)!r}")
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def _parse_edge_list(lines) -> Graph:
    n, m = int(lines[0][0]), int(lines[0][1])
    edges = [(int(ln[0]), int(ln[1])) for ln in lines[1:]]
    if len(edges) != m:
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    rows = [f"{g.n} {len(g.edges)}"] + [f"{u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(rows) + "\n"


def to_dimacs(g: Graph) -> str:
    rows = [f"p edge {g.n} {len(g.edges)}"] + [f"e {u + 1} {v + 1}" for u, v in sorted(g.edges)]
    return "\n".join(rows) + "\n"


# -- the Gram construction --------------------------------------------------------


def confusability_matrix(g: Graph) -> np.ndarray:
    return np.eye(g.n) + g.adjacency()


@dataclass(frozen=True, eq=False)
class GramSystem:
    """``vectors[:, v]`` is the unit vector assigned to vertex v."""

    alpha: float
    vectors: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return lm.dagger(self.vectors) @ self.vectors


def gram_system(g: Graph) -> GramSystem:
    """Factor alpha I + A = M^dagger M and normalize the columns of M by 1/sqrt(1 + alpha).

    alpha is |min eig A| even when that eigenvalue is positive (e.g. empty
    graphs); alpha I + A stays PSD either way.
    """
    a = confusability_matrix(g)
    w, u = lm.herm_eig(a)
    alpha = abs(float(w[-1]))
    shifted = w + alpha
    shifted[shifted < 1e-12 * max(1.0, alpha)] = 0.0  # round-off of the zero eigenvalue
    m = np.sqrt(shifted)[:, None] * lm.dagger(u)
    return GramSystem(alpha, m / np.sqrt(1.0 + alpha))


def cq_channel(gs: GramSystem) -> KrausChannel:
    """c-q channel |v><v| -> |psi_v><psi_v|, Kraus operators |psi_v><v|."""
    n = gs.n
    ops = tuple(gs.vectors[:, [v]] @ lm.ket(v, n).T for v in range(n))
    return KrausChannel(n, gs.vectors.shape[0], ops)


# -- classical independence number ------------------------------------------------


def independence_number(g: Graph) -> tuple[int, tuple]:
    """Exact alpha(G) with one maximum independent set, by bitset branch and bound.

    Searches for a maximum clique of the complement graph; candidate sets are
    bounded by a greedy coloring, and vertices are relabeled by descending
    complement degree first.
    """
    if g.n > MAX_EXACT_VERTICES:
        raise SizeCap(f"{g.n} vertices exceed the exact-search cap of {MAX_EXACT_VERTICES}")
    if g.n == 0:
        return 0, ()
    nbr = g.neighbor_masks()
    full = (1 << g.n) - 1
    comp = [full & ~nbr[v] & ~(1 << v) for v in range(g.n)]
    order = sorted(range(g.n), key=lambda v: (-bin(comp[v]).count("1"), v))
    pos = {v: k for k, v in enumerate(order)}
    # complement adjacency in the relabeled order
    cadj = [0] * g.n
    for v in range(g.n):
        m = comp[v]
        while m:
            low = m & -m
            cadj[pos[v]] |= 1 << pos[low.bit_length() - 1]
            m ^= low

    best = [[]]

    def color_sort(cand: int):
        verts, colors = [], []
        color, uncolored = 0, cand
        while uncolored:
            color += 1
            q = uncolored
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low & ~cadj[v]
                uncolored &= ~low
                verts.append(v)
                colors.append(color)
        return verts, colors

    def expand(clique: list, cand: int):
        verts, colors = color_sort(cand)
        for k in range(len(verts) - 1, -1, -1):
            if len(clique) + colors[k] <= len(best[0]):
                return
            v = verts[k]
            clique.append(v)
            new = cand & cadj[v]
            if new:
                expand(clique, new)
            elif len(clique) > len(best[0]):
                best[0] = clique.copy()
            clique.pop()
            cand &= ~(1 << v)

    expand([], full)
    witness = tuple(sorted(order[k] for k in best[0]))
    return len(witness), witness


def independence_number_bruteforce(g: Graph) -> int:
    """Exhaustive alpha(G) over all vertex subsets; the test oracle for small graphs."""
    if g.n > MAX_BRUTE_FORCE_VERTICES:
        raise SizeCap(f"brute force limited to {MAX_BRUTE_FORCE_VERTICES} vertices")
    nbr = g.neighbor_masks()
    best = 0
    for s in range(1 << g.n):
        size = bin(s).count("1")
        if size <= best:
            continue
        m, ok = s, True
        while m:
            low = m & -m
            if nbr[low.bit_length() - 1] & s:
                ok = False
                break
            m ^= low
        if ok:
            best = size
    return best


# -- strategies and certificates --------------------------------------------------


@dataclass(frozen=True, eq=False)
class PvmStrategy:
    """``pvms[i][v]`` is the projector for answering vertex v to question i."""

    t: int
    dim: int
    pvms: tuple = field(repr=False)

    def __post_init__(self):
        fams = tuple(tuple(lm.as_matrix(p) for p in fam) for fam in self.pvms)
        if len(fams) != self.t:
            raise DimensionMismatch(f"expected {self.t} measurement families, got {len(fams)}")
        if self.dim > 64:
            raise SizeCap("strategy dimension exceeds 64")
        sizes = {len(f) for f in fams}
        if len(sizes) > 1:
            raise DimensionMismatch("measurement families have different numbers of outcomes")
        for fam in fams:
            for p in fam:
                if p.shape != (self.dim, self.dim):
                    raise DimensionMismatch(f"projector of shape {p.shape}, expected dim {self.dim}")
        object.__setattr__(self, "pvms", fams)

    @property
    def n_answers(self) -> int:
        return len(self.pvms[0]) if self.pvms else 0


@dataclass(frozen=True)
class Violation:
    kind: str  # NonProjective | NonOrthogonal | Incomplete | Conflict
    i: int
    j: int
    v: int
    w: int
    norm: float


def classical_strategy(g: Graph, vertices) -> PvmStrategy:
    """One-dimensional strategy answering ``vertices[i]`` to question i."""
    pvms = tuple(
        tuple(np.array([[1.0 if v == a else 0.0]]) for v in range(g.n)) for a in vertices
    )
    return PvmStrategy(len(pvms), 1, pvms)


def block_diagonal(a: PvmStrategy, b: PvmStrategy) -> PvmStrategy:
    if a.t != b.t or a.n_answers != b.n_answers:
        raise DimensionMismatch("strategies must share question and answer sets")
    pvms = tuple(
        tuple(block_diag(pa, pb) for pa, pb in zip(fa, fb)) for fa, fb in zip(a.pvms, b.pvms)
    )
    return PvmStrategy(a.t, a.dim + b.dim, pvms)


def check_pvm_strategy(s: PvmStrategy, g: Graph, tol: float = PVM_TOL) -> tuple[bool, list]:
    """Check that ``s`` is a perfect strategy for the independent set game on ``g``.

    Every family must be a PVM, and for questions i < j the products
    P^i_v P^j_w must vanish (operator norm <= tol) whenever v = w or v ~ w.
    """
    if s.n_answers != g.n:
        raise DimensionMismatch(f"strategy answers {s.n_answers} vertices, graph has {g.n}")
    out = []
    eye = np.eye(s.dim)
    for i, fam in enumerate(s.pvms):
        for v, p in enumerate(fam):
            err = max(np.linalg.norm(p @ p - p, 2), np.linalg.norm(p - lm.dagger(p), 2))
            if err > tol:
                out.append(Violation("NonProjective", i, i, v, v, float(err)))
        for v, w in itertools.combinations(range(g.n), 2):
            nrm = np.linalg.norm(fam[v] @ fam[w], 2)
            if nrm > tol:
                out.append(Violation("NonOrthogonal", i, i, v, w, float(nrm)))
        err = np.linalg.norm(sum(fam) - eye, 2)
        if err > tol:
            out.append(Violation("Incomplete", i, i, -1, -1, float(err)))
    for i, j in itertools.combinations(range(s.t), 2):
        for v in range(g.n):
            for w in range(g.n):
                if g.confusable(v, w):
                    nrm = np.linalg.norm(s.pvms[i][v] @ s.pvms[j][w], 2)
                    if nrm > tol:
                        out.append(Violation("Conflict", i, j, v, w, float(nrm)))
    return not out, out


def qc_channel(povm) -> KrausChannel:
    """q-c channel rho -> sum_v Tr(P_v rho) |v><v|, Kraus operators |v><m| sqrt(P_v)."""
    povm = [lm.as_matrix(p) for p in povm]
    n, d = len(povm), povm[0].shape[0]
    ops = []
    for v, p in enumerate(povm):
        root = lm.psd_sqrt(p)
        for m in range(d):
            op = lm.ket(v, n) @ root[[m], :]
            if np.max(np.abs(op)) > 1e-15:
                ops.append(op)
    if not ops:
        ops.append(np.zeros((n, d)))
    return KrausChannel(d, n, tuple(ops))


def strategy_to_encoders(s: PvmStrategy) -> list[KrausChannel]:
    return [qc_channel(fam) for fam in s.pvms]


def povms_from_encoders(encoders, n: int) -> list[list[np.ndarray]]:
    """Recover P^i_v from encoder i as the adjoint of (dephasing o encoder) at |v><v|."""
    deph = dephasing(n)
    out = []
    for enc in encoders:
        qc = compose(deph, enc)
        out.append([lm.hermitize(apply_adjoint(qc, lm.projector(lm.ket(v, n)))) for v in range(n)])
    return out


def encoded_states(g: Graph, encoders, gs: GramSystem | None = None) -> list[np.ndarray]:
    """rho_i = (Phi_G o E_i (x) id)(|tau><tau|) for |tau> maximally entangled on dim (x) dim."""
    gs = gs or gram_system(g)
    phi = cq_channel(gs)
    # choi() puts the reference first; overlaps are unaffected by the factor order
    return [choi(compose(phi, enc)) for enc in encoders]


@dataclass(frozen=True)
class Certificate:
    max_overlap: float
    certified_t: int

    @property
    def lower_bound_bits(self) -> float:
        return float(np.log2(self.certified_t)) if self.certified_t > 0 else 0.0


def distinguishability_certificate(g: Graph, s: PvmStrategy, gs: GramSystem | None = None,
                                   tol: float = CERT_TOL) -> Certificate:
    """max_{i != j} Tr(rho_i rho_j) for the encoded states; certifies t messages if it is <= tol."""
    if s.dim > MAX_CERT_DIM:
        raise SizeCap(f"strategy dimension {s.dim} exceeds certificate cap {MAX_CERT_DIM}")
    states = encoded_states(g, strategy_to_encoders(s), gs)
    overlap = 0.0
    for a, b in itertools.combinations(states, 2):
        overlap = max(overlap, float(np.trace(a @ b).real))
    return Certificate(overlap, s.t if overlap <= tol else 1)


def extracted_conflict_norm(g: Graph, encoders) -> float:
    """Largest ||P^i_v P^j_w|| over confusable (v, w), i != j, for POVMs recovered from encoders."""
    povms = povms_from_encoders(encoders, g.n)
    worst = 0.0
    for i, j in itertools.permutations(range(len(povms)), 2):
        for v in range(g.n):
            for w in range(g.n):
                if g.confusable(v, w):
                    worst = max(worst, float(np.linalg.norm(povms[i][v] @ povms[j][w], 2)))
    return worst


@dataclass(frozen=True)
class CapacityBounds:
    lower_bits: float
    upper_bits: float
    independence_number: int
    witness: tuple
    certificate: Certificate


def capacity_bounds(g: Graph) -> CapacityBounds:
    """Certified (log2 alpha(G), log2 n) bracket on the assisted zero-error capacity of Phi_G.

    The lower end is backed by the classical strategy built from a maximum
    independent set, checked through the full encoder/channel pipeline; the
    upper end is the trivial bound alpha_q(G) <= n.
    """
    a, witness = independence_number(g)
    if a == 0:
        raise SizeCap("graph has no vertices")
    cert = distinguishability_certificate(g, classical_strategy(g, witness))
    return CapacityBounds(cert.lower_bound_bits, float(np.log2(g.n)), a, witness, cert)
