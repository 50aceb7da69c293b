"""Projective direct sum of two channels weighted by a two-outcome POVM.

For channels ``phi0, phi1`` with a common input, a POVM ``{P0, P1}`` and a
state ``sigma`` on the measured space, the direct sum sends

    rho -> w0 phi0(rho) (x) |0><0| + w1 phi1(rho) (x) |1><1|,   w_j = Tr(P_j sigma),

i.e. the output is the common output space tensored with a flag qubit. Its
Kraus operators are ``C_ij = sqrt(w_j) K_{j,i} (x) |j>``, listed with the
Kraus index ``i`` major and the flag ``j`` minor. That puts the environment
in the order ``E (x) flag``, which is exactly the output order of the direct
sum of the complements, so the complement identity holds as an equality of
Choi matrices and not only up to a relabeling of the environment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linmath as lm
from .capacity import (
    DEFAULT_RESTARTS,
    coherent_information,
    maximize_over_states,
    one_shot_capacity,
    weighted_objective,
)
from .channels import (
    KrausChannel,
    choi_distance,
    complement,
    pad_kraus,
    pad_output,
)
from .errors import DimensionMismatch, InvalidPovm

POVM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Povm:
    elements: tuple = field(repr=False)

    def __post_init__(self):
        els = tuple(lm.as_matrix(e) for e in self.elements)
        if not els:
            raise InvalidPovm("a POVM needs at least one element")
        d = els[0].shape[0]
        for k, e in enumerate(els):
            if e.shape != (d, d):
                raise InvalidPovm(f"element {k} has shape {e.shape}, expected {(d, d)}")
            if not lm.is_psd(e, POVM_TOL):
                raise InvalidPovm(f"element {k} is not Hermitian positive semidefinite")
        if np.max(np.abs(sum(els) - np.eye(d))) > POVM_TOL:
            raise InvalidPovm("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def probabilities(self, sigma) -> np.ndarray:
        sigma = lm.as_matrix(sigma)
        if sigma.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"state of dim {sigma.shape[0]} for POVM on dim {self.dim}")
        return np.array([np.trace(e @ sigma).real for e in self.elements])

    def is_projective(self, tol: float = 1e-8) -> bool:
        return all(np.max(np.abs(e @ e - e)) <= tol for e in self.elements)


def two_outcome(p0) -> Povm:
    p0 = lm.as_matrix(p0)
    return Povm((p0, np.eye(p0.shape[0]) - p0))


def weights_from(povm: Povm, sigma) -> tuple[float, float]:
    if len(povm) != 2:
        raise InvalidPovm(f"direct sum needs a two-outcome POVM, got {len(povm)} elements")
    sigma = lm.check_density(sigma, 1e-9)
    w = np.clip(povm.probabilities(sigma), 0.0, None)
    w = w / w.sum()
    return float(w[0]), float(w[1])


@dataclass(frozen=True, eq=False)
class ProjectiveDirectSum:
    """The data defining a direct sum; ``channel`` realizes it as a KrausChannel.

    Branch channels are stored after padding to a common output dimension and
    a common Kraus count; ``padded_from`` keeps the original (dim_out, num_kraus)
    of each branch.
    """

    phi0: KrausChannel
    phi1: KrausChannel
    povm: Povm
    sigma: np.ndarray = field(repr=False)
    weights: tuple = ()
    padded_from: tuple = ()

    @classmethod
    def create(cls, phi0: KrausChannel, phi1: KrausChannel, povm: Povm, sigma) -> "ProjectiveDirectSum":
        if phi0.dim_in != phi1.dim_in:
            raise DimensionMismatch(f"branch inputs differ: {phi0.dim_in} vs {phi1.dim_in}")
        weights = weights_from(povm, sigma)
        d = max(phi0.dim_out, phi1.dim_out)
        r = max(phi0.num_kraus, phi1.num_kraus)
        original = ((phi0.dim_out, phi0.num_kraus), (phi1.dim_out, phi1.num_kraus))
        p0 = pad_kraus(pad_output(phi0, d), r)
        p1 = pad_kraus(pad_output(phi1, d), r)
        return cls(p0, p1, povm, lm.as_matrix(sigma), weights, original)

    def with_sigma(self, sigma) -> "ProjectiveDirectSum":
        return ProjectiveDirectSum(self.phi0, self.phi1, self.povm, lm.as_matrix(sigma),
                                   weights_from(self.povm, sigma), self.padded_from)

    @property
    def channel(self) -> KrausChannel:
        return realize(self.phi0, self.phi1, self.weights)


def realize(phi0: KrausChannel, phi1: KrausChannel, weights) -> KrausChannel:
    """Kraus channel of the direct sum for already-padded branches and given weights."""
    flags = (lm.ket(0, 2), lm.ket(1, 2))
    branches = (phi0, phi1)
    ops = []
    for i in range(phi0.num_kraus):
        for j in (0, 1):
            ops.append(np.sqrt(weights[j]) * np.kron(branches[j].kraus[i], flags[j]))
    return KrausChannel(phi0.dim_in, 2 * phi0.dim_out, tuple(ops))


def build(phi0: KrausChannel, phi1: KrausChannel, povm: Povm, sigma) -> KrausChannel:
    """Realize ``phi0 (+)_{P0,P1} phi1`` at ``sigma`` as a channel onto (output (x) flag)."""
    return ProjectiveDirectSum.create(phi0, phi1, povm, sigma).channel


def build_weighted(phi0: KrausChannel, phi1: KrausChannel, w0: float) -> KrausChannel:
    """Direct sum with weights (w0, 1 - w0), using the trivial POVM {w0 I, (1 - w0) I}."""
    ds = ProjectiveDirectSum.create(phi0, phi1, two_outcome(w0 * np.eye(1)), np.eye(1))
    return ds.channel


def complement_identity_check(ds: ProjectiveDirectSum, tol: float = 1e-9) -> tuple[float, bool]:
    """Choi distance between complement(direct sum) and the direct sum of complements."""
    lhs = complement(ds.channel)
    rhs = realize(complement(ds.phi0), complement(ds.phi1), ds.weights)
    dist = choi_distance(lhs, rhs)
    return dist, dist <= tol


def additivity_formula_check(
    ds: ProjectiveDirectSum, restarts: int = 32, tol: float = 2e-3, seed=0, workers: int = 1
) -> tuple[float, float, bool]:
    """Compare Q1 of the direct sum with max_rho w0 I_c(phi0, rho) + w1 I_c(phi1, rho).

    Both maximizations use the same restart seeds.
    """
    lhs = one_shot_capacity(ds.channel, restarts=restarts, seed=seed, workers=workers).value
    w0, w1 = ds.weights
    terms = [(w0, ds.phi0), (w1, ds.phi1)]
    rhs, _, _ = maximize_over_states(
        weighted_objective(terms), ds.phi0.dim_in, restarts, seed, workers=workers,
        evaluate=lambda rho: sum(w * coherent_information(ch, rho) for w, ch in terms if w > 0),
    )
    return lhs, rhs, abs(lhs - rhs) <= tol


def capacity_bound_check(
    ds: ProjectiveDirectSum, branch_capacities: tuple[float, float] | None = None,
    restarts: int = DEFAULT_RESTARTS, seed=0,
) -> bool:
    """Check Q1(direct sum) <= w0 Q1(phi0) + w1 Q1(phi1) + 1e-6.

    Branch capacities default to optimizer estimates; pass known values for
    amplitude damping branches to check against the exact bound.
    """
    if branch_capacities is None:
        branch_capacities = tuple(
            one_shot_capacity(ch, restarts=restarts, seed=seed).value for ch in (ds.phi0, ds.phi1)
        )
    value = one_shot_capacity(ds.channel, restarts=restarts, seed=seed).value
    w0, w1 = ds.weights
    return value <= w0 * branch_capacities[0] + w1 * branch_capacities[1] + 1e-6
