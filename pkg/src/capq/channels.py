"""Quantum channels as ordered Kraus families.

The order of the Kraus list is meaningful: it fixes the environment basis of
the Stinespring isometry ``V = sum_i K_i (x) |i>_E`` (output first, environment
second), and the complementary channel is read off from the same ``V``. Since
``complement`` just transposes the roles of the output and environment
indices, ``complement(complement(ch))`` returns ``ch``'s Kraus list unchanged.

Channel equality is Choi trace distance, never Kraus-list equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linmath as lm
from .errors import DimensionCap, DimensionMismatch, InvalidChannel, ParameterRange

TP_TOL = 1e-9
EQUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^dagger`` from C^dim_in to C^dim_out."""

    dim_in: int
    dim_out: int
    kraus: tuple = field(repr=False)

    def __post_init__(self):
        ops = []
        for k in self.kraus:
            k = np.array(k, dtype=complex)
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatch(
                    f"Kraus operator of shape {k.shape}, expected {(self.dim_out, self.dim_in)}"
                )
            k.setflags(write=False)
            ops.append(k)
        if not ops:
            raise InvalidChannel("a channel needs at least one Kraus operator")
        object.__setattr__(self, "kraus", tuple(ops))
        if self.tp_error() > TP_TOL:
            raise InvalidChannel(
                f"Kraus operators are not trace preserving (error {self.tp_error():.2e})"
            )

    @classmethod
    def unchecked(cls, dim_in: int, dim_out: int, kraus: Sequence) -> "KrausChannel":
        """Build without the trace-preservation check (used by validators on foreign input)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "dim_in", dim_in)
        object.__setattr__(obj, "dim_out", dim_out)
        object.__setattr__(obj, "kraus", tuple(np.asarray(k, dtype=complex) for k in kraus))
        return obj

    @property
    def num_kraus(self) -> int:
        return len(self.kraus)

    @cached_property
    def stack(self) -> np.ndarray:
        """Kraus operators as one array of shape (num_kraus, dim_out, dim_in)."""
        return np.stack(self.kraus)

    def tp_error(self) -> float:
        s = sum(lm.dagger(k) @ k for k in self.kraus)
        return float(np.max(np.abs(s - np.eye(self.dim_in))))

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def __repr__(self):
        return f"KrausChannel(dim_in={self.dim_in}, dim_out={self.dim_out}, num_kraus={self.num_kraus})"


def validate(ch: KrausChannel, tol: float = TP_TOL) -> dict:
    """Report trace preservation and complete positivity of ``ch``."""
    tp = ch.tp_error()
    j = choi(ch)
    min_eig = float(np.linalg.eigvalsh(lm.hermitize(j))[0])
    return {
        "trace_preserving": tp <= tol,
        "tp_error": tp,
        "completely_positive": min_eig >= -tol,
        "choi_min_eigenvalue": min_eig,
        "valid": tp <= tol and min_eig >= -tol,
    }


def apply(ch: KrausChannel, rho) -> np.ndarray:
    rho = lm.as_matrix(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"input of shape {rho.shape}, channel expects dim {ch.dim_in}")
    k = ch.stack
    return np.einsum("kij,jl,kml->im", k, rho, k.conj())


def apply_adjoint(ch: KrausChannel, x) -> np.ndarray:
    """Heisenberg-picture map ``X -> sum_i K_i^dagger X K_i``."""
    x = lm.as_matrix(x)
    if x.shape != (ch.dim_out, ch.dim_out):
        raise DimensionMismatch(f"operator of shape {x.shape}, channel output dim {ch.dim_out}")
    k = ch.stack
    return np.einsum("kji,jl,klm->im", k.conj(), x, k)


def choi(ch: KrausChannel) -> np.ndarray:
    """J = (id (x) ch)(|phi+><phi+|) on C^dim_in (x) C^dim_out, unit trace."""
    d = ch.dim_in
    phi = lm.max_entangled(d)
    # (I (x) K) |phi+> for every Kraus operator
    vecs = [np.kron(np.eye(d), k) @ phi for k in ch.kraus]
    return sum(v @ lm.dagger(v) for v in vecs)


def apply_via_choi(j: np.ndarray, dim_in: int, dim_out: int, rho) -> np.ndarray:
    """Recover ``ch(rho) = d Tr_in[(rho^T (x) I) J]`` from a Choi matrix."""
    rho = lm.as_matrix(rho)
    m = np.kron(rho.T, np.eye(dim_out)) @ j
    return dim_in * lm.partial_trace(m, [dim_in, dim_out], 1)


def choi_distance(a: KrausChannel, b: KrausChannel) -> float:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionMismatch(
            f"channels {a.dim_in}->{a.dim_out} and {b.dim_in}->{b.dim_out} are not comparable"
        )
    return lm.trace_distance(choi(a), choi(b))


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = EQUAL_TOL) -> bool:
    return choi_distance(a, b) <= tol


def stinespring(ch: KrausChannel) -> np.ndarray:
    """Isometry V: C^dim_in -> C^dim_out (x) C^num_kraus with (I (x) <i|) V = K_i."""
    r = ch.num_kraus
    # V[b * r + i, a] = K_i[b, a]
    return ch.stack.transpose(1, 0, 2).reshape(ch.dim_out * r, ch.dim_in)


def complement(ch: KrausChannel) -> KrausChannel:
    """Complementary channel rho -> Tr_out(V rho V^dagger), Kraus ops (<b| (x) I) V."""
    kc = ch.stack.transpose(1, 0, 2)  # kc[b][i, a] = K_i[b, a]
    return KrausChannel(ch.dim_in, ch.num_kraus, tuple(kc))


def compose(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """The channel ``a o b`` (apply ``b`` first). Kraus list ordered (i, j) for a_i b_j."""
    if a.dim_in != b.dim_out:
        raise DimensionMismatch(f"cannot compose: {b.dim_out} -> {a.dim_in}")
    ops = [ka @ kb for ka in a.kraus for kb in b.kraus]
    return KrausChannel(b.dim_in, a.dim_out, tuple(ops))


def tensor(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    din, dout = a.dim_in * b.dim_in, a.dim_out * b.dim_out
    if max(din, dout) > lm.MAX_DIM:
        raise DimensionCap(f"tensor product dimension {max(din, dout)} exceeds {lm.MAX_DIM}")
    ops = [np.kron(ka, kb) for ka in a.kraus for kb in b.kraus]
    return KrausChannel(din, dout, tuple(ops))


def tensor_power(ch: KrausChannel, n: int) -> KrausChannel:
    if n < 1:
        raise ParameterRange("tensor power needs n >= 1")
    if max(ch.dim_in, ch.dim_out) ** n > lm.MAX_DIM:
        raise DimensionCap(f"{n} copies exceed dimension {lm.MAX_DIM}")
    out = ch
    for _ in range(n - 1):
        out = tensor(out, ch)
    return out


def pad_kraus(ch: KrausChannel, r: int) -> KrausChannel:
    """Append zero Kraus operators up to ``r`` (enlarges the environment isometrically)."""
    if r < ch.num_kraus:
        raise DimensionMismatch(f"cannot pad {ch.num_kraus} Kraus operators down to {r}")
    zero = np.zeros((ch.dim_out, ch.dim_in), dtype=complex)
    return KrausChannel(ch.dim_in, ch.dim_out, ch.kraus + (zero,) * (r - ch.num_kraus))


def pad_output(ch: KrausChannel, d: int) -> KrausChannel:
    """Embed the output space in C^d via the first ``dim_out`` basis vectors."""
    if d < ch.dim_out:
        raise DimensionMismatch(f"cannot pad output dim {ch.dim_out} down to {d}")
    ops = tuple(np.vstack([k, np.zeros((d - ch.dim_out, ch.dim_in))]) for k in ch.kraus)
    return KrausChannel(ch.dim_in, d, ops)


# -- constructors -----------------------------------------------------------------


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d),))


def unitary_channel(u) -> KrausChannel:
    u = lm.as_matrix(u)
    return KrausChannel(u.shape[1], u.shape[0], (u,))


def trace_channel(d: int) -> KrausChannel:
    """C^d -> C, rho -> Tr(rho)."""
    return KrausChannel(d, 1, tuple(lm.ket(a, d).T for a in range(d)))


def replacement_channel(d_in: int, state) -> KrausChannel:
    """Discard the input and prepare ``state``."""
    state = lm.check_density(state)
    w, u = np.linalg.eigh(state)
    ops = []
    for lam, vec in zip(w, u.T):
        if lam > 1e-14:
            for a in range(d_in):
                ops.append(np.sqrt(lam) * vec.reshape(-1, 1) @ lm.ket(a, d_in).T)
    return KrausChannel(d_in, state.shape[0], tuple(ops))


def amplitude_damping(eta: float) -> KrausChannel:
    """Qubit amplitude damping with decay probability ``eta`` (identity at 0)."""
    if not 0.0 <= eta <= 1.0:
        raise ParameterRange(f"amplitude damping parameter {eta} not in [0, 1]")
    a0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - eta)]])
    a1 = np.array([[0.0, np.sqrt(eta)], [0.0, 0.0]])
    return KrausChannel(2, 2, (a0, a1))


def dephasing(d: int) -> KrausChannel:
    """Completely dephasing channel with Kraus operators |a><a|."""
    if d < 1:
        raise ParameterRange("dimension must be positive")
    return KrausChannel(d, d, tuple(lm.projector(lm.ket(a, d)) for a in range(d)))


def random_channel(d_in: int, d_out: int, num_kraus: int, rng: np.random.Generator) -> KrausChannel:
    """Random channel from a Haar-ish isometry C^d_in -> C^d_out (x) C^num_kraus."""
    if d_out * num_kraus < d_in:
        raise ParameterRange(f"no isometry from dim {d_in} into {d_out} x {num_kraus}")
    g = rng.standard_normal((d_out * num_kraus, d_in)) + 1j * rng.standard_normal(
        (d_out * num_kraus, d_in)
    )
    v, _ = np.linalg.qr(g)
    stack = v.reshape(d_out, num_kraus, d_in).transpose(1, 0, 2)
    return KrausChannel(d_in, d_out, tuple(stack))


# -- degradability ----------------------------------------------------------------


def verify_degrading_map(ch: KrausChannel, d: KrausChannel, tol: float = 1e-8) -> bool:
    """True iff ``d o ch`` equals ``complement(ch)`` in Choi trace distance up to ``tol``."""
    if d.dim_in != ch.dim_out:
        raise DimensionMismatch(f"degrading map input {d.dim_in} != channel output {ch.dim_out}")
    comp = complement(ch)
    lhs = compose(d, ch)
    env = max(comp.dim_out, lhs.dim_out)
    return choi_distance(pad_output(lhs, env), pad_output(comp, env)) <= tol


def verify_antidegrading_map(ch: KrausChannel, l: KrausChannel, tol: float = 1e-8) -> bool:
    """True iff ``l o complement(ch)`` equals ``ch`` in Choi trace distance up to ``tol``."""
    comp = complement(ch)
    if l.dim_in != comp.dim_out:
        raise DimensionMismatch(f"map input {l.dim_in} != environment dim {comp.dim_out}")
    lhs = compose(l, comp)
    out = max(ch.dim_out, lhs.dim_out)
    return choi_distance(pad_output(lhs, out), pad_output(ch, out)) <= tol


def ad_degrading_map(eta: float) -> KrausChannel:
    """Degrading map of amplitude_damping(eta) for eta in [0, 1/2]."""
    if not 0.0 <= eta <= 0.5:
        raise ParameterRange("amplitude damping is degradable only for eta in [0, 1/2]")
    return amplitude_damping((1.0 - 2.0 * eta) / (1.0 - eta))


def ad_antidegrading_map(eta: float) -> KrausChannel:
    """Anti-degrading map of amplitude_damping(eta) for eta in [1/2, 1]."""
    if not 0.5 <= eta <= 1.0:
        raise ParameterRange("amplitude damping is anti-degradable only for eta in [1/2, 1]")
    return amplitude_damping((2.0 * eta - 1.0) / eta)
