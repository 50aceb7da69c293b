"""Line-oriented circuit programs over {H, T, CNOT, PREP, TRACE}, and the
capacity reduction built from a verifier circuit.

Program format, one instruction per line (``;`` also separates instructions,
``#`` starts a comment)::

    INPUTS 1        # optional: number of input qubits, labelled 0..n-1
    OUTPUTS 1       # optional: output qubits in tensor order
    PREP 1          # fresh qubit in |0>
    CNOT 0 1        # control 0, target 1
    TRACE 0         # discard a live qubit

Without ``INPUTS`` the input qubits are inferred as every label used before
it is prepared. Without ``OUTPUTS`` the live qubits at the end are the
outputs in ascending label order.

A verifier is a circuit with a single output qubit; outcome ``|1>`` means
accept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linmath as lm
from .capacity import DEFAULT_RESTARTS, CapacityEstimate, maximize_over_states, one_shot_capacity
from .channels import KrausChannel, amplitude_damping, apply_adjoint
from .directsum import Povm, ProjectiveDirectSum
from .errors import CircuitError, DeadQubit, DimensionMismatch, QubitCap, UnknownGate

MAX_QUBITS = 6
ACCEPT = 1

GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}
ARITY = {"H": 1, "T": 1, "CNOT": 2, "PREP": 1, "TRACE": 1}


@dataclass(frozen=True)
class Instruction:
    op: str
    qubits: tuple
    line: int | None = field(default=None, compare=False)

    def __str__(self):
        return " ".join([self.op, *map(str, self.qubits)])


@dataclass(frozen=True)
class CircuitDesc:
    n_input_qubits: int
    instructions: tuple
    outputs: tuple

    def to_text(self) -> str:
        lines = [f"INPUTS {self.n_input_qubits}", "OUTPUTS " + " ".join(map(str, self.outputs))]
        lines += [str(ins) for ins in self.instructions]
        return "\n".join(lines) + "\n"


def _split_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        for part in body.split(";"):
            part = part.strip()
            if part:
                yield lineno, part.split()


def parse_circuit(text: str, n_inputs: int | None = None) -> CircuitDesc:
    """Parse and validate a circuit program.

    Raises UnknownGate, DeadQubit or QubitCap (with the offending line) on
    malformed input.
    """
    instructions = []
    declared_inputs, declared_outputs = None, None
    for lineno, tokens in _split_lines(text):
        op = tokens[0].upper()
        try:
            args = tuple(int(t) for t in tokens[1:])
        except ValueError:
            raise CircuitError(f"non-integer qubit label in {' '.join(tokens)!r}", lineno) from None
        if any(a < 0 for a in args):
            raise CircuitError("qubit labels must be non-negative", lineno)
        if op == "INPUTS":
            if len(args) != 1:
                raise CircuitError("INPUTS takes one count", lineno)
            declared_inputs = args[0]
        elif op == "OUTPUTS":
            declared_outputs = args
        elif op in ARITY:
            if len(args) != ARITY[op]:
                raise CircuitError(f"{op} takes {ARITY[op]} qubit(s), got {len(args)}", lineno)
            if op == "CNOT" and args[0] == args[1]:
                raise CircuitError("CNOT control and target coincide", lineno)
            instructions.append(Instruction(op, args, lineno))
        else:
            raise UnknownGate(f"unknown instruction {tokens[0]!r}", lineno)

    if n_inputs is None:
        n_inputs = declared_inputs
    if n_inputs is None:
        seen, first_use = set(), []
        for ins in instructions:
            for q in ins.qubits:
                if q not in seen:
                    seen.add(q)
                    if ins.op != "PREP":
                        first_use.append(q)
        n_inputs = max(first_use) + 1 if first_use else 0
    if n_inputs > MAX_QUBITS:
        raise QubitCap(f"{n_inputs} input qubits exceed the cap of {MAX_QUBITS}")

    live = set(range(n_inputs))
    for ins in instructions:
        if ins.op == "PREP":
            q = ins.qubits[0]
            if q in live:
                raise CircuitError(f"PREP on live qubit {q}", ins.line)
            live.add(q)
            if len(live) > MAX_QUBITS:
                raise QubitCap(f"more than {MAX_QUBITS} live qubits", ins.line)
        else:
            for q in ins.qubits:
                if q not in live:
                    raise DeadQubit(f"qubit {q} is not live", ins.line)
            if ins.op == "TRACE":
                live.remove(ins.qubits[0])

    if declared_outputs is None:
        outputs = tuple(sorted(live))
    else:
        if sorted(declared_outputs) != sorted(live) or len(set(declared_outputs)) != len(declared_outputs):
            raise CircuitError(
                f"OUTPUTS {list(declared_outputs)} do not match live qubits {sorted(live)}"
            )
        outputs = tuple(declared_outputs)
    return CircuitDesc(n_inputs, tuple(instructions), outputs)


def canonical_form(c: CircuitDesc):
    """Rewrite into prep -> unitary -> trace form on fresh wires.

    Returns ``(n_wires, gates, output_wires, traced_wires)`` where wires
    ``0..n_input-1`` carry the inputs, every PREP gets the next wire (all
    prepared up front in |0>), and ``gates`` is a list of (name, wires).
    """
    wire_of = {q: q for q in range(c.n_input_qubits)}
    n_wires = c.n_input_qubits
    gates, traced = [], []
    for ins in c.instructions:
        if ins.op == "PREP":
            wire_of[ins.qubits[0]] = n_wires
            n_wires += 1
        elif ins.op == "TRACE":
            traced.append(wire_of.pop(ins.qubits[0]))
        else:
            gates.append((ins.op, tuple(wire_of[q] for q in ins.qubits)))
    return n_wires, gates, [wire_of[q] for q in c.outputs], traced


def _apply_gate(state: np.ndarray, gate: np.ndarray, wires, n_wires: int) -> np.ndarray:
    k = len(wires)
    g = gate.reshape([2] * (2 * k))
    moved = np.tensordot(g, state, axes=(list(range(k, 2 * k)), list(wires)))
    return np.moveaxis(moved, list(range(k)), list(wires))


def compile_circuit(c: CircuitDesc) -> KrausChannel:
    """Kraus channel C^(2^n_in) -> C^(2^n_out) implemented by the circuit.

    The Kraus operators are indexed by the computational basis of the traced
    wires, in trace order.
    """
    n_wires, gates, out_wires, traced = canonical_form(c)
    if n_wires > MAX_QUBITS:
        raise QubitCap(f"canonical form needs {n_wires} wires, cap is {MAX_QUBITS}")
    n_in = c.n_input_qubits
    d_in = 2 ** n_in
    # isometry V0 = I (x) |0...0>, stored as a tensor with one axis per wire plus the input column
    v = np.zeros((2 ** n_wires, d_in), dtype=complex)
    v[np.arange(d_in) * 2 ** (n_wires - n_in), np.arange(d_in)] = 1.0
    state = v.reshape([2] * n_wires + [d_in])
    for name, wires in gates:
        state = _apply_gate(state, GATES[name], wires, n_wires)
    state = np.transpose(state, out_wires + traced + [n_wires])
    m = state.reshape(2 ** len(out_wires), 2 ** len(traced), d_in)
    ops = tuple(m[:, e, :] for e in range(m.shape[1]))
    return KrausChannel(d_in, 2 ** len(out_wires), ops)


def compile(c: CircuitDesc) -> KrausChannel:  # noqa: A001 - mirrors the public operation name
    return compile_circuit(c)


def povm_from_measurement_channel(ch: KrausChannel) -> Povm:
    """POVM {P_b = sum_i K_i^dagger |b><b| K_i} of a channel onto one qubit."""
    if ch.dim_out != 2:
        raise DimensionMismatch(f"measurement channel must output a qubit, got dim {ch.dim_out}")
    return Povm(tuple(lm.hermitize(apply_adjoint(ch, lm.projector(lm.ket(b, 2)))) for b in (0, 1)))


@dataclass(frozen=True, eq=False)
class ReductionInstance:
    """Direct sum of AD(0) and AD(1/2) gated by a verifier's accept/reject POVM.

    ``povm`` is ordered (accept, reject) so that the accept element weights the
    identity branch. ``measurement_povm`` keeps the outcome order (|0>, |1>).
    """

    verifier: CircuitDesc
    channel: KrausChannel = field(repr=False)
    measurement_povm: Povm = field(repr=False)
    povm: Povm = field(repr=False)
    phi0: KrausChannel = field(repr=False)
    phi1: KrausChannel = field(repr=False)

    @property
    def proof_dim(self) -> int:
        return self.channel.dim_in

    @property
    def accept_element(self) -> np.ndarray:
        return self.povm.elements[0]

    def weight_accept_max(self) -> float:
        """max_sigma Tr(P_accept sigma), the top eigenvalue of the accept element."""
        return float(np.linalg.eigvalsh(self.accept_element)[-1])

    def best_proof(self) -> np.ndarray:
        w, u = np.linalg.eigh(self.accept_element)
        return lm.projector(u[:, -1])

    def direct_sum(self, sigma) -> ProjectiveDirectSum:
        return ProjectiveDirectSum.create(self.phi0, self.phi1, self.povm, sigma)

    def summary(self) -> dict:
        return {
            "proof_qubits": self.verifier.n_input_qubits,
            "verifier_kraus": self.channel.num_kraus,
            "branches": ["amplitude_damping(0)", "amplitude_damping(1/2)"],
            "output_dim": 2 * self.phi0.dim_out,
        }


def build_reduction(verifier: CircuitDesc) -> ReductionInstance:
    ch = compile_circuit(verifier)
    if ch.dim_out != 2:
        raise DimensionMismatch(f"verifier must output one decision qubit, got dim {ch.dim_out}")
    meas = povm_from_measurement_channel(ch)
    accept = meas.elements[ACCEPT]
    povm = Povm((accept, meas.elements[1 - ACCEPT]))
    return ReductionInstance(verifier, ch, meas, povm, amplitude_damping(0.0), amplitude_damping(0.5))


@dataclass(frozen=True)
class ReductionEstimate:
    value: float
    sigma: np.ndarray = field(repr=False)
    weight_accept: float
    weight_accept_max: float
    converged: bool
    capacity: CapacityEstimate = field(repr=False, default=None)


def evaluate_reduction(
    r: ReductionInstance,
    sigma_restarts: int = 4,
    rho_restarts: int = 8,
    seed=0,
    workers: int = 1,
) -> ReductionEstimate:
    """sup over sigma of the one-shot capacity of the sigma-instantiated direct sum.

    Candidate proof states are the top eigenvector of the accept element and
    the optima of a restarted generic maximization of Tr(P_accept sigma); each
    candidate's direct sum is then optimized over the transmitted state.
    """
    if r.proof_dim > 16:
        raise DimensionMismatch(f"proof register dim {r.proof_dim} exceeds 16")
    p_acc = r.accept_element
    candidates = [r.best_proof()]
    if sigma_restarts > 0:
        _, sigma, _ = maximize_over_states(
            lambda s: (float(np.trace(p_acc @ s).real), p_acc), r.proof_dim,
            restarts=sigma_restarts, seed=seed, workers=workers,
        )
        candidates.append(sigma)
    best = None
    for sigma in candidates:
        ds = r.direct_sum(sigma)
        est = one_shot_capacity(ds.channel, restarts=rho_restarts, seed=seed, workers=workers)
        if best is None or est.value > best[0].value:
            best = (est, sigma, ds.weights[0])
    est, sigma, w_acc = best
    return ReductionEstimate(est.value, sigma, w_acc, r.weight_accept_max(), est.converged, est)


def joint_reduction_channel(r: ReductionInstance) -> KrausChannel:
    """Experimental: the reduction as one channel on (proof register (x) qubit).

    The verifier measures the proof register and the outcome selects the
    branch applied to the qubit, with the branch recorded in the flag. On
    product inputs sigma (x) rho its output equals the direct sum at sigma.
    """
    flags = (lm.ket(0, 2), lm.ket(1, 2))
    branch_for_outcome = {ACCEPT: 0, 1 - ACCEPT: 1}
    branches = (r.phi0, r.phi1)
    ops = []
    for a in r.channel.kraus:
        for b in (0, 1):
            row = lm.ket(b, 2).T @ a
            j = branch_for_outcome[b]
            for k in branches[j].kraus:
                ops.append(np.kron(np.kron(row, k), flags[j]))
    return KrausChannel(r.proof_dim * 2, 4, tuple(ops))


def evaluate_reduction_joint(r: ReductionInstance, restarts: int = DEFAULT_RESTARTS, seed=0) -> CapacityEstimate:
    """Experimental: one-shot capacity of the joint channel over possibly entangled inputs."""
    return one_shot_capacity(joint_reduction_channel(r), restarts=restarts, seed=seed)


# Toy verifiers on one proof qubit. X is realized as H T^4 H inside the gate set.
TOY_VERIFIERS = {
    "always_accept": "INPUTS 1\nTRACE 0\nPREP 1\nH 1\nT 1\nT 1\nT 1\nT 1\nH 1\n",
    "always_reject": "INPUTS 1\nTRACE 0\nPREP 1\n",
    "measure_proof": "INPUTS 1\nPREP 1\nCNOT 0 1\nTRACE 0\n",
    "coin_t1": "INPUTS 1\nTRACE 0\nPREP 1\nH 1\nT 1\nH 1\n",
    "coin_t2": "INPUTS 1\nTRACE 0\nPREP 1\nH 1\nT 1\nT 1\nH 1\n",
    "coin_t3": "INPUTS 1\nTRACE 0\nPREP 1\nH 1\nT 1\nT 1\nT 1\nH 1\n",
}


def toy_verifier(name: str) -> CircuitDesc:
    return parse_circuit(TOY_VERIFIERS[name])
