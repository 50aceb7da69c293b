"""Coherent information and one-shot quantum capacity estimates.

The one-shot capacity is a maximization of a generally nonconcave function
over density matrices, so every value returned here is a lower bound
certified by the state that attains it. States are parameterized as
``rho = T T^dagger / Tr(T T^dagger)`` with ``T`` an unconstrained complex
square matrix, and each restart runs L-BFGS with the analytic gradient of the
coherent information. Restart 0 always starts from the maximally mixed state.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import linmath as lm
from .channels import KrausChannel, apply, complement, stinespring, tensor_power
from .errors import DimensionCap, DimensionMismatch, ParameterRange

DEFAULT_RESTARTS = 16
MAX_ITER = 500
LOG_FLOOR = 1e-15
PROBE_MAX_DIM = 16

# rho -> (value, gradient of value with respect to rho as a Hermitian matrix)
StateObjective = Callable[[np.ndarray], "tuple[float, np.ndarray]"]


@dataclass(frozen=True)
class CapacityEstimate:
    """Certified lower bound on a one-shot capacity.

    ``value`` is exactly the coherent information at ``argmax_state``.
    """

    value: float
    argmax_state: np.ndarray = field(repr=False)
    restarts_used: int
    converged: bool
    restart_values: tuple = field(default=(), repr=False)


def coherent_information(ch: KrausChannel, rho) -> float:
    """I_c(ch, rho) = S(ch(rho)) - S(ch^c(rho)) in bits."""
    rho = lm.as_matrix(rho)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"state of dim {rho.shape[0]} for channel input dim {ch.dim_in}")
    out = apply(ch, rho)
    env = apply(complement(ch), rho)
    return lm.von_neumann_entropy(out) - lm.von_neumann_entropy(env)


def _log2_psd(w: np.ndarray, u: np.ndarray) -> np.ndarray:
    return (u * np.log2(np.clip(w, LOG_FLOOR, None))) @ lm.dagger(u)


def coherent_information_objective(ch: KrausChannel) -> StateObjective:
    """Fast I_c with its gradient, both computed from one pass through the Stinespring isometry."""
    v = stinespring(ch)
    vh = lm.dagger(v)
    dout, r = ch.dim_out, ch.num_kraus
    eye_out, eye_env = np.eye(dout), np.eye(r)

    def objective(rho):
        w = (v @ rho @ vh).reshape(dout, r, dout, r)
        out = np.einsum("ikjk->ij", w)
        env = np.einsum("kikj->ij", w)
        wo, uo = np.linalg.eigh(lm.hermitize(out))
        we, ue = np.linalg.eigh(lm.hermitize(env))
        value = lm.entropy_of_spectrum(np.clip(wo, 0, None)) - lm.entropy_of_spectrum(
            np.clip(we, 0, None)
        )
        # d S(X)/dX = -(log2 X + 1/ln 2); the constants cancel because both maps are unital in the dual
        mid = -np.kron(_log2_psd(wo, uo), eye_env) + np.kron(eye_out, _log2_psd(we, ue))
        return value, vh @ mid @ v

    return objective


def weighted_objective(terms: Sequence[tuple[float, KrausChannel]]) -> StateObjective:
    """rho -> sum_j w_j I_c(ch_j, rho)."""
    parts = [(float(w), coherent_information_objective(ch)) for w, ch in terms]

    def objective(rho):
        total, grad = 0.0, 0.0
        for w, f in parts:
            if w == 0.0:
                continue
            val, g = f(rho)
            total += w * val
            grad = grad + w * g
        if isinstance(grad, float):
            grad = np.zeros_like(rho)
        return total, grad

    return objective


def _state_from_params(x: np.ndarray, d: int):
    t = (x[: d * d] + 1j * x[d * d :]).reshape(d, d)
    m = t @ lm.dagger(t)
    norm = np.trace(m).real
    return t, m / norm, norm


def _local_ascent(objective: StateObjective, d: int, t0: np.ndarray, max_iter: int):
    x0 = np.concatenate([t0.real.ravel(), t0.imag.ravel()])

    def fun(x):
        t, rho, norm = _state_from_params(x, d)
        val, g = objective(rho)
        c = np.trace(g @ rho).real
        m = (g - c * np.eye(d)) @ t * (2.0 / norm)
        return -val, -np.concatenate([m.real.ravel(), m.imag.ravel()])

    res = minimize(fun, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "gtol": 1e-10, "ftol": 1e-14})
    _, rho, _ = _state_from_params(res.x, d)
    return lm.hermitize(rho)


def initial_points(d: int, restarts: int, seed) -> list:
    """Restart starting points; a longer list always extends a shorter one with the same seed."""
    rng = np.random.default_rng(seed)
    starts = [np.eye(d, dtype=complex)]
    for _ in range(restarts - 1):
        starts.append(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    return starts


def maximize_over_states(
    objective: StateObjective,
    d: int,
    restarts: int = DEFAULT_RESTARTS,
    seed=0,
    max_iter: int = MAX_ITER,
    workers: int = 1,
    evaluate: Callable[[np.ndarray], float] | None = None,
):
    """Run restarted local ascent; return (best_value, best_state, per-restart values).

    ``evaluate`` recomputes the value at each final state (defaults to the
    objective itself). Ties are broken by restart index, so the result does
    not depend on the thread schedule.
    """
    if restarts < 1:
        raise ParameterRange("need at least one restart")
    evaluate = evaluate or (lambda rho: objective(rho)[0])
    starts = initial_points(d, restarts, seed)

    def run(t0):
        rho = _local_ascent(objective, d, t0, max_iter)
        return float(evaluate(rho)), rho

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(t0) for t0 in starts]
    values = [v for v, _ in results]
    best = max(range(len(results)), key=lambda i: (values[i], -i))
    return values[best], results[best][1], tuple(values)


def one_shot_capacity(
    ch: KrausChannel,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = 1e-6,
    seed=0,
    workers: int = 1,
) -> CapacityEstimate:
    """Lower bound on max_rho I_c(ch, rho) from ``restarts`` local optimizations.

    ``converged`` is False when the two best restarts differ by more than
    ``10 * tol``, which for a nonconcave landscape usually means distinct
    local optima were found.
    """
    value, rho, values = maximize_over_states(
        coherent_information_objective(ch), ch.dim_in, restarts, seed, workers=workers,
        evaluate=lambda s: coherent_information(ch, s),
    )
    ranked = sorted(values, reverse=True)
    converged = len(ranked) < 2 or ranked[0] - ranked[1] <= 10 * tol
    return CapacityEstimate(value, rho, restarts, converged, values)


def subnorm_entropy_identity(p: float, omega) -> tuple[float, float]:
    """Both sides of S(p omega) = p S(omega) - p log2 p.

    The left side is a direct eigenvalue computation on the scaled matrix,
    the right side the closed form.
    """
    if p < 0:
        raise ParameterRange("p must be non-negative")
    if p == 0:
        return 0.0, 0.0
    omega = lm.as_matrix(omega)
    lhs = lm.von_neumann_entropy(p * omega)
    rhs = p * lm.von_neumann_entropy(omega) - p * np.log2(p)
    return lhs, float(rhs)


def regularized_probe(
    ch: KrausChannel, n: int, restarts: int = DEFAULT_RESTARTS, seed=0, workers: int = 1
) -> float:
    """Q1(ch^{(x)n}) / n for n in {1, 2}; a lower bound on the quantum capacity."""
    if n not in (1, 2):
        raise ParameterRange("regularization probe supports n = 1 or 2")
    if ch.dim_in ** n > PROBE_MAX_DIM:
        raise DimensionCap(f"input dimension {ch.dim_in ** n} exceeds {PROBE_MAX_DIM}")
    est = one_shot_capacity(tensor_power(ch, n), restarts=restarts, seed=seed, workers=workers)
    return est.value / n


def _binary_entropy(p):
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return np.nan_to_num(h)


def amplitude_damping_capacity(eta: float, grid: int = 20001) -> float:
    """Q1 of amplitude_damping(eta) from the diagonal-input reduction.

    For eta <= 1/2 the maximum is attained on diag(1 - p, p), where
    I_c = h((1 - eta) p) - h(eta p); for eta >= 1/2 the channel is
    anti-degradable and the value is 0. Dense grid followed by a bounded
    scalar refinement.
    """
    if not 0.0 <= eta <= 1.0:
        raise ParameterRange(f"amplitude damping parameter {eta} not in [0, 1]")
    if eta >= 0.5:
        return 0.0
    f = lambda p: _binary_entropy((1 - eta) * p) - _binary_entropy(eta * p)
    ps = np.linspace(0.0, 1.0, grid)
    k = int(np.argmax(f(ps)))
    lo, hi = ps[max(k - 1, 0)], ps[min(k + 1, grid - 1)]
    res = minimize_scalar(lambda p: -f(p), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return float(max(f(ps[k]), -res.fun))
