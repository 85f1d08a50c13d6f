"""See-saw maximization of Bell expressions and related search utilities.

The see-saw alternates two exact coordinate maximizations:

* state step: the state becomes the top eigenvector of the current Bell
  operator;
* setting step: each single-qubit observable in turn becomes ``g . sigma
  / |g|``, where ``g_j`` is the expectation of the expression with that
  observable replaced by ``sigma_j`` (the value is linear in the Bloch
  vector, so the normalized gradient is the exact argmax).

Both steps can only increase the objective, so the recorded history is
nondecreasing up to rounding.  All randomness (initial settings, scan
instances) comes from numpy's Philox generator, a counter-based stream
that reproduces across platforms for a given integer seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import report_for
from .linalg import (
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    embed_local,
    expectation,
    haar_random_ket,
    tensor_product,
    top_eigenpair,
)
from .scenarios import (
    FamilySpec,
    Scenario,
    bloch_observable,
    bloch_of,
    chsh_coefficients,
    coefficient_tensor,
    from_bloch_table,
    random_scenario,
)

__all__ = [
    "CONVERGENCE_EPS",
    "OptimizationResult",
    "ScanSummary",
    "StationarityReport",
    "seesaw_max",
    "chained_optimal_settings",
    "statistical_chsh_surface",
    "stationarity_check",
    "random_scan",
]

# An improvement below this, three sweeps running, counts as converged.
CONVERGENCE_EPS = 1e-12
_STALL_SWEEPS = 3
_GRADIENT_EPS = 1e-12


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of one seeded see-saw run.

    ``value`` is the expression's expectation in ``state`` under the
    final ``scenario`` settings; ``history`` holds the value after each
    sweep and is nondecreasing within rounding.
    """

    family: FamilySpec
    value: float
    state: np.ndarray
    scenario: Scenario
    iterations: int
    converged: bool
    history: tuple[float, ...]
    seed: int


@dataclass(frozen=True)
class ScanSummary:
    """Slack statistics over random instances of one family.

    ``violations`` counts samples whose slack fell below the rounding
    floor (-1e-9).  ``min_slack``/``mean_slack`` are None for an empty
    scan.  ``rows`` optionally keeps one record per instance for CSV
    export; it is not part of the summary proper.
    """

    family: FamilySpec
    n_samples: int
    min_slack: float | None
    mean_slack: float | None
    violations: int
    seed: int
    rows: tuple[dict, ...] | None = None


@dataclass(frozen=True)
class StationarityReport:
    """Finite-difference stationarity tests of the mean surface at the origin.

    ``gradient`` and ``second_partials`` are central differences along
    the four mean axes; ``hessian_eigenvalues`` is the spectrum of the
    full mixed-difference Hessian (recorded for completeness, the
    negativity claims are about the diagonal).
    """

    value_at_origin: float
    gradient: tuple[float, float, float, float]
    second_partials: tuple[float, float, float, float]
    hessian_eigenvalues: tuple[float, float, float, float]
    step: float


def _philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _environment_operator(
    coeff: np.ndarray, observables, party: int, setting: int
) -> np.ndarray:
    """Sum of coefficient-weighted partner products, identity at ``party``.

    This is the operator ``E`` with ``value = <psi| X_party E |psi>`` +
    terms not involving the chosen setting, so the Bloch gradient of the
    value is ``g_j = <psi| sigma_j^(party) E |psi>``.
    """
    n_parties = len(observables)
    dim = 2**n_parties
    out = np.zeros((dim, dim), dtype=complex)
    for idx in np.ndindex(*coeff.shape):
        if idx[party] != setting:
            continue
        c = coeff[idx]
        if c == 0:
            continue
        factors = [
            ID2 if p == party else observables[p][s] for p, s in enumerate(idx)
        ]
        out += float(c) * tensor_product(factors)
    return out


def _operator(coeff: np.ndarray, observables) -> np.ndarray:
    from .scenarios import operator_from_tensor

    return operator_from_tensor(coeff, observables)


def seesaw_max(family: FamilySpec, seed: int, max_iters: int = 300) -> OptimizationResult:
    """Alternating state/setting maximization from a seeded random start.

    Deterministic for a given seed.  Convergence means the per-sweep
    improvement stayed below 1e-12 for three consecutive sweeps before
    ``max_iters`` ran out; otherwise the best iterate so far is returned
    with ``converged=False``.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be positive, got {max_iters}")
    rng = _philox(seed)
    start = random_scenario(family, rng)
    observables = [list(row) for row in start.observables]
    coeff = coefficient_tensor(family)
    n_parties = family.n_parties
    lifted_sigmas = [
        [embed_local(sigma, p, n_parties) for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z)]
        for p in range(n_parties)
    ]

    history: list[float] = []
    state = None
    prev = -np.inf
    stall = 0
    iterations = 0
    converged = False
    for _ in range(max_iters):
        iterations += 1
        _, state = top_eigenpair(_operator(coeff, observables))
        sigma_images = [[op @ state for op in row] for row in lifted_sigmas]
        for p in range(n_parties):
            for s in range(len(observables[p])):
                env = _environment_operator(coeff, observables, p, s)
                image = env @ state
                g = np.array(
                    [float(np.vdot(sig, image).real) for sig in sigma_images[p]]
                )
                norm = float(np.linalg.norm(g))
                if norm < _GRADIENT_EPS:
                    continue
                observables[p][s] = bloch_observable(g / norm)
        value = expectation(_operator(coeff, observables), state)
        history.append(value)
        if value - prev < CONVERGENCE_EPS:
            stall += 1
            if stall >= _STALL_SWEEPS:
                converged = True
                prev = max(prev, value)
                break
        else:
            stall = 0
        prev = max(prev, value)

    final = from_bloch_table([[bloch_of(op) for op in row] for row in observables])
    return OptimizationResult(
        family=family,
        value=float(prev),
        state=state,
        scenario=final,
        iterations=iterations,
        converged=converged,
        history=tuple(history),
        seed=int(seed),
    )


def chained_optimal_settings(n: int) -> Scenario:
    """Planar settings saturating the cyclic expression on the Bell state.

    B settings sit at angles ``j pi / n`` in the x-z plane and A settings
    halfway between consecutive B's, at ``(2k - 1) pi / (2n)``; every
    correlator then equals ``cos(pi / 2n)`` and the value reaches
    ``2n cos(pi / 2n)``.
    """
    if n < 2:
        raise ValueError(f"chained settings need n >= 2, got {n}")
    a_rows = []
    for k in range(n):
        angle = (2 * k - 1) * np.pi / (2 * n)
        a_rows.append([np.sin(angle), 0.0, np.cos(angle)])
    b_rows = []
    for j in range(n):
        angle = j * np.pi / n
        b_rows.append([np.sin(angle), 0.0, np.cos(angle)])
    return from_bloch_table([a_rows, b_rows])


def statistical_chsh_surface(means_a, means_b) -> float:
    """Local part plus fluctuation budget as a function of the four means.

    ``sum_xy c_xy a_x b_y + sqrt(2) sqrt(sum_x (1 - a_x^2))
    sqrt(sum_y (1 - b_y^2))``: the largest CHSH value compatible with the
    given single-observable means.  All means must lie in [-1, 1].
    """
    a = np.asarray(means_a, dtype=float)
    b = np.asarray(means_b, dtype=float)
    if a.shape != (2,) or b.shape != (2,):
        raise ValueError("means_a and means_b must each hold two values")
    if np.any(np.abs(a) > 1.0) or np.any(np.abs(b) > 1.0):
        raise ValueError("means must lie in [-1, 1]")
    coeff = chsh_coefficients()
    local = float(sum(coeff[x, y] * a[x] * b[y] for x in range(2) for y in range(2)))
    budget_a = float(np.sqrt(max(2.0 - a[0] ** 2 - a[1] ** 2, 0.0)))
    budget_b = float(np.sqrt(max(2.0 - b[0] ** 2 - b[1] ** 2, 0.0)))
    return local + float(np.sqrt(2.0)) * budget_a * budget_b


def stationarity_check(step: float = 1e-4) -> StationarityReport:
    """Central-difference stationarity test of the surface at zero means.

    Steps outside (0, 1e-3] are rejected: larger stencils leave the
    regime where the quadratic model is trustworthy.
    """
    if not 0.0 < step <= 1e-3:
        raise ValueError(f"step must lie in (0, 1e-3], got {step}")

    def f(v: np.ndarray) -> float:
        return statistical_chsh_surface(v[:2], v[2:])

    origin = np.zeros(4)
    f0 = f(origin)
    gradient = []
    second = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = step
        up, down = f(origin + e), f(origin - e)
        gradient.append((up - down) / (2.0 * step))
        second.append((up - 2.0 * f0 + down) / step**2)
    hessian = np.zeros((4, 4))
    for i in range(4):
        hessian[i, i] = second[i]
        for j in range(i + 1, 4):
            ei = np.zeros(4)
            ej = np.zeros(4)
            ei[i] = step
            ej[j] = step
            mixed = (
                f(origin + ei + ej)
                - f(origin + ei - ej)
                - f(origin - ei + ej)
                + f(origin - ei - ej)
            ) / (4.0 * step**2)
            hessian[i, j] = hessian[j, i] = mixed
    eigs = np.linalg.eigvalsh(hessian)
    return StationarityReport(
        value_at_origin=f0,
        gradient=tuple(float(g) for g in gradient),
        second_partials=tuple(float(s) for s in second),
        hessian_eigenvalues=tuple(float(w) for w in eigs),
        step=float(step),
    )


def random_scan(
    family: FamilySpec, n_samples: int, seed: int, keep_rows: bool = False
) -> ScanSummary:
    """Slack statistics over Haar states and uniform-Bloch settings.

    Each sample draws a fresh random scenario and state, runs the
    family's report, and records the slack.  ``keep_rows=True``
    additionally stores one flat record per instance (for CSV export).
    """
    if n_samples < 0:
        raise ValueError(f"n_samples must be non-negative, got {n_samples}")
    rng = _philox(seed)
    if n_samples == 0:
        return ScanSummary(
            family=family,
            n_samples=0,
            min_slack=None,
            mean_slack=None,
            violations=0,
            seed=int(seed),
            rows=() if keep_rows else None,
        )
    dim = 2**family.n_parties
    min_slack = np.inf
    total = 0.0
    violations = 0
    rows: list[dict] | None = [] if keep_rows else None
    for index in range(n_samples):
        scenario = random_scenario(family, rng)
        state = haar_random_ket(dim, rng)
        report = report_for(family, scenario, state)
        slack = report.slack
        min_slack = min(min_slack, slack)
        total += slack
        if slack < -1e-9:
            violations += 1
        if rows is not None:
            rows.append(
                {
                    "index": index,
                    "bell_value": report.bell_value,
                    "local_part": report.local_part,
                    "rms_a": report.rms_a,
                    "rms_b": report.rms_b,
                    "bound_statistical": report.bound_statistical,
                    "slack": slack,
                }
            )
    return ScanSummary(
        family=family,
        n_samples=n_samples,
        min_slack=float(min_slack),
        mean_slack=float(total / n_samples),
        violations=violations,
        seed=int(seed),
        rows=tuple(rows) if rows is not None else None,
    )
