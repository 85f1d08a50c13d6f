"""Born-rule round sampling and plug-in estimation for Bell experiments.

Sampling algorithm (fixed, so batches reproduce bit for bit per seed):

1. a ``numpy.random.Philox`` generator is keyed with the integer seed
   (counter-based, platform-stable);
2. one ``integers`` draw per party, in party order, picks each round's
   settings uniformly;
3. one ``random`` draw of uniforms, one per round, picks the joint
   outcome by inverse CDF over the Born distribution of that round's
   setting combination.

Joint outcome probabilities come from products of local spectral
projectors ``(I +- X)/2`` contracted against the state.  Estimation is
pure plug-in: outcome averages, ``variance = 1 - mean^2`` (exact for
+-1 outcomes), per-combination correlators, and the family's
coefficient tensor assembling the Bell value.  Standard errors are
``sqrt(variance / count)`` per estimate.

The empirical bound check propagates errors to first order (delta
method) through ``M = sqrt(2) R_A R_B + local_part - bell_value``:

    SE(M)^2 = sum_xy c_xy^2 SE(corr_xy)^2
            + sum_x (sqrt(2) R_B m_Ax / R_A - sum_y c_xy m_By)^2 SE(m_Ax)^2
            + sum_y (sqrt(2) R_A m_By / R_B - sum_x c_xy m_Ax)^2 SE(m_By)^2

(the mean terms drop out when the corresponding aggregate spread
vanishes), and the check passes when ``M + z SE(M) >= 0``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .linalg import ID2
from .scenarios import (
    SCHEMA_VERSION,
    FamilySpec,
    Scenario,
    check_family_scenario,
    coefficient_tensor,
    family_from_json_dict,
    family_to_json_dict,
)

__all__ = [
    "SampleBatch",
    "EmpiricalEstimates",
    "EmpiricalCheck",
    "UndersampledError",
    "simulate_rounds",
    "estimate",
    "empirical_check",
    "batch_to_csv",
    "estimates_to_json_dict",
]

_CHUNK_ROUNDS = 1 << 14


class UndersampledError(ValueError):
    """A setting combination was observed fewer than two times."""


@dataclass(frozen=True)
class SampleBatch:
    """Outcome record of a round-by-round Born-rule simulation.

    ``counts[c, o]`` tallies rounds with setting combination ``c``
    (lexicographic over parties) and joint outcome ``o`` (bit 0 of the
    big-endian index meaning outcome +1).  The per-round arrays carry the
    same information in order, for flat CSV export.
    """

    family: FamilySpec
    scenario: Scenario
    rounds: int
    seed: int
    counts: np.ndarray
    round_settings: np.ndarray
    round_outcomes: np.ndarray

    @property
    def n_parties(self) -> int:
        return self.scenario.n_parties


@dataclass(frozen=True)
class EmpiricalEstimates:
    """Plug-in estimates from a sample batch, with standard errors.

    ``means``/``variances``/``se_means`` are (party, setting) arrays;
    ``correlators``/``se_correlators`` follow the family's coefficient
    tensor shape; ``rms_hats`` aggregates per-party variances the same
    way the exact reports aggregate spreads.
    """

    family: FamilySpec
    rounds: int
    means: np.ndarray
    variances: np.ndarray
    se_means: np.ndarray
    correlators: np.ndarray
    se_correlators: np.ndarray
    correlator_counts: np.ndarray
    bell_value_hat: float
    se_bell_value: float
    rms_hats: np.ndarray


@dataclass(frozen=True)
class EmpiricalCheck:
    """Verdict of the statistical-bound test on empirical estimates.

    ``margin`` is ``sqrt(2) R_A R_B + local_part_hat - bell_value_hat +
    z * SE``; the check passes when it is non-negative.
    """

    passed: bool
    margin: float
    bell_value_hat: float
    local_part_hat: float
    bound_hat: float
    se_margin: float
    z: float


def _spectral_projectors(op: np.ndarray) -> np.ndarray:
    """Stack of the two outcome projectors (+1 first) of a dichotomic observable."""
    return np.stack([(ID2 + op) / 2.0, (ID2 - op) / 2.0])


def _joint_distribution(
    scenario: Scenario, state: np.ndarray, combo: tuple[int, ...]
) -> np.ndarray:
    """Born probabilities over joint +-1 outcomes for one setting combination."""
    n = scenario.n_parties
    tensor = state.reshape((2,) * n)
    operands = [tensor.conj(), list(range(n))]
    for p, s in enumerate(combo):
        projs = _spectral_projectors(scenario.observables[p][s])
        # indices: outcome axis, bra axis (site p), ket axis
        operands.extend([projs, [2 * n + p, p, n + p]])
    operands.extend([tensor, list(range(n, 2 * n))])
    probs = np.einsum(*operands, list(range(2 * n, 3 * n))).real.reshape(-1)
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ArithmeticError(f"Born distribution sums to {total!r}")
    return np.clip(probs, 0.0, None) / total


def _combo_list(settings_per_party: tuple[int, ...]) -> list[tuple[int, ...]]:
    combos: list[tuple[int, ...]] = [()]
    for n_settings in settings_per_party:
        combos = [c + (s,) for c in combos for s in range(n_settings)]
    return combos


def simulate_rounds(
    family: FamilySpec, scenario: Scenario, state: np.ndarray, rounds: int, seed: int
) -> SampleBatch:
    """Simulate measurement rounds with uniform random settings.

    Reproducible bit for bit for identical inputs; see the module
    docstring for the exact draw order.
    """
    check_family_scenario(family, scenario)
    if rounds < 1:
        raise ValueError(f"rounds must be positive, got {rounds}")
    n = scenario.n_parties
    if state.shape != (2**n,):
        raise ValueError(
            f"state of length {state.shape[0]} does not fit {n} qubit parties"
        )
    settings = scenario.settings_per_party
    combos = _combo_list(settings)
    dists = np.stack([_joint_distribution(scenario, state, c) for c in combos])
    cdfs = np.cumsum(dists, axis=1)
    cdfs[:, -1] = 1.0

    rng = np.random.Generator(np.random.Philox(int(seed)))
    round_settings = np.empty((rounds, n), dtype=np.uint8)
    for p in range(n):
        round_settings[:, p] = rng.integers(0, settings[p], size=rounds, dtype=np.uint8)
    uniforms = rng.random(rounds)

    radix = np.ones(n, dtype=np.int64)
    for p in range(n - 2, -1, -1):
        radix[p] = radix[p + 1] * settings[p + 1]
    combo_idx = round_settings.astype(np.int64) @ radix

    outcome_idx = np.empty(rounds, dtype=np.int64)
    for lo in range(0, rounds, _CHUNK_ROUNDS):
        hi = min(lo + _CHUNK_ROUNDS, rounds)
        rows = cdfs[combo_idx[lo:hi]]
        outcome_idx[lo:hi] = np.sum(rows < uniforms[lo:hi, None], axis=1)

    counts = np.zeros((len(combos), 2**n), dtype=np.int64)
    np.add.at(counts, (combo_idx, outcome_idx), 1)

    shifts = np.arange(n - 1, -1, -1)
    bits = (outcome_idx[:, None] >> shifts) & 1
    round_outcomes = (1 - 2 * bits).astype(np.int8)

    return SampleBatch(
        family=family,
        scenario=scenario,
        rounds=rounds,
        seed=int(seed),
        counts=counts,
        round_settings=round_settings,
        round_outcomes=round_outcomes,
    )


def estimate(batch: SampleBatch) -> EmpiricalEstimates:
    """Plug-in means, variances, correlators and Bell value with errors.

    Every setting combination must appear at least twice; otherwise the
    batch is undersampled and no error bars make sense.
    """
    settings = batch.scenario.settings_per_party
    n = batch.n_parties
    combos = np.array(_combo_list(settings), dtype=np.int64)
    counts = batch.counts
    combo_totals = counts.sum(axis=1)
    if np.any(combo_totals < 2):
        worst = tuple(int(v) for v in combos[int(np.argmin(combo_totals))])
        raise UndersampledError(
            f"setting combination {worst} observed {int(combo_totals.min())} < 2 times"
        )

    n_outcomes = counts.shape[1]
    shifts = np.arange(n - 1, -1, -1)
    outcome_vals = 1.0 - 2.0 * ((np.arange(n_outcomes)[:, None] >> shifts) & 1)

    max_settings = max(settings)
    means = np.zeros((n, max_settings))
    variances = np.zeros((n, max_settings))
    se_means = np.zeros((n, max_settings))
    for p in range(n):
        for s in range(settings[p]):
            mask = combos[:, p] == s
            total_rounds = int(combo_totals[mask].sum())
            outcome_sum = float(counts[mask].sum(axis=0) @ outcome_vals[:, p])
            mean = outcome_sum / total_rounds
            var = max(1.0 - mean * mean, 0.0)
            means[p, s] = mean
            variances[p, s] = var
            se_means[p, s] = np.sqrt(var / total_rounds)

    prod_vals = outcome_vals.prod(axis=1)
    corr_flat = (counts @ prod_vals) / combo_totals
    se_flat = np.sqrt(np.clip(1.0 - corr_flat**2, 0.0, None) / combo_totals)
    corr = corr_flat.reshape(settings)
    se_corr = se_flat.reshape(settings)
    corr_counts = combo_totals.reshape(settings)

    coeff = coefficient_tensor(batch.family).astype(float)
    bell_hat = float(np.sum(coeff * corr))
    se_bell = float(np.sqrt(np.sum(coeff**2 * se_corr**2)))
    rms_hats = np.array(
        [np.sqrt(np.sum(variances[p, : settings[p]])) for p in range(n)]
    )
    return EmpiricalEstimates(
        family=batch.family,
        rounds=batch.rounds,
        means=means,
        variances=variances,
        se_means=se_means,
        correlators=corr,
        se_correlators=se_corr,
        correlator_counts=corr_counts,
        bell_value_hat=bell_hat,
        se_bell_value=se_bell,
        rms_hats=rms_hats,
    )


def empirical_check(estimates: EmpiricalEstimates, z: float = 5.0) -> EmpiricalCheck:
    """Test the CHSH statistical bound on empirical estimates.

    Passes when ``bell_value_hat - local_part_hat`` stays below
    ``sqrt(2) R_A R_B`` within ``z`` propagated standard errors (see the
    module docstring for the exact formula).  Only defined for the CHSH
    family: the other bounds need overlap geometry that outcome counts
    cannot estimate.
    """
    if estimates.family.name != "chsh":
        raise ValueError("empirical_check is defined for the chsh family only")
    if z < 0:
        raise ValueError(f"z must be non-negative, got {z}")
    coeff = coefficient_tensor(estimates.family).astype(float)
    m_a = estimates.means[0, :2]
    m_b = estimates.means[1, :2]
    r_a = float(estimates.rms_hats[0])
    r_b = float(estimates.rms_hats[1])
    local = float(m_a @ coeff @ m_b)
    bound = float(np.sqrt(2.0)) * r_a * r_b
    base = bound + local - estimates.bell_value_hat

    var = float(estimates.se_bell_value**2)
    for x in range(2):
        partial = float(coeff[x] @ m_b)
        if r_a > 1e-12:
            partial -= float(np.sqrt(2.0)) * r_b * m_a[x] / r_a
        var += partial**2 * float(estimates.se_means[0, x] ** 2)
    for y in range(2):
        partial = float(m_a @ coeff[:, y])
        if r_b > 1e-12:
            partial -= float(np.sqrt(2.0)) * r_a * m_b[y] / r_b
        var += partial**2 * float(estimates.se_means[1, y] ** 2)
    se = float(np.sqrt(var))
    margin = base + z * se
    return EmpiricalCheck(
        passed=bool(margin >= 0.0),
        margin=margin,
        bell_value_hat=estimates.bell_value_hat,
        local_part_hat=local,
        bound_hat=bound,
        se_margin=se,
        z=float(z),
    )


# ---------------------------------------------------------------------------
# serialization


def batch_to_csv(batch: SampleBatch) -> str:
    """Flat per-round table: round, one setting and one outcome per party."""
    n = batch.n_parties
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    header = (
        ["round"]
        + [f"setting_{p}" for p in range(n)]
        + [f"outcome_{p}" for p in range(n)]
    )
    buf.write(",".join(header) + "\n")
    for r in range(batch.rounds):
        cells = [str(r)]
        cells.extend(str(int(s)) for s in batch.round_settings[r])
        cells.extend(str(int(o)) for o in batch.round_outcomes[r])
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def estimates_to_json_dict(estimates: EmpiricalEstimates) -> dict:
    settings = estimates.family.settings_per_party
    return {
        "schema_version": SCHEMA_VERSION,
        "family": family_to_json_dict(estimates.family),
        "rounds": estimates.rounds,
        "means": [
            [float(estimates.means[p, s]) for s in range(settings[p])]
            for p in range(len(settings))
        ],
        "variances": [
            [float(estimates.variances[p, s]) for s in range(settings[p])]
            for p in range(len(settings))
        ],
        "se_means": [
            [float(estimates.se_means[p, s]) for s in range(settings[p])]
            for p in range(len(settings))
        ],
        "correlators": estimates.correlators.tolist(),
        "se_correlators": estimates.se_correlators.tolist(),
        "correlator_counts": estimates.correlator_counts.tolist(),
        "bell_value_hat": estimates.bell_value_hat,
        "se_bell_value": estimates.se_bell_value,
        "rms_hats": [float(v) for v in estimates.rms_hats],
    }


def estimates_from_json_dict(node: dict) -> dict:
    """Light validation read-back of an estimates document (as plain dict)."""
    if node.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {node.get('schema_version')!r}")
    family_from_json_dict(node["family"])
    return node
