"""Round sampling and plug-in estimation tests.

The estimator-consistency test sweeps many seeds on purpose: a z=5
acceptance band makes a statistical false alarm astronomically unlikely
(and the seeds are fixed anyway, so the run is deterministic).
"""

import dataclasses
import json

import numpy as np
import pytest

from bellvar.bounds import chsh_report, mk_report
from bellvar.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z
from bellvar.montecarlo import (
    EmpiricalCheck,
    UndersampledError,
    batch_to_csv,
    empirical_check,
    estimate,
    estimates_from_json_dict,
    estimates_to_json_dict,
    simulate_rounds,
)
from bellvar.scenarios import (
    SCHEMA_VERSION,
    Scenario,
    bell_state,
    chained_family,
    chsh_family,
    from_bloch_table,
    ghz_state,
    mk_family,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)
KET00 = np.array([1, 0, 0, 0], dtype=complex)


def optimal_instance():
    scen = from_bloch_table(
        [
            [[INV_SQRT2, 0, INV_SQRT2], [-INV_SQRT2, 0, INV_SQRT2]],
            [[0, 0, 1], [1, 0, 0]],
        ]
    )
    return scen, bell_state()


def test_batches_reproduce_bit_for_bit():
    scen, psi = optimal_instance()
    b1 = simulate_rounds(chsh_family(), scen, psi, rounds=5000, seed=99)
    b2 = simulate_rounds(chsh_family(), scen, psi, rounds=5000, seed=99)
    np.testing.assert_array_equal(b1.counts, b2.counts)
    np.testing.assert_array_equal(b1.round_settings, b2.round_settings)
    np.testing.assert_array_equal(b1.round_outcomes, b2.round_outcomes)
    assert batch_to_csv(b1) == batch_to_csv(b2)
    b3 = simulate_rounds(chsh_family(), scen, psi, rounds=5000, seed=100)
    assert not np.array_equal(b1.counts, b3.counts)


def test_batch_bookkeeping():
    scen, psi = optimal_instance()
    batch = simulate_rounds(chsh_family(), scen, psi, rounds=4000, seed=1)
    assert batch.counts.sum() == 4000
    assert batch.counts.shape == (4, 4)
    assert batch.round_settings.shape == (4000, 2)
    assert batch.round_outcomes.shape == (4000, 2)
    assert batch.round_settings.max() <= 1
    assert set(np.unique(batch.round_outcomes)) <= {-1, 1}
    # per-round records and the count table tell the same story
    combo = batch.round_settings[:, 0] * 2 + batch.round_settings[:, 1]
    bits = (1 - batch.round_outcomes) // 2
    outcome = bits[:, 0] * 2 + bits[:, 1]
    rebuilt = np.zeros_like(batch.counts)
    np.add.at(rebuilt, (combo, outcome), 1)
    np.testing.assert_array_equal(rebuilt, batch.counts)


def test_deterministic_state_gives_deterministic_outcomes():
    scen = from_bloch_table([[[0, 0, 1], [0, 0, 1]], [[0, 0, 1], [0, 0, 1]]])
    batch = simulate_rounds(chsh_family(), scen, KET00, rounds=500, seed=3)
    assert np.all(batch.round_outcomes == 1)
    est = estimate(batch)
    np.testing.assert_allclose(est.means[:, :2], 1.0, atol=0)
    np.testing.assert_allclose(est.correlators, 1.0, atol=0)
    np.testing.assert_allclose(est.variances, 0.0, atol=0)
    assert est.bell_value_hat == pytest.approx(2.0)
    assert est.se_bell_value == 0.0


def test_plugin_variance_identity():
    scen, psi = optimal_instance()
    batch = simulate_rounds(chsh_family(), scen, psi, rounds=20000, seed=7)
    est = estimate(batch)
    np.testing.assert_allclose(est.variances, 1.0 - est.means**2, atol=1e-12)
    for p in range(2):
        want = np.sqrt(est.variances[p, :2].sum())
        assert est.rms_hats[p] == pytest.approx(want, abs=1e-12)
    np.testing.assert_array_equal(est.correlator_counts.reshape(-1), batch.counts.sum(axis=1))


def test_estimates_track_exact_values():
    # 60 seeds x 1e5 rounds against the exact report, all within 5 SE
    scen, psi = optimal_instance()
    exact = chsh_report(scen, psi)
    for seed in range(60):
        batch = simulate_rounds(chsh_family(), scen, psi, rounds=100_000, seed=seed)
        est = estimate(batch)
        assert abs(est.bell_value_hat - exact.bell_value) <= 5.0 * est.se_bell_value
        # every correlator individually too
        for x in range(2):
            for y in range(2):
                want = INV_SQRT2 if (x, y) != (1, 1) else -INV_SQRT2
                se = est.se_correlators[x, y]
                assert abs(est.correlators[x, y] - want) <= 5.0 * se


def test_estimate_rejects_undersampled_batches():
    scen, psi = optimal_instance()
    batch = simulate_rounds(chsh_family(), scen, psi, rounds=3, seed=0)
    with pytest.raises(UndersampledError, match="observed"):
        estimate(batch)


def test_simulate_rounds_validation():
    scen, psi = optimal_instance()
    with pytest.raises(ValueError):
        simulate_rounds(chsh_family(), scen, psi, rounds=0, seed=0)
    with pytest.raises(ValueError):
        simulate_rounds(chsh_family(), scen, ghz_state(3), rounds=10, seed=0)
    with pytest.raises(ValueError):
        simulate_rounds(chained_family(3), scen, psi, rounds=10, seed=0)


def test_csv_layout():
    scen, psi = optimal_instance()
    batch = simulate_rounds(chsh_family(), scen, psi, rounds=50, seed=5)
    text = batch_to_csv(batch)
    lines = text.strip().split("\n")
    assert lines[0] == f"# schema_version: {SCHEMA_VERSION}"
    assert lines[1] == "round,setting_0,setting_1,outcome_0,outcome_1"
    assert len(lines) == 52
    first = lines[2].split(",")
    assert first[0] == "0"
    assert int(first[1]) == batch.round_settings[0, 0]
    assert int(first[3]) == batch.round_outcomes[0, 0]


def test_empirical_check_passes_at_the_optimum():
    scen, psi = optimal_instance()
    batch = simulate_rounds(chsh_family(), scen, psi, rounds=50_000, seed=11)
    check = empirical_check(estimate(batch))
    assert isinstance(check, EmpiricalCheck)
    assert check.passed
    assert check.margin >= 0.0
    assert check.z == 5.0
    assert check.bound_hat == pytest.approx(2.0 * np.sqrt(2.0), abs=0.05)
    assert check.local_part_hat == pytest.approx(0.0, abs=0.05)


def test_empirical_check_rejects_fabricated_values():
    # an impossible Bell value with honest errors must fail the test
    scen, psi = optimal_instance()
    est = estimate(simulate_rounds(chsh_family(), scen, psi, rounds=50_000, seed=11))
    fake = dataclasses.replace(est, bell_value_hat=4.0)
    check = empirical_check(fake)
    assert not check.passed
    assert check.margin < 0.0


def test_empirical_check_family_and_z_validation():
    scen = from_bloch_table(
        [[[0, 0, 1], [1, 0, 0], [0, 1, 0]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]]]
    )
    batch = simulate_rounds(chained_family(3), scen, bell_state(), rounds=9000, seed=2)
    est = estimate(batch)
    with pytest.raises(ValueError, match="chsh"):
        empirical_check(est)
    scen2, psi = optimal_instance()
    est2 = estimate(simulate_rounds(chsh_family(), scen2, psi, rounds=5000, seed=1))
    with pytest.raises(ValueError):
        empirical_check(est2, z=-1.0)


def test_zero_z_reduces_to_raw_margin():
    scen, psi = optimal_instance()
    est = estimate(simulate_rounds(chsh_family(), scen, psi, rounds=50_000, seed=13))
    raw = empirical_check(est, z=0.0)
    wide = empirical_check(est, z=5.0)
    assert wide.margin == pytest.approx(raw.margin + 5.0 * raw.se_margin, abs=1e-12)


def test_three_party_sampling():
    scen = Scenario(observables=tuple(((SIGMA_X, SIGMA_Y),) * 3))
    from bellvar.linalg import top_eigenpair
    from bellvar.scenarios import mk_operators

    _, state = top_eigenpair(mk_operators(3, [(SIGMA_X, SIGMA_Y)] * 3).b)
    fam = mk_family(3)
    batch = simulate_rounds(fam, scen, state, rounds=80_000, seed=21)
    assert batch.counts.shape == (8, 8)
    est = estimate(batch)
    assert est.rms_hats.shape == (3,)
    exact = mk_report(3, scen, state)
    # the weighted correlators are deterministic (+-1) in this state, so
    # the standard error vanishes; allow rounding on top of the 5 SE band
    assert abs(est.bell_value_hat - exact.bell_value) <= 5.0 * est.se_bell_value + 1e-12


def test_estimates_json_roundtrip():
    scen, psi = optimal_instance()
    est = estimate(simulate_rounds(chsh_family(), scen, psi, rounds=5000, seed=17))
    doc = estimates_to_json_dict(est)
    back = estimates_from_json_dict(json.loads(json.dumps(doc)))
    assert back["bell_value_hat"] == est.bell_value_hat
    assert back["rounds"] == 5000
    assert np.asarray(back["correlators"]).shape == (2, 2)
    with pytest.raises(ValueError, match="schema_version"):
        estimates_from_json_dict(dict(doc, schema_version=None))
