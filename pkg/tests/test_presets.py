"""Named saturating configurations."""

import numpy as np
import pytest

from bellvar.bounds import chained_report, chsh_report, mk_report, saturation_check
from bellvar.presets import PRESET_NAMES, preset


def test_preset_names_frozen():
    assert PRESET_NAMES == ("chsh-optimal", "chained-n", "mk-ghz")


def test_chsh_optimal_saturates():
    p = preset("chsh-optimal")
    assert p.family.name == "chsh"
    rep = chsh_report(p.scenario, p.state)
    assert rep.bell_value == pytest.approx(2.0 * np.sqrt(2.0), abs=1e-10)
    assert abs(rep.slack) <= 1e-10
    assert saturation_check(p.scenario, p.state).all_true()
    with pytest.raises(ValueError):
        preset("chsh-optimal", n=3)


def test_chained_preset_saturates_for_several_sizes():
    for n in (2, 3, 5, 7):
        p = preset("chained-n", n=n)
        assert p.family.n == n
        rep, _ = chained_report(n, p.scenario, p.state)
        assert rep.bell_value == pytest.approx(2 * n * np.cos(np.pi / (2 * n)), abs=1e-9)
        assert abs(rep.slack) <= 1e-9
    assert preset("chained-n").family.n == 3  # default size


def test_mk_ghz_preset_hits_quantum_maximum():
    for n in (2, 3, 4):
        p = preset("mk-ghz", n=n)
        rep = mk_report(n, p.scenario, p.state)
        assert rep.bell_value == pytest.approx(2.0 ** (1.5 * (n - 1)), abs=1e-8)
        assert rep.slack >= -1e-9
        # state is phase-fixed, so presets are fully deterministic
        idx = np.flatnonzero(np.abs(p.state) > 1e-12)[0]
        assert p.state[idx].real > 0
    assert preset("mk-ghz").family.n == 3


def test_unknown_preset_rejected():
    with pytest.raises(ValueError, match="available"):
        preset("best-one")
