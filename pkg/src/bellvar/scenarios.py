"""Bell scenarios: dichotomic qubit observables, expression tensors, operators.

A scenario is a table of single-qubit dichotomic observables, one list per
party.  A Bell expression (CHSH, chained, Mermin-Klyshko) is carried as a
single integer coefficient tensor over joint setting choices; the same
tensor drives operator construction, report assembly, the see-saw
optimizer, local-hidden-variable enumeration and the Monte Carlo
estimator, so there is exactly one source of truth per family.

Families:

* ``chsh``: two parties, two settings each, coefficients
  ``[[+1, +1], [+1, -1]]``.
* ``chained(n)``: two parties, ``n`` settings each, the cyclic expression
  ``<A0 B0> - <A0 B_{n-1}> + sum_k (<A_k B_{k-1}> + <A_k B_k>)``.
* ``mk(n)``: ``n`` parties, two settings each, built by the recursion
  ``B_n = B_k (B_{n-k} + B_{n-k}') + B_k' (B_{n-k} - B_{n-k}')`` on
  disjoint site blocks (base case: the two site observables).  Inner
  blocks always split at 1; the exposed ``split_k`` applies to the top
  level only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DIM_CAP,
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_hermitian,
    as_ket,
    is_dichotomic,
    tensor_product,
)

__all__ = [
    "SCHEMA_VERSION",
    "MK_MAX_PARTIES",
    "LHV_ENUMERATION_CAP_BITS",
    "Scenario",
    "FamilySpec",
    "MKOperatorPair",
    "chsh_family",
    "chained_family",
    "mk_family",
    "bloch_observable",
    "bloch_of",
    "chsh_coefficients",
    "chained_coefficients",
    "mk_coefficient_pair",
    "coefficient_tensor",
    "operator_from_tensor",
    "bell_operator",
    "chsh_operator",
    "chained_operator",
    "mk_operators",
    "lhv_max",
    "uniform_bloch",
    "random_scenario",
    "bell_state",
    "ghz_state",
    "scenario_to_json_dict",
    "scenario_from_json_dict",
    "family_to_json_dict",
    "family_from_json_dict",
    "load_scenario_file",
]

SCHEMA_VERSION = 1
MK_MAX_PARTIES = 8
LHV_ENUMERATION_CAP_BITS = 24

_DICHOTOMY_ATOL = 1e-10
_BLOCH_NORM_ATOL = 1e-9


# ---------------------------------------------------------------------------
# observables and scenarios


def bloch_observable(vec) -> np.ndarray:
    """Dichotomic qubit observable ``v . sigma`` from a unit Bloch vector."""
    v = np.asarray(vec, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > _BLOCH_NORM_ATOL:
        raise ValueError(f"Bloch vector is not unit length: |v| = {norm!r}")
    return v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z


def bloch_of(op: np.ndarray) -> np.ndarray:
    """Bloch components ``(tr(op sigma_j)/2)`` of a traceless 2x2 observable."""
    return np.array(
        [
            float(np.trace(op @ SIGMA_X).real) / 2.0,
            float(np.trace(op @ SIGMA_Y).real) / 2.0,
            float(np.trace(op @ SIGMA_Z).real) / 2.0,
        ]
    )


@dataclass(frozen=True)
class Scenario:
    """Per-party tables of single-qubit dichotomic observables.

    ``observables[p][s]`` is the 2x2 Hermitian measured by party ``p``
    under setting ``s``.  Dichotomy (``X @ X = I`` within 1e-10) is
    enforced at construction.  ``bloch[p][s]`` optionally remembers the
    Bloch vector a matrix was built from, so files round-trip unchanged.
    """

    observables: tuple[tuple[np.ndarray, ...], ...]
    bloch: tuple[tuple[np.ndarray | None, ...], ...] | None = field(default=None)

    def __post_init__(self):
        if len(self.observables) == 0:
            raise ValueError("scenario needs at least one party")
        checked = []
        for p, row in enumerate(self.observables):
            if len(row) == 0:
                raise ValueError(f"party {p} has no settings")
            ops = []
            for s, raw in enumerate(row):
                op = as_hermitian(raw)
                if op.shape != (2, 2):
                    raise ValueError(f"observable ({p},{s}) must be 2x2, got {op.shape}")
                if not is_dichotomic(op, _DICHOTOMY_ATOL):
                    raise ValueError(f"observable ({p},{s}) is not dichotomic")
                op = op.copy()
                op.setflags(write=False)
                ops.append(op)
            checked.append(tuple(ops))
        object.__setattr__(self, "observables", tuple(checked))
        if self.bloch is not None:
            if len(self.bloch) != len(self.observables) or any(
                len(a) != len(b) for a, b in zip(self.bloch, self.observables)
            ):
                raise ValueError("bloch table shape does not match observables")

    @property
    def n_parties(self) -> int:
        return len(self.observables)

    @property
    def settings_per_party(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.observables)


def from_bloch_table(table) -> Scenario:
    """Scenario from nested Bloch vectors, one list per party."""
    obs = tuple(tuple(bloch_observable(v) for v in row) for row in table)
    blochs = tuple(tuple(np.asarray(v, dtype=float) for v in row) for row in table)
    return Scenario(observables=obs, bloch=blochs)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    """Which Bell expression is in play.

    ``n`` counts settings per party for ``chained`` and parties for
    ``mk``; it is fixed at 2 for ``chsh``.  ``split_k`` is the top-level
    block split of the MK recursion and is ignored by the other families.
    """

    name: str
    n: int = 2
    split_k: int = 1

    def __post_init__(self):
        if self.name == "chsh":
            if self.n != 2:
                raise ValueError("chsh is a 2-setting family")
        elif self.name == "chained":
            if self.n < 2:
                raise ValueError(f"chained needs n >= 2 settings, got {self.n}")
        elif self.name == "mk":
            if not 2 <= self.n <= MK_MAX_PARTIES:
                raise ValueError(f"mk supports 2..{MK_MAX_PARTIES} parties, got {self.n}")
            if not 1 <= self.split_k <= self.n - 1:
                raise ValueError(f"mk split must satisfy 1 <= k <= n-1, got {self.split_k}")
        else:
            raise ValueError(f"unknown family {self.name!r}")

    @property
    def n_parties(self) -> int:
        return self.n if self.name == "mk" else 2

    @property
    def settings_per_party(self) -> tuple[int, ...]:
        if self.name == "chsh":
            return (2, 2)
        if self.name == "chained":
            return (self.n, self.n)
        return (2,) * self.n


def chsh_family() -> FamilySpec:
    return FamilySpec(name="chsh", n=2)


def chained_family(n: int) -> FamilySpec:
    return FamilySpec(name="chained", n=n)


def mk_family(n: int, split_k: int = 1) -> FamilySpec:
    return FamilySpec(name="mk", n=n, split_k=split_k)


def check_family_scenario(family: FamilySpec, scenario: Scenario) -> None:
    """Raise unless the scenario's shape matches the family's."""
    expected = family.settings_per_party
    if scenario.settings_per_party != expected:
        raise ValueError(
            f"scenario shape {scenario.settings_per_party} does not match "
            f"family {family.name} (expected {expected})"
        )


# ---------------------------------------------------------------------------
# coefficient tensors


def chsh_coefficients() -> np.ndarray:
    return np.array([[1, 1], [1, -1]], dtype=np.int64)


def chained_coefficients(n: int) -> np.ndarray:
    """Cyclic two-party expression over n settings per side.

    Row x holds the coefficients of ``A_x B_y``: row 0 pairs with settings
    0 and n-1 (the latter with a minus sign), row k >= 1 with k-1 and k.
    At n = 2 this is CHSH with the roles of B's second setting negated.
    """
    if n < 2:
        raise ValueError(f"chained expression needs n >= 2, got {n}")
    coeff = np.zeros((n, n), dtype=np.int64)
    coeff[0, 0] = 1
    coeff[0, n - 1] = -1
    for k in range(1, n):
        coeff[k, k - 1] = 1
        coeff[k, k] = 1
    return coeff


def mk_coefficient_pair(n: int, split_k: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient tensors of the MK pair (B_n, B_n'), shape (2,)*n.

    Index p of the tensor selects party p's setting (0 for the first site
    observable, 1 for the primed one).  The recursion splits the sites
    into blocks 1..k and k+1..n; inner blocks always use split 1.
    """
    if n < 1 or n > MK_MAX_PARTIES:
        raise ValueError(f"mk recursion supports 1..{MK_MAX_PARTIES} sites, got {n}")
    if n == 1:
        return np.array([1, 0], dtype=np.int64), np.array([0, 1], dtype=np.int64)
    if not 1 <= split_k <= n - 1:
        raise ValueError(f"mk split must satisfy 1 <= k <= n-1, got {split_k}")
    head, head_p = mk_coefficient_pair(split_k, 1)
    tail, tail_p = mk_coefficient_pair(n - split_k, 1)
    b = np.multiply.outer(head, tail + tail_p) + np.multiply.outer(head_p, tail - tail_p)
    b_prime = np.multiply.outer(head + head_p, tail_p) - np.multiply.outer(head - head_p, tail)
    return b, b_prime


def coefficient_tensor(family: FamilySpec) -> np.ndarray:
    if family.name == "chsh":
        return chsh_coefficients()
    if family.name == "chained":
        return chained_coefficients(family.n)
    return mk_coefficient_pair(family.n, family.split_k)[0]


# ---------------------------------------------------------------------------
# operators


def operator_from_tensor(coeff: np.ndarray, observables) -> np.ndarray:
    """Bell operator ``sum_x coeff[x] (X_1 tensor ... tensor X_P)``.

    ``observables[p][s]`` supplies party p's operator under setting s;
    party p is tensor factor p (big-endian site order).
    """
    shape = tuple(len(row) for row in observables)
    if coeff.shape != shape:
        raise ValueError(f"coefficient shape {coeff.shape} does not match scenario {shape}")
    dim = 2 ** len(shape)
    if dim > DIM_CAP:
        raise ValueError(f"operator dimension {dim} exceeds cap {DIM_CAP}")
    out = np.zeros((dim, dim), dtype=complex)
    for idx in np.ndindex(*coeff.shape):
        c = coeff[idx]
        if c == 0:
            continue
        out += float(c) * tensor_product([observables[p][s] for p, s in enumerate(idx)])
    return out


def bell_operator(family: FamilySpec, scenario: Scenario) -> np.ndarray:
    """Full-space operator of the family's expression (B_n for mk)."""
    check_family_scenario(family, scenario)
    return operator_from_tensor(coefficient_tensor(family), scenario.observables)


def chsh_operator(a0, a1, b0, b1) -> np.ndarray:
    """CHSH operator ``A0 B0 + A0 B1 + A1 B0 - A1 B1`` on two qubits."""
    scen = Scenario(observables=((a0, a1), (b0, b1)))
    return operator_from_tensor(chsh_coefficients(), scen.observables)


def chained_operator(n: int, a_list, b_list) -> np.ndarray:
    """Cyclic n-setting two-party operator; reduces to CHSH at n = 2 under B1 -> -B1."""
    if len(a_list) != n or len(b_list) != n:
        raise ValueError(f"need exactly {n} observables per party")
    scen = Scenario(observables=(tuple(a_list), tuple(b_list)))
    return operator_from_tensor(chained_coefficients(n), scen.observables)


@dataclass(frozen=True)
class MKOperatorPair:
    """The MK operator and its partner on ``n`` qubits, plus split bookkeeping."""

    b: np.ndarray
    b_prime: np.ndarray
    n: int
    split_k: int

    def squared_traces(self) -> tuple[float, float]:
        """Measured traces of B^2 and B'^2 (recorded, not asserted against)."""
        tr = float(np.trace(self.b @ self.b).real)
        tr_p = float(np.trace(self.b_prime @ self.b_prime).real)
        return tr, tr_p


def mk_operators(n: int, site_pairs, split_k: int = 1) -> MKOperatorPair:
    """Build the MK pair from per-site (X, X') observables.

    ``site_pairs[i]`` is the (unprimed, primed) observable pair of site i.
    The pair satisfies B_n^2 = B_n'^2 for any split (checked in the test
    suite, not here).
    """
    if not 2 <= n <= MK_MAX_PARTIES:
        raise ValueError(f"mk supports 2..{MK_MAX_PARTIES} sites, got {n}")
    if len(site_pairs) != n:
        raise ValueError(f"need {n} site observable pairs, got {len(site_pairs)}")
    obs = tuple((pair[0], pair[1]) for pair in site_pairs)
    scen = Scenario(observables=obs)
    t, t_prime = mk_coefficient_pair(n, split_k)
    return MKOperatorPair(
        b=operator_from_tensor(t, scen.observables),
        b_prime=operator_from_tensor(t_prime, scen.observables),
        n=n,
        split_k=split_k,
    )


# ---------------------------------------------------------------------------
# local hidden variable maximum


def lhv_max(family: FamilySpec) -> float:
    """Exact deterministic-strategy maximum of the family's expression.

    Every assignment of +-1 outcomes to every (party, setting) is
    evaluated; the per-party strategy tables are contracted against the
    coefficient tensor, which enumerates all ``2**(sum of settings)``
    assignments without forming them one at a time.  Integer arithmetic
    throughout, so the result is exact.
    """
    coeff = coefficient_tensor(family)
    settings = family.settings_per_party
    total_bits = int(sum(settings))
    if total_bits > LHV_ENUMERATION_CAP_BITS:
        raise ValueError(
            f"enumeration size 2**{total_bits} exceeds cap 2**{LHV_ENUMERATION_CAP_BITS}"
        )
    value = coeff
    for n_settings in settings:
        rows = np.arange(2**n_settings)[:, None]
        strategies = 1 - 2 * ((rows >> np.arange(n_settings)) & 1)
        value = np.tensordot(value, strategies.astype(np.int64), axes=([0], [1]))
    return float(value.max())


# ---------------------------------------------------------------------------
# random instances and common states


def uniform_bloch(rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the Bloch sphere (normalized Gaussian triple)."""
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            return v / norm


def random_scenario(family: FamilySpec, rng: np.random.Generator) -> Scenario:
    """Scenario with independent uniform-Bloch observables everywhere."""
    table = [
        [uniform_bloch(rng) for _ in range(n_settings)]
        for n_settings in family.settings_per_party
    ]
    return from_bloch_table(table)


def bell_state() -> np.ndarray:
    """(|00> + |11>) / sqrt(2)."""
    return as_ket(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0))


def ghz_state(n: int) -> np.ndarray:
    """(|0...0> + |1...1>) / sqrt(2) on n qubits."""
    if n < 1 or 2**n > DIM_CAP:
        raise ValueError(f"site count {n} out of supported range")
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = 1.0 / np.sqrt(2.0)
    vec[-1] = 1.0 / np.sqrt(2.0)
    return as_ket(vec)


# ---------------------------------------------------------------------------
# JSON schema (scenario files)


def _observable_to_json(op: np.ndarray, bloch_vec: np.ndarray | None):
    if bloch_vec is not None:
        return {"bloch": [float(c) for c in bloch_vec]}
    return {
        "matrix": [[[float(entry.real), float(entry.imag)] for entry in row] for row in op]
    }


def _observable_from_json(node) -> tuple[np.ndarray, np.ndarray | None]:
    if not isinstance(node, dict):
        raise ValueError("observable entry must be an object")
    if "bloch" in node:
        vec = np.asarray(node["bloch"], dtype=float)
        return bloch_observable(vec), vec
    if "matrix" in node:
        raw = node["matrix"]
        mat = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in raw], dtype=complex
        )
        if mat.shape != (2, 2):
            raise ValueError(f"matrix observable must be 2x2, got {mat.shape}")
        return mat, None
    raise ValueError("observable entry needs a 'bloch' or 'matrix' key")


def family_to_json_dict(family: FamilySpec) -> dict:
    out = {"name": family.name, "n": family.n}
    if family.name == "mk":
        out["split_k"] = family.split_k
    return out


def family_from_json_dict(node) -> FamilySpec:
    if not isinstance(node, dict) or "name" not in node:
        raise ValueError("family entry needs a 'name' key")
    return FamilySpec(
        name=node["name"], n=int(node.get("n", 2)), split_k=int(node.get("split_k", 1))
    )


def scenario_to_json_dict(scenario: Scenario, family: FamilySpec | None = None) -> dict:
    parties = []
    for p, row in enumerate(scenario.observables):
        entries = []
        for s, op in enumerate(row):
            bloch_vec = None
            if scenario.bloch is not None:
                bloch_vec = scenario.bloch[p][s]
            entries.append(_observable_to_json(op, bloch_vec))
        parties.append({"observables": entries})
    out = {"schema_version": SCHEMA_VERSION, "parties": parties}
    if family is not None:
        out["family"] = family_to_json_dict(family)
    return out


def scenario_from_json_dict(node) -> tuple[Scenario, FamilySpec | None]:
    if not isinstance(node, dict):
        raise ValueError("scenario document must be a JSON object")
    version = node.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    if "parties" not in node or not isinstance(node["parties"], list):
        raise ValueError("scenario document needs a 'parties' list")
    obs_rows = []
    bloch_rows = []
    for party in node["parties"]:
        if not isinstance(party, dict) or "observables" not in party:
            raise ValueError("each party needs an 'observables' list")
        ops = []
        blochs = []
        for entry in party["observables"]:
            op, vec = _observable_from_json(entry)
            ops.append(op)
            blochs.append(vec)
        obs_rows.append(tuple(ops))
        bloch_rows.append(tuple(blochs))
    family = None
    if "family" in node:
        family = family_from_json_dict(node["family"])
    scenario = Scenario(observables=tuple(obs_rows), bloch=tuple(bloch_rows))
    return scenario, family


def load_scenario_file(path) -> tuple[Scenario, FamilySpec | None]:
    """Read and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            node = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed scenario file {path}: {exc}") from exc
    return scenario_from_json_dict(node)
