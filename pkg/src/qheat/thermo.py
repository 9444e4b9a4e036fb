"""Heat currents and thermodynamic law checks.

The mean heat current from reservoir R into the system is read off the
steady state through that reservoir's kernel alone:

    q^R = sum_n E_n sum_{qq'} K^R_{(n,n),(q,q')} rho_{qq'}

Positive q^R means energy flowing from reservoir R into the system. For
two reservoirs the steady state forces q^A + q^B = 0 (first law), and
with both couplings active heat runs from the hot reservoir to the cold
one (second law). Currents are always computed from the joint steady
state through per-reservoir kernels, never from local equilibrium
assumptions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import SuperKernel, pair_index
from .steady import DensityMatrix
from .system import SystemSpec

__all__ = [
    "CurrentConsistencyError",
    "CurrentReport",
    "law_checks",
    "reservoir_current",
]

IMAG_TOL = 1e-10

SECOND_LAW_PASS = "pass"
SECOND_LAW_FAIL = "fail"
SECOND_LAW_NA = "not-applicable"


class CurrentConsistencyError(RuntimeError):
    """The current picked up an imaginary part, which cannot happen for a
    steady state of a hermiticity-preserving kernel; the inputs are
    inconsistent or corrupted."""


def reservoir_current(system: SystemSpec, K_R: SuperKernel,
                      rho: DensityMatrix) -> float:
    """Heat current q^R from one reservoir, given the joint steady state.

    rho must be a steady state of the combined generator; that is the
    caller's responsibility and is not re-verified here.
    """
    n = system.dim
    if K_R.dim != n:
        raise ValueError(f"kernel dim {K_R.dim} does not match system dim {n}")
    if rho.dim != n:
        raise ValueError(f"state dim {rho.dim} does not match system dim {n}")
    vec = rho.entries.reshape(-1)
    q = 0j
    for lvl in range(n):
        q += system.levels[lvl] * (K_R.data[pair_index(n, lvl, lvl), :] @ vec)
    if abs(q.imag) > IMAG_TOL:
        raise CurrentConsistencyError(
            f"current has imaginary part {q.imag:g}; state and kernel are "
            "inconsistent")
    return float(q.real)


@dataclass(frozen=True)
class CurrentReport:
    """Per-reservoir currents with first- and second-law bookkeeping."""

    currents: tuple                  # (label, temperature, current) triples
    conservation_residual: float     # |q_1 + q_2|
    second_law: str                  # pass / fail / not-applicable


def law_checks(report_inputs) -> CurrentReport:
    """First- and second-law verdicts for a two-reservoir steady state.

    report_inputs: two (label, temperature, current) triples. The
    conservation residual is |q_1 + q_2|; it stays below 1e-10 for any
    true steady state. The second-law verdict compares the direction of
    flow with the temperature ordering: pass when q_1 (T_1 - T_2) >= 0,
    fail otherwise, not-applicable in equilibrium (T_1 = T_2, where both
    currents vanish and no direction is defined).
    """
    items = tuple((str(l), float(t), float(q)) for l, t, q in report_inputs)
    if len(items) != 2:
        raise ValueError(f"need exactly two reservoirs, got {len(items)}")
    (_, t1, q1), (_, t2, q2) = items
    residual = abs(q1 + q2)
    if t1 == t2:
        verdict = SECOND_LAW_NA
    elif q1 * (t1 - t2) >= 0:
        verdict = SECOND_LAW_PASS
    else:
        verdict = SECOND_LAW_FAIL
    return CurrentReport(currents=items, conservation_residual=residual,
                         second_law=verdict)
