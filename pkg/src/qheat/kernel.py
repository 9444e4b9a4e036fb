"""Dissipative superoperator construction.

The kernel K_{pp',qq'} of one reservoir acts on density matrices
flattened row-major, index (p, p') -> p*N + p'. Both modes evaluate the
Born-approximation kernel

    K_{pp',qq'} = - delta_{p'q'} 1/2 sum_{ab,l} S^a_{pl}  S^b_{lq}  D^{ab}(E_pl)  [E_pl + E_lq = 0]
                  - delta_{pq}   1/2 sum_{ab,l} S^a_{q'l} S^b_{lp'} D^{ab}(E_p'l) [E_q'l + E_lp' = 0]
                  + 1/2 sum_{ab} S^b_{pq} S^a_{q'p'} (D^{ab}(E_q'p') + D^{ab}(E_qp))

with E_pq = E_p - E_q, D^{ab} the bath correlation, and [x = 0] a
Kronecker test with a tolerance scaled to the energy spread. The bracket
on the two level-sum (decay) terms applies in both modes; since the
intermediate level l drops out of those brackets, they reduce the
level sums to the frequency-diagonal part whenever the spectrum is
nondegenerate. The transfer term distinguishes the modes: redfield
keeps its full frequency content, lindblad multiplies in the secular
(rotating wave) constraint [E_pq + E_q'p' = 0] there as well. The full
secular projection makes the generator a proper quantum dynamical
semigroup generator; redfield mode keeps trace and hermiticity but not
positivity, and its surviving non-secular transfer elements couple the
populations to the coherences of near-degenerate level pairs.

Kernel builds are pure functions over immutable inputs and may run
concurrently over disjoint parameter points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bath import BathSpec, bath_correlation
from .system import SystemSpec

__all__ = [
    "LINDBLAD",
    "MODES",
    "NearDegeneracyError",
    "REDFIELD",
    "SuperKernel",
    "build_kernel",
    "check_trace_condition",
    "combine_kernels",
    "degeneracy_tolerance",
    "pair_index",
]

REDFIELD = "redfield"
LINDBLAD = "lindblad"
MODES = (REDFIELD, LINDBLAD)

TRACE_TOL = 1e-12


class NearDegeneracyError(ValueError):
    """Two distinct level energies (either mode) or transition
    frequencies (lindblad mode) sit within the secular tolerance of each
    other, so the Kronecker constraints of the kernel are ambiguous:
    merging or splitting them is a modelling decision, not a numerical
    one."""


def pair_index(dim: int, p: int, q: int) -> int:
    """Flat row-major index of the ordered level pair (p, q)."""
    return p * dim + q


def degeneracy_tolerance(levels) -> float:
    """Absolute tolerance for 'equal energy' tests, scaled to the spectrum.

    Transition energies here come from closed-form diagonalisations, so
    the tolerance only has to absorb float rounding, not model error.
    """
    scale = max(abs(float(e)) for e in levels)
    return max(1e-9 * scale, 1e-12)


@dataclass(frozen=True, eq=False)
class SuperKernel:
    """Dense dissipative kernel of one reservoir (or a sum of reservoirs).

    data is the (N^2, N^2) complex matrix over flattened pair indices;
    row (p, p'), column (q, q'). Immutable after construction.
    """

    dim: int
    data: np.ndarray
    mode: str
    reservoir: str

    def __post_init__(self):
        d2 = self.dim * self.dim
        data = np.array(self.data, dtype=complex)
        if data.shape != (d2, d2):
            raise ValueError(f"kernel data must be {d2}x{d2}, got {data.shape}")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    def entry(self, p: int, pp: int, q: int, qp: int) -> complex:
        """K_{(p,pp),(q,qp)}."""
        return complex(self.data[pair_index(self.dim, p, pp),
                                 pair_index(self.dim, q, qp)])


def _reject_near_degenerate(system: SystemSpec, reservoir: str, eps: float,
                            include_frequencies: bool):
    checks = [(sorted(set(system.levels)), "level energies")]
    if include_frequencies:
        s1 = system.couplings[reservoir]
        freqs = sorted({system.levels[p] - system.levels[q]
                        for p, q in zip(*np.nonzero(s1))})
        checks.append((freqs, "transition frequencies"))
    for values, what in checks:
        for a, b in zip(values, values[1:]):
            if b - a <= eps:
                raise NearDegeneracyError(
                    f"distinct {what} {a:g} and {b:g} differ by {b - a:g}, "
                    f"inside the secular tolerance {eps:g}")


def build_kernel(system: SystemSpec, bath: BathSpec, reservoir: str,
                 mode: str) -> SuperKernel:
    """Dissipative kernel of one reservoir in Redfield or Lindblad mode.

    Both modes constrain the two level-sum terms to their energy
    conserving part; lindblad mode additionally applies the secular
    constraint to the transfer term (see the module docstring).

    The bath correlation is only evaluated where the coupling matrix
    elements are nonzero, which keeps every query at a finite transition
    frequency and lets tabulated spectral densities list only the
    frequencies the model actually uses.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if reservoir not in system.couplings:
        raise KeyError(
            f"system has no reservoir {reservoir!r}; have {sorted(system.couplings)}")
    n = system.dim
    E = system.levels
    s = {1: system.s_op(reservoir, 1), 2: system.s_op(reservoir, 2)}
    secular = mode == LINDBLAD
    eps = degeneracy_tolerance(E)
    _reject_near_degenerate(system, reservoir, eps,
                            include_frequencies=secular)

    channels = ((1, 2), (2, 1))     # (1,1) and (2,2) correlations vanish
    data = np.zeros((n * n, n * n), dtype=complex)
    for p in range(n):
        for pp in range(n):
            row = pair_index(n, p, pp)
            for q in range(n):
                for qp in range(n):
                    val = 0j
                    if pp == qp:
                        acc = 0j
                        for l in range(n):
                            if abs((E[p] - E[l]) + (E[l] - E[q])) > eps:
                                continue
                            for a, b in channels:
                                prod = s[a][p, l] * s[b][l, q]
                                if prod != 0:
                                    acc += prod * bath_correlation(bath, a, b, E[p] - E[l])
                        val -= 0.5 * acc
                    if p == q:
                        acc = 0j
                        for l in range(n):
                            if abs((E[qp] - E[l]) + (E[l] - E[pp])) > eps:
                                continue
                            for a, b in channels:
                                prod = s[a][qp, l] * s[b][l, pp]
                                if prod != 0:
                                    acc += prod * bath_correlation(bath, a, b, E[pp] - E[l])
                        val -= 0.5 * acc
                    if not (secular and abs((E[p] - E[q]) + (E[qp] - E[pp])) > eps):
                        acc = 0j
                        for a, b in channels:
                            prod = s[b][p, q] * s[a][qp, pp]
                            if prod != 0:
                                acc += prod * (bath_correlation(bath, a, b, E[qp] - E[pp])
                                               + bath_correlation(bath, a, b, E[q] - E[p]))
                        val += 0.5 * acc
                    data[row, pair_index(n, q, qp)] = val
    return SuperKernel(dim=n, data=data, mode=mode, reservoir=str(reservoir))


def check_trace_condition(K: SuperKernel) -> float:
    """Largest per-column violation of sum_p K_{(p,p),(q,q')} = 0.

    Zero (to rounding) for every kernel built here; the probability
    leaving one level must enter the others.
    """
    n = K.dim
    pop_rows = [pair_index(n, p, p) for p in range(n)]
    col_sums = K.data[pop_rows, :].sum(axis=0)
    return float(np.max(np.abs(col_sums)))


def combine_kernels(kernels, allow_mixed_modes: bool = False) -> SuperKernel:
    """Entrywise sum of per-reservoir kernels of equal dimension.

    Mixing Redfield and Lindblad kernels is almost always a modelling
    mistake, so it is refused unless allow_mixed_modes is set, and warned
    about even then.
    """
    kernels = list(kernels)
    if not kernels:
        raise ValueError("need at least one kernel")
    dim = kernels[0].dim
    for k in kernels[1:]:
        if k.dim != dim:
            raise ValueError(f"kernel dimensions differ: {dim} vs {k.dim}")
    modes = {k.mode for k in kernels}
    if len(modes) > 1:
        if not allow_mixed_modes:
            raise ValueError(
                f"refusing to combine mixed modes {sorted(modes)}; "
                "pass allow_mixed_modes=True to override")
        warnings.warn("combining kernels of mixed modes", stacklevel=2)
    data = kernels[0].data.copy()
    for k in kernels[1:]:
        data += k.data
    mode = kernels[0].mode if len(modes) == 1 else "mixed"
    return SuperKernel(dim=dim, data=data, mode=mode,
                       reservoir="+".join(k.reservoir for k in kernels))
