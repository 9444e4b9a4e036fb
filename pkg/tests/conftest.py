import pytest

from qheat import (BathSpec, assemble_liouvillian, build_kernel,
                   combine_kernels, make_coupled_qubits, make_single_qubit,
                   reservoir_current, solve_steady_state)


def _run_pipeline(system, mode, g_of, t_of):
    kernels = {}
    for label in system.reservoirs:
        bath = BathSpec(temperature=t_of[label], spectral_density=g_of[label],
                        label=label)
        kernels[label] = build_kernel(system, bath, label, mode)
    liou = assemble_liouvillian(system, combine_kernels(list(kernels.values())))
    rho = solve_steady_state(liou)
    currents = {label: reservoir_current(system, kernels[label], rho)
                for label in kernels}
    return rho, currents, kernels, liou


@pytest.fixture
def single_pipeline():
    """kernel build -> nullspace solve -> currents, for the single qubit."""
    def run(omega0, ga, gb, ta, tb, mode="lindblad"):
        system = make_single_qubit(omega0)
        return _run_pipeline(system, mode, {"A": ga, "B": gb},
                             {"A": ta, "B": tb})
    return run


@pytest.fixture
def coupled_pipeline():
    """Same pipeline for the coupled pair; per-reservoir couplings allowed."""
    def run(omega1, omega2, lam, ga, gb, ta, tb, mode="lindblad"):
        system, _ = make_coupled_qubits(omega1, omega2, lam)
        return _run_pipeline(system, mode, {"A": ga, "B": gb},
                             {"A": ta, "B": tb})
    return run
