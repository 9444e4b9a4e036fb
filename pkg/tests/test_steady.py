import numpy as np
import pytest

from qheat import (BathSpec, DegenerateSteadyStateError, DensityMatrix,
                   IntegrationError, Liouvillian, assemble_liouvillian,
                   build_kernel, combine_kernels, coupled_rates, evolve,
                   gibbs_state, make_coupled_qubits, make_single_qubit,
                   pair_index, planck_occupation, positivity_report,
                   solve_steady_state, svd_steady_state)


def _liouvillian(system, g_of, t_of, mode):
    kernels = [build_kernel(system,
                            BathSpec(temperature=t_of[r], spectral_density=g_of[r],
                                     label=r), r, mode)
               for r in system.reservoirs]
    return assemble_liouvillian(system, combine_kernels(kernels))


def test_liouvillian_phase_and_population_rows():
    omega0, ga, gb, ta, tb = 1.0, 1.0, 0.5, 2.0, 1.0
    system = make_single_qubit(omega0)
    L = _liouvillian(system, {"A": ga, "B": gb}, {"A": ta, "B": tb}, "lindblad")
    na = planck_occupation(omega0, ta)
    nb = planck_occupation(omega0, tb)
    gamma = 0.5 * (ga * (1 + 2 * na) + gb * (1 + 2 * nb))
    i10 = pair_index(2, 1, 0)
    i01 = pair_index(2, 0, 1)
    assert abs(L.matrix[i10, i10] - (-1j * omega0 - gamma)) < 1e-14
    assert abs(L.matrix[i01, i01] - (+1j * omega0 - gamma)) < 1e-14
    # population rows carry no phase term
    i00 = pair_index(2, 0, 0)
    assert L.matrix[i00, i00] == pytest.approx(-(ga * na + gb * nb), rel=1e-14)
    assert L.reservoirs == ("A", "B")


def test_single_qubit_steady_state_reference(single_pipeline):
    rho, currents, _, _ = single_pipeline(1.0, 1.0, 1.0, 2.0, 1.0)
    assert abs(rho.populations[1] - 0.3399216660850968) < 1e-12
    assert abs(rho.populations.sum() - 1.0) < 1e-13
    assert np.max(np.abs(rho.coherences)) < 1e-14
    assert abs(rho.trace - 1.0) < 1e-13
    rho.validate()


def test_solver_agrees_with_svd_path(single_pipeline, coupled_pipeline):
    cases = []
    _, _, _, liou = single_pipeline(1.0, 1.0, 1.0, 2.0, 1.0)
    cases.append(liou)
    _, _, _, liou = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 1.5, 1.0)
    cases.append(liou)
    _, _, _, liou = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 10.5, 0.5,
                                     mode="redfield")
    cases.append(liou)
    for L in cases:
        direct = solve_steady_state(L)
        via_svd = svd_steady_state(L)
        assert np.max(np.abs(direct.entries - via_svd.entries)) < 1e-10


def test_equilibrium_steady_state_is_gibbs(single_pipeline, coupled_pipeline):
    t = 0.8
    thermal2 = gibbs_state(make_single_qubit(1.0).levels, t)
    thermal4 = gibbs_state(make_coupled_qubits(1.0, 2.0, 0.5)[0].levels, t)
    for mode in ("lindblad", "redfield"):
        rho, _, _, _ = single_pipeline(1.0, 1.0, 1.0, t, t, mode=mode)
        assert np.max(np.abs(rho.entries - thermal2.entries)) < 1e-12
        rho, _, _, _ = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, t, t, mode=mode)
        assert np.max(np.abs(rho.entries - thermal4.entries)) < 1e-12


def test_population_block_solves_alone(coupled_pipeline):
    """The secular generator never mixes populations and coherences, so the
    4x4 population block must reproduce the full solve's diagonal."""
    rho, _, _, liou = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 1.5, 1.0)
    pop = [pair_index(4, p, p) for p in range(4)]
    block = liou.matrix[np.ix_(pop, pop)].copy()
    block[0, :] = 1.0
    rhs = np.zeros(4, dtype=complex)
    rhs[0] = 1.0
    pops = np.linalg.solve(block, rhs)
    assert np.max(np.abs(pops.imag)) < 1e-14
    assert np.max(np.abs(pops.real - rho.populations)) < 1e-10


def test_redfield_six_state_restriction():
    """The non-secular coupled-qubit generator closes on the four
    populations plus the central coherence pair; its restriction there is
    fixed entirely by the transition rates, the coherence splitting and
    the transfer strength k."""
    w1, w2, lam, g, ta, tb = 1.0, 2.0, 0.5, 1.0, 1.5, 1.0
    system, _ = make_coupled_qubits(w1, w2, lam)
    L = _liouvillian(system, {"A": g, "B": g}, {"A": ta, "B": tb}, "redfield")
    r = coupled_rates(w1, w2, lam, g, g, ta, tb)
    s1, s2, s3, s4 = r.s
    z, e, k = r.s_sum, r.e, r.k
    expected = np.array([
        [-(s3 + s4), s2, s1, 0, -k, -k],
        [s4, -(s2 + s3), 0, s1, 0, 0],
        [s3, 0, -(s1 + s4), s2, 0, 0],
        [0, s3, s4, -(s1 + s2), k, k],
        [-k, 0, 0, k, -0.5 * z - 1j * e, 0],
        [-k, 0, 0, k, 0, -0.5 * z + 1j * e],
    ], dtype=complex)
    idx = [pair_index(4, 0, 0), pair_index(4, 1, 1), pair_index(4, 2, 2),
           pair_index(4, 3, 3), pair_index(4, 1, 2), pair_index(4, 2, 1)]
    assert np.max(np.abs(L.matrix[np.ix_(idx, idx)] - expected)) < 1e-12
    # and it really is closed: no coupling in or out of the block
    rest = [i for i in range(16) if i not in idx]
    assert np.max(np.abs(L.matrix[np.ix_(idx, rest)])) < 1e-15
    assert np.max(np.abs(L.matrix[np.ix_(rest, idx)])) < 1e-15


def test_redfield_spectator_coherences_vanish(coupled_pipeline):
    rho, _, _, _ = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 10.5, 0.5,
                                    mode="redfield")
    live = {(1, 2), (2, 1)}
    for i in range(4):
        for j in range(4):
            if i != j and (i, j) not in live:
                assert abs(rho.entries[i, j]) < 1e-12
    assert abs(rho.entries[1, 2]) > 1e-3


def test_degenerate_nullspace_is_refused():
    # unequal couplings leave the non-secular total kernel leaky, so the
    # generator has no steady state at all; the solver must say so
    system, _ = make_coupled_qubits(1.0, 2.0, 0.5)
    L = _liouvillian(system, {"A": 1.0, "B": 0.5}, {"A": 1.5, "B": 1.0},
                     "redfield")
    with pytest.raises(DegenerateSteadyStateError, match="nullspace"):
        solve_steady_state(L)
    # an all-zero generator has too many steady states
    flat = Liouvillian(dim=2, matrix=np.zeros((4, 4)), mode="lindblad",
                       reservoirs=("A",))
    with pytest.raises(DegenerateSteadyStateError):
        solve_steady_state(flat)


def test_gibbs_state_construction():
    rho = gibbs_state((0.0, 1.0), 1.0)
    ratio = rho.populations[1] / rho.populations[0]
    assert abs(ratio - np.exp(-1.0)) < 1e-14
    assert abs(rho.trace - 1.0) < 1e-15
    cold = gibbs_state((0.0, 1.0), 0.0)
    assert np.array_equal(cold.populations, [1.0, 0.0])
    split = gibbs_state((0.3, 0.3, 1.0), 0.0)
    assert np.allclose(split.populations, [0.5, 0.5, 0.0])
    with pytest.raises(ValueError):
        gibbs_state((0.0, 1.0), -1.0)


def test_evolve_zero_time_is_identity():
    system = make_single_qubit(1.0)
    L = _liouvillian(system, {"A": 1.0, "B": 1.0}, {"A": 2.0, "B": 1.0},
                     "lindblad")
    rho0 = DensityMatrix(dim=2, entries=np.eye(2) / 2)
    out = evolve(L, rho0, 0.0)
    assert np.array_equal(out.entries, rho0.entries)


def test_evolve_relaxes_to_steady_state(coupled_pipeline):
    rho_ss, _, _, liou = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 1.5, 1.0)
    rho0 = DensityMatrix(dim=4, entries=np.eye(4) / 4)
    rho_t = evolve(liou, rho0, 80.0, dt=0.005)
    assert np.max(np.abs(rho_t.entries - rho_ss.entries)) < 1e-6


def test_evolve_coherence_decay():
    omega0, ga, gb, ta, tb = 1.0, 1.0, 1.0, 2.0, 1.0
    system = make_single_qubit(omega0)
    L = _liouvillian(system, {"A": ga, "B": gb}, {"A": ta, "B": tb}, "lindblad")
    na = planck_occupation(omega0, ta)
    nb = planck_occupation(omega0, tb)
    gamma = 0.5 * (ga * (1 + 2 * na) + gb * (1 + 2 * nb))
    rho0 = DensityMatrix(dim=2, entries=np.array([[0.5, 0.25], [0.25, 0.5]]))
    t = 1.0
    out = evolve(L, rho0, t)
    expected = 0.25 * np.exp((-1j * omega0 - gamma) * t)
    assert abs(out.entries[1, 0] - expected) < 1e-8
    assert abs(out.entries[0, 1] - np.conj(expected)) < 1e-8


def test_evolve_guards():
    system = make_single_qubit(1.0)
    L = _liouvillian(system, {"A": 1.0, "B": 1.0}, {"A": 2.0, "B": 1.0},
                     "lindblad")
    rho0 = DensityMatrix(dim=2, entries=np.eye(2) / 2)
    with pytest.raises(ValueError):
        evolve(L, rho0, -1.0)
    with pytest.raises(ValueError):
        evolve(L, rho0, 1.0, dt=0.0)
    with pytest.raises(ValueError):
        evolve(L, DensityMatrix(dim=4, entries=np.eye(4) / 4), 1.0)
    # a step far outside the stability region must be caught, not returned
    with pytest.raises(IntegrationError):
        evolve(L, rho0, 50.0, dt=5.0)


def test_density_matrix_type():
    m = np.array([[0.6, 0.1 + 0.2j], [0.1 - 0.2j, 0.4]])
    rho = DensityMatrix(dim=2, entries=m)
    assert np.array_equal(rho.populations, [0.6, 0.4])
    assert rho.coherences[0, 0] == 0
    assert rho.coherences[0, 1] == 0.1 + 0.2j
    assert rho.trace == pytest.approx(1.0)
    assert rho.hermiticity_defect() < 1e-15
    rho.validate()
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 2.0
    with pytest.raises(ValueError):
        DensityMatrix(dim=2, entries=np.zeros((3, 3)))
    with pytest.raises(ValueError):
        DensityMatrix(dim=2, entries=np.array([[np.nan, 0], [0, 1.0]]))
    lopsided = DensityMatrix(dim=2, entries=np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="Hermitian"):
        lopsided.validate()
    off_trace = DensityMatrix(dim=2, entries=np.eye(2))
    with pytest.raises(ValueError, match="trace"):
        off_trace.validate()


def test_positivity_report_cases(coupled_pipeline):
    clean = positivity_report(gibbs_state((-1.0, 0.0, 1.0), 1.0))
    assert clean.min_population > 0
    assert clean.min_eigenvalue > 0
    assert clean.positive
    # the non-secular steady state at a strong thermal bias is not a state
    rho, _, _, _ = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 10.5, 0.5,
                                    mode="redfield")
    broken = positivity_report(rho)
    assert broken.min_population < 0
    assert broken.min_eigenvalue < -1e-10
    assert not broken.positive
    # the secular kernel keeps the same parameter point positive
    rho, _, _, _ = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 10.5, 0.5)
    assert positivity_report(rho).min_eigenvalue >= -1e-10


def test_solve_info_diagnostics(coupled_pipeline):
    _, _, _, liou = coupled_pipeline(1.0, 2.0, 0.5, 1.0, 1.0, 1.5, 1.0)
    rho, info = solve_steady_state(liou, full_output=True)
    assert info.residual < 1e-10
    assert len(info.null_singular_values) == 1
    assert info.hermiticity_defect < 1e-10
    assert abs(rho.trace - 1.0) < 1e-13


def test_assemble_liouvillian_guards():
    system = make_single_qubit(1.0)
    other, _ = make_coupled_qubits(1.0, 2.0, 0.5)
    bath = BathSpec(temperature=1.0, spectral_density=1.0, label="A")
    K4 = build_kernel(other, bath, "A", "lindblad")
    with pytest.raises(ValueError):
        assemble_liouvillian(system, K4)
    L = assemble_liouvillian(other, K4)
    with pytest.raises(ValueError):
        L.matrix[0, 0] = 1.0
