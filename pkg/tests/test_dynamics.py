import numpy as np
import pytest
import scipy.linalg

from ftaqc.encoding import encode
from ftaqc.errors import ResourceError
from ftaqc.dynamics import (
    NoiseModel,
    codespace_ground_density,
    evolve_closed,
    evolve_open,
    leakage_rate,
    leakage_suppression_report,
    lindblad_rhs,
    raising_weights,
    sigma_plus,
    transition_rates,
)
from ftaqc.pauli import PauliSum
from ftaqc.spectral import Schedule, Spectrum, classify_sectors, diagonalize

from oracles import (
    SIGMA_PLUS,
    bose,
    ground_state_rhs,
    ground_fidelity,
    local_op,
    propagate_expm,
    sector_eigenbasis,
)

MX = PauliSum.from_text("-1 X")
MZ = PauliSum.from_text("-1 Z")
Z1 = PauliSum.from_text("1 Z")


def test_sigma_plus_matches_kron():
    for n in (1, 2, 3):
        for q in range(n):
            np.testing.assert_array_equal(sigma_plus(n, q), local_op(SIGMA_PLUS, q, n).real)


def test_noise_model():
    nm = NoiseModel(beta=2.0, lam=0.5, spectral_density="ohmic", g0=3.0)
    assert nm.occupation(1.0) == pytest.approx(bose(2.0))
    assert nm.g(4.0) == pytest.approx(6.0)
    assert nm.to_dict()["lambda"] == 0.5
    with pytest.raises(ValueError):
        NoiseModel(beta=0.0)
    with pytest.raises(ValueError):
        NoiseModel(beta=1.0, spectral_density="lorentz")


def test_raising_weights_oracle():
    h = PauliSum.from_text("0.3 XZ\n-0.7 ZI\n0.2 YY").to_matrix()
    spec = diagonalize(h)
    v = spec.eigenvectors
    oracle = sum(np.abs(v.conj().T @ local_op(SIGMA_PLUS, i, 2) @ v) ** 2 for i in range(2))
    np.testing.assert_allclose(raising_weights(spec), oracle, atol=1e-12)


def test_zero_coupling_is_unitary():
    spec = diagonalize(PauliSum.from_text("0.4 XX\n1 ZI"))
    rho = np.full((4, 4), 0.25, dtype=complex)
    h = spec.eigenvectors @ np.diag(spec.eigenvalues) @ spec.eigenvectors.conj().T
    out = lindblad_rhs(rho, spec, NoiseModel(beta=1.0, lam=0.0))
    np.testing.assert_allclose(out, -1j * (h @ rho - rho @ h), atol=1e-14)


def test_rhs_validates_state():
    spec = diagonalize(Z1)
    with pytest.raises(ValueError):
        lindblad_rhs(np.eye(2), spec, NoiseModel(beta=1.0))
    with pytest.raises(ValueError):
        lindblad_rhs(np.array([[1, 1], [0, 0]]), spec, NoiseModel(beta=1.0))


@pytest.mark.parametrize("density", ["constant", "ohmic"])
@pytest.mark.parametrize("text", ["0.8 Z", "0.5 XZ\n-1 ZI\n0.3 IY\n0.2 ZZ"])
def test_thermal_state_is_fixed(density, text):
    h = PauliSum.from_text(text)
    noise = NoiseModel(beta=1.3, lam=0.7, spectral_density=density)
    rho = scipy.linalg.expm(-noise.beta * h.to_matrix())
    rho /= np.trace(rho)
    out = lindblad_rhs(rho, diagonalize(h), noise)
    assert np.abs(out).max() < 1e-10


def test_trace_and_hermiticity_preserved():
    h = PauliSum.from_text("0.5 XZ\n-1 ZI\n0.3 IY")
    noise = NoiseModel(beta=0.7, lam=0.4)
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    out = lindblad_rhs(rho, diagonalize(h), noise)
    assert abs(np.trace(out)) < 1e-12
    np.testing.assert_allclose(out, out.conj().T, atol=1e-12)


def test_degenerate_levels_carry_no_rate():
    spec = diagonalize(PauliSum.from_text("1 ZI"))
    rates = transition_rates(spec, NoiseModel(beta=1.0, lam=1.0))
    w = spec.eigenvalues
    assert np.all(rates[np.isclose(w[:, None], w[None, :])] == 0)


# closed ---------------------------------------------------------------------------

def test_static_fidelity_is_one():
    h = PauliSum.from_text("0.5 XZ\n-1 ZI")
    res = evolve_closed(Schedule(h, h, 3.0))
    np.testing.assert_allclose(res.ground_fidelity, 1.0, atol=1e-10)


def test_adiabatic_and_sudden_limits():
    slow = evolve_closed(Schedule(MX, MZ, 100.0))
    fast = evolve_closed(Schedule(MX, MZ, 0.01))
    assert slow.ground_fidelity[-1] >= 0.99
    assert abs(fast.ground_fidelity[-1] - 0.5) <= 0.02


def test_closed_matches_expm_oracle():
    h0 = PauliSum.from_text("-1 XI\n-1 IX").to_matrix()
    h1 = PauliSum.from_text("-1 ZZ\n0.4 ZI").to_matrix()
    sch = Schedule(PauliSum.from_text("-1 XI\n-1 IX"), PauliSum.from_text("-1 ZZ\n0.4 ZI"), 5.0)
    res = evolve_closed(sch, dt=0.01)
    psi = propagate_expm(h0, h1, 5.0, 4000)
    assert res.ground_fidelity[-1] == pytest.approx(ground_fidelity(h1, psi), abs=1e-6)


def test_closed_is_fourth_order():
    sch = Schedule(MX, PauliSum.from_text("-1 Z\n0.3 X"), 2.0)
    ref = evolve_closed(sch, dt=0.002).final_state
    e1 = np.abs(evolve_closed(sch, dt=0.2).final_state - ref).max()
    e2 = np.abs(evolve_closed(sch, dt=0.1).final_state - ref).max()
    assert e1 / e2 > 12


# open -----------------------------------------------------------------------------

def test_open_lambda_zero_matches_closed():
    sch = Schedule(MX, MZ, 10.0)
    c = evolve_closed(sch, dt=0.05)
    o = evolve_open(sch, NoiseModel(beta=1.0, lam=0.0), dt=0.05)
    np.testing.assert_allclose(o.ground_fidelity, c.ground_fidelity, atol=1e-6)


def test_open_converges_like_lambda_squared():
    sch = Schedule(MX, MZ, 5.0)
    c = evolve_closed(sch, dt=0.05).ground_fidelity[-1]
    d1 = abs(evolve_open(sch, NoiseModel(beta=1.0, lam=0.02), dt=0.05).ground_fidelity[-1] - c)
    d2 = abs(evolve_open(sch, NoiseModel(beta=1.0, lam=0.04), dt=0.05).ground_fidelity[-1] - c)
    assert d2 / d1 == pytest.approx(4.0, rel=0.05)


def test_open_relaxes_to_gibbs():
    h = PauliSum.from_text("0.6 Z\n0.3 X")
    noise = NoiseModel(beta=1.5, lam=1.0)
    rho0 = np.eye(2, dtype=complex) @ np.diag([0.0, 1.0])
    res = evolve_open(Schedule(h, h, 30.0), noise, rho0=rho0, dt=0.01)
    gibbs = scipy.linalg.expm(-noise.beta * h.to_matrix())
    gibbs /= np.trace(gibbs)
    spec = diagonalize(h)
    pops = np.real(np.diag(spec.eigenvectors.conj().T @ res.final_state @ spec.eigenvectors))
    gpops = np.real(np.diag(spec.eigenvectors.conj().T @ gibbs @ spec.eigenvectors))
    np.testing.assert_allclose(pops, gpops, atol=1e-6)
    assert res.trace_error.max() < 1e-10
    assert res.hermiticity_error.max() < 1e-8


def test_open_size_limit():
    h = PauliSum.from_text("1 " + "Z" * 11)
    with pytest.raises(ResourceError):
        evolve_open(Schedule(h, h, 1.0), NoiseModel(beta=1.0))


# leakage --------------------------------------------------------------------------

def _encoded_state(code, e_p, h=Z1):
    enc = encode(h, code, e_p)
    proj = enc.projector()
    spec = classify_sectors(diagonalize(enc.h_s), proj)
    return enc, proj, spec


def test_t0_derivative_matches_hand_assembly(code4):
    enc, proj, _ = _encoded_state(code4, 1.0)
    noise = NoiseModel(beta=2.5, lam=0.3)
    h = enc.h_s.to_matrix()
    w, v = sector_eigenbasis(h, proj)
    rho = np.outer(v[:, 0], v[:, 0].conj())
    got = lindblad_rhs(rho, Spectrum(w, v), noise)
    want = ground_state_rhs(h, w, v, 0, noise.beta, noise.lam)
    assert np.abs(got - want).max() < 1e-8


def test_leakage_rate_is_basis_independent(code4):
    enc, proj, spec = _encoded_state(code4, 1.0)
    noise = NoiseModel(beta=2.5, lam=0.3)
    h = enc.h_s.to_matrix()
    w, v = sector_eigenbasis(h, proj)
    want = -np.trace(proj @ ground_state_rhs(h, w, v, 0, noise.beta, noise.lam)).real
    got = leakage_rate(spec, noise, proj, codespace_ground_density(spec))
    assert got == pytest.approx(want, rel=1e-10)
    assert got > 0


def test_zero_coupling_gives_zero_rate(code4):
    rep = leakage_suppression_report(Z1, code4, [0.5, 1.0], NoiseModel(beta=1.0, lam=0.0))
    assert all(r.rate == 0.0 for r in rep.rows)


def test_no_penalty_leaks_most(code4):
    rep = leakage_suppression_report(Z1, code4, [0.0, 1.0, 2.0, 4.0], NoiseModel(beta=1.0, lam=0.1))
    rates = [r.rate for r in rep.rows]
    assert all(rates[0] > r for r in rates[1:])
    assert rates == sorted(rates, reverse=True)


def test_rate_ratio_follows_bose_einstein_at_large_gap(code4):
    noise = NoiseModel(beta=8.0, lam=0.1)
    rep = leakage_suppression_report(Z1, code4, [0.5, 1.0], noise)
    a, b = rep.rows
    expected = bose(b.beta_gap) / bose(a.beta_gap)
    assert b.rate / a.rate == pytest.approx(expected, rel=0.01)
    assert rep.fitted_slope == pytest.approx(-1.0, rel=0.1)


def test_encoded_rate_below_bare(code4):
    noise = NoiseModel(beta=1.0, lam=0.2)
    spec = diagonalize(Z1)
    rho = np.diag([0.0, 1.0]).astype(complex)  # ground of +Z is |1>
    bare = -lindblad_rhs(rho, spec, noise)[1, 1].real
    rep = leakage_suppression_report(Z1, code4, [4.0], noise)
    assert rep.rows[0].leakage_gap > 2.0
    assert rep.rows[0].rate < bare


def test_bare_excitation_rate_closed_form():
    noise = NoiseModel(beta=1.7, lam=0.3)
    rho = np.diag([0.0, 1.0]).astype(complex)
    rate = -lindblad_rhs(rho, diagonalize(Z1), noise)[1, 1].real
    assert rate == pytest.approx(2 * 0.09 * bose(1.7 * 2.0))
