# Copyright 2026 The cstomo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import numpy as np
import pytest

import cstomo


@pytest.fixture(scope="module")
def series():
    w = cstomo.random_waveforms(2000.0, 7)
    return cstomo.evolve_observables(w, cstomo.ControlParams(), 1.0, 2000.0)


def test_basis_round_trip():
    basis = cstomo.HermitianBasis(16)
    assert basis.size == 256
    rho = cstomo.pure_density(cstomo.haar_state(16, 3))
    r = basis.expand(rho)
    assert r.shape == (256,)
    assert abs(r[0] - 0.25) < 1e-12
    np.testing.assert_allclose(basis.reconstruct(r), rho, atol=1e-12)


def test_angular_momentum_commutator():
    fx, fy, fz = cstomo.angular_momentum(4.0)
    np.testing.assert_allclose(fx @ fy - fy @ fx, 1j * fz, atol=1e-13)


def test_projections():
    h = np.diag([2.0, 0.0]).astype(complex)
    np.testing.assert_allclose(cstomo.project_density(h), np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(cstomo.project_psd(np.diag([1.0, -1.0]).astype(complex)), np.diag([1.0, 0.0]))


def test_waveforms_are_seeded():
    a = cstomo.random_waveforms(3000.0, 5)
    b = cstomo.random_waveforms(3000.0, 5)
    assert len(a.phi_x) == 200 and len(a.phi_uw) == 300
    assert a.phi_x == b.phi_x


def test_noiseless_reconstruction(series):
    psi = cstomo.haar_state(16, 4)
    rec = cstomo.synthesize_record(cstomo.pure_density(psi), series, 1.0, 0.0, 0)
    assert len(rec) == len(series)
    A = cstomo.design_matrix(series)
    assert A.shape == (len(series), 256)
    assert cstomo.completeness_rank(series) == 255
    ls = cstomo.solve_ls(rec, A)
    assert ls.estimator == "ls"
    assert cstomo.fidelity(psi, ls.rho) >= 0.999
    eps = 1e-6 * float(np.dot(rec.values, rec.values))
    cs = cstomo.solve_cs(rec, A, eps)
    assert cs.estimator == "cs"
    assert cstomo.fidelity(psi, cs.rho) >= 0.999


def test_solver_errors(series):
    rec = cstomo.synthesize_record(cstomo.pure_density(cstomo.haar_state(16, 4)), series, 1.0, 0.05, 1)
    A = cstomo.design_matrix(series)
    with pytest.raises(cstomo.InfeasibleEpsilon):
        cstomo.solve_cs(rec, A, 1e-12)
    with pytest.raises(cstomo.SolverError):
        cstomo.solve_cs(rec, A, 1e-12)


def test_fit_exponential():
    T = [0.1 * k for k in range(1, 10)]
    F = [(15 / 16) * (1 - np.exp(-t / 0.5)) + 1 / 16 for t in T]
    fit = cstomo.fit_exponential(T, F)
    assert abs(fit["tau_ms"] - 0.5) < 1e-6
    with pytest.raises(cstomo.FitError):
        cstomo.fit_exponential([0.1, 0.2], [0.5, 0.6])


def test_tiny_suite_is_deterministic():
    cfg = cstomo.SuiteConfig()
    cfg.n_states = 3
    cfg.T_total_us = 200.0
    cfg.T_grid_us = [100.0, 200.0]
    cfg.threads = 1
    a = cstomo.run_suite(cfg)
    cfg.threads = 2
    b = cstomo.run_suite(cfg)
    assert a["cs"] == b["cs"] and a["ls"] == b["ls"]
    assert len(a["cs_stats"]["mean"]) == 2
    assert a["epsilon_rule"].slope > 0.0
