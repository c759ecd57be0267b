import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal

from wells.exceptions import DomainError, GridMismatchError
from wells.model import LoudonTerm, WellSpec
from wells.oracle import OracleConfig, OracleState, overlap, solve_fd, solve_fd_extrapolated
from wells.spectrum import find_spectrum
from wells.wavefun import WavefunctionGrid, normalize


class OracleConfigTests(SimpleTestCase):
    def test_symmetric_grid(self):
        config = OracleConfig(10.0, 101)
        x = config.grid()
        self.assertEqual(len(x), 101)
        assert_array_equal(x[::-1], -x)
        self.assertEqual(x[50], 0.0)
        self.assertAlmostEqual(x[-1] + config.step, 10.0, places=12)

    def test_refined(self):
        config = OracleConfig(10.0, 101)
        refined = config.refined()
        self.assertEqual(refined.points, 203)
        self.assertEqual(refined.step, config.step / 2)

    def test_validation(self):
        with self.assertRaises(DomainError):
            OracleConfig(60.0, 4000)
        with self.assertRaises(DomainError):
            OracleConfig(0.0, 101)
        with self.assertRaises(DomainError):
            OracleConfig(60.0, 1)


class SolveTests(SimpleTestCase):
    def test_double_well_ground(self):
        result = solve_fd(WellSpec(1, 1.0), n_states=1)
        self.assertAlmostEqual(result.eigen_kappa_d[0], 0.408, delta=0.002)
        self.assertFalse(result.domain_limited[0])
        self.assertTrue(result.certified(0))

    def test_negligible_well_has_no_bound_state(self):
        result = solve_fd(WellSpec(1, 1e-12), OracleConfig(60.0, 2001))
        self.assertEqual(result.energies, ())
        self.assertEqual(result.eigenvectors.shape[0], 0)

    def test_second_order_convergence(self):
        spec = WellSpec(2, 1.0)
        config = OracleConfig(40.0, 4001)
        energies = [solve_fd(spec, c, 1, eigenvectors=False).energies[0]
                    for c in (config, config.refined(), config.refined().refined())]
        ratio = (energies[0] - energies[1]) / (energies[1] - energies[2])
        self.assertAlmostEqual(ratio, 4.0, delta=0.8)

    def test_larger_box_lowers_energies(self):
        spec = WellSpec(1, 1.0)
        small = solve_fd(spec, OracleConfig(20.0, 1999), 4, eigenvectors=False)
        large = solve_fd(spec, OracleConfig(30.0, 2999), 4, eigenvectors=False)
        self.assertGreaterEqual(len(large.energies), len(small.energies))
        for a, b in zip(small.energies, large.energies):
            self.assertLessEqual(b, a)

    def test_eigenvectors_unit_norm(self):
        result = solve_fd(WellSpec(2, 1.0), OracleConfig(40.0, 4001), 2)
        for index in range(2):
            state = result.state(index)
            norm = np.sum(state.psi ** 2) * result.config.step
            self.assertAlmostEqual(norm, 1.0, places=10)

    def test_state_requires_eigenvectors(self):
        result = solve_fd(WellSpec(2, 1.0), OracleConfig(40.0, 401), 1, eigenvectors=False)
        with self.assertRaises(DomainError):
            result.state(0)

    def test_steep_well_count(self):
        spec = WellSpec(0, 0.2)
        analytic = find_spectrum(spec, 4)
        self.assertEqual(len(analytic), 1)
        self.assertGreaterEqual(analytic[0].kappa_d * 200.0, 10.0)
        oracle = solve_fd(spec, OracleConfig(200.0, 24001), 4, eigenvectors=False)
        self.assertEqual(len(oracle.energies), len(analytic))


class AgreementTests(SimpleTestCase):
    def check(self, spec, n_states, config=None):
        states = find_spectrum(spec, n_states)
        oracle = solve_fd_extrapolated(spec, config, n_states)
        self.assertTrue(oracle.extrapolated)
        half_width = oracle.config.half_width_over_d
        for state in states:
            self.assertTrue(oracle.certified(state.index))
            fd_kappa = oracle.eigen_kappa_d[state.index]
            self.assertLessEqual(abs(fd_kappa - state.kappa_d), 1e-3 * state.kappa_d,
                                 msg=f"{spec} state {state.index}")
        return states, oracle, half_width

    def test_double_and_shallow_wells(self):
        for spec in (WellSpec(1, 1.0), WellSpec(2, 1.0)):
            states, oracle, half_width = self.check(spec, 4)
            for state in states:
                extent = max(40.0 / state.decay_kappa_d, half_width)
                grid = normalize(spec, state, extent)
                self.assertGreaterEqual(overlap(oracle.state(state.index), grid), 0.999)

    def test_steep_well_ground(self):
        self.check(WellSpec(0, 1.0), 1, OracleConfig(200.0, 24001))

    def test_loudon_terms(self):
        self.check(WellSpec(1, 1.0, LoudonTerm(0.5, 0)), 3)
        self.check(WellSpec(2, 1.0, LoudonTerm(0.3, 1)), 2)


class OverlapTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = WellSpec(1, 1.0)
        cls.oracle = solve_fd(cls.spec, OracleConfig(60.0, 6001), 2)

    def test_self_overlap(self):
        state = self.oracle.state(0)
        grid = WavefunctionGrid(state=None, x_over_d=state.x_over_d, psi=state.psi,
                                norm_constant=1.0, tail_fraction=0.0)
        self.assertAlmostEqual(overlap(state, grid), 1.0, places=12)

    def test_opposite_parity(self):
        even = find_spectrum(self.spec, 1)[0]
        grid = normalize(self.spec, even, 160.0)
        self.assertLessEqual(overlap(self.oracle.state(1), grid), 1e-8)

    def test_grid_must_cover_box(self):
        grid = WavefunctionGrid(state=None, x_over_d=np.linspace(-1.0, 1.0, 11), psi=np.ones(11),
                                norm_constant=1.0, tail_fraction=0.0)
        with self.assertRaises(GridMismatchError):
            overlap(self.oracle.state(0), grid)

    def test_vector_length_mismatch(self):
        state = OracleState(x_over_d=np.linspace(-1.0, 1.0, 5), psi=np.ones(4), kappa_d=0.5)
        grid = WavefunctionGrid(state=None, x_over_d=np.linspace(-2.0, 2.0, 9), psi=np.ones(9),
                                norm_constant=1.0, tail_fraction=0.0)
        with self.assertRaises(GridMismatchError):
            overlap(state, grid)
