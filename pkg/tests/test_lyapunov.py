import math

import numpy

import nleg.integrate
import nleg.lyapunov
import nleg.model
import nleg.nlle
import tests.base

class LyapunovTest(tests.base.BaseTest):
    def test_linear_tangent(self):
        for a in [-1.0, 0.5]:
            model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': a})
            base = nleg.integrate.integrate_trajectory(model, [2.0], 0.0, 1.5)

            delta = nleg.lyapunov.tangent_propagate(model, base, [1.0])
            self.assertClose(delta[0], math.exp(a * 1.5), 1e-9)

    def test_toy_node_tangent(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 1.0})
        base = nleg.integrate.integrate_trajectory(model, [1.0, 1.0], 0.0, 1.0)

        delta = nleg.lyapunov.tangent_propagate(model, base, [1.0, 0.0])
        self.assertClose(delta[0], math.exp(-2.0), 1e-6)
        self.assertClose(delta[1], 0.0, 1e-12)

    def test_tangent_frame(self):
        model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': [1.0, -2.0]})
        base = nleg.integrate.integrate_trajectory(model, [0.0, 0.0], 0.0, 1.0)

        frame = nleg.lyapunov.tangent_propagate(model, base, numpy.eye(2))
        self.assertClose(frame[0, 0], math.exp(1.0), 1e-9)
        self.assertClose(frame[1, 1], math.exp(-2.0), 1e-9)
        self.assertEqual(frame[0, 1], 0.0)
        self.assertEqual(frame[1, 0], 0.0)

    def test_lorenz_tangent_matches_nonlinear(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        x0 = nleg.integrate.advance(model, [1.0, 1.0, 1.0], 20.0, nleg.integrate.DEFAULT_STEP)

        direction = numpy.array([0.3, -0.5, 0.8])
        direction /= numpy.sqrt(numpy.dot(direction, direction))

        base = nleg.integrate.integrate_trajectory(model, x0, 0.0, 1.0)
        tangent = nleg.lyapunov.tangent_propagate(model, base, direction)

        magnitude = 1e-9
        nonlinear = nleg.nlle.nonlinear_propagate(model, x0, magnitude * direction, 1.0) / magnitude

        relative = numpy.sqrt(numpy.sum((nonlinear - tangent) ** 2)) / numpy.sqrt(numpy.sum(tangent ** 2))
        self.assertTrue(relative <= 1e-4, "TLM and nonlinear difference disagree, relative error: %g." % (relative))

    def test_tangent_advance_base(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        state = nleg.lyapunov.TangentState([1.0, 1.0, 20.0], numpy.eye(3))

        advanced = nleg.lyapunov.tangent_advance(model, state, 1.25)
        self.assertTrue(numpy.array_equal(advanced.base, nleg.integrate.advance(model, [1.0, 1.0, 20.0], 1.25, nleg.integrate.DEFAULT_STEP)))
        self.assertEqual(advanced.count(), 3)

    def test_bad_perturbation(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation)
        base = nleg.integrate.integrate_trajectory(model, [1.0, 1.0], 0.0, 0.1)

        self.assertRaises(ValueError, nleg.lyapunov.tangent_propagate, model, base, [0.0, 0.0])
        self.assertRaises(ValueError, nleg.lyapunov.tangent_propagate, model, base, [1.0, 0.0, 0.0])
        self.assertRaises(ValueError, nleg.lyapunov.finite_time_lle, model, [1.0, 1.0], [1.0, 0.0], 0.0)

    def test_linear_ftle(self):
        model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': 0.5})
        self.assertClose(nleg.lyapunov.finite_time_lle(model, [1.0], [3.0], 2.0), 0.5, 1e-10)

    def test_toy_node_ftle(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 1.0})

        for direction in [[1.0, 0.0], [0.6, -0.8], [-1.0, 1.0]]:
            self.assertClose(nleg.lyapunov.finite_time_lle(model, [1.0, 1.0], direction, 1.0), -2.0, 1e-6)

    def test_lorenz_ftle_matches_nlle(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        x0 = nleg.integrate.advance(model, [1.0, 1.0, 1.0], 20.0, nleg.integrate.DEFAULT_STEP)
        direction = numpy.array([1.0, 2.0, -1.0]) / math.sqrt(6.0)

        ftle = nleg.lyapunov.finite_time_lle(model, x0, direction, 0.5)
        nlle = nleg.nlle.nlle_single(model, x0, 1e-9 * direction, 0.5)

        self.assertClose(ftle, nlle, 1e-3)

    def test_lorenz_ftle_matches_nlle_on_attractor(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        sample = nleg.integrate.sample_attractor(model, [1.0, 1.0, 1.0], spinup = 50.0, count = 100, interval = 1.0)
        rng = numpy.random.default_rng(8)

        matches = 0
        for x0 in sample.points:
            direction = rng.standard_normal(3)
            direction /= numpy.sqrt(numpy.dot(direction, direction))

            ftle = nleg.lyapunov.finite_time_lle(model, x0, direction, 0.5)
            nlle = nleg.nlle.nlle_single(model, x0, 1e-9 * direction, 0.5)

            if (abs(ftle - nlle) <= 1e-3):
                matches += 1

        self.assertTrue(matches >= 95, "Only %d of 100 points agree." % (matches))

    def test_spectrum_renorm_invariance(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        x0 = nleg.integrate.advance(model, [1.0, 1.0, 1.0], 20.0, nleg.integrate.DEFAULT_STEP)

        reference = nleg.lyapunov.benettin_spectrum(model, x0, 50.0, renorm_interval = 0.5, m = 3)
        for renorm_interval in [0.1, 1.0]:
            spectrum = nleg.lyapunov.benettin_spectrum(model, x0, 50.0, renorm_interval = renorm_interval, m = 3)
            self.assertAllClose(spectrum.exponents, reference.exponents, 1e-6)

    def test_linear_spectrum(self):
        model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': [1.0, -2.0]})
        spectrum = nleg.lyapunov.benettin_spectrum(model, [0.0, 0.0], 10.0, renorm_interval = 0.5, m = 2)

        self.assertAllClose(spectrum.exponents, [1.0, -2.0], 1e-8)
        self.assertClose(spectrum.sum(), -1.0, 1e-8)

    def test_toy_spectrum(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 1.0})
        x0 = nleg.integrate.advance(model, [0.4, 0.7], 20.0, nleg.integrate.DEFAULT_STEP)

        spectrum = nleg.lyapunov.benettin_spectrum(model, x0, 50.0, m = 2)
        self.assertAllClose(spectrum.exponents, [-2.0, -2.0], 1e-3)

    def test_lorenz_spectrum_sum(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        x0 = nleg.integrate.advance(model, [1.0, 1.0, 1.0], 20.0, nleg.integrate.DEFAULT_STEP)

        spectrum = nleg.lyapunov.benettin_spectrum(model, x0, 50.0, m = 3)

        self.assertClose(spectrum.sum(), model.divergence(), 1e-2)
        self.assertTrue(spectrum.exponents[0] > 0.0)
        self.assertTrue(spectrum.exponents[2] < -10.0)

    def test_spectrum_partial_interval(self):
        model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': [0.3, -0.7]})
        spectrum = nleg.lyapunov.benettin_spectrum(model, [0.0, 0.0], 2.2, renorm_interval = 0.5)

        self.assertAllClose(spectrum.exponents, [0.3, -0.7], 1e-8)

    def test_spectrum_bad_arguments(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)

        self.assertRaises(ValueError, nleg.lyapunov.benettin_spectrum, model, [1.0, 1.0, 1.0], 10.0, m = 4)
        self.assertRaises(ValueError, nleg.lyapunov.benettin_spectrum, model, [1.0, 1.0, 1.0], 10.0, renorm_interval = 0.0)
        self.assertRaises(ValueError, nleg.lyapunov.benettin_spectrum, model, [1.0, 1.0, 1.0], 0.1, renorm_interval = 0.5)

    @tests.base.long_test
    def test_lorenz_spectrum_long(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)
        x0 = nleg.integrate.advance(model, [1.0, 1.0, 1.0], 100.0, nleg.integrate.DEFAULT_STEP)

        spectrum = nleg.lyapunov.benettin_spectrum(model, x0, 2000.0, m = 3)

        self.assertClose(spectrum.exponents[0], 0.906, 0.02)
        self.assertClose(spectrum.exponents[1], 0.0, 0.01)
        self.assertClose(spectrum.sum(), -13.67, 0.05)
