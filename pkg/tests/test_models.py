import numpy

import nleg.model
import nleg.model.lorenz
import tests.base

# (model name, parameters), every model gets a generated Jacobian check.
MODELS = [
    (nleg.model.Model.LinearScalar, {'a': [0.5, -1.0, 2.0]}),
    (nleg.model.Model.Lorenz63, {}),
    (nleg.model.Model.Lorenz96, {'F': 8.0, 'n': 8}),
    (nleg.model.Model.ToyBifurcation, {'lambda': 0.7}),
]

FINITE_DIFFERENCE_STEP = 1e-6
JACOBIAN_TOLERANCE = 1e-5
JACOBIAN_STATES = 100
JACOBIAN_BOX = 10.0
RANDOM_STATES = 5

class ModelTest(tests.base.BaseTest):
    def test_lorenz63_drift(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)

        self.assertAllClose(model.eval_drift([0.0, 0.0, 0.0]), [0.0, 0.0, 0.0], 0.0)
        self.assertAllClose(model.eval_drift([1.0, 1.0, 1.0]), [0.0, 26.0, 1.0 - 8.0 / 3.0], 1e-12)

    def test_lorenz63_divergence(self):
        model = nleg.model.lorenz.Lorenz63()
        rng = numpy.random.default_rng(4)

        for i in range(RANDOM_STATES):
            x = rng.uniform(-20.0, 20.0, 3)
            self.assertClose(numpy.trace(model.eval_jacobian(x)), model.divergence(), 1e-12)

        self.assertClose(model.divergence(), -(10.0 + 1.0 + 8.0 / 3.0), 1e-12)

    def test_lorenz63_symmetry(self):
        model = nleg.model.lorenz.Lorenz63()
        x = numpy.array([3.0, -2.0, 17.0])
        mirror = numpy.array([-1.0, -1.0, 1.0])

        self.assertAllClose(model.eval_drift(mirror * x), mirror * model.eval_drift(x), 1e-12)

    def test_toy_drift(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 1.0})

        self.assertAllClose(model.eval_drift([1.0, 0.0]), [0.0, 0.0], 0.0)
        self.assertAllClose(model.eval_drift([-1.0, 1.0]), [0.0, 0.0], 0.0)

    def test_toy_jacobian(self):
        for lam in [-1.0, 0.0, 0.3, 1.0]:
            model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': lam})
            self.assertTrue(numpy.array_equal(model.eval_jacobian([0.0, 0.0]), numpy.diag([lam, lam])))

        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 1.0})
        self.assertTrue(numpy.array_equal(model.eval_jacobian([1.0, 1.0]), numpy.diag([-2.0, -2.0])))

    def test_toy_odd_symmetry(self):
        model = nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': 0.4})
        rng = numpy.random.default_rng(9)

        for i in range(RANDOM_STATES):
            x = rng.uniform(-2.0, 2.0, 2)
            self.assertAllClose(model.eval_drift(-x), -model.eval_drift(x), 0.0)

    def test_drift_vectorized(self):
        model = nleg.model.create(nleg.model.Model.Lorenz96, {'n': 6})
        states = numpy.random.default_rng(2).uniform(-5.0, 5.0, (4, 6))

        stacked = model.drift(states)
        for i in range(states.shape[0]):
            self.assertTrue(numpy.array_equal(stacked[i], model.eval_drift(states[i])))

    def test_bad_states(self):
        model = nleg.model.create(nleg.model.Model.Lorenz63)

        self.assertRaises(ValueError, model.eval_drift, [1.0, 2.0])
        self.assertRaises(ValueError, model.eval_drift, [1.0, float('nan'), 0.0])
        self.assertRaises(ValueError, model.eval_jacobian, [[1.0, 2.0, 3.0]])

    def test_bad_parameters(self):
        self.assertRaises(ValueError, nleg.model.create, nleg.model.Model.Lorenz96, {'n': 3})
        self.assertRaises(ValueError, nleg.model.create, nleg.model.Model.ToyBifurcation, {'mu': 1.0})
        self.assertRaises(TypeError, nleg.model.create, nleg.model.Model.Lorenz63, {'rho': 28.0})
        self.assertRaises(ValueError, nleg.model.family, nleg.model.Model.Lorenz63, {}, 'rho')

    def test_family(self):
        family = nleg.model.family(nleg.model.Model.Lorenz63, {'sigma': 12.0}, 'r')
        model = family(1.5)

        self.assertEqual(model.parameters(), {'sigma': 12.0, 'r': 1.5, 'b': 8.0 / 3.0})

    def test_linear_stack(self):
        model = nleg.model.create(nleg.model.Model.LinearScalar, {'a': [1.0, -2.0]})

        self.assertEqual(model.dimension(), 2)
        self.assertTrue(numpy.array_equal(model.eval_jacobian([3.0, 4.0]), numpy.diag([1.0, -2.0])))
        self.assertAllClose(model.eval_drift([3.0, 4.0]), [3.0, -8.0], 0.0)

def _make_jacobian_test(name, parameters):
    def __test_method(self):
        model = nleg.model.create(name, parameters)
        rng = numpy.random.default_rng(17)
        n = model.dimension()

        for i in range(JACOBIAN_STATES):
            x = rng.uniform(-JACOBIAN_BOX, JACOBIAN_BOX, n)
            jacobian = model.eval_jacobian(x)

            h = FINITE_DIFFERENCE_STEP * (1.0 + float(numpy.max(numpy.abs(x))))
            differences = numpy.empty((n, n))
            for j in range(n):
                offset = numpy.zeros(n)
                offset[j] = h
                differences[:, j] = (model.eval_drift(x + offset) - model.eval_drift(x - offset)) / (2.0 * h)

            error = float(numpy.max(numpy.abs(differences - jacobian))) / max(1.0, float(numpy.max(numpy.abs(jacobian))))
            self.assertTrue(error <= JACOBIAN_TOLERANCE, "Jacobian of %s does not match finite differences at %s, relative error: %g." % (model, x, error))

    return __test_method

for (name, parameters) in MODELS:
    test_name = "test_jacobian_%s" % (name.value)
    setattr(ModelTest, test_name, _make_jacobian_test(name, parameters))
