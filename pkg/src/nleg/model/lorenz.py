import numpy

import nleg.model.base

DEFAULT_SIGMA = 10.0
DEFAULT_R = 28.0
DEFAULT_B = 8.0 / 3.0

DEFAULT_FORCING = 8.0
DEFAULT_L96_DIMENSION = 40
MIN_L96_DIMENSION = 4

class Lorenz63(nleg.model.base.BaseModel):
    """
    The three-mode Galerkin truncation of 2D Rayleigh-Benard convection:
        dx/dt = sigma (y - x)
        dy/dt = x (r - z) - y
        dz/dt = x y - b z
    The divergence (trace of the Jacobian) is -(sigma + 1 + b) everywhere.
    """

    PARAMETER_NAMES = ['sigma', 'r', 'b']

    def __init__(self, sigma = DEFAULT_SIGMA, r = DEFAULT_R, b = DEFAULT_B):
        super().__init__('Lorenz63', 3, {'sigma': float(sigma), 'r': float(r), 'b': float(b)})

        self._sigma = float(sigma)
        self._r = float(r)
        self._b = float(b)

    def drift(self, x):
        x1 = x[..., 0]
        x2 = x[..., 1]
        x3 = x[..., 2]

        return numpy.stack([
            self._sigma * (x2 - x1),
            x1 * (self._r - x3) - x2,
            x1 * x2 - self._b * x3,
        ], axis = -1)

    def jacobian(self, x):
        return numpy.array([
            [-self._sigma, self._sigma, 0.0],
            [self._r - x[2], -1.0, -x[0]],
            [x[1], x[0], -self._b],
        ])

    def divergence(self):
        return -(self._sigma + 1.0 + self._b)

    def default_state(self):
        return numpy.array([1.0, 1.0, 1.0])

class Lorenz96(nleg.model.base.BaseModel):
    """
    dx_i/dt = (x_{i+1} - x_{i-2}) x_{i-1} - x_i + F, with cyclic indices.
    """

    PARAMETER_NAMES = ['F', 'n']

    def __init__(self, F = DEFAULT_FORCING, n = DEFAULT_L96_DIMENSION):
        if (int(n) != n or int(n) < MIN_L96_DIMENSION):
            raise ValueError("Lorenz96 dimension must be an integer >= %d, found: %s." % (MIN_L96_DIMENSION, str(n)))

        super().__init__('Lorenz96', int(n), {'F': float(F), 'n': int(n)})

        self._forcing = float(F)

    def drift(self, x):
        xp1 = numpy.roll(x, -1, axis = -1)
        xm1 = numpy.roll(x, 1, axis = -1)
        xm2 = numpy.roll(x, 2, axis = -1)

        return (xp1 - xm2) * xm1 - x + self._forcing

    def jacobian(self, x):
        n = self.dimension()
        jacobian = numpy.zeros((n, n))

        for i in range(n):
            jacobian[i, (i - 2) % n] += -x[(i - 1) % n]
            jacobian[i, (i - 1) % n] += x[(i + 1) % n] - x[(i - 2) % n]
            jacobian[i, i] += -1.0
            jacobian[i, (i + 1) % n] += x[(i - 1) % n]

        return jacobian

    def default_state(self):
        state = numpy.full(self.dimension(), self._forcing)
        state[0] += 0.01
        return state
