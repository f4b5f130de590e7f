import numpy

import nleg.model.base

class ToyBifurcation(nleg.model.base.BaseModel):
    """
    dx_i/dt = lambda * x_i - x_i^3 for i = 1, 2.

    At lambda = 0 the origin loses stability to both coordinates at once,
    and for lambda > 0 the attractor is the invariant square with corners (+-sqrt(lambda), +-sqrt(lambda)):
    four stable nodes at the corners, four saddles at (+-sqrt(lambda), 0) and (0, +-sqrt(lambda)),
    joined by the square's edges.
    """

    PARAMETER_NAMES = ['lambda']

    def __init__(self, **parameters):
        value = float(parameters.pop('lambda', 1.0))

        if (len(parameters) > 0):
            raise ValueError("Unknown ToyBifurcation parameters: [%s]." % (', '.join(sorted(parameters))))

        super().__init__('ToyBifurcation', 2, {'lambda': value})

        self._lambda = value

    def drift(self, x):
        return self._lambda * x - x ** 3

    def jacobian(self, x):
        return numpy.diag(self._lambda - 3.0 * x ** 2)

    def default_state(self):
        return numpy.full(self.dimension(), 0.1)
