import numpy

import nleg.model.base

class LinearScalar(nleg.model.base.BaseModel):
    """
    dx/dt = a * x.
    A list of coefficients stacks independent copies: dx_i/dt = a_i * x_i.
    Every quantity this package computes is known in closed form for this model.
    """

    PARAMETER_NAMES = ['a']

    def __init__(self, a = -1.0):
        coefficients = numpy.atleast_1d(numpy.asarray(a, dtype = numpy.float64))
        if (coefficients.ndim != 1):
            raise ValueError("LinearScalar coefficients must be a scalar or a flat list, found shape %s." % (str(coefficients.shape)))

        if (coefficients.shape[0] == 1):
            parameter = float(coefficients[0])
        else:
            parameter = [float(value) for value in coefficients]

        super().__init__('LinearScalar', coefficients.shape[0], {'a': parameter})

        self._coefficients = coefficients

    def drift(self, x):
        return self._coefficients * x

    def jacobian(self, x):
        return numpy.diag(self._coefficients)

    def default_state(self):
        return numpy.ones(self.dimension())
