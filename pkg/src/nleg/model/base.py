import abc

import numpy

class BaseModel(abc.ABC):
    """
    An autonomous vector field dx/dt = f(x) with an analytic Jacobian.

    Children implement drift() and jacobian() without any checking.
    drift() must accept any array whose last axis is the state (so a whole ensemble can be advanced at once),
    jacobian() takes a single state.
    Models hold no mutable state, so a single instance may be shared by any number of workers.
    """

    PARAMETER_NAMES = []

    def __init__(self, name, dimension, parameters):
        self._name = name
        self._dimension = int(dimension)
        self._parameters = dict(parameters)

        if (self._dimension < 1):
            raise ValueError("Model (%s) dimension must be >= 1, found: %d." % (self._name, self._dimension))

    @abc.abstractmethod
    def drift(self, x):
        pass

    @abc.abstractmethod
    def jacobian(self, x):
        pass

    @abc.abstractmethod
    def default_state(self):
        """
        A reasonable starting point for spin-up.
        """

        pass

    def name(self):
        return self._name

    def dimension(self):
        return self._dimension

    def parameters(self):
        return dict(self._parameters)

    def eval_drift(self, x):
        return self.drift(self.check_state(x))

    def eval_jacobian(self, x):
        return self.jacobian(self.check_state(x))

    def check_state(self, x):
        x = numpy.asarray(x, dtype = numpy.float64)

        if ((x.ndim != 1) or (x.shape[0] != self._dimension)):
            raise ValueError("State dimension mismatch for model (%s), expected %d, found shape %s." % (self._name, self._dimension, str(x.shape)))

        if (not numpy.all(numpy.isfinite(x))):
            raise ValueError("Non-finite state for model (%s): [%s]." % (self._name, ', '.join(map(str, x))))

        return x

    def to_dict(self):
        return {
            'name': self._name,
            'dimension': self._dimension,
            'parameters': dict(self._parameters),
        }

    def __repr__(self):
        parameters = ', '.join(["%s = %s" % (key, value) for (key, value) in sorted(self._parameters.items())])
        return "%s(%s)" % (self._name, parameters)
