import enum

class Model(enum.Enum):
    LinearScalar = 'LinearScalar'
    Lorenz63 = 'Lorenz63'
    Lorenz96 = 'Lorenz96'
    ToyBifurcation = 'ToyBifurcation'

def load(model_type):
    model_type = Model(model_type)

    if (model_type == Model.LinearScalar):
        return _load_linear_scalar()
    elif (model_type == Model.Lorenz63):
        return _load_lorenz63()
    elif (model_type == Model.Lorenz96):
        return _load_lorenz96()
    elif (model_type == Model.ToyBifurcation):
        return _load_toy_bifurcation()

    raise ValueError("Unknown model type: '%s'." % (model_type))

def create(name, parameters = {}):
    """
    Build a model instance from a name and a parameter map (the form models take in experiment configs).
    """

    return load(name)(**parameters)

def family(name, parameters, parameter_name):
    """
    Return a one-parameter family: a callable mapping a value of |parameter_name| to a model,
    with every other parameter fixed at |parameters|.
    """

    model_class = load(name)

    if (parameter_name not in model_class.PARAMETER_NAMES):
        raise ValueError("Model (%s) has no parameter '%s', choose from: [%s]." % (name, parameter_name, ', '.join(model_class.PARAMETER_NAMES)))

    return ModelFamily(model_class, parameters, parameter_name)

class ModelFamily(object):
    def __init__(self, model_class, parameters, parameter_name):
        self.model_class = model_class
        self.parameters = dict(parameters)
        self.parameter_name = parameter_name

    def __call__(self, value):
        parameters = dict(self.parameters)
        parameters[self.parameter_name] = float(value)
        return self.model_class(**parameters)

    def __repr__(self):
        return "%s(%s = *)" % (self.model_class.__name__, self.parameter_name)

def _load_linear_scalar():
    import nleg.model.linear
    return nleg.model.linear.LinearScalar

def _load_lorenz63():
    import nleg.model.lorenz
    return nleg.model.lorenz.Lorenz63

def _load_lorenz96():
    import nleg.model.lorenz
    return nleg.model.lorenz.Lorenz96

def _load_toy_bifurcation():
    import nleg.model.toy
    return nleg.model.toy.ToyBifurcation
