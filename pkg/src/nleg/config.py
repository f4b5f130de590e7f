"""
Experiment configs: JSON files (whole-line '#' and '//' comments allowed) with the sections
model, integrator, sampling, perturbation, analysis, and output.

Every key is checked before anything runs; unknown keys are errors, not warnings.
"""

import copy
import enum
import math
import numbers

import nleg.bifurcation
import nleg.ensemble
import nleg.integrate
import nleg.lyapunov
import nleg.model
import nleg.nlle
import nleg.util

class Analysis(enum.Enum):
    GLE = 'gle'
    LLE = 'lle'
    NLLE = 'nlle'
    SPECTRUM = 'spectrum'
    LOCAL_MAP = 'localmap'
    EPS_SWEEP = 'eps-sweep'
    FIXED_POINTS = 'fixed-points'
    PES_SCAN = 'pes-scan'
    VERIFY_TOY = 'verify-toy'
    VERIFY_STABILITY = 'verify-stability'
    TRAJECTORY = 'trajectory'

class Format(enum.Enum):
    CSV = 'csv'
    JSON = 'json'

DEFAULT_TOTAL_TIME = 1000.0
DEFAULT_LLE_TAU = 0.5
DEFAULT_SPECTRUM_TAU = 100.0
DEFAULT_TRAJECTORY_DURATION = 10.0
DEFAULT_SWEEP_EPSILONS = [1e-7, 1e-5, 1e-3]
DEFAULT_TOY_LAMBDA = 1.0
DEFAULT_OUTPUT_DIRECTORY = 'output'
DEFAULT_FORMATS = [Format.CSV.value, Format.JSON.value]

# Analyses that always run on the toy system and do not read the model section.
TOY_ANALYSES = [Analysis.VERIFY_TOY, Analysis.VERIFY_STABILITY]

class ConfigError(ValueError):
    def __init__(self, problems):
        # [(dotted key, message), ...]
        self.problems = list(problems)
        self.keys = [key for (key, _) in self.problems]

        lines = ["  %s: %s" % (key, message) for (key, message) in self.problems]
        super().__init__("Invalid config (%d problem(s)):\n%s" % (len(self.problems), "\n".join(lines)))

def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)

def _is_int(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)

def _number(value):
    if (not _is_number(value)):
        return 'expected a number'
    return None

def _positive(value):
    if ((not _is_number(value)) or (not value > 0)):
        return 'expected a number > 0'
    return None

def _nonnegative(value):
    if ((not _is_number(value)) or (not value >= 0)):
        return 'expected a number >= 0'
    return None

def _fraction(value):
    if ((not _is_number(value)) or (not (0 < value < 1))):
        return 'expected a number in (0, 1)'
    return None

def _int(value):
    if (not _is_int(value)):
        return 'expected an integer'
    return None

def _positive_int(value):
    if ((not _is_int(value)) or (value < 1)):
        return 'expected an integer >= 1'
    return None

def _grid_int(value):
    if ((not _is_int(value)) or (value < 2)):
        return 'expected an integer >= 2'
    return None

def _string(value):
    if (not isinstance(value, str)):
        return 'expected a string'
    return None

def _mapping(value):
    if (not isinstance(value, dict)):
        return 'expected an object'
    return None

def _number_list(value):
    if ((not isinstance(value, list)) or (len(value) == 0) or (not all([_is_number(item) for item in value]))):
        return 'expected a nonempty list of numbers'
    return None

def _positive_list(value):
    if (_number_list(value) is not None or not all([item > 0 for item in value])):
        return 'expected a nonempty list of numbers > 0'
    return None

def _directions(value):
    if ((not isinstance(value, list)) or (len(value) == 0)):
        return 'expected a nonempty list of unit vectors'

    for vector in value:
        if (_number_list(vector) is not None):
            return 'expected a nonempty list of unit vectors'

        norm = math.sqrt(sum([item * item for item in vector]))
        if (abs(norm - 1.0) > nleg.nlle.UNIT_TOLERANCE):
            return "expected unit vectors, found a vector with norm %s" % (nleg.util.format_value(norm))

    return None

def _box(value):
    if ((not isinstance(value, list)) or (len(value) == 0)):
        return 'expected a list of [lo, hi] pairs'

    for pair in value:
        if ((_number_list(pair) is not None) or (len(pair) != 2) or (not pair[0] < pair[1])):
            return 'expected a list of [lo, hi] pairs with lo < hi'

    return None

def _tau_grid(value):
    if (isinstance(value, dict)):
        unknown = set(value.keys()) - {'start', 'stop', 'count', 'switch'}
        if (len(unknown) > 0):
            return "unknown tau grid key(s): %s" % (', '.join(sorted(unknown)))

        for key in ['start', 'stop', 'switch']:
            if ((key in value) and (_positive(value[key]) is not None)):
                return "tau grid '%s' must be a number > 0" % (key)

        if (('count' in value) and (_grid_int(value['count']) is not None)):
            return "tau grid 'count' must be an integer >= 2"

        if (not value.get('start', nleg.nlle.DEFAULT_TAU_START) < value.get('stop', nleg.nlle.DEFAULT_TAU_STOP)):
            return "tau grid needs start < stop"

        return None

    if (_positive_list(value) is not None):
        return 'expected an increasing list of taus > 0 or a {start, stop, count, switch} object'

    if (any([value[i] >= value[i + 1] for i in range(len(value) - 1)])):
        return 'tau grid must be strictly increasing'

    return None

def _formats(value):
    choices = [format.value for format in Format]
    if ((not isinstance(value, list)) or (len(value) == 0) or (not all([item in choices for item in value]))):
        return "expected a nonempty list drawn from [%s]" % (', '.join(choices))
    return None

def _analysis_name(value):
    choices = [analysis.value for analysis in Analysis]
    if (value not in choices):
        return "unknown analysis, choose from: [%s]" % (', '.join(choices))
    return None

def _model_name(value):
    choices = [model.value for model in nleg.model.Model]
    if (value not in choices):
        return "unknown model, choose from: [%s]" % (', '.join(choices))
    return None

# {section: {key: checker, ...}, ...}
SECTION_SCHEMA = {
    'model': {
        'name': _model_name,
        'parameters': _mapping,
    },
    'integrator': {
        'step': _positive,
    },
    'sampling': {
        'spinup': _positive,
        'count': _positive_int,
        'interval': _positive,
        'seed': _int,
        'x_init': _number_list,
    },
    'perturbation': {
        'epsilon': _positive,
        'directions_per_point': _positive_int,
        'directions': _directions,
        'seed': _int,
    },
    'output': {
        'directory': _string,
        'formats': _formats,
    },
}

ANALYSIS_KEY_CHECKS = {
    'name': _analysis_name,
    'total_time': _positive,
    'renorm_interval': _positive,
    'm': _positive_int,
    'tau': _positive,
    'tau_grid': _tau_grid,
    'window': _positive_int,
    'slope_tol': _positive,
    'theta': _fraction,
    'noise_z': _nonnegative,
    'points': _positive_int,
    'epsilons': _positive_list,
    'box': _box,
    'grid_per_axis': _grid_int,
    'newton_tol': _positive,
    'parameter': _string,
    'lambda_grid': _number_list,
    'equilibrium': _number_list,
    'lambda': _number,
    'n_basin': _positive_int,
    'horizon': _positive,
    'duration': _positive,
}

ANALYSIS_KEYS = {
    Analysis.GLE: ['total_time', 'renorm_interval', 'm'],
    Analysis.LLE: ['tau'],
    Analysis.NLLE: ['tau_grid', 'window', 'slope_tol', 'theta', 'noise_z'],
    Analysis.SPECTRUM: ['tau', 'renorm_interval', 'm'],
    Analysis.LOCAL_MAP: ['tau_grid', 'window', 'slope_tol', 'theta', 'noise_z', 'points'],
    Analysis.EPS_SWEEP: ['epsilons', 'tau_grid', 'window', 'slope_tol', 'theta', 'noise_z'],
    Analysis.FIXED_POINTS: ['box', 'grid_per_axis', 'newton_tol'],
    Analysis.PES_SCAN: ['parameter', 'lambda_grid', 'equilibrium'],
    Analysis.VERIFY_TOY: ['lambda', 'n_basin', 'horizon'],
    Analysis.VERIFY_STABILITY: ['lambda', 'n_basin', 'horizon'],
    Analysis.TRAJECTORY: ['duration'],
}

REQUIRED_ANALYSIS_KEYS = {
    Analysis.FIXED_POINTS: ['box'],
    Analysis.PES_SCAN: ['parameter', 'lambda_grid'],
}

def validate(raw):
    """
    Return every problem with |raw| as [(dotted key, message), ...]; an empty list means valid.
    """

    problems = []

    if (not isinstance(raw, dict)):
        return [('<root>', 'expected an object')]

    allowed_sections = set(SECTION_SCHEMA.keys()) | {'analysis'}
    for section in sorted(set(raw.keys()) - allowed_sections):
        problems.append((section, 'unknown section'))

    for (section, schema) in SECTION_SCHEMA.items():
        if (section not in raw):
            continue

        if (not isinstance(raw[section], dict)):
            problems.append((section, 'expected an object'))
            continue

        for (key, value) in raw[section].items():
            if (key not in schema):
                problems.append(("%s.%s" % (section, key), 'unknown key'))
                continue

            message = schema[key](value)
            if (message is not None):
                problems.append(("%s.%s" % (section, key), message))

    analysis = _validate_analysis(raw, problems)
    _validate_model(raw, analysis, problems)

    if (('perturbation' in raw) and isinstance(raw['perturbation'], dict)):
        if (('directions' in raw['perturbation']) and ('directions_per_point' in raw['perturbation'])):
            problems.append(('perturbation.directions', "give either 'directions' or 'directions_per_point', not both"))

    return problems

def _validate_analysis(raw, problems):
    if ('analysis' not in raw):
        problems.append(('analysis', 'missing required section'))
        return None

    section = raw['analysis']
    if (not isinstance(section, dict)):
        problems.append(('analysis', 'expected an object'))
        return None

    if ('name' not in section):
        problems.append(('analysis.name', 'missing required key'))
        return None

    message = _analysis_name(section['name'])
    if (message is not None):
        problems.append(('analysis.name', message))
        return None

    analysis = Analysis(section['name'])
    allowed = ANALYSIS_KEYS[analysis]

    for (key, value) in section.items():
        if (key == 'name'):
            continue

        if (key not in allowed):
            problems.append(("analysis.%s" % (key), "unknown key for analysis '%s'" % (analysis.value)))
            continue

        message = ANALYSIS_KEY_CHECKS[key](value)
        if (message is not None):
            problems.append(("analysis.%s" % (key), message))

    for key in REQUIRED_ANALYSIS_KEYS.get(analysis, []):
        if (key not in section):
            problems.append(("analysis.%s" % (key), 'missing required key'))

    return analysis

def _validate_model(raw, analysis, problems):
    if ('model' not in raw):
        if ((analysis is not None) and (analysis not in TOY_ANALYSES)):
            problems.append(('model', 'missing required section'))
        return

    section = raw['model']
    if ((not isinstance(section, dict)) or ('name' not in section)):
        problems.append(('model.name', 'missing required key'))
        return

    if (_model_name(section['name']) is not None):
        return

    model_class = nleg.model.load(section['name'])
    parameters = section.get('parameters', {})
    if (not isinstance(parameters, dict)):
        return

    problem_count = len(problems)

    for (key, value) in parameters.items():
        if (key not in model_class.PARAMETER_NAMES):
            problems.append(("model.parameters.%s" % (key), "unknown parameter for model '%s'" % (section['name'])))
        elif ((not _is_number(value)) and (_number_list(value) is not None)):
            problems.append(("model.parameters.%s" % (key), 'expected a number or a list of numbers'))

    if ((analysis is not None) and ('parameter' in raw.get('analysis', {}))):
        if (raw['analysis']['parameter'] not in model_class.PARAMETER_NAMES):
            problems.append(('analysis.parameter', "unknown parameter for model '%s'" % (section['name'])))

    if ((len(problems) > problem_count) or (analysis in TOY_ANALYSES)):
        return

    try:
        model = model_class(**parameters)
    except (TypeError, ValueError) as ex:
        problems.append(('model.parameters', str(ex)))
        return

    if (analysis is not None):
        _validate_dimensions(raw, analysis, model, problems)

def _checked_value(raw, section, key, checker):
    """
    The value at |section|.|key| if it is present and passed |checker|, None otherwise.
    """

    values = raw.get(section, {})
    if ((not isinstance(values, dict)) or (key not in values) or (checker(values[key]) is not None)):
        return None

    return values[key]

def _validate_dimensions(raw, analysis, model, problems):
    n = model.dimension()
    mismatch = "expected %d entries for model '%s', found %d"

    x_init = _checked_value(raw, 'sampling', 'x_init', _number_list)
    if ((x_init is not None) and (len(x_init) != n)):
        problems.append(('sampling.x_init', mismatch % (n, model.name(), len(x_init))))

    directions = _checked_value(raw, 'perturbation', 'directions', _directions)
    if (directions is not None):
        for vector in directions:
            if (len(vector) != n):
                problems.append(('perturbation.directions', mismatch % (n, model.name(), len(vector))))
                break

    if (analysis in [Analysis.GLE, Analysis.SPECTRUM]):
        m = _checked_value(raw, 'analysis', 'm', _positive_int)
        if ((m is not None) and (m > n)):
            problems.append(('analysis.m', "expected an integer in [1, %d] for model '%s', found %d" % (n, model.name(), m)))

        if ((analysis == Analysis.SPECTRUM) and (directions is not None) and (len(directions) < min(n, m or n))):
            problems.append(('perturbation.directions', "the spectrum frame needs %d directions, found %d" % (min(n, m or n), len(directions))))

    if (analysis == Analysis.FIXED_POINTS):
        box = _checked_value(raw, 'analysis', 'box', _box)
        if ((box is not None) and (len(box) != n)):
            problems.append(('analysis.box', mismatch % (n, model.name(), len(box))))

    if (analysis == Analysis.PES_SCAN):
        equilibrium = _checked_value(raw, 'analysis', 'equilibrium', _number_list)
        if ((equilibrium is not None) and (len(equilibrium) != n)):
            problems.append(('analysis.equilibrium', mismatch % (n, model.name(), len(equilibrium))))

class ExperimentConfig(object):
    """
    A validated experiment config with every default filled in.
    """

    def __init__(self, raw):
        problems = validate(raw)
        if (len(problems) > 0):
            raise ConfigError(problems)

        self._raw = copy.deepcopy(raw)

        self.analysis = Analysis(raw['analysis']['name'])

        model = raw.get('model', {'name': nleg.model.Model.ToyBifurcation.value})
        self.model_name = model['name']
        self.model_parameters = dict(model.get('parameters', {}))

        integrator = raw.get('integrator', {})
        self.step = integrator.get('step', nleg.integrate.DEFAULT_STEP)

        sampling = raw.get('sampling', {})
        self.spinup = sampling.get('spinup', nleg.integrate.DEFAULT_SPINUP)
        self.count = sampling.get('count', nleg.nlle.DEFAULT_COUNT)
        self.interval = sampling.get('interval', nleg.integrate.DEFAULT_INTERVAL)
        self.sampling_seed = sampling.get('seed', 0)
        self.x_init = sampling.get('x_init', None)

        perturbation = raw.get('perturbation', {})
        self.epsilon = perturbation.get('epsilon', nleg.nlle.DEFAULT_EPSILON)
        self.directions = perturbation.get('directions', perturbation.get('directions_per_point', nleg.nlle.DEFAULT_DIRECTIONS))
        self.perturbation_seed = perturbation.get('seed', 0)

        output = raw.get('output', {})
        self.output_directory = output.get('directory', DEFAULT_OUTPUT_DIRECTORY)
        self.formats = list(output.get('formats', DEFAULT_FORMATS))

        self.options = self._analysis_options(dict(raw['analysis']))

    @staticmethod
    def from_path(path):
        return ExperimentConfig(nleg.util.load_json_with_comments(path))

    def create_model(self):
        return nleg.model.create(self.model_name, self.model_parameters)

    def with_overrides(self, seed = None, output_directory = None):
        raw = copy.deepcopy(self._raw)

        if (seed is not None):
            for section in ['sampling', 'perturbation']:
                raw.setdefault(section, {})['seed'] = seed

        if (output_directory is not None):
            raw.setdefault('output', {})['directory'] = output_directory

        return ExperimentConfig(raw)

    def seeds(self):
        return {
            'sampling': self.sampling_seed,
            'perturbation': self.perturbation_seed,
        }

    def to_dict(self):
        return copy.deepcopy(self._raw)

    def _analysis_options(self, section):
        section.pop('name')
        options = {}

        if (self.analysis in [Analysis.NLLE, Analysis.LOCAL_MAP, Analysis.EPS_SWEEP]):
            options['tau_grid'] = _expand_tau_grid(section.pop('tau_grid', {}))
            options['window'] = section.pop('window', nleg.nlle.DEFAULT_WINDOW)
            options['slope_tol'] = section.pop('slope_tol', nleg.nlle.DEFAULT_SLOPE_TOL)
            options['theta'] = section.pop('theta', nleg.nlle.DEFAULT_THETA)
            options['noise_z'] = section.pop('noise_z', nleg.nlle.DEFAULT_NOISE_Z)

        if (self.analysis == Analysis.GLE):
            options['total_time'] = section.pop('total_time', DEFAULT_TOTAL_TIME)
            options['renorm_interval'] = section.pop('renorm_interval', nleg.lyapunov.DEFAULT_RENORM_INTERVAL)
            options['m'] = section.pop('m', None)
        elif (self.analysis == Analysis.LLE):
            options['tau'] = section.pop('tau', DEFAULT_LLE_TAU)
        elif (self.analysis == Analysis.SPECTRUM):
            options['tau'] = section.pop('tau', DEFAULT_SPECTRUM_TAU)
            options['renorm_interval'] = section.pop('renorm_interval', nleg.nlle.DEFAULT_RENORM_INTERVAL)
            options['m'] = section.pop('m', None)
        elif (self.analysis == Analysis.LOCAL_MAP):
            options['points'] = section.pop('points', None)
        elif (self.analysis == Analysis.EPS_SWEEP):
            options['epsilons'] = section.pop('epsilons', list(DEFAULT_SWEEP_EPSILONS))
        elif (self.analysis == Analysis.FIXED_POINTS):
            options['box'] = section.pop('box')
            options['grid_per_axis'] = section.pop('grid_per_axis', nleg.bifurcation.DEFAULT_GRID_PER_AXIS)
            options['newton_tol'] = section.pop('newton_tol', nleg.bifurcation.DEFAULT_NEWTON_TOL)
        elif (self.analysis == Analysis.PES_SCAN):
            options['parameter'] = section.pop('parameter')
            options['lambda_grid'] = section.pop('lambda_grid')
            options['equilibrium'] = section.pop('equilibrium', None)
        elif (self.analysis in TOY_ANALYSES):
            options['lambda'] = section.pop('lambda', DEFAULT_TOY_LAMBDA)
            options['n_basin'] = section.pop('n_basin', nleg.bifurcation.DEFAULT_BASIN_COUNT)
            options['horizon'] = section.pop('horizon', nleg.bifurcation.DEFAULT_HORIZON)
        elif (self.analysis == Analysis.TRAJECTORY):
            options['duration'] = section.pop('duration', DEFAULT_TRAJECTORY_DURATION)

        return options

def _expand_tau_grid(value):
    if (isinstance(value, list)):
        return nleg.nlle.check_tau_grid(value)

    return nleg.nlle.default_tau_grid(
            start = value.get('start', nleg.nlle.DEFAULT_TAU_START),
            stop = value.get('stop', nleg.nlle.DEFAULT_TAU_STOP),
            count = value.get('count', nleg.nlle.DEFAULT_TAU_COUNT),
            switch = value.get('switch', nleg.nlle.DEFAULT_TAU_SWITCH))
