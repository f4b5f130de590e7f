"""
Numerical checks of attractor bifurcation:
fixed points and their linear stability, the exchange of stabilities along a parameter,
and the structure and basin of the bifurcated attractor of the two-dimensional toy system.
"""

import enum
import itertools
import math

import numpy
import scipy.optimize

import nleg.ensemble
import nleg.integrate
import nleg.model

DEFAULT_GRID_PER_AXIS = 21
DEFAULT_NEWTON_TOL = 1e-10
MAX_NEWTON_STEPS = 50
MAX_HALVINGS = 30
MAX_REFINE_STEPS = 10
SINGULAR_CONDITION = 1e14

RESIDUAL_TOLERANCE = 1e-10
CLASSIFY_RESIDUAL_TOLERANCE = 1e-8
PES_RESIDUAL_TOLERANCE = 1e-8
DEGENERATE_TOLERANCE = 1e-8
DEDUP_DISTANCE = 1e-6
PES_ZERO_TOLERANCE = 1e-6

TOY_BOX_HALF_WIDTH = 2.0
DEFAULT_BASIN_COUNT = 1000
DEFAULT_HORIZON = 100.0
CONVERGED_TOLERANCE = 1e-3
STABILITY_TOLERANCE = 1e-6
EXCLUSION_RADIUS = 1e-8
BASIN_CHUNK_SIZE = 250

class FixedPointClass(enum.Enum):
    STABLE_NODE = 'stable-node'
    UNSTABLE_NODE = 'unstable-node'
    SADDLE = 'saddle'
    STABLE_FOCUS = 'stable-focus'
    UNSTABLE_FOCUS = 'unstable-focus'
    DEGENERATE = 'degenerate'

class EquilibriumDriftError(ValueError):
    def __init__(self, value, residual):
        self.value = value
        self.residual = residual

        super().__init__("The scanned state is not an equilibrium at parameter value %f (residual: %g, tolerance: %g)." % (value, residual, PES_RESIDUAL_TOLERANCE))

class FixedPointRecord(object):
    def __init__(self, location, eigenvalues, classification, residual):
        self.location = numpy.asarray(location, dtype = numpy.float64)
        self.eigenvalues = numpy.asarray(eigenvalues, dtype = numpy.complex128)
        self.classification = classification
        self.residual = residual

    def to_row(self):
        return list(self.location) + list(self.eigenvalues.real) + list(self.eigenvalues.imag) + [self.classification.value]

    def to_dict(self):
        return {
            'location': self.location.tolist(),
            'eigenvalues_real': self.eigenvalues.real.tolist(),
            'eigenvalues_imag': self.eigenvalues.imag.tolist(),
            'classification': self.classification.value,
            'residual': self.residual,
        }

    def __repr__(self):
        return "%s at (%s)" % (self.classification.value, ', '.join(["%f" % (value) for value in self.location]))

def fixed_point_rows(records, dimension):
    header = (["x%d" % (i + 1) for i in range(dimension)]
            + ["re_eig%d" % (i + 1) for i in range(dimension)]
            + ["im_eig%d" % (i + 1) for i in range(dimension)]
            + ['class'])

    return header, [record.to_row() for record in records]

class BifurcationReport(object):
    def __init__(self, lam, fixed_points, radius_min, radius_max, converged_fraction, n_basin, horizon, seed):
        self.lam = lam
        self.fixed_points = fixed_points
        self.node_count = len([record for record in fixed_points if record.classification == FixedPointClass.STABLE_NODE])
        self.saddle_count = len([record for record in fixed_points if record.classification == FixedPointClass.SADDLE])
        self.attractor_radius_min = radius_min
        self.attractor_radius_max = radius_max
        self.basin_converged_fraction = converged_fraction
        self.n_basin = n_basin
        self.horizon = horizon
        self.seed = seed

    def to_dict(self):
        return {
            'lambda': self.lam,
            'fixed_points': [record.to_dict() for record in self.fixed_points],
            'node_count': self.node_count,
            'saddle_count': self.saddle_count,
            'attractor_radius_min': self.attractor_radius_min,
            'attractor_radius_max': self.attractor_radius_max,
            'basin_converged_fraction': self.basin_converged_fraction,
            'n_basin': self.n_basin,
            'horizon': self.horizon,
            'seed': self.seed,
        }

class PesScan(object):
    """
    Real parts of the eigenvalues at an equilibrium along a parameter grid,
    where the leading real part crosses zero (|crossing|), and how many eigenvalues cross there (|m|).
    """

    def __init__(self, parameter_values, real_parts, crossing, m):
        self.parameter_values = numpy.asarray(parameter_values, dtype = numpy.float64)
        self.real_parts = numpy.asarray(real_parts, dtype = numpy.float64)
        self.crossing = crossing
        self.m = m
        self.remaining = self.real_parts.shape[1] - m

    def to_rows(self):
        header = ['lambda'] + ["re_eig%d" % (i + 1) for i in range(self.real_parts.shape[1])]
        rows = [[self.parameter_values[i]] + list(self.real_parts[i]) for i in range(self.parameter_values.shape[0])]
        return header, rows

    def to_dict(self):
        return {
            'lambda_grid': self.parameter_values.tolist(),
            'real_parts': self.real_parts.tolist(),
            'crossing': self.crossing,
            'm': self.m,
            'remaining': self.remaining,
        }

def _norm(x):
    return float(numpy.sqrt(numpy.sum(x * x)))

def _newton_direction(model, x, residual):
    jacobian = model.jacobian(x)

    if (not (numpy.linalg.cond(jacobian) < SINGULAR_CONDITION)):
        return None

    return numpy.linalg.solve(jacobian, -residual)

def _newton(model, x, tolerance, max_steps = MAX_NEWTON_STEPS):
    """
    Damped Newton iteration: the step is halved until the residual decreases.
    Returns (state, residual), or (None, None) if the Jacobian went singular.
    """

    residual = model.drift(x)
    residual_norm = _norm(residual)

    for i in range(max_steps):
        if (residual_norm <= tolerance):
            break

        direction = _newton_direction(model, x, residual)
        if (direction is None):
            return None, None

        omega = 1.0
        for halving in range(MAX_HALVINGS):
            candidate = x + omega * direction
            candidate_residual = model.drift(candidate)
            candidate_norm = _norm(candidate_residual)

            if (candidate_norm < residual_norm):
                break

            omega /= 2.0

        if (not numpy.all(numpy.isfinite(candidate))):
            break

        x = candidate
        residual = candidate_residual
        residual_norm = candidate_norm

    return x, residual_norm

def _refine(model, x):
    x, residual = _newton(model, x, RESIDUAL_TOLERANCE, max_steps = MAX_REFINE_STEPS)
    return x, residual

def find_fixed_points(model, box, grid_per_axis = DEFAULT_GRID_PER_AXIS, newton_tol = DEFAULT_NEWTON_TOL):
    """
    Run Newton from every point of a uniform grid over |box| ([(lo, hi), ...], one pair per axis),
    keep distinct roots inside the box, and classify each.
    """

    box = numpy.asarray(box, dtype = numpy.float64)
    if (box.shape != (model.dimension(), 2)):
        raise ValueError("Search box must have one (lo, hi) pair per dimension (%d), found shape %s." % (model.dimension(), str(box.shape)))

    if (not numpy.all(box[:, 1] > box[:, 0])):
        raise ValueError("Search box must be nondegenerate, found: %s." % (box.tolist()))

    if (grid_per_axis < 2):
        raise ValueError("Need at least 2 grid points per axis, found: %d." % (grid_per_axis))

    axes = [numpy.linspace(low, high, grid_per_axis) for (low, high) in box]
    slack = 1e-9 * (box[:, 1] - box[:, 0])

    roots = []
    singular = 0
    unconverged = 0
    seeds = 0

    for seed in itertools.product(*axes):
        seeds += 1

        root, residual = _newton(model, numpy.array(seed), newton_tol)
        if (root is None):
            singular += 1
            continue

        if (residual > newton_tol):
            unconverged += 1
            continue

        if (numpy.any(root < box[:, 0] - slack) or numpy.any(root > box[:, 1] + slack)):
            continue

        if (any([_norm(root - other) <= DEDUP_DISTANCE for other in roots])):
            continue

        roots.append(root)

    records = [classify_fixed_point(model, root) for root in roots]
    records.sort(key = lambda record: tuple(numpy.round(record.location, 8)))

    print("Fixed Point Search Complete - Seeds: %d, Singular: %d, Unconverged: %d, Roots: %d." % (seeds, singular, unconverged, len(records)))

    return records

def classify(eigenvalues):
    real = eigenvalues.real

    if (numpy.any(numpy.abs(real) <= DEGENERATE_TOLERANCE)):
        return FixedPointClass.DEGENERATE

    oscillating = numpy.any(numpy.abs(eigenvalues.imag) > DEGENERATE_TOLERANCE)

    if (numpy.all(real < 0.0)):
        return FixedPointClass.STABLE_FOCUS if oscillating else FixedPointClass.STABLE_NODE

    if (numpy.all(real > 0.0)):
        return FixedPointClass.UNSTABLE_FOCUS if oscillating else FixedPointClass.UNSTABLE_NODE

    return FixedPointClass.SADDLE

def _sorted_eigenvalues(model, x):
    eigenvalues = numpy.linalg.eigvals(model.jacobian(x))
    order = sorted(range(eigenvalues.shape[0]), key = lambda i: (-eigenvalues[i].real, -eigenvalues[i].imag))
    return eigenvalues[order]

def classify_fixed_point(model, location):
    location = model.check_state(location)

    residual = _norm(model.drift(location))
    if (residual > CLASSIFY_RESIDUAL_TOLERANCE):
        raise ValueError("Not a fixed point of %s: residual %g at (%s) exceeds %g." % (model, residual, ', '.join(map(str, location)), CLASSIFY_RESIDUAL_TOLERANCE))

    if (residual > RESIDUAL_TOLERANCE):
        refined, refined_residual = _refine(model, location)
        if ((refined is not None) and (refined_residual < residual)):
            location = refined
            residual = refined_residual

    eigenvalues = _sorted_eigenvalues(model, location)

    return FixedPointRecord(location, eigenvalues, classify(eigenvalues), residual)

def _leading_real_part(family, value, equilibrium):
    return float(_sorted_eigenvalues(family(value), equilibrium)[0].real)

def pes_scan(family, equilibrium, lambda_grid):
    """
    Scan the eigenvalues at |equilibrium| over |lambda_grid| for the model family |family| (value -> model).
    The crossing is located on the first grid interval where the leading real part goes from negative to nonnegative:
    linear interpolation gives the first estimate, which is refined by root finding on that interval.
    """

    values = numpy.sort(numpy.asarray(lambda_grid, dtype = numpy.float64))
    if (values.shape[0] < 2):
        raise ValueError("Need at least two parameter values to scan, found %d." % (values.shape[0]))

    equilibrium = numpy.asarray(equilibrium, dtype = numpy.float64)

    real_parts = []
    for value in values:
        model = family(value)
        model.check_state(equilibrium)

        residual = _norm(model.drift(equilibrium))
        if (residual > PES_RESIDUAL_TOLERANCE):
            raise EquilibriumDriftError(value, residual)

        real_parts.append(_sorted_eigenvalues(model, equilibrium).real)

    real_parts = numpy.array(real_parts)
    leading = real_parts[:, 0]

    crossing = None
    for k in range(values.shape[0] - 1):
        if (not (leading[k] < 0.0 and leading[k + 1] >= 0.0)):
            continue

        if (leading[k + 1] == 0.0):
            crossing = float(values[k + 1])
            break

        estimate = values[k] - leading[k] * (values[k + 1] - values[k]) / (leading[k + 1] - leading[k])
        crossing = float(scipy.optimize.brentq(lambda value: _leading_real_part(family, value, equilibrium), values[k], values[k + 1], xtol = 1e-14))

        print("PES Crossing - Interpolated: %f, Refined: %.12f." % (estimate, crossing))
        break

    m = 0
    if (crossing is not None):
        at_crossing = _sorted_eigenvalues(family(crossing), equilibrium).real
        m = int(numpy.sum(numpy.abs(at_crossing) <= PES_ZERO_TOLERANCE))

    return PesScan(values, real_parts, crossing, m)

def _toy_model(lam):
    return nleg.model.create(nleg.model.Model.ToyBifurcation, {'lambda': lam})

def _draw_initial_conditions(count, seed, half_width = TOY_BOX_HALF_WIDTH):
    rng = numpy.random.default_rng(seed)
    points = rng.uniform(-half_width, half_width, size = (count, 2))

    close = _norms(points) <= EXCLUSION_RADIUS
    while (numpy.any(close)):
        points[close] = rng.uniform(-half_width, half_width, size = (int(numpy.sum(close)), 2))
        close = _norms(points) <= EXCLUSION_RADIUS

    return points

def _norms(points):
    return numpy.sqrt(numpy.sum(points * points, axis = -1))

def _advance_chunk(index, points, model, horizon, step):
    return nleg.integrate.advance(model, points, horizon, step)

def _integrate_basin(model, count, horizon, seed, step, workers):
    initial = _draw_initial_conditions(count, seed)
    chunks = [initial[start:end] for (start, end) in nleg.ensemble.chunks(count, BASIN_CHUNK_SIZE)]

    finals = nleg.ensemble.map_members(_advance_chunk, chunks, workers = workers, args = (model, horizon, step))
    return numpy.concatenate(finals, axis = 0)

def square_distance(points, half_side):
    """
    Distance from each point to the boundary of the square [-half_side, half_side]^2.
    """

    a = numpy.abs(points[:, 0])
    b = numpy.abs(points[:, 1])

    vertical = numpy.sqrt((a - half_side) ** 2 + numpy.maximum(b - half_side, 0.0) ** 2)
    horizontal = numpy.sqrt((b - half_side) ** 2 + numpy.maximum(a - half_side, 0.0) ** 2)

    return numpy.minimum(vertical, horizontal)

def _toy_fixed_points(model, lam):
    half_width = max(TOY_BOX_HALF_WIDTH, 2.0 * math.sqrt(abs(lam)))
    return find_fixed_points(model, [(-half_width, half_width)] * 2)

def verify_toy_attractor(lam, n_basin = DEFAULT_BASIN_COUNT, horizon = DEFAULT_HORIZON, seed = 0,
        step = nleg.integrate.DEFAULT_STEP, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    Check the bifurcated attractor of the toy system for lambda > 0:
    its fixed points (four nodes and four saddles on the square of half side sqrt(lambda)),
    the range of radii trajectories settle at, and the fraction of random starts that end on the attractor
    (at rest, or within tolerance of the square's edges, which are the orbits connecting saddles to nodes).
    """

    if (not (lam > 0.0)):
        raise ValueError("The toy attractor only exists for lambda > 0, found: %f." % (lam))

    if (n_basin < 1):
        raise ValueError("Need at least one basin trajectory, found: %d." % (n_basin))

    model = _toy_model(lam)
    fixed_points = _toy_fixed_points(model, lam)

    finals = _integrate_basin(model, n_basin, horizon, seed, step, workers)
    radii = _norms(finals)

    at_rest = _norms(model.drift(finals)) <= CONVERGED_TOLERANCE
    on_square = square_distance(finals, math.sqrt(lam)) <= CONVERGED_TOLERANCE
    converged = numpy.logical_or(at_rest, on_square)

    return BifurcationReport(lam, fixed_points, float(numpy.min(radii)), float(numpy.max(radii)),
            float(numpy.mean(converged)), n_basin, horizon, seed)

def verify_toy_stability(lam, n_basin = DEFAULT_BASIN_COUNT, horizon = DEFAULT_HORIZON, seed = 0,
        step = nleg.integrate.DEFAULT_STEP, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    Check the toy system below criticality (lambda < 0): the origin is the only fixed point
    and every random start decays to it.
    """

    if (not (lam < 0.0)):
        raise ValueError("The origin is only globally stable for lambda < 0, found: %f." % (lam))

    if (n_basin < 1):
        raise ValueError("Need at least one basin trajectory, found: %d." % (n_basin))

    model = _toy_model(lam)
    fixed_points = _toy_fixed_points(model, lam)

    finals = _integrate_basin(model, n_basin, horizon, seed, step, workers)
    radii = _norms(finals)

    return BifurcationReport(lam, fixed_points, float(numpy.min(radii)), float(numpy.max(radii)),
            float(numpy.mean(radii <= STABILITY_TOLERANCE)), n_basin, horizon, seed)
