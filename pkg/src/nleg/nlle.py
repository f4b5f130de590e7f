"""
Nonlinear error growth: the nonlinear local Lyapunov exponent (NLLE) and everything built on it.

For a base point x0 and an initial error d0, the error after tau is the difference of two fully nonlinear trajectories,
and the NLLE is (1 / tau) ln(|d(tau)| / |d0|).
Ensemble means over attractor points and error directions give the mean NLLE and the mean relative growth of
the initial error (RGIE), exp(mean NLLE * tau), whose plateau sets the predictability limit.
"""

import math

import numpy
import sklearn.isotonic
import sklearn.metrics

import nleg.ensemble
import nleg.gsr
import nleg.integrate

DEFAULT_EPSILON = 1e-5
DEFAULT_COUNT = 400
DEFAULT_DIRECTIONS = 25

DEFAULT_WINDOW = 10
DEFAULT_SLOPE_TOL = 0.02
DEFAULT_THETA = 0.05
# Standard errors of ln RGIE a plateau may span on top of slope_tol.
DEFAULT_NOISE_Z = 5.0

DEFAULT_TAU_START = 0.05
DEFAULT_TAU_STOP = 30.0
DEFAULT_TAU_COUNT = 120
DEFAULT_TAU_SWITCH = 1.0

DEFAULT_RENORM_INTERVAL = 0.5

UNIT_TOLERANCE = 1e-12
RGIE_TOLERANCE = 1e-12
TAU_MULTIPLE_TOLERANCE = 1e-9

RANDOM_PREFIX = 'random:'

class SaturationError(ValueError):
    def __init__(self, run_length, window):
        self.run_length = run_length
        self.window = window

        super().__init__("Saturation not reached: the trailing plateau covers %d grid points, need at least %d. Extend the tau grid." % (run_length, window))

class PerturbationSpec(object):
    """
    Initial errors of magnitude |epsilon|.
    |directions| is either a count of random directions (uniform on the unit sphere), a "random:N" string,
    or explicit unit vectors (n x N, one per column).
    """

    def __init__(self, epsilon = DEFAULT_EPSILON, directions = DEFAULT_DIRECTIONS, seed = 0):
        self.epsilon = float(epsilon)
        self.seed = int(seed)
        self.explicit = None
        self.random_count = None

        if (not (self.epsilon > 0.0)):
            raise ValueError("Perturbation magnitude epsilon must be > 0, found: %s." % (str(epsilon)))

        if (isinstance(directions, str)):
            if (not directions.startswith(RANDOM_PREFIX)):
                raise ValueError("Unknown direction spec: '%s', expected '%sN'." % (directions, RANDOM_PREFIX))
            directions = int(directions[len(RANDOM_PREFIX):])

        if (isinstance(directions, (int, numpy.integer))):
            if (directions < 1):
                raise ValueError("Need at least one perturbation direction, found: %d." % (directions))
            self.random_count = int(directions)
            return

        explicit = numpy.array(directions, dtype = numpy.float64)
        if (explicit.ndim == 1):
            explicit = explicit.reshape((-1, 1))

        norms = numpy.sqrt(numpy.sum(explicit * explicit, axis = 0))
        if (numpy.any(numpy.abs(norms - 1.0) > UNIT_TOLERANCE)):
            raise ValueError("Explicit perturbation directions must be unit vectors, found norms: [%s]." % (', '.join(map(str, norms))))

        self.explicit = explicit

    def count(self):
        if (self.explicit is not None):
            return self.explicit.shape[1]

        return self.random_count

    def draw(self, rng, dimension):
        """
        Return the perturbations for one base point, one per row (N x n), each of magnitude epsilon.
        """

        if (self.explicit is not None):
            self._check_dimension(dimension)
            return self.epsilon * self.explicit.T

        directions = rng.standard_normal((self.random_count, dimension))
        directions /= numpy.sqrt(numpy.sum(directions * directions, axis = 1)).reshape((-1, 1))

        return self.epsilon * directions

    def frame(self, rng, dimension, m):
        """
        Return m orthogonal perturbations of magnitude epsilon (n x m, one per column).
        """

        if (self.explicit is not None):
            self._check_dimension(dimension)
            if (self.explicit.shape[1] < m):
                raise ValueError("Need %d explicit directions for the frame, found %d." % (m, self.explicit.shape[1]))
            vectors = self.explicit[:, 0:m]
        else:
            vectors = rng.standard_normal((dimension, m))

        orthogonal = nleg.gsr.gsr_orthogonalize(vectors)
        return self.epsilon * orthogonal / nleg.gsr.gsr_norms(orthogonal)

    def _check_dimension(self, dimension):
        if (self.explicit.shape[0] != dimension):
            raise ValueError("Explicit directions have dimension %d, model has dimension %d." % (self.explicit.shape[0], dimension))

    def to_dict(self):
        directions = "%s%d" % (RANDOM_PREFIX, self.random_count)
        if (self.explicit is not None):
            directions = self.explicit.tolist()

        return {
            'epsilon': self.epsilon,
            'directions': directions,
            'seed': self.seed,
        }

class NlleCurve(object):
    def __init__(self, tau_grid, mean_nlle, ensemble_size, seed, stderr = None, e_sat = None, t_p = None):
        self.tau_grid = numpy.asarray(tau_grid, dtype = numpy.float64)
        self.mean_nlle = numpy.asarray(mean_nlle, dtype = numpy.float64)
        self.rgie = numpy.exp(self.mean_nlle * self.tau_grid)
        self.ensemble_size = ensemble_size
        self.seed = seed
        self.e_sat = e_sat
        self.t_p = t_p

        if (stderr is None):
            stderr = numpy.zeros(self.tau_grid.shape[0])
        self.stderr = numpy.asarray(stderr, dtype = numpy.float64)

        _check_rgie(self.tau_grid, self.mean_nlle, self.rgie)

    def size(self):
        return self.tau_grid.shape[0]

    def to_rows(self):
        header = ['tau', 'mean_nlle', 'rgie', 'stderr']
        rows = [[self.tau_grid[k], self.mean_nlle[k], self.rgie[k], self.stderr[k]] for k in range(self.size())]
        return header, rows

    def to_dict(self):
        return {
            'tau_grid': self.tau_grid.tolist(),
            'mean_nlle': self.mean_nlle.tolist(),
            'rgie': self.rgie.tolist(),
            'stderr': self.stderr.tolist(),
            'e_sat': self.e_sat,
            't_p': self.t_p,
            'ensemble_size': self.ensemble_size,
            'seed': self.seed,
        }

class NlleSpectrumResult(object):
    def __init__(self, exponents, tau, epsilon, ensemble_size, partial_sums = None):
        self.exponents = numpy.asarray(exponents, dtype = numpy.float64)
        self.tau = tau
        self.epsilon = epsilon
        self.ensemble_size = ensemble_size
        self.partial_sums = partial_sums

    def sum(self):
        return float(numpy.sum(self.exponents))

    def to_rows(self):
        return ['index', 'exponent'], [[i + 1, value] for (i, value) in enumerate(self.exponents)]

    def to_dict(self):
        return {
            'exponents': self.exponents.tolist(),
            'tau': self.tau,
            'epsilon': self.epsilon,
            'ensemble_size': self.ensemble_size,
        }

class LocalNlleRecord(object):
    def __init__(self, x0, tau_grid, local_mean_nlle, stderr, local_t_p = None, local_e_sat = None):
        self.x0 = numpy.asarray(x0, dtype = numpy.float64)
        self.tau_grid = numpy.asarray(tau_grid, dtype = numpy.float64)
        self.local_mean_nlle = numpy.asarray(local_mean_nlle, dtype = numpy.float64)
        self.lrgie = numpy.exp(self.local_mean_nlle * self.tau_grid)
        self.stderr = numpy.asarray(stderr, dtype = numpy.float64)
        self.local_t_p = local_t_p
        self.local_e_sat = local_e_sat

        _check_rgie(self.tau_grid, self.local_mean_nlle, self.lrgie)

    def to_rows(self):
        header = ["x%d" % (i + 1) for i in range(self.x0.shape[0])] + ['tau', 'local_mean_nlle', 'lrgie', 'local_t_p']
        rows = []

        for k in range(self.tau_grid.shape[0]):
            rows.append(list(self.x0) + [self.tau_grid[k], self.local_mean_nlle[k], self.lrgie[k], self.local_t_p])

        return header, rows

    def to_dict(self):
        return {
            'x0': self.x0.tolist(),
            'tau_grid': self.tau_grid.tolist(),
            'local_mean_nlle': self.local_mean_nlle.tolist(),
            'lrgie': self.lrgie.tolist(),
            'stderr': self.stderr.tolist(),
            'local_t_p': self.local_t_p,
            'local_e_sat': self.local_e_sat,
        }

class SweepRecord(object):
    def __init__(self, epsilon, e_sat, t_p, pair_estimate):
        self.epsilon = epsilon
        self.e_sat = e_sat
        self.t_p = t_p
        self.pair_estimate = pair_estimate

    def to_dict(self):
        return {
            'epsilon': self.epsilon,
            'e_sat': self.e_sat,
            't_p': self.t_p,
            'pair_estimate': self.pair_estimate,
        }

def _check_rgie(tau_grid, mean_nlle, rgie):
    with numpy.errstate(invalid = 'ignore'):
        expected = numpy.exp(mean_nlle * tau_grid)
        finite = numpy.isfinite(expected)
        assert numpy.all(numpy.abs(rgie[finite] - expected[finite]) <= RGIE_TOLERANCE * numpy.abs(expected[finite])), "RGIE does not match exp(mean NLLE * tau)."

def check_tau_grid(tau_grid):
    tau_grid = numpy.asarray(tau_grid, dtype = numpy.float64)

    if ((tau_grid.ndim != 1) or (tau_grid.shape[0] < 1)):
        raise ValueError("The tau grid must be a nonempty list.")

    if (not numpy.all(tau_grid > 0.0)):
        raise ValueError("Every tau must be > 0, found: %f." % (numpy.min(tau_grid)))

    if (not numpy.all(numpy.diff(tau_grid) > 0.0)):
        raise ValueError("The tau grid must be strictly increasing.")

    return tau_grid

def default_tau_grid(start = DEFAULT_TAU_START, stop = DEFAULT_TAU_STOP, count = DEFAULT_TAU_COUNT, switch = DEFAULT_TAU_SWITCH):
    """
    Geometric spacing from |start| up to |switch| (resolving the early exponential regime),
    then linear spacing from |switch| to |stop| (resolving the plateau).
    """

    if (not (0.0 < start < stop)):
        raise ValueError("Tau grid bounds must satisfy 0 < start < stop, found: (%f, %f)." % (start, stop))

    if (count < 2):
        raise ValueError("Tau grid needs at least 2 points, found: %d." % (count))

    if (switch <= start or switch >= stop or count < 3):
        return numpy.linspace(start, stop, count)

    geometric_count = count // 3
    geometric = numpy.geomspace(start, switch, geometric_count, endpoint = False)
    linear = numpy.linspace(switch, stop, count - geometric_count)

    return check_tau_grid(numpy.concatenate([geometric, linear]))

def _norms(vectors):
    return numpy.sqrt(numpy.sum(vectors * vectors, axis = -1))

def _check_delta(model, delta0):
    delta0 = numpy.asarray(delta0, dtype = numpy.float64)

    if (delta0.shape != (model.dimension(), )):
        raise ValueError("Perturbation dimension mismatch for model (%s), expected %d, found shape %s." % (model.name(), model.dimension(), str(delta0.shape)))

    if (not numpy.all(numpy.isfinite(delta0)) or not numpy.any(delta0 != 0.0)):
        raise ValueError("Initial perturbation must be finite and nonzero.")

    return delta0

def nonlinear_propagate(model, x0, delta0, tau, step = nleg.integrate.DEFAULT_STEP):
    """
    d(tau) = x(tau; x0 + d0) - x(tau; x0), both trajectories on the same step sequence.
    """

    if (tau <= 0.0):
        raise ValueError("Evolution time tau must be > 0, found: %f." % (tau))

    x0 = model.check_state(x0)
    delta0 = _check_delta(model, delta0)

    states = nleg.integrate.advance(model, numpy.vstack([x0, x0 + delta0]), tau, step)
    return states[1] - states[0]

def nlle_single(model, x0, delta0, tau, step = nleg.integrate.DEFAULT_STEP):
    delta = nonlinear_propagate(model, x0, delta0, tau, step)
    delta0 = numpy.asarray(delta0, dtype = numpy.float64)

    return math.log(_norms(delta) / _norms(delta0)) / tau

def nlle_profile(model, x0, perturbations, tau_grid, step = nleg.integrate.DEFAULT_STEP):
    """
    The NLLE of every perturbation (one per row) at every tau, from a single pair of trajectories per perturbation.
    Returns an array of shape (number of perturbations, number of taus).
    """

    perturbations = numpy.atleast_2d(perturbations)
    initial_norms = _norms(perturbations)

    states = numpy.vstack([x0, x0 + perturbations])
    values = numpy.empty((perturbations.shape[0], tau_grid.shape[0]))

    time = 0.0
    for k in range(tau_grid.shape[0]):
        states = nleg.integrate.advance(model, states, tau_grid[k] - time, step, t0 = time)
        time = tau_grid[k]

        with numpy.errstate(divide = 'ignore'):
            values[:, k] = numpy.log(_norms(states[1:] - states[0]) / initial_norms) / tau_grid[k]

    return values

def _curve_member(index, x0, model, pert, tau_grid, step):
    rng = nleg.ensemble.member_rng(pert.seed, index)
    perturbations = pert.draw(rng, model.dimension())

    try:
        return nlle_profile(model, x0, perturbations, tau_grid, step)
    except nleg.integrate.TrajectoryEscapeError as ex:
        raise ex.for_member(index, pert.seed)

def _mean_and_stderr(values):
    mean = numpy.mean(values, axis = 0)

    if (values.shape[0] < 2):
        return mean, numpy.zeros(values.shape[1])

    return mean, numpy.std(values, axis = 0, ddof = 1) / math.sqrt(values.shape[0])

def mean_nlle_curve(model, sample, pert, tau_grid, step = nleg.integrate.DEFAULT_STEP, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    The whole-ensemble mean NLLE: averaged over every sample point and every perturbation direction at that point.
    Member i (sample point i) draws its directions from the stream of (pert.seed, i).
    """

    tau_grid = check_tau_grid(tau_grid)

    if (sample.size() < 1):
        raise ValueError("The attractor sample is empty.")

    profiles = nleg.ensemble.map_members(_curve_member, sample.points, workers = workers,
            args = (model, pert, tau_grid, step))
    values = numpy.concatenate(profiles, axis = 0)

    # One independent value per sample point: directions at a point grow together.
    _, stderr = _mean_and_stderr(numpy.vstack([numpy.mean(profile, axis = 0) for profile in profiles]))

    return NlleCurve(tau_grid, numpy.mean(values, axis = 0), values.shape[0], pert.seed, stderr = stderr)

def saturation_and_limit(curve, window = DEFAULT_WINDOW, slope_tol = DEFAULT_SLOPE_TOL, theta = DEFAULT_THETA, noise_z = DEFAULT_NOISE_Z):
    """
    Locate the RGIE plateau and the predictability limit.

    The plateau is the longest trailing run of grid points over which the RGIE varies by at most |slope_tol|
    (relative, between any two points of the run); it must cover at least |window| points.
    An ensemble curve also carries sampling noise, so the allowed variation of ln RGIE is widened by
    |noise_z| standard errors of ln RGIE, taken over the last |window| points.
    Curves without a standard error (a single member, or synthetic curves) get no widening.

    E_sat is the mean RGIE over the plateau and T_p is the first tau at which the RGIE reaches (1 - theta) E_sat.
    T_p is read off the nondecreasing (isotonic) fit of the RGIE, which is the RGIE itself for a monotone curve
    and keeps a single noisy point from crossing the threshold early.
    Both are recorded into |curve|.
    """

    rgie = curve.rgie
    size = rgie.shape[0]

    if (window < 1):
        raise ValueError("Saturation window must be >= 1, found: %d." % (window))

    if (size < 2 * window):
        raise ValueError("Need at least %d grid points for a saturation window of %d, found %d." % (2 * window, window, size))

    if (not (0.0 < theta < 1.0)):
        raise ValueError("Theta must be in (0, 1), found: %f." % (theta))

    if (noise_z < 0.0):
        raise ValueError("Noise allowance must be >= 0, found: %f." % (noise_z))

    log_rgie = curve.mean_nlle * curve.tau_grid
    noise = noise_z * numpy.max(curve.tau_grid[-window:] * curve.stderr[-window:])
    tolerance = math.log1p(slope_tol) + noise

    start = size - 1
    low = log_rgie[start]
    high = log_rgie[start]

    finite = numpy.isfinite(low) and numpy.isfinite(tolerance)
    if (finite):
        while (start > 0):
            new_low = min(low, log_rgie[start - 1])
            new_high = max(high, log_rgie[start - 1])

            if (not ((new_high - new_low) <= tolerance)):
                break

            low = new_low
            high = new_high
            start -= 1

    run_length = size - start
    if ((not finite) or (run_length < window)):
        raise SaturationError(run_length if finite else 0, window)

    e_sat = float(numpy.mean(rgie[start:]))

    monotone = sklearn.isotonic.isotonic_regression(numpy.nan_to_num(rgie, posinf = numpy.finfo(numpy.float64).max))
    reached = numpy.nonzero(monotone >= (1.0 - theta) * e_sat)[0]
    t_p = float(curve.tau_grid[reached[0]])

    curve.e_sat = e_sat
    curve.t_p = t_p

    return e_sat, t_p

def _local_member(index, x0, model, epsilon, count, tau_grid, theta, step, seed, window, slope_tol, noise_z):
    rng = nleg.ensemble.member_rng(seed, index)
    pert = PerturbationSpec(epsilon, count, seed = seed)

    try:
        values = nlle_profile(model, x0, pert.draw(rng, model.dimension()), tau_grid, step)
    except nleg.integrate.TrajectoryEscapeError as ex:
        raise ex.for_member(index, seed)

    mean, stderr = _mean_and_stderr(values)

    curve = NlleCurve(tau_grid, mean, count, seed, stderr = stderr)

    local_t_p = None
    local_e_sat = None
    if (tau_grid.shape[0] >= 2 * window):
        try:
            local_e_sat, local_t_p = saturation_and_limit(curve, window = window, slope_tol = slope_tol, theta = theta, noise_z = noise_z)
        except SaturationError:
            pass

    return LocalNlleRecord(x0, tau_grid, curve.mean_nlle, curve.stderr, local_t_p = local_t_p, local_e_sat = local_e_sat)

def local_mean_nlle(model, x0, epsilon, N, tau_grid, theta = DEFAULT_THETA, step = nleg.integrate.DEFAULT_STEP, seed = 0,
        window = DEFAULT_WINDOW, slope_tol = DEFAULT_SLOPE_TOL, noise_z = DEFAULT_NOISE_Z):
    """
    The local ensemble mean NLLE at |x0|: N errors drawn uniformly on the epsilon-sphere around x0.
    The local predictability limit is left absent when the local RGIE does not saturate on |tau_grid|.
    """

    if (N < 1):
        raise ValueError("Local ensemble size must be >= 1, found: %d." % (N))

    x0 = model.check_state(x0)
    tau_grid = check_tau_grid(tau_grid)

    return _local_member(0, x0, model, epsilon, N, tau_grid, theta, step, seed, window, slope_tol, noise_z)

def local_map(model, sample, epsilon, N, tau_grid, theta = DEFAULT_THETA, step = nleg.integrate.DEFAULT_STEP, seed = 0,
        window = DEFAULT_WINDOW, slope_tol = DEFAULT_SLOPE_TOL, noise_z = DEFAULT_NOISE_Z, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    local_mean_nlle() at every sample point (point i uses the stream of (seed, i)):
    the distribution of local predictability over the attractor.
    """

    if (N < 1):
        raise ValueError("Local ensemble size must be >= 1, found: %d." % (N))

    tau_grid = check_tau_grid(tau_grid)

    records = nleg.ensemble.map_members(_local_member, sample.points, workers = workers,
            args = (model, epsilon, N, tau_grid, theta, step, seed, window, slope_tol, noise_z))

    missing = sum([1 for record in records if record.local_t_p is None])
    if (missing > 0):
        print("WARNING: The local RGIE did not saturate at %d of %d points, their local predictability limit is absent." % (missing, len(records)))

    return records

def _spectrum_member(index, x0, model, pert, intervals, renorm_interval, m, step):
    rng = nleg.ensemble.member_rng(pert.seed, index)
    epsilon = pert.epsilon

    x = x0
    frame = pert.frame(rng, model.dimension(), m)
    partial_sums = numpy.zeros(m)

    try:
        for interval in range(intervals):
            states = nleg.integrate.advance(model, numpy.vstack([x, x + frame.T]), renorm_interval, step, t0 = interval * renorm_interval)
            x = states[0]
            errors = (states[1:] - x).T

            orthogonal = nleg.gsr.gsr_orthogonalize(errors)

            # The frame entering the interval is orthogonal with every vector of length epsilon,
            # so its k-volume is epsilon^k.
            scaled = errors / epsilon
            for k in range(m):
                volume = nleg.gsr.volume_m(scaled[:, 0:(k + 1)])
                if (volume <= 0.0):
                    raise nleg.gsr.DependentFrameError(k, volume)

                partial_sums[k] += math.log(volume)

            frame = epsilon * orthogonal / nleg.gsr.gsr_norms(orthogonal)
    except nleg.integrate.TrajectoryEscapeError as ex:
        raise ex.for_member(index, pert.seed)
    except nleg.gsr.DependentFrameError as ex:
        raise ex.for_member(index, pert.seed)

    return partial_sums

def nlle_spectrum(model, sample, pert, tau, renorm_interval = DEFAULT_RENORM_INTERVAL, m = None, step = nleg.integrate.DEFAULT_STEP,
        workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    The first m mean NLLEs from the growth of m-dimensional error volumes.

    Each member (one per sample point) carries m orthogonal errors of magnitude epsilon.
    Every |renorm_interval| all of them are propagated nonlinearly, the log growth of the first k volumes is accumulated,
    and the frame is reorthogonalized and rescaled back to epsilon.
    Ensemble-mean partial sums over tau give sum_{i <= k} lambda_i, and successive differences give each lambda_i.
    """

    n = model.dimension()
    if (m is None):
        m = n

    if ((m < 1) or (m > n)):
        raise ValueError("Number of exponents must be in [1, %d], found: %d." % (n, m))

    if ((tau <= 0.0) or (renorm_interval <= 0.0)):
        raise ValueError("Tau (%f) and the renormalization interval (%f) must be > 0." % (tau, renorm_interval))

    intervals = int(round(tau / renorm_interval))
    if ((intervals < 1) or (abs(intervals * renorm_interval - tau) > TAU_MULTIPLE_TOLERANCE * max(1.0, tau))):
        raise ValueError("Tau (%f) must be a multiple of the renormalization interval (%f)." % (tau, renorm_interval))

    if (sample.size() < 1):
        raise ValueError("The attractor sample is empty.")

    partial_sums = nleg.ensemble.map_members(_spectrum_member, sample.points, workers = workers,
            args = (model, pert, intervals, renorm_interval, m, step))

    mean_partial_sums = numpy.mean(numpy.vstack(partial_sums), axis = 0) / tau
    exponents = numpy.diff(numpy.concatenate([[0.0], mean_partial_sums]))

    result = NlleSpectrumResult(exponents, tau, pert.epsilon, len(partial_sums), partial_sums = mean_partial_sums)

    print("NLLE Spectrum Complete - Members: %d, Intervals: %d, Exponents: [%s]." % (len(partial_sums), intervals, ', '.join(["%f" % (value) for value in exponents])))

    return result

def attractor_diameter(sample):
    return float(numpy.max(sklearn.metrics.pairwise_distances(sample.points)))

def pair_saturation_estimate(sample, epsilon):
    """
    exp(<ln(|x - y| / epsilon)>) over all distinct pairs of sample points:
    the RGIE two independent states would show, an estimate of the saturation level.
    """

    if (sample.size() < 2):
        raise ValueError("Need at least two sample points, found %d." % (sample.size()))

    distances = sklearn.metrics.pairwise_distances(sample.points)
    distances = distances[numpy.triu_indices(sample.size(), k = 1)]
    distances = distances[distances > 0.0]

    if (distances.shape[0] == 0):
        raise ValueError("Every sample point is identical.")

    return float(math.exp(numpy.mean(numpy.log(distances / epsilon))))

def predictability_sweep(model, sample, epsilons, directions, tau_grid, seed = 0, step = nleg.integrate.DEFAULT_STEP,
        window = DEFAULT_WINDOW, slope_tol = DEFAULT_SLOPE_TOL, theta = DEFAULT_THETA, noise_z = DEFAULT_NOISE_Z, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    E_sat and T_p as functions of the initial error magnitude.
    Each magnitude is a full mean_nlle_curve() with the same seed, so every magnitude sees the same directions.
    """

    records = []

    for epsilon in epsilons:
        pert = PerturbationSpec(epsilon, directions, seed = seed)
        curve = mean_nlle_curve(model, sample, pert, tau_grid, step = step, workers = workers)

        try:
            e_sat, t_p = saturation_and_limit(curve, window = window, slope_tol = slope_tol, theta = theta, noise_z = noise_z)
        except SaturationError as ex:
            print("WARNING: epsilon = %g: %s" % (epsilon, ex))
            e_sat, t_p = None, None

        records.append(SweepRecord(float(epsilon), e_sat, t_p, pair_saturation_estimate(sample, epsilon)))

    return records
