"""
Fixed-step classical Runge-Kutta integration.

Every integration in this package goes through the same step sequence:
as many full steps of size |step| as fit into the duration, then one shortened step that lands exactly on the end time.
Two integrations over the same duration therefore visit identical grids,
which keeps base and perturbed trajectories (and the tangent model) in lockstep.
"""

import math

import numpy

ESCAPE_NORM = 1e8

DEFAULT_STEP = 0.01
DEFAULT_SPINUP = 100.0
DEFAULT_INTERVAL = 0.5
DEFAULT_JITTER = 1e-3

# Relative slack (in units of the step) below which a trailing partial step is dropped.
STEP_SLACK = 1e-9

class TrajectoryEscapeError(RuntimeError):
    def __init__(self, time, norm, member = None, seed = None):
        self.time = time
        self.norm = norm
        self.member = member
        self.seed = seed

        message = "Trajectory escape at t = %.17g (state norm: %g, threshold: %g)." % (time, norm, ESCAPE_NORM)
        if (member is not None):
            message = "%s Ensemble member: %d, seed: %s." % (message, member, str(seed))

        super().__init__(message)

    def for_member(self, member, seed):
        return TrajectoryEscapeError(self.time, self.norm, member = member, seed = seed)

class Trajectory(object):
    def __init__(self, times, states):
        self.times = numpy.asarray(times, dtype = numpy.float64)
        self.states = numpy.asarray(states, dtype = numpy.float64)

    def size(self):
        return self.times.shape[0]

    def dimension(self):
        return self.states.shape[1]

    def initial_state(self):
        return self.states[0]

    def final_state(self):
        return self.states[-1]

    def to_rows(self):
        header = ['t'] + ["x%d" % (i + 1) for i in range(self.dimension())]
        rows = [[self.times[i]] + list(self.states[i]) for i in range(self.size())]
        return header, rows

class AttractorSample(object):
    """
    States taken from a long integration after spin-up, used as the base points of ensemble averages.
    """

    def __init__(self, points, spinup, interval, seed = None):
        self.points = numpy.asarray(points, dtype = numpy.float64)
        self.spinup = spinup
        self.interval = interval
        self.seed = seed

    def size(self):
        return self.points.shape[0]

    def subset(self, count):
        return AttractorSample(self.points[0:count], self.spinup, self.interval, seed = self.seed)

def step_sizes(duration, step):
    """
    Return (number of full steps, the final partial step or 0.0).
    """

    if (duration < 0.0):
        raise ValueError("Integration duration must be >= 0, found: %f." % (duration))

    if (duration == 0.0):
        return 0, 0.0

    if (step <= 0.0):
        raise ValueError("Integration step must be > 0, found: %f." % (step))

    full_steps = int(math.floor(duration / step + STEP_SLACK))
    remainder = duration - full_steps * step

    if (remainder <= STEP_SLACK * step):
        remainder = 0.0

    return full_steps, remainder

def rk4_step(drift, x, h):
    k1 = drift(x)
    k2 = drift(x + (0.5 * h) * k1)
    k3 = drift(x + (0.5 * h) * k2)
    k4 = drift(x + h * k3)

    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

def advance(model, states, duration, step, t0 = 0.0):
    """
    Advance a single state or a stack of states (shape [..., n]) by |duration| and return only the endpoint.
    """

    x = numpy.array(states, dtype = numpy.float64)

    full_steps, remainder = step_sizes(duration, step)

    for i in range(full_steps):
        x = rk4_step(model.drift, x, step)
        check_escape(x, t0 + (i + 1) * step)

    if (remainder > 0.0):
        x = rk4_step(model.drift, x, remainder)
        check_escape(x, t0 + duration)

    return x

def check_escape(x, time):
    norms = numpy.sqrt(numpy.sum(x * x, axis = -1))

    # NaN fails the comparison too.
    if (not numpy.all(norms <= ESCAPE_NORM)):
        worst = numpy.nanmax(numpy.where(numpy.isfinite(norms), norms, numpy.inf))
        raise TrajectoryEscapeError(time, float(worst))

def integrate_trajectory(model, x0, t0, duration, step = DEFAULT_STEP):
    x = model.check_state(x0)

    full_steps, remainder = step_sizes(duration, step)

    times = [t0]
    states = [x]

    for i in range(full_steps):
        x = rk4_step(model.drift, x, step)
        time = t0 + (i + 1) * step
        check_escape(x, time)

        times.append(time)
        states.append(x)

    if (remainder > 0.0):
        x = rk4_step(model.drift, x, remainder)
        check_escape(x, t0 + duration)

        times.append(t0 + duration)
        states.append(x)
    elif (full_steps > 0):
        times[-1] = t0 + duration

    return Trajectory(times, states)

def initial_state(model, seed = None, x_init = None, jitter = DEFAULT_JITTER):
    """
    The state spin-up starts from.
    An explicit |x_init| is used as-is, otherwise the model's default state is jittered using |seed|.
    """

    if (x_init is not None):
        return model.check_state(x_init)

    state = numpy.array(model.default_state(), dtype = numpy.float64)
    if (seed is not None):
        rng = numpy.random.default_rng(seed)
        state = state + jitter * rng.standard_normal(state.shape[0])

    return model.check_state(state)

def sample_attractor(model, x_init, spinup = DEFAULT_SPINUP, count = 1, interval = DEFAULT_INTERVAL, step = DEFAULT_STEP, seed = None):
    if (spinup <= 0.0):
        raise ValueError("Spin-up must be > 0, found: %f." % (spinup))

    if (count < 1):
        raise ValueError("Sample count must be >= 1, found: %d." % (count))

    if (interval <= 0.0):
        raise ValueError("Sampling interval must be > 0, found: %f." % (interval))

    x = advance(model, model.check_state(x_init), spinup, step)

    points = [x]
    for i in range(1, count):
        x = advance(model, x, interval, step, t0 = spinup + (i - 1) * interval)
        points.append(x)

    return AttractorSample(points, spinup, interval, seed = seed)
