"""
The tangent linear model (TLM) track: finite-time and global Lyapunov exponents
computed from the linearized flow dd/dt = J(x(t)) d along a base trajectory.
"""

import math

import numpy

import nleg.gsr
import nleg.integrate

DEFAULT_RENORM_INTERVAL = 0.5

class TangentState(object):
    """
    A base state together with m tangent vectors (one per column of |perturbations|, shape n x m).
    """

    def __init__(self, base, perturbations):
        self.base = numpy.asarray(base, dtype = numpy.float64)
        self.perturbations = numpy.asarray(perturbations, dtype = numpy.float64)

        if (self.perturbations.ndim == 1):
            self.perturbations = self.perturbations.reshape((-1, 1))

        if (self.perturbations.shape[0] != self.base.shape[0]):
            raise ValueError("Tangent vectors have dimension %d, base state has dimension %d." % (self.perturbations.shape[0], self.base.shape[0]))

        if (self.perturbations.shape[1] < 1):
            raise ValueError("A tangent state needs at least one tangent vector.")

    def count(self):
        return self.perturbations.shape[1]

class LyapunovSpectrum(object):
    def __init__(self, exponents, total_time, renorm_interval):
        self.exponents = numpy.sort(numpy.asarray(exponents, dtype = numpy.float64))[::-1]
        self.total_time = total_time
        self.renorm_interval = renorm_interval

    def sum(self):
        return float(numpy.sum(self.exponents))

    def to_dict(self):
        return {
            'exponents': [float(value) for value in self.exponents],
            'total_time': self.total_time,
            'renorm_interval': self.renorm_interval,
        }

    def to_rows(self):
        return ['index', 'exponent'], [[i + 1, value] for (i, value) in enumerate(self.exponents)]

def _tangent_rk4_step(model, x, tangents, h):
    k1 = model.drift(x)
    t1 = model.jacobian(x) @ tangents

    x2 = x + (0.5 * h) * k1
    k2 = model.drift(x2)
    t2 = model.jacobian(x2) @ (tangents + (0.5 * h) * t1)

    x3 = x + (0.5 * h) * k2
    k3 = model.drift(x3)
    t3 = model.jacobian(x3) @ (tangents + (0.5 * h) * t2)

    x4 = x + h * k3
    k4 = model.drift(x4)
    t4 = model.jacobian(x4) @ (tangents + h * t3)

    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), tangents + (h / 6.0) * (t1 + 2.0 * t2 + 2.0 * t3 + t4)

def tangent_advance(model, state, duration, step = nleg.integrate.DEFAULT_STEP, t0 = 0.0):
    """
    Advance the base state and its tangent vectors together on the shared step sequence.
    The base part follows exactly the arithmetic of nleg.integrate.advance().
    """

    x = numpy.array(state.base)
    tangents = numpy.array(state.perturbations)

    full_steps, remainder = nleg.integrate.step_sizes(duration, step)

    for i in range(full_steps):
        x, tangents = _tangent_rk4_step(model, x, tangents, step)
        nleg.integrate.check_escape(x, t0 + (i + 1) * step)

    if (remainder > 0.0):
        x, tangents = _tangent_rk4_step(model, x, tangents, remainder)
        nleg.integrate.check_escape(x, t0 + duration)

    return TangentState(x, tangents)

def _check_perturbation(model, delta0):
    delta0 = numpy.asarray(delta0, dtype = numpy.float64)

    if (delta0.shape[0] != model.dimension()):
        raise ValueError("Perturbation dimension mismatch for model (%s), expected %d, found shape %s." % (model.name(), model.dimension(), str(delta0.shape)))

    if (not numpy.all(numpy.isfinite(delta0))):
        raise ValueError("Non-finite initial perturbation.")

    norms = numpy.sqrt(numpy.sum(delta0 * delta0, axis = 0))
    if (numpy.any(norms == 0.0)):
        raise ValueError("Initial perturbation must be nonzero.")

    return delta0

def tangent_propagate(model, base, delta0):
    """
    Integrate the TLM along a recorded base trajectory, restarting every step from the recorded state
    (so the Jacobian is evaluated at the RK4 substages of the base integration).
    |delta0| may be one vector or a frame (n x m). Returns the perturbation(s) at the end of |base|.
    """

    delta0 = _check_perturbation(model, delta0)

    if (base.dimension() != model.dimension()):
        raise ValueError("Base trajectory dimension (%d) does not match model (%s) dimension (%d)." % (base.dimension(), model.name(), model.dimension()))

    tangents = numpy.array(delta0)
    for k in range(base.size() - 1):
        h = base.times[k + 1] - base.times[k]
        _, tangents = _tangent_rk4_step(model, base.states[k], tangents, h)

    return tangents

def finite_time_lle(model, x0, direction, tau, step = nleg.integrate.DEFAULT_STEP):
    """
    (1 / tau) ln(|d(tau)| / |d(0)|) under the TLM, started along |direction|.
    """

    if (tau <= 0.0):
        raise ValueError("Evolution time tau must be > 0, found: %f." % (tau))

    direction = _check_perturbation(model, direction)
    direction = direction / numpy.sqrt(numpy.dot(direction, direction))

    base = nleg.integrate.integrate_trajectory(model, x0, 0.0, tau, step)
    delta = tangent_propagate(model, base, direction)

    return math.log(numpy.sqrt(numpy.dot(delta, delta))) / tau

def benettin_spectrum(model, x0, total_time, renorm_interval = DEFAULT_RENORM_INTERVAL, m = None, step = nleg.integrate.DEFAULT_STEP):
    """
    The m leading global Lyapunov exponents by the Benettin method:
    evolve m tangent vectors, reorthogonalize every |renorm_interval|, and accumulate the log growth of each.
    """

    n = model.dimension()
    if (m is None):
        m = n

    if ((m < 1) or (m > n)):
        raise ValueError("Number of exponents must be in [1, %d], found: %d." % (n, m))

    if (renorm_interval <= 0.0):
        raise ValueError("Renormalization interval must be > 0, found: %f." % (renorm_interval))

    if (total_time < renorm_interval):
        raise ValueError("Total time (%f) must be at least one renormalization interval (%f)." % (total_time, renorm_interval))

    state = TangentState(model.check_state(x0), numpy.eye(n)[:, 0:m])
    log_sums = numpy.zeros(m)

    intervals, remainder = nleg.integrate.step_sizes(total_time, renorm_interval)
    lengths = [renorm_interval] * intervals
    if (remainder > 0.0):
        lengths.append(remainder)

    time = 0.0
    for length in lengths:
        state = tangent_advance(model, state, length, step, t0 = time)
        time += length

        orthogonal = nleg.gsr.gsr_orthogonalize(state.perturbations)
        norms = nleg.gsr.gsr_norms(orthogonal)

        log_sums += numpy.log(norms)
        state = TangentState(state.base, orthogonal / norms)

    spectrum = LyapunovSpectrum(log_sums / total_time, total_time, renorm_interval)

    print("Benettin Complete - Intervals: %d, Exponents: [%s]." % (len(lengths), ', '.join(["%f" % (value) for value in spectrum.exponents])))

    return spectrum
