import argparse
import os
import sys
import time

import numpy

import nleg
import nleg.bifurcation
import nleg.config
import nleg.ensemble
import nleg.integrate
import nleg.lyapunov
import nleg.model
import nleg.nlle
import nleg.util

from nleg.config import Analysis

EXIT_SUCCESS = 0
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3

MANIFEST_FILENAME = 'manifest.json'

class RunManifest(object):
    """
    What a run produced: the config it ran (after overrides), its seeds, every artifact with its sha256 digest,
    and how long it took.
    """

    def __init__(self, config, artifacts, wall_time, workers):
        self.config = config
        self.artifacts = artifacts
        self.wall_time = wall_time
        self.workers = workers
        self.version = nleg.__version__

    def digests(self):
        return {name: digest for (name, digest) in self.artifacts}

    def to_dict(self):
        return {
            'analysis': self.config.analysis.value,
            'config': self.config.to_dict(),
            'seeds': self.config.seeds(),
            'artifacts': [{'path': name, 'sha256': digest} for (name, digest) in self.artifacts],
            'wall_time': self.wall_time,
            'version': self.version,
            'workers': self.workers,
        }

class _Outputs(object):
    """
    Writes the artifacts of one run and remembers every file (and directory) it created,
    so a failed run can be rolled back.
    """

    def __init__(self, directory, formats):
        self.directory = directory
        self.formats = formats
        self.created_directory = False
        self.paths = []

    def open(self):
        if (not os.path.isdir(self.directory)):
            os.makedirs(self.directory)
            self.created_directory = True

    def write(self, name, rows = None, data = None):
        if ((rows is not None) and (nleg.config.Format.CSV.value in self.formats)):
            header, body = rows
            self._write("%s.csv" % (name), lambda path: nleg.util.write_csv(path, header, body))

        if ((data is not None) and (nleg.config.Format.JSON.value in self.formats)):
            self._write("%s.json" % (name), lambda path: nleg.util.write_json(path, data))

    def _write(self, filename, writer):
        path = os.path.join(self.directory, filename)
        self.paths.append(path)
        writer(path)

    def digests(self):
        return [(os.path.basename(path), nleg.util.file_digest(path)) for path in self.paths]

    def write_manifest(self, manifest):
        self._write(MANIFEST_FILENAME, lambda path: nleg.util.write_json(path, manifest.to_dict()))

    def remove(self):
        for path in reversed(self.paths):
            if (os.path.exists(path)):
                os.remove(path)

        if (self.created_directory and os.path.isdir(self.directory) and len(os.listdir(self.directory)) == 0):
            os.rmdir(self.directory)

        self.paths = []

def run_config(config, workers = nleg.ensemble.DEFAULT_WORKERS):
    """
    Run the analysis |config| names, write its artifacts and the manifest, and return the manifest.
    On any failure every file this run created is removed before the error propagates.
    """

    start_time = time.time()

    outputs = _Outputs(config.output_directory, config.formats)

    try:
        outputs.open()

        print("%d -- Starting analysis: %s." % (int(time.time()), config.analysis.value))
        ANALYSES[config.analysis](config, outputs, workers)

        print("%d -- Writing manifest." % (int(time.time())))
        manifest = RunManifest(config, outputs.digests(), time.time() - start_time, workers)
        outputs.write_manifest(manifest)
    except BaseException:
        outputs.remove()
        raise

    print("%d -- Analysis complete: %s, artifacts: %d." % (int(time.time()), config.analysis.value, len(manifest.artifacts)))

    return manifest

def _sample(config, model):
    print("%d -- Sampling the attractor: %d point(s) after a spin-up of %s." % (int(time.time()), config.count, nleg.util.format_value(config.spinup)))

    x_init = nleg.integrate.initial_state(model, seed = config.sampling_seed, x_init = config.x_init)
    return nleg.integrate.sample_attractor(model, x_init, spinup = config.spinup, count = config.count,
            interval = config.interval, step = config.step, seed = config.sampling_seed)

def _perturbation(config):
    directions = config.directions
    if (isinstance(directions, list)):
        # Configs list one direction per entry, PerturbationSpec holds one per column.
        directions = numpy.array(directions, dtype = numpy.float64).T

    return nleg.nlle.PerturbationSpec(config.epsilon, directions, seed = config.perturbation_seed)

def _saturate(curve, options):
    try:
        nleg.nlle.saturation_and_limit(curve, window = options['window'], slope_tol = options['slope_tol'], theta = options['theta'],
                noise_z = options['noise_z'])
    except (nleg.nlle.SaturationError, ValueError) as ex:
        print("WARNING: %s E_sat and T_p are left absent." % (ex))

def _run_gle(config, outputs, workers):
    model = config.create_model()
    options = config.options

    x_init = nleg.integrate.initial_state(model, seed = config.sampling_seed, x_init = config.x_init)
    x0 = nleg.integrate.advance(model, x_init, config.spinup, config.step)

    spectrum = nleg.lyapunov.benettin_spectrum(model, x0, options['total_time'],
            renorm_interval = options['renorm_interval'], m = options['m'], step = config.step)

    outputs.write('gle', rows = spectrum.to_rows(), data = spectrum.to_dict())

def _lle_member(index, x0, model, seed, tau, step):
    rng = nleg.ensemble.member_rng(seed, index)
    direction = rng.standard_normal(model.dimension())

    try:
        return nleg.lyapunov.finite_time_lle(model, x0, direction, tau, step = step)
    except nleg.integrate.TrajectoryEscapeError as ex:
        raise ex.for_member(index, seed)

def _run_lle(config, outputs, workers):
    model = config.create_model()
    tau = config.options['tau']

    sample = _sample(config, model)
    values = nleg.ensemble.map_members(_lle_member, sample.points, workers = workers,
            args = (model, config.perturbation_seed, tau, config.step))

    header = ["x%d" % (i + 1) for i in range(model.dimension())] + ['tau', 'lle']
    rows = [list(sample.points[i]) + [tau, values[i]] for i in range(sample.size())]

    data = {
        'tau': tau,
        'lle': values,
        'mean_lle': float(numpy.mean(values)),
        'points': sample.points,
        'seed': config.perturbation_seed,
    }

    outputs.write('lle', rows = (header, rows), data = data)

def _run_nlle(config, outputs, workers):
    model = config.create_model()
    options = config.options

    sample = _sample(config, model)
    curve = nleg.nlle.mean_nlle_curve(model, sample, _perturbation(config), options['tau_grid'], step = config.step, workers = workers)
    _saturate(curve, options)

    outputs.write('nlle', rows = curve.to_rows(), data = curve.to_dict())

def _run_spectrum(config, outputs, workers):
    model = config.create_model()
    options = config.options

    sample = _sample(config, model)
    result = nleg.nlle.nlle_spectrum(model, sample, _perturbation(config), options['tau'],
            renorm_interval = options['renorm_interval'], m = options['m'], step = config.step, workers = workers)

    outputs.write('spectrum', rows = result.to_rows(), data = result.to_dict())

def _run_local_map(config, outputs, workers):
    model = config.create_model()
    options = config.options

    sample = _sample(config, model)
    if (options['points'] is not None):
        sample = sample.subset(options['points'])

    pert = _perturbation(config)
    records = nleg.nlle.local_map(model, sample, pert.epsilon, pert.count(), options['tau_grid'], theta = options['theta'],
            step = config.step, seed = pert.seed, window = options['window'], slope_tol = options['slope_tol'], noise_z = options['noise_z'],
            workers = workers)

    header = records[0].to_rows()[0]
    rows = [row for record in records for row in record.to_rows()[1]]

    outputs.write('localmap', rows = (header, rows), data = {'points': [record.to_dict() for record in records]})

def _run_eps_sweep(config, outputs, workers):
    model = config.create_model()
    options = config.options

    sample = _sample(config, model)
    pert = _perturbation(config)
    directions = pert.explicit if (pert.explicit is not None) else pert.count()

    records = nleg.nlle.predictability_sweep(model, sample, options['epsilons'], directions, options['tau_grid'],
            seed = pert.seed, step = config.step, window = options['window'], slope_tol = options['slope_tol'],
            theta = options['theta'], noise_z = options['noise_z'], workers = workers)

    header = ['epsilon', 'e_sat', 't_p', 'pair_estimate']
    rows = [[record.epsilon, record.e_sat, record.t_p, record.pair_estimate] for record in records]

    data = {
        'records': [record.to_dict() for record in records],
        'attractor_diameter': nleg.nlle.attractor_diameter(sample),
    }

    outputs.write('eps-sweep', rows = (header, rows), data = data)

def _run_fixed_points(config, outputs, workers):
    model = config.create_model()
    options = config.options

    records = nleg.bifurcation.find_fixed_points(model, options['box'],
            grid_per_axis = options['grid_per_axis'], newton_tol = options['newton_tol'])

    outputs.write('fixed-points', rows = nleg.bifurcation.fixed_point_rows(records, model.dimension()),
            data = {'fixed_points': [record.to_dict() for record in records]})

def _run_pes_scan(config, outputs, workers):
    options = config.options

    family = nleg.model.family(config.model_name, config.model_parameters, options['parameter'])

    equilibrium = options['equilibrium']
    if (equilibrium is None):
        equilibrium = numpy.zeros(config.create_model().dimension())

    scan = nleg.bifurcation.pes_scan(family, equilibrium, options['lambda_grid'])

    outputs.write('pes-scan', rows = scan.to_rows(), data = scan.to_dict())

def _run_toy(check):
    def run(config, outputs, workers):
        options = config.options

        report = check(options['lambda'], n_basin = options['n_basin'], horizon = options['horizon'],
                seed = config.sampling_seed, step = config.step, workers = workers)

        outputs.write(config.analysis.value, rows = nleg.bifurcation.fixed_point_rows(report.fixed_points, 2), data = report.to_dict())

    return run

def _run_trajectory(config, outputs, workers):
    model = config.create_model()

    x_init = nleg.integrate.initial_state(model, seed = config.sampling_seed, x_init = config.x_init)
    x0 = nleg.integrate.advance(model, x_init, config.spinup, config.step)

    trajectory = nleg.integrate.integrate_trajectory(model, x0, config.spinup, config.options['duration'], step = config.step)

    outputs.write('trajectory', rows = trajectory.to_rows(), data = {'times': trajectory.times, 'states': trajectory.states})

ANALYSES = {
    Analysis.GLE: _run_gle,
    Analysis.LLE: _run_lle,
    Analysis.NLLE: _run_nlle,
    Analysis.SPECTRUM: _run_spectrum,
    Analysis.LOCAL_MAP: _run_local_map,
    Analysis.EPS_SWEEP: _run_eps_sweep,
    Analysis.FIXED_POINTS: _run_fixed_points,
    Analysis.PES_SCAN: _run_pes_scan,
    Analysis.VERIFY_TOY: _run_toy(nleg.bifurcation.verify_toy_attractor),
    Analysis.VERIFY_STABILITY: _run_toy(nleg.bifurcation.verify_toy_stability),
    Analysis.TRAJECTORY: _run_trajectory,
}

def main(arguments):
    """
    Returns the process exit code.
    """

    try:
        print("%d -- Loading config: %s." % (int(time.time()), arguments.config_path))
        config = nleg.config.ExperimentConfig.from_path(arguments.config_path)

        if (arguments.command == 'validate'):
            print("Config is valid: %s." % (arguments.config_path))
            return EXIT_SUCCESS

        config = config.with_overrides(seed = arguments.seed, output_directory = arguments.output)
    except nleg.config.ConfigError as ex:
        print(ex, file = sys.stderr)
        return EXIT_VALIDATION
    except (OSError, ValueError) as ex:
        print("Could not load config (%s): %s" % (arguments.config_path, ex), file = sys.stderr)
        return EXIT_VALIDATION

    try:
        run_config(config, workers = arguments.workers)
    except Exception as ex:
        print("Analysis failed (%s): %s: %s" % (config.analysis.value, type(ex).__name__, ex), file = sys.stderr)
        return EXIT_COMPUTATION

    return EXIT_SUCCESS

def _load_args(args = None):
    parser = argparse.ArgumentParser(prog = 'nleg', description = 'Run a nonlinear error growth experiment from a JSON config file.')
    subparsers = parser.add_subparsers(dest = 'command', required = True)

    run_parser = subparsers.add_parser('run', help = 'run the analysis a config describes')
    validate_parser = subparsers.add_parser('validate', help = 'check a config without running anything')

    for subparser in [run_parser, validate_parser]:
        subparser.add_argument('--config', dest = 'config_path',
            action = 'store', type = str, required = True,
            help = 'the path to the JSON experiment config')

    run_parser.add_argument('--seed', dest = 'seed',
        action = 'store', type = int, default = None,
        help = 'replace every seed in the config (default: the config\'s seeds)')

    run_parser.add_argument('--workers', dest = 'workers',
        action = 'store', type = int, default = nleg.ensemble.DEFAULT_WORKERS,
        help = 'the number of worker processes for ensemble members (default: %(default)s)')

    run_parser.add_argument('--output', dest = 'output',
        action = 'store', type = str, default = None,
        help = 'replace the output directory from the config')

    arguments = parser.parse_args(args)

    if (arguments.command == 'validate'):
        arguments.seed = None
        arguments.workers = nleg.ensemble.DEFAULT_WORKERS
        arguments.output = None

    return arguments

def cli(args = None):
    return main(_load_args(args))

if (__name__ == '__main__'):
    sys.exit(cli())
