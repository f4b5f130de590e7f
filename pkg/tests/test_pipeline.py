import csv
import json
import os
import sys
import tempfile

import nleg
import nleg.config
import nleg.pipeline
import tests.base

class PipelineTest(tests.base.BaseTest):
    def setUp(self):
        self._temp_dir = tempfile.TemporaryDirectory()
        self.out_dir = self._temp_dir.name

    def tearDown(self):
        self._temp_dir.cleanup()

    def _path(self, name):
        return os.path.join(self.CONFIG_DIR, name)

    def _run(self, config_name, output_name, *args):
        output = os.path.join(self.out_dir, output_name)
        status = nleg.pipeline.cli(['run', '--config', self._path(config_name), '--output', output] + list(args))
        return status, output

    def _manifest(self, output):
        with open(os.path.join(output, nleg.pipeline.MANIFEST_FILENAME), 'r') as file:
            return json.load(file)

    def test_verify_toy_deterministic(self):
        status, first = self._run('verify-toy.json', 'first')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        status, second = self._run('verify-toy.json', 'second', '--workers', '2')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        first_manifest = self._manifest(first)
        second_manifest = self._manifest(second)

        self.assertEqual([artifact['path'] for artifact in first_manifest['artifacts']], ['verify-toy.csv', 'verify-toy.json'])
        self.assertEqual(first_manifest['artifacts'], second_manifest['artifacts'])
        self.assertEqual(first_manifest['seeds'], {'sampling': 7, 'perturbation': 0})
        self.assertEqual(second_manifest['workers'], 2)

        with open(os.path.join(first, 'verify-toy.json'), 'r') as file:
            report = json.load(file)

        self.assertEqual(report['node_count'], 4)
        self.assertEqual(report['saddle_count'], 4)

    def test_seed_override(self):
        status, output = self._run('verify-toy.json', 'override', '--seed', '11')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        manifest = self._manifest(output)
        self.assertEqual(manifest['seeds'], {'sampling': 11, 'perturbation': 11})
        self.assertEqual(manifest['config']['sampling']['seed'], 11)

    def test_unknown_key(self):
        status, output = self._run('unknown-key.json', 'unknown')

        self.assertEqual(status, nleg.pipeline.EXIT_VALIDATION)
        self.assertFalse(os.path.exists(output))

    def test_validate(self):
        self.assertEqual(nleg.pipeline.cli(['validate', '--config', self._path('nlle-lorenz.json')]), nleg.pipeline.EXIT_SUCCESS)
        self.assertEqual(nleg.pipeline.cli(['validate', '--config', self._path('many-errors.json')]), nleg.pipeline.EXIT_VALIDATION)
        self.assertEqual(nleg.pipeline.cli(['validate', '--config', self._path('missing.json')]), nleg.pipeline.EXIT_VALIDATION)

    def test_failure_cleanup(self):
        status, output = self._run('escape.json', 'escape')

        self.assertEqual(status, nleg.pipeline.EXIT_COMPUTATION)
        self.assertFalse(os.path.exists(output))

    def test_nlle_curve(self):
        status, output = self._run('nlle-lorenz.json', 'nlle')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        with open(os.path.join(output, 'nlle.csv'), 'r') as file:
            rows = list(csv.reader(file))

        self.assertEqual(rows[0], ['tau', 'mean_nlle', 'rgie', 'stderr'])
        self.assertEqual(len(rows), 121)

        taus = [float(row[0]) for row in rows[1:]]
        self.assertTrue(all([taus[i] < taus[i + 1] for i in range(len(taus) - 1)]))

        manifest = self._manifest(output)
        self.assertEqual([artifact['path'] for artifact in manifest['artifacts']], ['nlle.csv', 'nlle.json'])
        self.assertEqual(manifest['version'], nleg.__version__)

    def test_gle(self):
        config = nleg.config.ExperimentConfig.from_path(self._path('gle-linear.json'))
        config = config.with_overrides(output_directory = os.path.join(self.out_dir, 'gle'))

        manifest = nleg.pipeline.run_config(config)

        self.assertEqual(list(manifest.digests().keys()), ['gle.json'])
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'gle', 'manifest.json')))

        with open(os.path.join(self.out_dir, 'gle', 'gle.json'), 'r') as file:
            spectrum = json.load(file)

        self.assertAllClose(spectrum['exponents'], [1.0, -2.0], 1e-8)

    def test_pes_scan(self):
        status, output = self._run('pes-lorenz.json', 'pes')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        with open(os.path.join(output, 'pes-scan.json'), 'r') as file:
            scan = json.load(file)

        self.assertClose(scan['crossing'], 1.0, 1e-6)
        self.assertEqual(scan['m'], 1)

    def test_csv_precision(self):
        status, output = self._run('pes-lorenz.json', 'precision')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        with open(os.path.join(output, 'pes-scan.csv'), 'r') as file:
            rows = list(csv.reader(file))

        self.assertEqual(rows[0], ['lambda', 're_eig1', 're_eig2', 're_eig3'])
        self.assertEqual(rows[1][0], '0.5')
        self.assertClose(float(rows[1][2]), -8.0 / 3.0, 1e-12)

    def test_nlle_workers(self):
        status, sequential = self._run('nlle-lorenz.json', 'sequential', '--workers', '1')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        status, parallel = self._run('nlle-lorenz.json', 'parallel', '--workers', '4')
        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

        self.assertEqual(self._manifest(sequential)['artifacts'], self._manifest(parallel)['artifacts'])

    @tests.base.long_test
    def test_nlle_saturation_workers_long(self):
        manifests = []
        for workers in [1, 4, 16]:
            status, output = self._run('nlle-saturation.json', "workers-%d" % (workers), '--workers', str(workers))
            self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)

            manifests.append(self._manifest(output))

            with open(os.path.join(output, 'nlle.json'), 'r') as file:
                curve = json.load(file)

            self.assertIsNotNone(curve['e_sat'])
            self.assertIsNotNone(curve['t_p'])

        for manifest in manifests[1:]:
            self.assertEqual(manifest['artifacts'], manifests[0]['artifacts'])

    def test_empty_argv(self):
        saved = sys.argv
        sys.argv = []

        try:
            status = nleg.pipeline.cli(['validate', '--config', self._path('nlle-lorenz.json')])
        finally:
            sys.argv = saved

        self.assertEqual(status, nleg.pipeline.EXIT_SUCCESS)
