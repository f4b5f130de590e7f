#!/usr/bin/env python3

"""
Discover and run the nleg test suite.
Long ensemble tests only run with --long (or NLEG_LONG_TESTS set).
"""

import os
import re
import sys
import unittest

THIS_DIR = os.path.dirname(os.path.realpath(__file__))
TESTS_DIR = os.path.join(THIS_DIR, 'tests')
SRC_DIR = os.path.join(THIS_DIR, 'src')

LONG_FLAG = '--long'
LONG_TESTS_ENV = 'NLEG_LONG_TESTS'

def _flatten(suite):
    if (isinstance(suite, unittest.TestCase)):
        return [suite]

    if (not isinstance(suite, unittest.suite.TestSuite)):
        raise ValueError("Unknown test type: %s" % (str(type(suite))))

    cases = []
    for child in suite:
        cases += _flatten(child)

    return cases

def main(pattern = None, long_tests = False):
    if (long_tests):
        os.environ[LONG_TESTS_ENV] = '1'

    # Run against the working tree without requiring an install.
    for path in [SRC_DIR, THIS_DIR]:
        if (path not in sys.path):
            sys.path.insert(0, path)

    discovered = unittest.TestLoader().discover(TESTS_DIR)

    selected = unittest.suite.TestSuite()
    failedLoads = 0

    for testCase in _flatten(discovered):
        if (isinstance(testCase, unittest.loader._FailedTest)):
            print('Failed to load test: %s' % (testCase.id()), file = sys.stderr)
            print(testCase._exception, file = sys.stderr)
            failedLoads += 1
            continue

        if (pattern is None or re.search(pattern, testCase.id())):
            selected.addTest(testCase)

    print("Running %d tests%s." % (selected.countTestCases(), '' if long_tests else " (long tests skipped, pass %s)" % (LONG_FLAG)))

    result = unittest.TextTestRunner(verbosity = 2).run(selected)
    if (failedLoads > 0 or not result.wasSuccessful()):
        sys.exit(1)

def _load_args(args):
    executable = args.pop(0)

    long_tests = os.environ.get(LONG_TESTS_ENV, '') not in ['', '0']
    if (LONG_FLAG in args):
        args.remove(LONG_FLAG)
        long_tests = True

    if (len(args) > 1 or ({'h', 'help'} & {arg.lower().strip().replace('-', '') for arg in args})):
        print("USAGE: python3 %s [%s] [test pattern]" % (executable, LONG_FLAG), file = sys.stderr)
        print('The test pattern will be used directly in re.search() to see if a test will be run.', file = sys.stderr)
        print("%s also runs the full-size ensemble tests." % (LONG_FLAG), file = sys.stderr)
        sys.exit(1)

    pattern = None
    if (len(args) > 0):
        pattern = args.pop(0)

    return pattern, long_tests

if __name__ == '__main__':
    main(*_load_args(list(sys.argv)))
