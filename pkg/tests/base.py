import os
import unittest

LONG_TESTS_ENV = 'NLEG_LONG_TESTS'

def long_test(function):
    """
    Acceptance-scale checks (minutes each) only run when NLEG_LONG_TESTS is set.
    """

    return unittest.skipUnless(os.environ.get(LONG_TESTS_ENV, '') not in ['', '0'], "Set %s to run long tests." % (LONG_TESTS_ENV))(function)

class BaseTest(unittest.TestCase):
    """
    All tests need a base for standard setup and teardown.
    """

    DATA_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), 'data'))
    CONFIG_DIR = os.path.join(DATA_DIR, 'configs')

    EPSILON = 1e-4

    def assertClose(self, a, b, epsilon = None):
        if (epsilon is None):
            epsilon = self.EPSILON

        self.assertTrue(abs(a - b) <= epsilon, "Expected %.17g to be within %g of %.17g." % (a, epsilon, b))

    def assertAllClose(self, a, b, epsilon = None):
        if (epsilon is None):
            epsilon = self.EPSILON

        self.assertEqual(len(a), len(b))
        for (i, (first, second)) in enumerate(zip(a, b)):
            self.assertTrue(abs(first - second) <= epsilon, "Index %d: expected %.17g to be within %g of %.17g." % (i, first, epsilon, second))
