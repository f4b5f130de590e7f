import numpy

MIN_NORM = 1e-300

class DependentFrameError(ValueError):
    def __init__(self, index, norm, member = None, seed = None):
        self.index = index
        self.norm = norm
        self.member = member
        self.seed = seed

        message = "Numerically dependent vector frame: vector %d has norm %g after reorthogonalization (minimum: %g). The ensemble collapsed onto a common direction, shrink the renormalization interval." % (index, norm, MIN_NORM)
        if (member is not None):
            message = "%s Ensemble member: %d, seed: %s." % (message, member, str(seed))

        super().__init__(message)

    def for_member(self, member, seed):
        return DependentFrameError(self.index, self.norm, member = member, seed = seed)

def check_frame(vectors):
    vectors = numpy.asarray(vectors, dtype = numpy.float64)

    if (vectors.ndim != 2):
        raise ValueError("A vector frame must be a 2D array with one vector per column, found shape %s." % (str(vectors.shape)))

    if (vectors.shape[1] > vectors.shape[0]):
        raise ValueError("A frame of %d vectors cannot be independent in %d dimensions." % (vectors.shape[1], vectors.shape[0]))

    return vectors

def gsr_orthogonalize(vectors):
    """
    Gram-Schmidt reorthogonalization, without normalization.
    |vectors| holds one vector per column (n x m, m <= n).
    Column k of the output is column k of the input minus its projections onto the previous output columns,
    so the first k outputs span the same space as the first k inputs.
    Projections are removed from the running remainder one at a time (modified ordering),
    which equals the classical formula in exact arithmetic.
    """

    vectors = check_frame(vectors)
    output = numpy.array(vectors)

    for k in range(vectors.shape[1]):
        for j in range(k):
            output[:, k] -= (numpy.dot(output[:, k], output[:, j]) / numpy.dot(output[:, j], output[:, j])) * output[:, j]

        norm = numpy.sqrt(numpy.dot(output[:, k], output[:, k]))
        if (not (norm >= MIN_NORM)):
            raise DependentFrameError(k, norm)

    return output

def gsr_norms(orthogonal):
    return numpy.sqrt(numpy.sum(orthogonal * orthogonal, axis = 0))

def volume_m(vectors):
    """
    The m-dimensional volume spanned by the columns: sqrt(det(G^T G)).
    Dependent frames give 0.
    """

    vectors = check_frame(vectors)

    determinant = numpy.linalg.det(vectors.T @ vectors)
    if (determinant <= 0.0):
        return 0.0

    return float(numpy.sqrt(determinant))
