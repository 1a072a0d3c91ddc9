""" Exceptions raised by magmar.

All of them derive from :class:`MagmarError`, and additionally from the
builtin exception a caller would naturally catch (``ValueError`` for bad
input, ``RuntimeError`` for numerical trouble).
"""


class MagmarError(Exception):
    """ Base exception for the package. """


class DomainError(MagmarError, ValueError):
    """ A copula parameter or argument lies outside its domain. """


class ModelStringError(MagmarError, ValueError):
    """ A model string does not follow ``MAGMAR(p,q)-<ar>[-<mag>]``.

    Parameters
    ----------
    msg: str
        description of the violation

    position: int, optional
        zero-based character offset of the offending token
    """
    def __init__(self, msg, position=None):
        self.position = position
        if position is not None:
            msg = "%s (at position %i)" % (msg, position)
        super(ModelStringError, self).__init__(msg)


class DataError(MagmarError, ValueError):
    """ Input data is malformed or unusable.

    Parameters
    ----------
    msg: str
        description of the problem

    line: int, optional
        one-based line number in the offending file
    """
    def __init__(self, msg, line=None):
        self.line = line
        if line is not None:
            msg = "line %i: %s" % (line, msg)
        super(DataError, self).__init__(msg)


class NumericalError(MagmarError, RuntimeError):
    """ A numerical routine failed (root finding, likelihood, optimizer).

    Parameters
    ----------
    msg: str
        description of the failure

    residual: float, optional
        largest residual at the point of failure

    index: int, optional
        time index at which a non-finite value appeared

    best: object, optional
        best result obtained before giving up
    """
    def __init__(self, msg, residual=None, index=None, best=None):
        self.residual = residual
        self.index = index
        self.best = best
        if residual is not None:
            msg = "%s (residual %.3g)" % (msg, residual)
        if index is not None:
            msg = "%s (index %i)" % (msg, index)
        super(NumericalError, self).__init__(msg)
