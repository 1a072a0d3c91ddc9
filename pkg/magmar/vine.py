r""" Simplified D-vines along the time axis.

A :class:`PairCopulaSequence` of length :math:`d` holds the pair copulas
:math:`C_1, \ldots, C_d`, where :math:`C_k` couples two observations
:math:`k` steps apart, conditionally on the :math:`k-1` observations in
between (the simplified vine ignores the values of the conditioning set).

Conditioning vectors `u` are always ordered most-recent-first:
``u[0]`` is adjacent to the newest value and ``u[-1]`` is the oldest. The
forward function :func:`rosenblatt_fwd` is the conditional distribution
function of a value newer than all of `u`; the backward function
:func:`rosenblatt_bwd` is that of a value older than all of `u`.

Every entry of `u` and `x` may be a scalar or a numpy array; arrays are
broadcast, so a whole time series can be transformed in one call.
"""
import numpy
from magmar.copula import validate, h1, h2, h1_inv, log_density


class PairCopulaSequence(tuple):
    """ Validated, immutable sequence of pair copulas, one per lag.

    Parameters
    ----------
    copulas: iterable of :class:`magmar.copula.CopulaSpec`
        ``copulas[k-1]`` governs the lag-k partial pair.
    """
    def __new__(cls, copulas):
        copulas = tuple(copulas)
        if len(copulas) < 1:
            raise ValueError("a pair-copula sequence needs at least one copula")
        for c in copulas:
            validate(c)
        return super(PairCopulaSequence, cls).__new__(cls, copulas)

    def __repr__(self):
        return 'PairCopulaSequence(%s)' % list(self)


def _check(seq, u):
    if len(seq) < 1:
        raise ValueError("a pair-copula sequence needs at least one copula")
    if len(u) != len(seq):
        raise ValueError("dimension mismatch: %i conditioning values for "
                         "%i pair copulas" % (len(u), len(seq)))


def _fwd(seq, u, x):
    d = len(seq)
    if d == 1:
        return h1(seq[0], u[0], x)
    return h1(seq[d-1],
              _bwd(seq[:d-1], u[:d-1], u[d-1]),
              _fwd(seq[:d-1], u[:d-1], x))


def _bwd(seq, u, x):
    d = len(seq)
    if d == 1:
        return h2(seq[0], x, u[0])
    return h2(seq[d-1],
              _bwd(seq[:d-1], u[1:], x),
              _fwd(seq[:d-1], u[1:], u[0]))


def rosenblatt_fwd(seq, u, x):
    """ Conditional distribution function of a new value given its past.

    Parameters
    ----------
    seq: sequence of :class:`magmar.copula.CopulaSpec`, length d

    u: sequence of length d
        conditioning values, most recent first

    x: float or array-like
        value immediately following ``u[0]``

    Returns
    -------
    float or numpy.array:
        :math:`P(X \\leq x | u)` under the simplified D-vine
    """
    _check(seq, u)
    return _fwd(seq, u, x)


def rosenblatt_bwd(seq, u, x):
    """ Conditional distribution function of an old value given its future.

    Parameters
    ----------
    seq: sequence of :class:`magmar.copula.CopulaSpec`, length d

    u: sequence of length d
        conditioning values, most recent first

    x: float or array-like
        value immediately preceding ``u[-1]``

    Returns
    -------
    float or numpy.array:
        :math:`P(X \\leq x | u)` under the simplified D-vine
    """
    _check(seq, u)
    return _bwd(seq, u, x)


def _fwd_inv(seq, u, w):
    d = len(seq)
    if d == 1:
        return h1_inv(seq[0], w, u[0])
    z = h1_inv(seq[d-1], w, _bwd(seq[:d-1], u[:d-1], u[d-1]))
    return _fwd_inv(seq[:d-1], u[:d-1], z)


def rosenblatt_fwd_inv(seq, u, w):
    """ Inverse of :func:`rosenblatt_fwd` in its last argument.

    The h-functions are inverted innermost-out: first the lag-d copula,
    then the shorter vine on the result.

    Parameters
    ----------
    seq: sequence of :class:`magmar.copula.CopulaSpec`, length d

    u: sequence of length d
        conditioning values, most recent first

    w: float or array-like
        target probability

    Returns
    -------
    float or numpy.array:
        `x` with ``rosenblatt_fwd(seq, u, x) == w``
    """
    _check(seq, u)
    return _fwd_inv(seq, u, w)


def conditional_log_density(seq, u, x):
    """ Log density of `x` given the most-recent-first vector `u`.

    This is the log-Jacobian of :func:`rosenblatt_fwd` in `x`, a sum of
    one pair-copula log density per lag.
    """
    _check(seq, u)
    logf = log_density(seq[0], u[0], x)
    for k in range(2, len(seq) + 1):
        logf = logf + log_density(seq[k-1],
                                  _bwd(seq[:k-1], u[:k-1], u[k-1]),
                                  _fwd(seq[:k-1], u[:k-1], x))
    return logf


def dvine_log_density(seq, window):
    """ Log density of a window of consecutive values under the D-vine.

    Parameters
    ----------
    seq: sequence of :class:`magmar.copula.CopulaSpec`, length d

    window: sequence of length d+1
        values in chronological order (oldest first)

    Returns
    -------
    float or numpy.array:
        log of the product of the pair-copula densities
    """
    if len(window) != len(seq) + 1:
        raise ValueError("dimension mismatch: window of %i values for %i "
                         "pair copulas" % (len(window), len(seq)))
    logf = 0.
    for j in range(1, len(window)):
        past = [window[i] for i in range(j-1, -1, -1)]
        logf = logf + conditional_log_density(seq[:j], past, window[j])
    return logf + numpy.zeros(numpy.broadcast(*window).shape)[()]
