""" Independent checks of the model's distributional properties.

These routines do not go through :mod:`magmar.model`; they compute the
same quantities by other means (closed forms, linear recursions,
quadrature, Monte Carlo), so that the two can be compared in tests and
in exploratory work:

* normal AR and MAG copulas are a Gaussian ARMA(1,1) process on the
  normal scale (:func:`implied_arma_params`, :func:`arma_path_oracle`)
* a pure MAG(1) process has uniform marginals and a stationary pair
  copula (:func:`mag1_pair_cdf`, :func:`mag1_uniformity_check`,
  :func:`pair_stationarity`)
* a normal AR(1) copula driven by (possibly MAG-filtered) innovations
  has a convergent infinite-sum representation
  (:func:`truncated_mag_representation`)
"""
from collections import namedtuple
import numpy
import scipy.integrate
import scipy.signal
import scipy.stats
from scipy.special import ndtr, ndtri
from magmar.copula import validate, cdf, h1, h1_inv
from magmar.exceptions import DomainError, NumericalError
from magmar._utils import _clamp, _check_unit, _as_values
from magmar.model import DEFAULT_INIT

ArmaParams = namedtuple('ArmaParams', ['ar', 'ma', 'innovation_variance'])
KSResult = namedtuple('KSResult', ['statistic', 'critical_value', 'passed'])

QUAD_EPSABS = 1e-8
MIN_KS_SAMPLES = 10000


def implied_arma_params(alpha, beta):
    """ ARMA(1,1) parameters of a MAGMAR(1,1) model with normal AR copula
    `alpha` and normal MAG copula `beta`.

    Parameters
    ----------
    alpha, beta: float
        copula correlations, strictly inside (-1, 1)

    Returns
    -------
    ArmaParams:
        ``ar = alpha``, ``ma = beta/sqrt(1-beta**2)`` and innovation
        variance ``(1-alpha**2)(1-beta**2)``
    """
    for name, x in (('alpha', alpha), ('beta', beta)):
        if not -1 < x < 1:
            raise DomainError("%s must lie in (-1, 1), got %g" % (name, x))
    return ArmaParams(float(alpha), float(beta/numpy.sqrt(1 - beta**2)),
                      float((1 - alpha**2)*(1 - beta**2)))


def arma_path_oracle(arma, innovations):
    """ Gaussian ARMA(1,1) path driven by uniform innovations.

    Runs :math:`X_t = a X_{t-1} + e_t + m e_{t-1}` with
    :math:`e_t = \\sigma \\Phi^{-1}(w_t)`, started from
    :math:`X_{-1} = e_{-1} = 0`.

    Parameters
    ----------
    arma: ArmaParams

    innovations: array-like
        uniform innovations :math:`w_t`

    Returns
    -------
    numpy.array:
        the path on the normal scale
    """
    w = _check_unit(_as_values(innovations), 'innovations')
    e = numpy.sqrt(arma.innovation_variance)*ndtri(w)
    return scipy.signal.lfilter([1., arma.ma], [1., -arma.ar], e)


def mag1_pair_cdf(theta_spec, a, b):
    """ Joint distribution function of consecutive MAG(1) values.

    For :math:`U_t = h_1^{-1}(w_t | w_{t-1})` this is
    :math:`P(U_t \\leq a, U_{t-1} \\leq b) = \\int_0^1
    C(h_1(w, b), a) dw`, evaluated by adaptive quadrature.

    Parameters
    ----------
    theta_spec: CopulaSpec
        the MAG copula

    a, b: float
        arguments in [0, 1]

    Returns
    -------
    float
    """
    validate(theta_spec)
    if a <= 0 or b <= 0:
        return 0.
    a, b = min(a, 1.), min(b, 1.)
    value, error = scipy.integrate.quad(
        lambda w: cdf(theta_spec, h1(theta_spec, _clamp(w), b), a), 0, 1,
        epsabs=QUAD_EPSABS, limit=200)
    if not numpy.isfinite(value):
        raise NumericalError("quadrature of the MAG(1) pair copula failed",
                             residual=error)
    return float(value)


def simulate_mag1(theta_spec, n, seed=None):
    """ n consecutive values of a MAG(1) process, vectorised. """
    w = numpy.random.default_rng(seed).random(n + 1)
    return h1_inv(theta_spec, w[1:], w[:-1])


def mag1_uniformity_check(theta_spec, n, seed=0, alpha=0.01):
    """ Kolmogorov-Smirnov test of the MAG(1) marginal against uniform.

    Parameters
    ----------
    theta_spec: CopulaSpec
        the MAG copula

    n: int
        number of simulated values, at least 10000

    seed: int, optional

    alpha: float, optional
        significance level
        (Default: 0.01)

    Returns
    -------
    KSResult:
        statistic, critical value at level `alpha`, and whether the
        statistic stays below it
    """
    validate(theta_spec)
    if n < MIN_KS_SAMPLES:
        raise ValueError("n must be at least %i, got %i"
                         % (MIN_KS_SAMPLES, n))
    v = simulate_mag1(theta_spec, n, seed)
    statistic = scipy.stats.kstest(v, 'uniform')[0]
    critical = scipy.stats.kstwo(n).ppf(1 - alpha)
    return KSResult(float(statistic), float(critical), statistic < critical)


def truncated_mag_representation(phi, mag_spec, innovations, n_trunc, t=None):
    """ Truncated infinite-sum representation of a normal AR(1) copula
    process.

    With :math:`v_t` the raw innovations (no MAG part) or the MAG(1)
    filtered innovations :math:`h_1^{-1}(w_t | w_{t-1})`,

    .. math::

        A_{t,n} = \\Phi\\left(\\sqrt{1-\\phi^2} \\sum_{i=0}^{n} \\phi^i
        \\Phi^{-1}(v_{t-i})\\right).

    Parameters
    ----------
    phi: float
        normal AR copula correlation, inside (-1, 1)

    mag_spec: CopulaSpec or None
        MAG(1) copula, None for MAGMAR(1,0)

    innovations: array-like
        uniform innovations :math:`w_0, \\ldots`

    n_trunc: int
        number of terms beyond the first; terms before the start of the
        innovations are dropped

    t: int, optional
        time index (Default: the last one)

    Returns
    -------
    float:
        :math:`A_{t,n}`
    """
    if not -1 < phi < 1:
        raise DomainError("phi must lie in (-1, 1), got %g" % phi)
    w = _check_unit(_as_values(innovations), 'innovations')
    if t is None:
        t = len(w) - 1
    if not 0 <= t < len(w):
        raise ValueError("t must lie in [0, %i], got %i" % (len(w) - 1, t))
    if n_trunc < 0:
        raise ValueError("n_trunc must be nonnegative, got %i" % n_trunc)

    if mag_spec is None:
        v = w[:t+1]
    else:
        previous = numpy.concatenate([[DEFAULT_INIT], w[:t]])
        v = h1_inv(mag_spec, w[:t+1], previous)
    i = numpy.arange(min(n_trunc, t) + 1)
    total = numpy.sum(phi**i * ndtri(v[t - i]))
    return float(_clamp(ndtr(numpy.sqrt(1 - phi**2)*total)))


def empirical_copula(pairs, grid):
    """ Empirical joint distribution of pairs on a grid.

    Parameters
    ----------
    pairs: array-like, shape (n, 2)

    grid: array-like, shape (m,)

    Returns
    -------
    numpy.array, shape (m, m):
        ``E[i, j]`` is the fraction of pairs with first component at most
        ``grid[i]`` and second at most ``grid[j]``
    """
    pairs = numpy.asarray(pairs, dtype='double')
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("pairs should have shape (n, 2), got %r"
                         % (pairs.shape,))
    grid = numpy.asarray(grid, dtype='double')
    below_x = pairs[:, 0][None, :] <= grid[:, None]
    below_y = pairs[:, 1][None, :] <= grid[:, None]
    return numpy.dot(below_x.astype(float), below_y.T.astype(float)) \
        / len(pairs)


def lagged_pairs(v, lag=1):
    """ Pairs :math:`(v_t, v_{t-lag})`. """
    v = _as_values(v)
    return numpy.column_stack([v[lag:], v[:-lag]])


def pair_stationarity(v, grid):
    """ Sup-norm gap between the empirical pair copulas of
    :math:`(v_t, v_{t-1})` in the first and the second half of `v`. """
    pairs = lagged_pairs(v)
    half = len(pairs)//2
    return float(numpy.max(numpy.abs(empirical_copula(pairs[:half], grid)
                                     - empirical_copula(pairs[half:2*half],
                                                        grid))))
