r""" The MAGMAR(p,q) copula time-series model.

An observation :math:`U_t` is generated from an iid uniform innovation
:math:`w_t` in two stages. The moving-aggregate (MAG) part mixes the
innovation with the q previous innovations,

.. math::

    V_t = R^{-1}_{\theta}(w_t | w_{t-1}, \ldots, w_{t-q}),

and the autoregressive (AR) part couples the result with the p previous
observations,

.. math::

    U_t = R^{-1}_{\phi}(V_t | U_{t-1}, \ldots, U_{t-p}),

where :math:`R^{-1}` is the inverse forward Rosenblatt function of the
respective D-vine (:func:`magmar.vine.rosenblatt_fwd_inv`). Normal AR and
MAG copulas give back a Gaussian ARMA(p,q) process on the normal scale;
independence MAG copulas give the classical copula-based Markov model.

Models are named ``MAGMAR(p,q)-<ar codes>-<mag codes>`` with one letter
per lag (``n`` normal, ``t`` Student t, ``g`` gumbel, ``i``
independence), e.g. ``MAGMAR(4,1)-ging-t``.
"""
import logging
import numpy
from magmar.copula import CopulaSpec, from_code, validate, h1, log_density
from magmar.copula import FAMILIES, N_PARAMS
from magmar.vine import (rosenblatt_fwd, rosenblatt_fwd_inv,
                         conditional_log_density)
from magmar.exceptions import ModelStringError, NumericalError
from magmar._utils import _check_unit, _as_values, _check_length

logger = logging.getLogger(__name__)

DEFAULT_INIT = 0.5
DEFAULT_BURN_IN = 500


class MagmarSpec(object):
    """ Orders and pair copulas of a MAGMAR(p,q) model.

    Parameters
    ----------
    p, q: int
        AR and MAG orders

    ar: sequence of :class:`magmar.copula.CopulaSpec`, length p
        ``ar[k-1]`` is the lag-k AR copula

    mag: sequence of :class:`magmar.copula.CopulaSpec`, length q
        ``mag[k-1]`` is the lag-k MAG copula
    """
    def __init__(self, p, q, ar=(), mag=()):
        self.p, self.q = int(p), int(q)
        self.ar, self.mag = tuple(ar), tuple(mag)
        if self.p < 0 or self.q < 0:
            raise ValueError("orders must be nonnegative, got (%i,%i)"
                             % (self.p, self.q))
        if len(self.ar) != self.p:
            raise ValueError("%i AR copulas given for p = %i"
                             % (len(self.ar), self.p))
        if len(self.mag) != self.q:
            raise ValueError("%i MAG copulas given for q = %i"
                             % (len(self.mag), self.q))

    @property
    def s(self):
        """ Number of initial slots, max(p,q). """
        return max(self.p, self.q)

    @property
    def copulas(self):
        return self.ar + self.mag

    @property
    def n_params(self):
        return sum(N_PARAMS[c.family] for c in self.copulas)

    @property
    def free(self):
        """ True if any copula still lacks parameters. """
        return any(c.free for c in self.copulas)

    @property
    def model_string(self):
        return format_model_string(self)

    @property
    def params(self):
        """ All parameters, AR copulas first, as a flat list. """
        return [x for c in self.copulas for x in c.params]

    def with_params(self, params):
        """ Copy of the model with the flat parameter list `params`. """
        params = list(params)
        if len(params) != self.n_params:
            raise ValueError("%s takes %i parameters, %i given"
                             % (self.model_string, self.n_params,
                                len(params)))
        copulas = []
        for c in self.copulas:
            k = N_PARAMS[c.family]
            copulas.append(c.with_params(params[:k]))
            params = params[k:]
        return MagmarSpec(self.p, self.q, copulas[:self.p], copulas[self.p:])

    def validate(self):
        for c in self.copulas:
            validate(c)
        return self

    def __eq__(self, other):
        return (isinstance(other, MagmarSpec) and self.p == other.p
                and self.q == other.q and self.ar == other.ar
                and self.mag == other.mag)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'MagmarSpec(%i, %i, ar=%r, mag=%r)' % (self.p, self.q,
                                                      list(self.ar),
                                                      list(self.mag))


class ModelState(object):
    """ Conditioning information at time `t`.

    Parameters
    ----------
    u_hist: sequence of float
        last p pseudo-observations, most recent first

    w_hist: sequence of float
        last q recovered innovations, most recent first

    t: int, optional
        index of the next observation
    """
    def __init__(self, u_hist=(), w_hist=(), t=0):
        self.u_hist = tuple(float(x) for x in _check_unit(u_hist, 'u_hist'))
        self.w_hist = tuple(float(x) for x in _check_unit(w_hist, 'w_hist'))
        self.t = t

    def advance(self, x, w):
        """ State after observing `x` with recovered innovation `w`. """
        u_hist = ((x,) + self.u_hist)[:len(self.u_hist)]
        w_hist = ((w,) + self.w_hist)[:len(self.w_hist)]
        return ModelState(u_hist, w_hist, self.t + 1)

    def __repr__(self):
        return 'ModelState(%r, %r, t=%i)' % (self.u_hist, self.w_hist, self.t)


class PseudoSeries(object):
    """ Time-ordered pseudo-observations strictly inside (0,1).

    Parameters
    ----------
    values: array-like
        the observations

    origin: dict, optional
        provenance, e.g. source file and transform applied
    """
    def __init__(self, values, origin=None):
        values = _as_values(values)
        self.values = _check_unit(values, 'pseudo-observations')
        self.origin = dict(origin or {})

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __repr__(self):
        return 'PseudoSeries(n=%i, origin=%r)' % (len(self), self.origin)


def parse_model_string(text):
    """ Parse ``MAGMAR(p,q)-<ar codes>[-<mag codes>]`` into a skeleton.

    Whitespace after the comma is tolerated, so the labels
    ``MAGMAR(4, 1)-ging-t`` and ``MAGMAR(4,1)-ging-t`` are equivalent.

    Parameters
    ----------
    text: str

    Returns
    -------
    MagmarSpec:
        copula families populated, parameters free (independence copulas
        have no parameters and are therefore complete)

    Raises
    ------
    ModelStringError
        with the position of the first offending character
    """
    prefix = 'MAGMAR('
    if not text.startswith(prefix):
        raise ModelStringError("model string must start with %r" % prefix, 0)
    pos = len(prefix)

    def integer(pos):
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ModelStringError("expected an integer order", start)
        return int(text[start:pos]), pos

    def expect(char, pos):
        if pos >= len(text) or text[pos] != char:
            raise ModelStringError("expected %r" % char, pos)
        return pos + 1

    p, pos = integer(pos)
    pos = expect(',', pos)
    while pos < len(text) and text[pos] == ' ':
        pos += 1
    q, pos = integer(pos)
    pos = expect(')', pos)

    def codes(n, pos, part):
        pos = expect('-', pos)
        start = pos
        while pos < len(text) and text[pos] != '-':
            if text[pos] not in FAMILIES:
                raise ModelStringError("unknown copula code %r"
                                       % text[pos], pos)
            pos += 1
        if pos - start != n:
            raise ModelStringError("%s part has %i codes, expected %i"
                                   % (part, pos - start, n), start)
        return [from_code(c) for c in text[start:pos]], pos

    if p == 0 and q == 0 and pos == len(text):
        return MagmarSpec(0, 0)
    ar, pos = codes(p, pos, 'AR')
    mag = []
    if q > 0:
        mag, pos = codes(q, pos, 'MAG')
    if pos != len(text):
        raise ModelStringError("unexpected trailing text %r" % text[pos:],
                               pos)
    return MagmarSpec(p, q, ar, mag)


def format_model_string(spec):
    """ Canonical model string of `spec`, the inverse of
    :func:`parse_model_string`. """
    text = 'MAGMAR(%i,%i)-%s' % (spec.p, spec.q,
                                 ''.join(c.code for c in spec.ar))
    if spec.q > 0:
        text += '-' + ''.join(c.code for c in spec.mag)
    return text


def _initial(init, s, name='init'):
    init = numpy.atleast_1d(_check_unit(init, name))
    if init.size == 1:
        return numpy.full(s, init[0])
    if init.size != s:
        raise ValueError("%s should be a scalar or have max(p,q) = %i "
                         "entries, got %i" % (name, s, init.size))
    return init


def simulate(spec, T, seed=None, **kwargs):
    """ Simulate a MAGMAR(p,q) path.

    Parameters
    ----------
    spec: MagmarSpec
        fully parametrised model

    T: int
        number of observations to return

    seed: int, optional
        seed for :func:`numpy.random.default_rng`

    Keywords
    --------
    burn_in: int, optional
        number of discarded leading observations
        (Default: 500)

    innovations: array-like, optional
        pre-drawn uniform innovations of length T + burn_in, used instead
        of random draws

    u_init, w_init: float, optional
        values standing in for the unseen observations and innovations
        before the start of the path
        (Default: 0.5)

    Returns
    -------
    (PseudoSeries, numpy.array):
        the path after burn-in and the innovations that produced it
    """
    burn_in = kwargs.pop('burn_in', DEFAULT_BURN_IN)
    innovations = kwargs.pop('innovations', None)
    u_init = kwargs.pop('u_init', DEFAULT_INIT)
    w_init = kwargs.pop('w_init', DEFAULT_INIT)
    if kwargs:
        raise TypeError('Unexpected **kwargs: %r' % kwargs)

    if T < 1:
        raise ValueError("T must be at least 1, got %i" % T)
    if burn_in < 0:
        raise ValueError("burn_in must be nonnegative, got %i" % burn_in)
    spec.validate()

    n = T + burn_in
    if innovations is None:
        w = numpy.random.default_rng(seed).random(n)
    else:
        w = _as_values(innovations)
        if len(w) != n:
            raise ValueError("innovations should have T + burn_in = %i "
                             "entries, got %i" % (n, len(w)))
        _check_unit(w, 'innovations')

    u = numpy.empty(n)
    u_hist = [u_init] * spec.p
    w_hist = [w_init] * spec.q
    for t in range(n):
        v = rosenblatt_fwd_inv(spec.mag, w_hist, w[t]) if spec.q else w[t]
        u[t] = rosenblatt_fwd_inv(spec.ar, u_hist, v) if spec.p else v
        u_hist = ([u[t]] + u_hist)[:spec.p]
        w_hist = ([w[t]] + w_hist)[:spec.q]

    logger.debug("simulated %s: T=%i, burn_in=%i, seed=%r",
                 spec.model_string, T, burn_in, seed)
    origin = {'model': spec.model_string, 'seed': seed, 'burn_in': burn_in}
    return PseudoSeries(u[burn_in:], origin), w[burn_in:]


def _lagged(x, s, k):
    """ x[t-k] for t = s..T-1. """
    return x[s-k:len(x)-k]


def _ar_values(spec, u):
    """ Forward AR-Rosenblatt values a_t for t = s..T-1. """
    s = spec.s
    if spec.p == 0:
        return u[s:]
    return rosenblatt_fwd(spec.ar, [_lagged(u, s, k)
                                    for k in range(1, spec.p + 1)], u[s:])


def _recover(spec, u, init):
    s = spec.s
    a = _ar_values(spec, u)
    w = numpy.empty(len(u))
    w[:s] = _initial(init, s)
    if spec.q == 0:
        w[s:] = a
        return a, w
    for t in range(s, len(u)):
        hist = [w[t-k] for k in range(1, spec.q + 1)]
        w[t] = rosenblatt_fwd(spec.mag, hist, a[t-s])
    return a, w


def recover_innovations(spec, series, init=DEFAULT_INIT):
    """ Recover the innovations of a series under the model.

    The first s = max(p,q) innovations are unobservable and set to
    `init`; the rest follow from the forward MAG-Rosenblatt function
    applied to the forward AR-Rosenblatt value of each observation.

    Recovery is exact only while the MAG filter is invertible: when the
    MAG copulas are strong enough that the innovation recursion amplifies
    its inputs, rounding errors grow geometrically along the series and
    the recovered innovations drift away from the true ones.

    Parameters
    ----------
    spec: MagmarSpec

    series: PseudoSeries or array-like

    init: float or array-like, optional
        value(s) for the first s innovations
        (Default: 0.5)

    Returns
    -------
    numpy.array:
        innovations, same length as `series`
    """
    spec.validate()
    u = _check_unit(_as_values(series), 'series')
    _check_length(u, spec.s + 1)
    return _recover(spec, u, init)[1]


def state_at(spec, series, t, init=DEFAULT_INIT):
    """ Conditioning state before observation `t` of `series`.

    Parameters
    ----------
    spec: MagmarSpec

    series: PseudoSeries or array-like

    t: int
        index of the next observation, max(p,q) <= t <= len(series)

    init: float or array-like, optional
        initial innovations, as in :func:`recover_innovations`

    Returns
    -------
    ModelState
    """
    spec.validate()
    u = _check_unit(_as_values(series), 'series')
    if not spec.s <= t <= len(u):
        raise ValueError("t must lie in [%i, %i], got %i"
                         % (spec.s, len(u), t))
    if t > spec.s:
        w = _recover(spec, u[:t], init)[1]
    else:
        w = _initial(init, spec.s)
    u_hist = [u[t-k] for k in range(1, spec.p + 1)]
    w_hist = [w[t-k] for k in range(1, spec.q + 1)]
    return ModelState(u_hist, w_hist, t)


def innovation(spec, x, state):
    """ Innovation implied by observing `x` in `state`. """
    a = rosenblatt_fwd(spec.ar, state.u_hist, x) if spec.p else x
    return rosenblatt_fwd(spec.mag, state.w_hist, a) if spec.q else a


def _conditional_log_density(spec, x, u_hist, w_hist):
    logf = 0.
    a = x
    if spec.p:
        logf = conditional_log_density(spec.ar, u_hist, x)
        a = rosenblatt_fwd(spec.ar, u_hist, x)
    if spec.q:
        logf = logf + conditional_log_density(spec.mag, w_hist, a)
    return logf


def _check_state(spec, state):
    if len(state.u_hist) != spec.p or len(state.w_hist) != spec.q:
        raise ValueError("state holds %i observations and %i innovations, "
                         "model %s needs %i and %i"
                         % (len(state.u_hist), len(state.w_hist),
                            spec.model_string, spec.p, spec.q))


def conditional_density(spec, x, state):
    """ Density of the next observation given the past.

    The product of the AR pair-copula densities (the density of the
    forward AR-Rosenblatt value) and the MAG pair-copula densities
    evaluated at that value and the innovation history.

    Parameters
    ----------
    spec: MagmarSpec

    x: float or array-like
        candidate values of the next observation

    state: ModelState

    Returns
    -------
    float or numpy.array:
        density values, same shape as `x`
    """
    spec.validate()
    _check_state(spec, state)
    x = numpy.asarray(x, dtype='double')
    logf = _conditional_log_density(spec, x, state.u_hist, state.w_hist)
    return numpy.exp(logf + numpy.zeros_like(x))[()]


def _require_11(spec, what):
    if (spec.p, spec.q) != (1, 1):
        raise NotImplementedError("%s is only available for MAGMAR(1,1) "
                                  "models, not %s"
                                  % (what, spec.model_string))
    spec.validate()


def joint_conditional_density(spec, z, w, state):
    """ Joint density of the next two observations of a MAGMAR(1,1) model.

    Parameters
    ----------
    spec: MagmarSpec
        a MAGMAR(1,1) model

    z: float or array-like
        value of the next observation

    w: float or array-like
        value of the observation after that

    state: ModelState
        state before `z`

    Returns
    -------
    float or numpy.array:
        the product of the four pair-copula density factors
    """
    _require_11(spec, 'joint_conditional_density')
    _check_state(spec, state)
    phi, theta = spec.ar[0], spec.mag[0]
    u_prev, w_prev = state.u_hist[0], state.w_hist[0]
    a_z = h1(phi, u_prev, z)
    w_z = innovation(spec, z, state)
    a_w = h1(phi, z, w)
    return numpy.exp(log_density(phi, u_prev, z)
                     + log_density(theta, w_prev, a_z)
                     + log_density(phi, z, w)
                     + log_density(theta, w_z, a_w))


def partial_pair_density_lag_k(spec, z, w, intermediates, k, state):
    """ Density of a pair of MAGMAR(1,1) observations k steps apart.

    The innovation before `w` depends on `z` through the k-1
    intermediate observations; it is recovered by running the innovation
    recursion from `z` across them.

    Parameters
    ----------
    spec: MagmarSpec
        a MAGMAR(1,1) model

    z: float or array-like
        value of the earlier observation

    w: float or array-like
        value of the observation k steps after `z`

    intermediates: array-like
        the k-1 observations between `z` and `w`, oldest first

    k: int
        lag, at least 1 (k = 1 gives :func:`joint_conditional_density`)

    state: ModelState
        state before `z`

    Returns
    -------
    float or numpy.array:
        the product of the four pair-copula density factors
    """
    _require_11(spec, 'partial_pair_density_lag_k')
    _check_state(spec, state)
    intermediates = _check_unit(numpy.ravel(intermediates), 'intermediates')
    if k < 1:
        raise ValueError("k must be at least 1, got %i" % k)
    if len(intermediates) != k - 1:
        raise ValueError("lag %i needs %i intermediate observations, got %i"
                         % (k, k - 1, len(intermediates)))
    phi, theta = spec.ar[0], spec.mag[0]
    u_prev, w_prev = state.u_hist[0], state.w_hist[0]

    a_z = h1(phi, u_prev, z)
    logf = log_density(phi, u_prev, z) + log_density(theta, w_prev, a_z)

    w_last = innovation(spec, z, state)
    u_last = z
    for x in intermediates:
        w_last = h1(theta, w_last, h1(phi, u_last, x))
        u_last = x

    a_w = h1(phi, u_last, w)
    logf = logf + log_density(phi, u_last, w) + log_density(theta, w_last,
                                                              a_w)
    return numpy.exp(logf)


def neg_log_likelihood(spec, series, init=DEFAULT_INIT):
    """ Negative pseudo-log-likelihood of a MAGMAR(p,q) model.

    The first s = max(p,q) innovations are set to `init`, the remaining
    innovations are recovered recursively, and the conditional log
    densities of observations s..T-1 are summed. The marginal density of
    the first s observations is dropped.

    Parameters
    ----------
    spec: MagmarSpec

    series: PseudoSeries or array-like

    init: float or array-like, optional
        initial innovations
        (Default: 0.5)

    Returns
    -------
    float

    Raises
    ------
    NumericalError
        if a conditional density is not finite, with the offending index
    """
    spec.validate()
    u = _check_unit(_as_values(series), 'series')
    s = spec.s
    _check_length(u, s + 1)
    if spec.p == 0 and spec.q == 0:
        return 0.

    a, w = _recover(spec, u, init)
    terms = numpy.zeros(len(u) - s)
    if spec.p:
        terms = terms + conditional_log_density(
            spec.ar, [_lagged(u, s, k) for k in range(1, spec.p + 1)], u[s:])
    if spec.q:
        terms = terms + conditional_log_density(
            spec.mag, [_lagged(w, s, k) for k in range(1, spec.q + 1)], a)

    bad = ~numpy.isfinite(terms)
    if bad.any():
        index = s + int(numpy.argmax(bad))
        raise NumericalError("non-finite conditional density of %s"
                             % spec.model_string, index=index)
    return 0. - float(numpy.sum(terms))


__all__ = ['MagmarSpec', 'ModelState', 'PseudoSeries', 'CopulaSpec',
           'parse_model_string', 'format_model_string', 'simulate',
           'recover_innovations', 'state_at', 'innovation',
           'conditional_density', 'joint_conditional_density',
           'partial_pair_density_lag_k', 'neg_log_likelihood',
           'DEFAULT_INIT', 'DEFAULT_BURN_IN']
