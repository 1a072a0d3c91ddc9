r""" Maximum pseudo-likelihood estimation and model selection.

Copula parameters live on bounded domains; the optimizer works on an
unconstrained image of them: atanh for the correlation parameter of the
normal and t copulas, a scaled logit for the t degrees of freedom
(:math:`2 \leq \nu \leq 100`) and :math:`\log(\theta - 1)` for the gumbel
parameter.

:func:`fit` minimizes :func:`magmar.model.neg_log_likelihood` over that
image with the Nelder-Mead simplex method from several starting points;
:func:`select` fits a list of candidate model strings and ranks them by
AIC or BIC.
"""
import logging
from collections import namedtuple
import numpy
import scipy.optimize
from scipy.special import expit, logit
from magmar.copula import NU_MIN, NU_MAX
from magmar.model import (MagmarSpec, parse_model_string, neg_log_likelihood,
                          DEFAULT_INIT)
from magmar.exceptions import MagmarError, NumericalError
from magmar.parallel import parallel_apply
from magmar.io import Cache, CacheException, candidate_root
from magmar._utils import _check_unit, _as_values, _check_length

logger = logging.getLogger(__name__)

NSTARTS = 5
MAXFEV = 2000
XATOL = 1e-6
FATOL = 1e-8
PENALTY = 1e10

RHO_MAX = 1 - 1e-12

TAGS = {'normal': ('rho',), 't': ('rho', 'nu'), 'gumbel': ('theta',),
        'independence': ()}

# Starting point of the first, deterministic restart.
DEFAULT_START = {'rho': 0.1, 'nu': 10., 'theta': 1.5}


def _to_free(tag, value):
    if tag == 'rho':
        return numpy.arctanh(value)
    if tag == 'nu':
        return logit(numpy.clip((value - NU_MIN)/(NU_MAX - NU_MIN),
                                1e-12, 1 - 1e-12))
    return numpy.log(value - 1)


def _from_free(tag, x):
    if tag == 'rho':
        return numpy.clip(numpy.tanh(x), -RHO_MAX, RHO_MAX)
    if tag == 'nu':
        return NU_MIN + (NU_MAX - NU_MIN)*expit(x)
    return 1 + numpy.exp(x)


class ParamVector(object):
    """ Copula parameters of a model, together with their unconstrained
    image.

    Parameters
    ----------
    constrained: array-like
        parameter values on their natural domains

    tags: sequence of str
        domain tag of each slot: ``rho``, ``nu`` or ``theta`` (gumbel)
    """
    def __init__(self, constrained, tags):
        self.constrained = numpy.array(constrained, dtype='double')
        self.tags = tuple(tags)
        if len(self.tags) != len(self.constrained):
            raise ValueError("%i tags for %i parameters"
                             % (len(self.tags), len(self.constrained)))

    @classmethod
    def from_unconstrained(cls, x, tags):
        x = numpy.array(x, dtype='double').ravel()
        if not numpy.all(numpy.isfinite(x)):
            raise ValueError("unconstrained parameters must be finite")
        return cls([_from_free(tag, xi) for tag, xi in zip(tags, x)], tags)

    @property
    def unconstrained(self):
        return numpy.array([_to_free(tag, v)
                            for tag, v in zip(self.tags, self.constrained)])

    def __len__(self):
        return len(self.tags)

    def __repr__(self):
        return 'ParamVector(%r, %r)' % (list(self.constrained), self.tags)


def param_tags(skeleton):
    """ Domain tags of the parameters of `skeleton`, AR copulas first. """
    return tuple(tag for c in skeleton.copulas for tag in TAGS[c.family])


def to_unconstrained(spec):
    """ Parameters of a fully specified model as a :class:`ParamVector`.

    Parameters
    ----------
    spec: MagmarSpec

    Returns
    -------
    ParamVector
    """
    spec.validate()
    values = spec.params
    if not numpy.all(numpy.isfinite(values)):
        raise ValueError("parameters must be finite")
    return ParamVector(values, param_tags(spec))


def from_unconstrained(vector, skeleton):
    """ Model with the parameters given by an unconstrained vector.

    Parameters
    ----------
    vector: ParamVector or array-like
        a :class:`ParamVector`, or its unconstrained image

    skeleton: MagmarSpec
        model whose copula families are used

    Returns
    -------
    MagmarSpec
    """
    if not isinstance(vector, ParamVector):
        vector = ParamVector.from_unconstrained(vector, param_tags(skeleton))
    if not numpy.all(numpy.isfinite(vector.constrained)):
        raise ValueError("parameters must be finite")
    return skeleton.with_params(vector.constrained)


def _skeleton(spec):
    if isinstance(spec, MagmarSpec):
        return spec
    return parse_model_string(spec)


def count_params(spec):
    """ Number of copula parameters of a model.

    Parameters
    ----------
    spec: MagmarSpec or str
        model or model string

    Returns
    -------
    int
    """
    return _skeleton(spec).n_params


def information_criteria(nll, n_params, n_obs):
    """ Akaike and Bayesian information criteria.

    Parameters
    ----------
    nll: float
        minimized negative log-likelihood

    n_params: int
        number of estimated parameters

    n_obs: int
        number of observations

    Returns
    -------
    (float, float):
        ``2 n_params + 2 nll`` and ``n_params log(n_obs) + 2 nll``
    """
    if n_obs < 1:
        raise ValueError("n_obs must be at least 1, got %i" % n_obs)
    return 2*n_params + 2*nll, n_params*numpy.log(n_obs) + 2*nll


def _significant(x, digits):
    return float('%.*g' % (digits, x))


class FitResult(object):
    """ A fitted model with its likelihood and information criteria.

    Parameters
    ----------
    spec: MagmarSpec
        model with the fitted parameters

    nll: float
        negative log-likelihood at the optimum

    n_obs: int
        number of observations the criteria refer to

    converged: bool, optional

    iterations: int, optional
        simplex iterations of the best restart
    """
    def __init__(self, spec, nll, n_obs, converged=True, iterations=0):
        self.spec = spec
        self.nll = float(nll)
        self.n_obs = int(n_obs)
        self.n_params = spec.n_params
        self.converged = bool(converged)
        self.iterations = int(iterations)
        self.aic, self.bic = information_criteria(self.nll, self.n_params,
                                                  self.n_obs)

    @property
    def model_string(self):
        return self.spec.model_string

    @property
    def params(self):
        return self.spec.params

    def criterion(self, name):
        """ Value of the information criterion ``aic`` or ``bic``. """
        if name not in ('aic', 'bic'):
            raise ValueError("criterion must be 'aic' or 'bic', got %r"
                             % name)
        return getattr(self, name)

    def to_record(self, digits=6):
        """ Structured record with numbers rounded to `digits` significant
        digits. """
        return {'model': self.model_string,
                'n_params': self.n_params,
                'nll': _significant(self.nll, digits),
                'aic': _significant(self.aic, digits),
                'bic': _significant(self.bic, digits),
                'params': [_significant(x, digits) for x in self.params],
                'converged': self.converged,
                'iterations': self.iterations,
                'n_obs': self.n_obs}

    @classmethod
    def from_record(cls, record):
        """ Rebuild a :class:`FitResult` from :meth:`to_record` output. """
        spec = parse_model_string(record['model']).with_params(
            record['params'])
        return cls(spec, record['nll'], record['n_obs'],
                   record.get('converged', True),
                   record.get('iterations', 0))

    def __repr__(self):
        return ('FitResult(%s, nll=%.4f, aic=%.4f, bic=%.4f)'
                % (self.model_string, self.nll, self.aic, self.bic))


def _objective(x, skeleton, u, init):
    try:
        spec = from_unconstrained(x, skeleton)
        nll = neg_log_likelihood(spec, u, init)
    except (MagmarError, ValueError, FloatingPointError):
        return PENALTY
    return nll if numpy.isfinite(nll) else PENALTY


def fit(skeleton, series, **kwargs):
    """ Fit a model by maximum pseudo-likelihood.

    Parameters
    ----------
    skeleton: MagmarSpec or str
        model whose parameters are estimated; any parameters it carries
        are ignored

    series: PseudoSeries or array-like
        pseudo-observations

    Keywords
    --------
    init: float or array-like, optional
        initial innovations
        (Default: 0.5)

    nstarts: int, optional
        number of simplex restarts; the first starts from fixed values,
        the others from random points
        (Default: 5)

    seed: int, optional
        seed for the random starting points
        (Default: 0)

    start: MagmarSpec, optional
        fully specified model to use as the first starting point

    maxfev: int, optional
        function evaluations per restart
        (Default: 2000)

    xatol: float, optional
        simplex size tolerance in unconstrained coordinates
        (Default: 1e-6)

    fatol: float, optional
        tolerance on the objective
        (Default: 1e-8)

    Returns
    -------
    FitResult

    Raises
    ------
    DataError
        if the series has fewer than max(p,q) + 11 observations

    NumericalError
        if no restart reaches a finite likelihood
    """
    init = kwargs.pop('init', DEFAULT_INIT)
    nstarts = kwargs.pop('nstarts', NSTARTS)
    seed = kwargs.pop('seed', 0)
    start = kwargs.pop('start', None)
    maxfev = kwargs.pop('maxfev', MAXFEV)
    xatol = kwargs.pop('xatol', XATOL)
    fatol = kwargs.pop('fatol', FATOL)
    if kwargs:
        raise TypeError('Unexpected **kwargs: %r' % kwargs)

    skeleton = _skeleton(skeleton)
    u = _check_unit(_as_values(series), 'series')
    _check_length(u, skeleton.s + 11)
    if nstarts < 1:
        raise ValueError("nstarts must be at least 1, got %i" % nstarts)

    tags = param_tags(skeleton)
    if not tags:
        spec = skeleton.validate()
        return FitResult(spec, neg_log_likelihood(spec, u, init), len(u))

    if start is None:
        x0 = ParamVector([DEFAULT_START[tag] for tag in tags],
                         tags).unconstrained
    else:
        x0 = to_unconstrained(start).unconstrained
    rng = numpy.random.default_rng(seed)
    starts = [x0] + [rng.normal(scale=1.5, size=len(tags))
                     for _ in range(nstarts - 1)]
    options = {'maxfev': maxfev, 'xatol': xatol, 'fatol': fatol}
    args = (skeleton, u, init)

    best = None
    with numpy.errstate(all='ignore'):
        for i, x in enumerate(starts):
            res = scipy.optimize.minimize(_objective, x, args=args,
                                          method='Nelder-Mead',
                                          options=options)
            logger.debug("%s start %i: nll=%.6f after %i iterations",
                         skeleton.model_string, i, res.fun, res.nit)
            if best is None or res.fun < best.fun:
                best = res
        polish = scipy.optimize.minimize(_objective, best.x, args=args,
                                         method='Nelder-Mead',
                                         options=options)
    iterations = best.nit + polish.nit
    if polish.fun <= best.fun:
        best = polish

    if not best.fun < PENALTY:
        raise NumericalError("no finite likelihood found for %s after %i "
                             "starts" % (skeleton.model_string, nstarts),
                             best=best)

    spec = from_unconstrained(best.x, skeleton).validate()
    result = FitResult(spec, best.fun, len(u), best.success, iterations)
    logger.info("fitted %s: nll=%.4f aic=%.4f bic=%.4f",
                result.model_string, result.nll, result.aic, result.bic)
    return result


Selection = namedtuple('Selection', ['ranked', 'failures'])
Selection.__doc__ = """ Outcome of :func:`select`.

ranked: list of :class:`FitResult`, best first

failures: dict mapping model strings that could not be fitted to the
error message
"""


def _fit_candidate(model_string, u, init, cache_root, fit_kwargs):
    try:
        if cache_root is None:
            return fit(model_string, u, init=init, **fit_kwargs)
        cache = Cache(candidate_root(cache_root, model_string))
        inputs = (model_string, u, numpy.atleast_1d(init),
                  repr(sorted(fit_kwargs.items())))
        try:
            return cache.check(*inputs)
        except CacheException as e:
            logger.info(e)
        result = fit(model_string, u, init=init, **fit_kwargs)
        cache.save(*(inputs + (result,)))
        return result
    except MagmarError as e:
        return e


def select(candidates, series, criterion='aic', **kwargs):
    """ Fit candidate models and rank them by an information criterion.

    Parameters
    ----------
    candidates: list of str
        model strings

    series: PseudoSeries or array-like
        pseudo-observations

    criterion: str, optional
        ``aic`` or ``bic``
        (Default: ``aic``)

    Keywords
    --------
    parallel: int or bool, optional
        fit candidates concurrently, see
        :func:`magmar.parallel.parallel_apply`
        (Default: False)

    cache: str, optional
        file root for cached fits; a candidate is only refitted if its
        inputs changed

    init: float, optional
        initial innovations
        (Default: 0.5)

    tqdm_kwargs: dict, optional
        keyword arguments for the progress bar

    Any other keywords are passed on to :func:`fit`.

    Returns
    -------
    Selection:
        fits sorted ascending by criterion, ties broken by fewer
        parameters and then by model string; candidates whose fit failed
        are listed in ``failures``
    """
    parallel = kwargs.pop('parallel', False)
    cache_root = kwargs.pop('cache', None)
    init = kwargs.pop('init', DEFAULT_INIT)
    tqdm_kwargs = kwargs.pop('tqdm_kwargs', {'leave': False})
    if criterion not in ('aic', 'bic'):
        raise ValueError("criterion must be 'aic' or 'bic', got %r"
                         % criterion)

    candidates = list(candidates)
    if not candidates:
        raise ValueError("select needs at least one candidate")
    # grammar errors are raised, not recorded
    candidates = [format_candidate(c) for c in candidates]
    u = _check_unit(_as_values(series), 'series')

    results = parallel_apply(_fit_candidate, candidates,
                             postcurry=(u, init, cache_root, kwargs),
                             parallel=parallel, tqdm_kwargs=tqdm_kwargs)

    ranked, failures = [], {}
    for model_string, result in zip(candidates, results):
        if isinstance(result, Exception):
            logger.warning("fit of %s failed: %s", model_string, result)
            failures[model_string] = str(result)
        else:
            ranked.append(result)
    ranked.sort(key=lambda r: (r.criterion(criterion), r.n_params,
                               r.model_string))
    return Selection(ranked, failures)


def format_candidate(model_string):
    """ Canonical form of a candidate model string. """
    return parse_model_string(model_string).model_string


PublishedRow = namedtuple('PublishedRow',
                          ['model', 'n_params', 'nll', 'aic', 'bic'])


def published_table():
    """ Published fits to quarterly US inflation, 1960Q1 to 2020Q4 (244
    growth rates).

    The two ``copula-ARMA`` rows are the competing copula-ARMA models
    with gaussian and gumbel partial copulas; they are reference values
    only and cannot be refitted here.

    Returns
    -------
    list of PublishedRow
    """
    return [PublishedRow('copula-ARMA-normal', 6, -98.31, -184.62, -163.64),
            PublishedRow('copula-ARMA-gumbel', 6, -110.64, -209.28, -188.30),
            PublishedRow('MAGMAR(4,0)-ggtg', 5, -111.05, -212.10, -194.61),
            PublishedRow('MAGMAR(4,1)-nnnn-n', 5, -93.48, -176.95, -159.47),
            PublishedRow('MAGMAR(4,1)-gggg-t', 6, -110.88, -209.77, -188.79),
            PublishedRow('MAGMAR(4,1)-ggtg-t', 7, -113.60, -213.21, -188.72),
            PublishedRow('MAGMAR(4,1)-ging-t', 5, -112.16, -214.31, -196.83)]


N_PUBLISHED_OBS = 244
