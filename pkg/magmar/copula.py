r""" Bivariate copula families used as pair copulas.

Four families are supported: ``normal`` (parameter :math:`\rho`), ``t``
(:math:`\rho, \nu`), ``gumbel`` (:math:`\rho \geq 1`) and
``independence`` (no parameters). Each is abbreviated by a single letter
``n``, ``t``, ``g`` and ``i`` in model strings.

A pair copula is always oriented as :math:`C(u_1, u_2)` with :math:`u_1`
the earlier and :math:`u_2` the later observation. The h-functions are

.. math::

    h_1(u_1, u_2) = \partial C / \partial u_1 = P(U_2 \leq u_2 | U_1 = u_1)

    h_2(u_1, u_2) = \partial C / \partial u_2 = P(U_1 \leq u_1 | U_2 = u_2)

and their inverses solve for the non-conditioning argument. All four
families are exchangeable, so :math:`h_1(a, b) = h_2(b, a)`.

Every function accepts scalars or numpy arrays (broadcast against each
other). Arguments on the copula scale are clamped to
:math:`[\epsilon, 1-\epsilon]` with :math:`\epsilon = 10^{-10}`.
"""
import numpy
import scipy.integrate
import scipy.optimize
from scipy.special import ndtr, ndtri, stdtr, stdtrit, gammaln
from magmar._utils import _clamp, EPS
from magmar.exceptions import DomainError, NumericalError

CODES = {'normal': 'n', 't': 't', 'gumbel': 'g', 'independence': 'i'}
FAMILIES = {code: family for family, code in CODES.items()}
N_PARAMS = {'normal': 1, 't': 2, 'gumbel': 1, 'independence': 0}

NU_MIN, NU_MAX = 2., 100.
ROOT_TOL = 1e-13
ROOT_MAXITER = 200


class CopulaSpec(object):
    """ A bivariate copula family together with its parameter vector.

    Parameters
    ----------
    family: str
        one of ``normal``, ``t``, ``gumbel``, ``independence``, or the
        corresponding single letter.

    params: float or array-like, optional
        parameter vector (normal: rho; t: rho, nu; gumbel: rho;
        independence: empty). `None` leaves the parameters free, as in a
        model skeleton awaiting estimation.
    """
    def __init__(self, family, params=()):
        self.family = FAMILIES.get(family, family)
        if params is None:
            self.params = None
        else:
            self.params = tuple(float(p) for p in numpy.atleast_1d(params))
        self._valid = False

    @property
    def code(self):
        """ Single-letter family code. """
        return CODES[self.family]

    @property
    def n_params(self):
        """ Number of parameters of the family. """
        return N_PARAMS[self.family]

    @property
    def free(self):
        """ True if the parameters have not been set. """
        return self.params is None

    def with_params(self, params):
        """ Copy of this copula with new parameters. """
        return CopulaSpec(self.family, params)

    def __eq__(self, other):
        return (isinstance(other, CopulaSpec)
                and self.family == other.family
                and self.params == other.params)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.family, self.params))

    def __repr__(self):
        return 'CopulaSpec(%r, %r)' % (self.family, self.params)


def from_code(code, params=None):
    """ Build a :class:`CopulaSpec` from its single-letter code.

    Parameters
    ----------
    code: str
        one of ``n``, ``t``, ``g``, ``i``

    params: array-like, optional
        parameters; the independence copula always gets ``()``.

    Returns
    -------
    CopulaSpec
    """
    if code not in FAMILIES:
        raise DomainError("unknown copula code %r" % code)
    family = FAMILIES[code]
    if family == 'independence':
        params = ()
    return CopulaSpec(family, params)


def validate(spec):
    """ Check that a copula specification lies inside its domain.

    Parameters
    ----------
    spec: CopulaSpec

    Returns
    -------
    CopulaSpec:
        `spec` itself, if valid

    Raises
    ------
    DomainError
        naming the violated bound
    """
    if spec._valid:
        return spec
    if spec.family not in N_PARAMS:
        raise DomainError("unknown copula family %r" % spec.family)
    if spec.params is None:
        raise DomainError("%s copula has free parameters" % spec.family)
    if len(spec.params) != spec.n_params:
        raise DomainError("%s copula takes %i parameters, %i given"
                          % (spec.family, spec.n_params, len(spec.params)))
    if not numpy.all(numpy.isfinite(spec.params)):
        raise DomainError("%s copula parameters must be finite" % spec.family)

    if spec.family in ('normal', 't'):
        rho = spec.params[0]
        if not -1 < rho < 1:
            raise DomainError("%s copula requires -1 < rho < 1, got %g"
                              % (spec.family, rho))
    if spec.family == 't':
        nu = spec.params[1]
        if not NU_MIN <= nu <= NU_MAX:
            raise DomainError("t copula requires %g <= nu <= %g, got %g"
                              % (NU_MIN, NU_MAX, nu))
    if spec.family == 'gumbel':
        rho = spec.params[0]
        if not rho >= 1:
            raise DomainError("gumbel copula requires rho >= 1, got %g" % rho)

    spec._valid = True
    return spec


# Each family provides:
#   logpdf(par, u1, u2)
#   cond(par, x, given)      P(X <= x | G = given)
#   cond_inv(par, w, given)  solves cond(par, ., given) = w
#   cdf(par, u1, u2)

def _normal_logpdf(par, u1, u2):
    rho, = par
    x1, x2 = ndtri(u1), ndtri(u2)
    r2 = 1 - rho**2
    return (-0.5*numpy.log(r2)
            - (rho**2*(x1**2 + x2**2) - 2*rho*x1*x2) / (2*r2))


def _normal_cond(par, x, given):
    rho, = par
    return ndtr((ndtri(x) - rho*ndtri(given)) / numpy.sqrt(1 - rho**2))


def _normal_cond_inv(par, w, given):
    rho, = par
    return ndtr(ndtri(w)*numpy.sqrt(1 - rho**2) + rho*ndtri(given))


def _t_logpdf(par, u1, u2):
    rho, nu = par
    x1, x2 = stdtrit(nu, u1), stdtrit(nu, u2)
    r2 = 1 - rho**2
    quad = (x1**2 - 2*rho*x1*x2 + x2**2) / (nu*r2)
    return (gammaln((nu + 2)/2) + gammaln(nu/2) - 2*gammaln((nu + 1)/2)
            - 0.5*numpy.log(r2)
            - (nu + 2)/2*numpy.log1p(quad)
            + (nu + 1)/2*(numpy.log1p(x1**2/nu) + numpy.log1p(x2**2/nu)))


def _t_scale(rho, nu, xg):
    return numpy.sqrt((nu + xg**2)*(1 - rho**2)/(nu + 1))


def _t_cond(par, x, given):
    rho, nu = par
    xg = stdtrit(nu, given)
    return stdtr(nu + 1, (stdtrit(nu, x) - rho*xg) / _t_scale(rho, nu, xg))


def _t_cond_inv(par, w, given):
    rho, nu = par
    xg = stdtrit(nu, given)
    return stdtr(nu, stdtrit(nu + 1, w)*_t_scale(rho, nu, xg) + rho*xg)


def _gumbel_logA(theta, x, y):
    # log((x**theta + y**theta)) without overflow for large theta
    return numpy.logaddexp(theta*numpy.log(x), theta*numpy.log(y))


def _gumbel_logpdf(par, u1, u2):
    theta, = par
    x, y = -numpy.log(u1), -numpy.log(u2)
    logA = _gumbel_logA(theta, x, y)
    z = numpy.exp(logA/theta)
    return (-z + x + y
            + (theta - 1)*(numpy.log(x) + numpy.log(y))
            + (2./theta - 2)*logA
            + numpy.log1p((theta - 1)/z))


def _gumbel_cond(par, x, given):
    theta, = par
    a, y = -numpy.log(x), -numpy.log(given)
    logA = _gumbel_logA(theta, a, y)
    return numpy.exp(-numpy.exp(logA/theta) + (1./theta - 1)*logA
                     + (theta - 1)*numpy.log(y) + y)


def _gumbel_cond_inv(par, w, given):
    r""" Invert the gumbel h-function.

    With :math:`y = -\ln(given)`, :math:`k = \theta - 1` and
    :math:`z = A^{1/\theta}` the equation :math:`h = w` becomes
    :math:`z + k \ln z = y + k \ln y - \ln w`, solved for
    :math:`s = \ln z` by Newton's method started at the upper bound
    :math:`\ln(y - \ln w)`, from which the iteration decreases
    monotonically onto the root.
    """
    theta, = par
    k = theta - 1
    w, given = numpy.broadcast_arrays(numpy.asarray(w, dtype='double'),
                                      numpy.asarray(given, dtype='double'))
    y = -numpy.log(given)
    logy = numpy.log(y)
    c = y + k*logy - numpy.log(w)
    s0 = numpy.log(y - numpy.log(w))

    def f(s, k, c):
        return numpy.exp(s) + k*s - c

    def fprime(s, k, c):
        return numpy.exp(s) + k

    if k == 0:
        s = s0
    else:
        vector = s0.size > 1
        args = (k, c.ravel() if vector else float(c))
        out = scipy.optimize.newton(f, s0.ravel() if vector else float(s0),
                                    fprime=fprime, args=args, tol=ROOT_TOL,
                                    maxiter=ROOT_MAXITER, full_output=True,
                                    disp=False)
        s = out[0]
        converged = numpy.all(out[1]) if vector else out[1].converged
        if not converged:
            residual = numpy.max(numpy.abs(f(s, *args)))
            raise NumericalError("gumbel h-inverse did not converge",
                                 residual=residual)
        s = numpy.reshape(s, s0.shape)

    x = y*numpy.expm1(theta*numpy.maximum(s - logy, 0))**(1./theta)
    return numpy.exp(-x)


def _gumbel_cdf(par, u1, u2):
    theta, = par
    x, y = -numpy.log(u1), -numpy.log(u2)
    return numpy.exp(-numpy.exp(_gumbel_logA(theta, x, y)/theta))


def _indep_logpdf(par, u1, u2):
    return numpy.zeros(numpy.broadcast(u1, u2).shape)


def _indep_cond(par, x, given):
    return x + numpy.zeros_like(given)


def _indep_cdf(par, u1, u2):
    return u1*u2


def _cdf_by_quadrature(cond, par, u1, u2):
    r""" :math:`C(u_1, u_2) = \int_0^{u_2} h_2(u_1, v) dv` by quadrature. """
    def integral(a, b):
        return scipy.integrate.quad(lambda v: cond(par, a, _clamp(v)), 0, b,
                                    epsabs=1e-12, epsrel=1e-10,
                                    limit=200)[0]
    return numpy.vectorize(integral, otypes=['double'])(u1, u2)


_FUNS = {
    'normal': {'logpdf': _normal_logpdf, 'cond': _normal_cond,
               'cond_inv': _normal_cond_inv, 'cdf': None},
    't': {'logpdf': _t_logpdf, 'cond': _t_cond,
          'cond_inv': _t_cond_inv, 'cdf': None},
    'gumbel': {'logpdf': _gumbel_logpdf, 'cond': _gumbel_cond,
               'cond_inv': _gumbel_cond_inv, 'cdf': _gumbel_cdf},
    'independence': {'logpdf': _indep_logpdf, 'cond': _indep_cond,
                     'cond_inv': _indep_cond, 'cdf': _indep_cdf},
}


def _funs(spec):
    validate(spec)
    return _FUNS[spec.family], spec.params


def _result(x):
    x = numpy.asarray(x, dtype='double')
    return x[()] if x.ndim == 0 else x


def cdf(spec, u1, u2):
    """ Copula distribution function :math:`C(u_1, u_2)`.

    Parameters
    ----------
    spec: CopulaSpec

    u1, u2: float or array-like
        arguments in (0, 1)

    Returns
    -------
    float or numpy.array:
        values in [0, 1]
    """
    funs, par = _funs(spec)
    u1, u2 = _clamp(u1), _clamp(u2)
    if funs['cdf'] is None:
        return _result(_cdf_by_quadrature(funs['cond'], par, u1, u2))
    return _result(funs['cdf'](par, u1, u2))


def log_density(spec, u1, u2):
    """ Logarithm of the copula density :math:`c(u_1, u_2)`. """
    funs, par = _funs(spec)
    return _result(funs['logpdf'](par, _clamp(u1), _clamp(u2)))


def density(spec, u1, u2):
    r""" Copula density :math:`c(u_1, u_2) = \partial^2 C/\partial u_1
    \partial u_2`.

    Parameters
    ----------
    spec: CopulaSpec

    u1, u2: float or array-like
        arguments in (0, 1)

    Returns
    -------
    float or numpy.array:
        nonnegative density values
    """
    return numpy.exp(log_density(spec, u1, u2))


def h1(spec, u1, u2):
    """ :math:`P(U_2 \\leq u_2 | U_1 = u_1)`, conditioning on the first
    argument. """
    funs, par = _funs(spec)
    return _result(_clamp(funs['cond'](par, _clamp(u2), _clamp(u1))))


def h2(spec, u1, u2):
    """ :math:`P(U_1 \\leq u_1 | U_2 = u_2)`, conditioning on the second
    argument. """
    funs, par = _funs(spec)
    return _result(_clamp(funs['cond'](par, _clamp(u1), _clamp(u2))))


def h1_inv(spec, w, u1):
    """ Inverse of :func:`h1` in its second argument.

    Parameters
    ----------
    spec: CopulaSpec

    w: float or array-like
        conditional probability in (0, 1)

    u1: float or array-like
        conditioning (first) argument

    Returns
    -------
    float or numpy.array:
        `u2` with ``h1(spec, u1, u2) == w``
    """
    funs, par = _funs(spec)
    return _result(_clamp(funs['cond_inv'](par, _clamp(w), _clamp(u1))))


def h2_inv(spec, w, u2):
    """ Inverse of :func:`h2` in its first argument.

    Parameters
    ----------
    spec: CopulaSpec

    w: float or array-like
        conditional probability in (0, 1)

    u2: float or array-like
        conditioning (second) argument

    Returns
    -------
    float or numpy.array:
        `u1` with ``h2(spec, u1, u2) == w``
    """
    funs, par = _funs(spec)
    return _result(_clamp(funs['cond_inv'](par, _clamp(w), _clamp(u2))))


def tail_dependence(spec):
    """ Lower and upper tail-dependence coefficients.

    Parameters
    ----------
    spec: CopulaSpec

    Returns
    -------
    (float, float):
        lower and upper coefficients
    """
    validate(spec)
    if spec.family == 't':
        rho, nu = spec.params
        lam = 2*stdtr(nu + 1, -numpy.sqrt((nu + 1)*(1 - rho)/(1 + rho)))
        return float(lam), float(lam)
    if spec.family == 'gumbel':
        return 0., float(2 - 2**(1./spec.params[0]))
    return 0., 0.


__all__ = ['CopulaSpec', 'from_code', 'validate', 'cdf', 'density',
           'log_density', 'h1', 'h2', 'h1_inv', 'h2_inv', 'tail_dependence',
           'CODES', 'FAMILIES', 'EPS']
