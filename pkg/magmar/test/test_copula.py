import numpy
import pytest
import scipy.integrate
import scipy.stats
from scipy.special import ndtr, ndtri
from numpy.testing import assert_allclose, assert_array_equal
from magmar.copula import (CopulaSpec, from_code, validate, cdf, density,
                           log_density, h1, h2, h1_inv, h2_inv,
                           tail_dependence)
from magmar.exceptions import DomainError

SPECS = [CopulaSpec('normal', 0.6), CopulaSpec('normal', -0.4),
         CopulaSpec('t', [0.5, 5.]), CopulaSpec('t', [-0.3, 20.]),
         CopulaSpec('gumbel', 1.), CopulaSpec('gumbel', 3.),
         CopulaSpec('independence')]

ids = [repr(s) for s in SPECS]


def test_validate():
    for spec in SPECS:
        assert validate(spec) is spec

    for family, params in [('normal', 1.), ('normal', -1.), ('t', [0.5, 1.5]),
                           ('t', [0.5, 101.]), ('t', [1.2, 5.]),
                           ('gumbel', 0.99), ('normal', numpy.nan),
                           ('normal', [0.1, 0.2]), ('t', 0.5),
                           ('independence', 0.5), ('clayton', 2.)]:
        with pytest.raises(DomainError):
            validate(CopulaSpec(family, params))

    with pytest.raises(DomainError):
        validate(CopulaSpec('normal', None))

    with pytest.raises(DomainError):
        h1(CopulaSpec('gumbel', 0.5), 0.3, 0.4)


def test_codes():
    assert from_code('g', 2.) == CopulaSpec('gumbel', 2.)
    assert from_code('i') == CopulaSpec('independence')
    assert from_code('n').free
    assert CopulaSpec('n', 0.1).family == 'normal'
    assert [s.code for s in SPECS] == ['n', 'n', 't', 't', 'g', 'g', 'i']
    with pytest.raises(DomainError):
        from_code('x')


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_h_functions_finite_difference(spec):
    numpy.random.seed(0)
    u1, u2 = numpy.random.uniform(0.1, 0.9, (2, 10))
    delta = 1e-4
    h1_ = (cdf(spec, u1 + delta, u2) - cdf(spec, u1 - delta, u2))/(2*delta)
    h2_ = (cdf(spec, u1, u2 + delta) - cdf(spec, u1, u2 - delta))/(2*delta)
    assert_allclose(h1(spec, u1, u2), h1_, atol=1e-5)
    assert_allclose(h2(spec, u1, u2), h2_, atol=1e-5)


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_density_finite_difference(spec):
    numpy.random.seed(1)
    u1, u2 = numpy.random.uniform(0.05, 0.95, (2, 20))
    delta = 1e-4
    c_ = (h2(spec, u1 + delta, u2) - h2(spec, u1 - delta, u2))/(2*delta)
    assert_allclose(density(spec, u1, u2), c_, rtol=1e-4)
    assert_allclose(numpy.log(density(spec, u1, u2)),
                    log_density(spec, u1, u2), atol=1e-12)


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_inverse_roundtrip(spec):
    numpy.random.seed(2)
    w, u = numpy.random.uniform(0.01, 0.99, (2, 100))
    assert_allclose(h1(spec, u, h1_inv(spec, w, u)), w, atol=1e-9)
    assert_allclose(h2(spec, h2_inv(spec, w, u), u), w, atol=1e-9)


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_exchangeable(spec):
    numpy.random.seed(3)
    a, b = numpy.random.rand(2, 10)
    assert_allclose(h1(spec, a, b), h2(spec, b, a))
    assert_allclose(density(spec, a, b), density(spec, b, a))


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_h_is_integrated_density(spec):
    for u1, u2 in [(0.3, 0.6), (0.8, 0.2), (0.5, 0.5)]:
        integral = scipy.integrate.quad(lambda v: density(spec, u1, v),
                                        0, u2, epsabs=1e-10, limit=200)[0]
        assert_allclose(integral, h1(spec, u1, u2), atol=1e-6)


@pytest.mark.parametrize('spec', SPECS, ids=ids)
def test_cdf_margins(spec):
    u = numpy.array([0.1, 0.35, 0.6, 0.95])
    assert_allclose(cdf(spec, u, 1 - 1e-10), u, atol=1e-6)
    assert_allclose(cdf(spec, 1 - 1e-10, u), u, atol=1e-6)
    assert_allclose(cdf(spec, u, 1e-10), 0, atol=1e-6)


def test_scalar_and_array():
    spec = CopulaSpec('t', [0.5, 4.])
    assert numpy.ndim(h1(spec, 0.3, 0.4)) == 0
    assert numpy.ndim(cdf(spec, 0.3, 0.4)) == 0
    assert h1(spec, [0.3, 0.5], 0.4).shape == (2,)
    assert density(spec, numpy.ones((3, 2))*0.2, 0.4).shape == (3, 2)
    assert h1_inv(CopulaSpec('gumbel', 2.), [0.3, 0.5], 0.4).shape == (2,)


def test_independence():
    spec = CopulaSpec('independence')
    numpy.random.seed(4)
    a, b = numpy.random.rand(2, 10)
    assert_allclose(cdf(spec, a, b), a*b)
    assert_array_equal(density(spec, a, b), numpy.ones(10))
    assert_allclose(h1(spec, a, b), b)
    assert_allclose(h2_inv(spec, a, b), a)


def test_normal_closed_forms():
    rho = 0.6
    spec = CopulaSpec('normal', rho)
    numpy.random.seed(5)
    u1, u2, w = numpy.random.rand(3, 10)
    x1, x2 = ndtri(u1), ndtri(u2)

    assert_allclose(h1_inv(spec, w, u1),
                    ndtr(ndtri(w)*numpy.sqrt(1 - rho**2) + rho*x1))

    corr = [[1, rho], [rho, 1]]
    c_ = (scipy.stats.multivariate_normal([0, 0], corr).pdf(
        numpy.column_stack([x1, x2])) / scipy.stats.norm.pdf(x1)
        / scipy.stats.norm.pdf(x2))
    assert_allclose(density(spec, u1, u2), c_, rtol=1e-10)

    assert_allclose(cdf(spec, 0.5, 0.5), 0.25 + numpy.arcsin(rho)/2/numpy.pi,
                    atol=1e-10)


def test_t_density():
    rho, nu = -0.3, 6.
    spec = CopulaSpec('t', [rho, nu])
    numpy.random.seed(6)
    u1, u2 = numpy.random.rand(2, 10)
    x1, x2 = scipy.stats.t.ppf(u1, nu), scipy.stats.t.ppf(u2, nu)
    shape = [[1, rho], [rho, 1]]
    c_ = (scipy.stats.multivariate_t([0, 0], shape, df=nu).pdf(
        numpy.column_stack([x1, x2])) / scipy.stats.t.pdf(x1, nu)
        / scipy.stats.t.pdf(x2, nu))
    assert_allclose(density(spec, u1, u2), c_, rtol=1e-6)


def test_gumbel_cdf():
    spec = CopulaSpec('gumbel', 2.)
    assert_allclose(cdf(spec, 0.5, 0.5), 2**-numpy.sqrt(2))
    assert_allclose(cdf(CopulaSpec('gumbel', 1.), 0.3, 0.7), 0.21)


def test_gumbel_large_parameter():
    spec = CopulaSpec('gumbel', 50.)
    numpy.random.seed(7)
    w, u = numpy.random.uniform(0.01, 0.99, (2, 20))
    assert numpy.all(numpy.isfinite(log_density(spec, w, u)))
    assert_allclose(h1(spec, u, h1_inv(spec, w, u)), w, atol=1e-9)


def test_tail_dependence():
    assert tail_dependence(CopulaSpec('normal', 0.9)) == (0., 0.)
    assert tail_dependence(CopulaSpec('independence')) == (0., 0.)

    lower, upper = tail_dependence(CopulaSpec('gumbel', 2.))
    assert lower == 0.
    assert_allclose(upper, 2 - numpy.sqrt(2))

    rho, nu = 0.5, 4.
    lower, upper = tail_dependence(CopulaSpec('t', [rho, nu]))
    assert lower == upper
    assert_allclose(upper, 2*scipy.stats.t.cdf(
        -numpy.sqrt((nu + 1)*(1 - rho)/(1 + rho)), nu + 1))


def test_reference_values():
    normal = CopulaSpec('normal', 0.5)
    assert_allclose(cdf(normal, 0.5, 0.5), 1/3., atol=1e-8)
    assert_allclose(density(normal, 0.5, 0.5), 1/numpy.sqrt(0.75))
    assert_allclose(h2(normal, 0.5, 0.5), 0.5)
    assert_allclose(cdf(CopulaSpec('independence'), 0.3, 0.5), 0.15)
    assert_allclose(cdf(CopulaSpec('gumbel', 1.), 0.3, 0.5), 0.15)
    assert_allclose(density(CopulaSpec('t', [0., 100.]), 0.5, 0.5), 1,
                    atol=0.02)
    assert_allclose(h2(CopulaSpec('independence'), 0.7, 0.4), 0.7)


def test_t_approaches_normal():
    t, normal = CopulaSpec('t', [0.5, 100.]), CopulaSpec('normal', 0.5)
    u1, u2 = numpy.meshgrid(numpy.linspace(0.2, 0.8, 7),
                            numpy.linspace(0.2, 0.8, 7))
    assert_allclose(density(t, u1, u2), density(normal, u1, u2), rtol=0.02)

    # the gap grows towards the tails, up to about 2.8% on this grid
    u1, u2 = numpy.meshgrid(numpy.linspace(0.1, 0.9, 9),
                            numpy.linspace(0.1, 0.9, 9))
    assert_allclose(density(t, u1, u2), density(normal, u1, u2), rtol=0.03)
