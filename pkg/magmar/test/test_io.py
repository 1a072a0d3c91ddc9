import os
import numpy
import pytest
from shutil import rmtree
from numpy.testing import assert_allclose
from magmar.io import Cache, CacheMissing, CacheChanged, candidate_root
from magmar.model import parse_model_string
from magmar.estimation import FitResult


def test_Cache():
    """ Fully test the cache """

    numpy.random.seed(0)
    dirname = '.test_cache'
    root = candidate_root(os.path.join(dirname, 'series'),
                          'MAGMAR(1,1)-g-n')
    model = 'MAGMAR(1,1)-g-n'
    u = numpy.random.rand(50)
    init = numpy.array([0.5])
    result = FitResult(parse_model_string(model).with_params([2., 0.3]),
                       -4.2, 50)

    # Creates a directory
    assert(not os.path.isdir(dirname))
    cache = Cache(root)
    assert(os.path.isdir(dirname))

    # Raises exception if there's no cache
    with pytest.raises(CacheMissing):
        cache.load()
    with pytest.raises(CacheMissing):
        cache.check(model, u, init)

    # Check saving
    cache.save(model, u, init, result)
    assert(os.path.exists(root + '.pkl'))

    # check loading
    model_, u_, init_, result_ = cache.load()
    assert model_ == model
    assert_allclose(u_, u)
    assert_allclose(result_.nll, result.nll)
    assert result_.spec == result.spec

    # check check
    with pytest.raises(ValueError):
        cache.check(model, u)

    with pytest.raises(CacheChanged):
        cache.check('MAGMAR(1,1)-g-t', u, init)

    with pytest.raises(CacheChanged):
        cache.check(model, numpy.random.rand(50), init)

    with pytest.raises(CacheChanged):
        cache.check(model, u[:-1], init)

    with pytest.raises(CacheChanged):
        cache.check(model, u, numpy.array([0.4]))

    assert cache.check(model, u, init).spec == result.spec

    # Remove the testing cache
    rmtree(dirname)


def test_candidate_root():
    assert (candidate_root('cache/cpi', 'MAGMAR(4,1)-ging-t')
            == 'cache/cpi_MAGMAR_4_1_-ging-t')
    assert (candidate_root('c', 'MAGMAR(4,1)-ging-t')
            != candidate_root('c', 'MAGMAR(4,1)-ggtg-t'))
