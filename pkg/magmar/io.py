""" On-disk cache of fitted models.

A fit is stored together with the inputs that produced it (model string,
pseudo-observations, initial innovations). :meth:`Cache.check` returns the
stored fit if the inputs are unchanged, and otherwise signals why it has
to be recomputed by raising a :class:`CacheException`::

    cache = Cache(root)
    try:
        result = cache.check(model, values, init)
    except CacheException as e:
        logger.info(e)
        result = fit(...)
        cache.save(model, values, init, result)
"""
import os
import re
import pickle
import logging
import numpy

logger = logging.getLogger(__name__)


class CacheException(Exception):
    """ Base exception to indicate cache errors """
    _msg = "cache %s"

    def __init__(self, file_root):
        self.file_root = file_root
        super(CacheException, self).__init__(self._msg % file_root)


class CacheOK(CacheException):
    """ The cached fit can be used. """
    _msg = "reading fit from cache %s"


class CacheChanged(CacheException):
    """ The inputs differ from the cached ones. """
    _msg = "inputs have changed in cache %s, refitting"


class CacheMissing(CacheException):
    """ There is no cache file. """
    _msg = "no cache file %s.pkl"


def _same(x, x_check):
    if isinstance(x, str) or isinstance(x_check, str):
        return x == x_check
    x, x_check = numpy.asarray(x), numpy.asarray(x_check)
    return x.shape == x_check.shape and numpy.allclose(x, x_check,
                                                       equal_nan=True)


class Cache(object):
    """ Pickle cache for one fitted model.

    Parameters
    ----------
    file_root: str
        cached values are saved in file_root.pkl
    """
    def __init__(self, file_root):
        self.file_root = file_root
        dirname = os.path.dirname(self.file_root)
        if dirname and not os.path.exists(dirname):
            os.makedirs(dirname)

    def check(self, *args):
        """ Return the cached value if the inputs are unchanged.

        Parameters
        ----------
        *args:
            inputs of the cached computation, in the order they were saved

        Returns
        -------
        the cached value (the last item saved)

        Raises
        ------
        CacheMissing
            if nothing has been saved

        CacheChanged
            if any input differs from the saved one
        """
        data = self.load()

        if len(data)-1 != len(args):
            raise ValueError("Wrong number of arguments passed to Cache.check")

        if not all(_same(x, x_check) for x, x_check in zip(data, args)):
            raise CacheChanged(self.file_root)

        logger.info(CacheOK(self.file_root))
        return data[-1]

    def load(self):
        """ Load cache from file using pickle. """
        try:
            with open(self.file_root + '.pkl', "rb") as f:
                return pickle.load(f)
        except IOError:
            raise CacheMissing(self.file_root)

    def save(self, *args):
        """ Save inputs followed by the computed value. """
        with open(self.file_root + '.pkl', "wb") as f:
            pickle.dump(args, f, protocol=pickle.HIGHEST_PROTOCOL)


def candidate_root(root, model_string):
    """ Cache file root for one candidate model under `root`.

    >>> candidate_root('cache/cpi', 'MAGMAR(4,1)-ging-t')
    'cache/cpi_MAGMAR_4_1_-ging-t'
    """
    return '%s_%s' % (root, re.sub(r'[^A-Za-z0-9\-]', '_', model_string))
