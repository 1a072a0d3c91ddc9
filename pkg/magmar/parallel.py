""" Fan-out of independent tasks: candidate fits and Monte Carlo batches.

joblib and tqdm are optional; without them tasks run serially and without
a progress bar.
"""
import logging
import warnings
import numpy
try:
    from tqdm import tqdm
except ImportError:
    def tqdm(x, **kwargs): return x

try:
    PARALLEL = True
    from joblib import Parallel, delayed, cpu_count
except ImportError:
    PARALLEL = False

    class Parallel(object):
        def __init__(self, n_jobs=None): pass

        def __call__(self, x): return list(x)

    def delayed(x): return x

    def cpu_count(): return 1

logger = logging.getLogger(__name__)


def n_workers(parallel):
    """ Number of worker processes requested by `parallel`.

    Parameters
    ----------
    parallel: int or bool
        int > 0: number of processes

        int < 0 or bool=True: one process per cpu

        bool=False or int=0: run serially

    Returns
    -------
    int:
        0 for serial execution
    """
    if parallel is True:
        return cpu_count()
    if parallel is False or parallel is None:
        return 0
    if isinstance(parallel, (int, numpy.integer)):
        return cpu_count() if parallel < 0 else int(parallel)
    raise ValueError("parallel keyword must be an integer or bool")


def parallel_apply(f, array, **kwargs):
    """ Apply a function to every element of an array, possibly in parallel.

    Equivalent to `[f(x) for x in array]`.

    Parameters
    ----------
    f: function
        Univariate function to apply to each element of array

    array: array-like
        Array to apply f to

    parallel: int or bool, optional
        see :func:`n_workers`
        (Default: False)

    tqdm_kwargs: dict, optional
        additional kwargs for tqdm progress bars.

    precurry: tuple, optional
        immutable arguments to pass to f before x,
        i.e. `[f(precurry,x) for x in array]`

    postcurry: tuple, optional
        immutable arguments to pass to f after x
        i.e. `[f(x,postcurry) for x in array]`

    Returns
    -------
    list:
        `[f(precurry,x,postcurry) for x in array]`, in the order of `array`
    """
    precurry = tuple(kwargs.pop('precurry', ()))
    postcurry = tuple(kwargs.pop('postcurry', ()))
    parallel = kwargs.pop('parallel', False)
    tqdm_kwargs = kwargs.pop('tqdm_kwargs', {})
    if kwargs:
        raise TypeError('Unexpected **kwargs: %r' % kwargs)

    workers = n_workers(parallel)
    if not workers:
        return [f(*(precurry + (x,) + postcurry)) for x in
                tqdm(array, **tqdm_kwargs)]

    if not PARALLEL:
        warnings.warn("You need to install the package joblib "
                      "if you want to use parallelisation")
    logger.debug("dispatching %i tasks to %i workers", len(array), workers)
    return Parallel(n_jobs=workers)(delayed(f)(*(precurry + (x,) + postcurry))
                                    for x in tqdm(array, **tqdm_kwargs))
