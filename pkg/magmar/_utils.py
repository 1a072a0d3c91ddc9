import numpy
from magmar.exceptions import DomainError, DataError

EPS = 1e-10


def _clamp(u, eps=EPS):
    """ Clamp values on the copula scale into [eps, 1-eps].

    Parameters
    ----------
    u: float or array-like
        values nominally inside (0, 1)

    Returns
    -------
    float or numpy.array:
        clamped values, same shape as `u`
    """
    return numpy.clip(u, eps, 1 - eps)


def _check_unit(u, name='u'):
    """ Sanity-check that `u` lies strictly inside the unit interval.

    Parameters
    ----------
    u: float or array-like
        values to check

    name: str, optional
        argument name used in the error message

    Returns
    -------
    numpy.array:
        `u` as a float array
    """
    u = numpy.asarray(u, dtype='double')
    if numpy.isnan(u).any():
        raise DomainError("%s contains nan" % name)
    if numpy.logical_or(u <= 0, u >= 1).any():
        raise DomainError("%s must lie strictly inside (0, 1)" % name)
    return u


def _as_values(series):
    """ Extract a 1D float array from a series-like object.

    Accepts :class:`magmar.model.PseudoSeries`,
    :class:`magmar.data.RawSeries` or anything array-like.
    """
    values = getattr(series, 'values', series)
    values = numpy.array(values, dtype='double')
    if len(values.shape) != 1:
        raise ValueError("series should be a 1D array")
    return values


def _check_length(values, minimum, what='series'):
    """ Raise :class:`DataError` if `values` is shorter than `minimum`. """
    if len(values) < minimum:
        raise DataError("%s too short: %i values, at least %i needed"
                        % (what, len(values), minimum))
