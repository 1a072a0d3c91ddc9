""" From price levels to pseudo-observations and back.

A typical pipeline reads a CPI-style CSV, takes growth rates, and maps
them to (0,1) with the rescaled empirical distribution function::

    raw = load_csv('cpi.csv')
    u, marginal = pseudo_observations(growth_rates(raw))

Simulated pseudo-observations are mapped back to the data scale with
:func:`back_transform`.
"""
import os
import csv
import sys
import logging
from collections import namedtuple
from contextlib import contextmanager
import numpy
import scipy.linalg
import scipy.stats
from magmar.model import PseudoSeries
from magmar.exceptions import DataError
from magmar._utils import _as_values, _check_length

logger = logging.getLogger(__name__)


def _order_keys(timestamps):
    """ Sort keys for period labels, or None if they have no known order.

    Integer labels compare as integers and ISO dates as dates. Other labels
    compare as strings when they all have the same width (e.g. ``1960Q1``).
    """
    if all(s.isdigit() for s in timestamps):
        return [int(s) for s in timestamps]
    try:
        return list(numpy.array(timestamps, dtype='datetime64'))
    except ValueError:
        pass
    if len(set(len(s) for s in timestamps)) <= 1:
        return timestamps
    return None


def _check_order(timestamps):
    keys = _order_keys(timestamps)
    if keys is None:
        logger.debug("timestamps have no known order, not checked")
        return
    for i in range(1, len(keys)):
        if not keys[i-1] < keys[i]:
            raise DataError("timestamps not strictly increasing: %r after %r"
                            % (timestamps[i], timestamps[i-1]))


class RawSeries(object):
    """ A real-valued series on the data scale.

    Parameters
    ----------
    values: array-like
        the observations

    timestamps: sequence of str, optional
        period labels, strictly increasing

    origin: dict, optional
        provenance, e.g. source file and transforms applied
    """
    def __init__(self, values, timestamps=None, origin=None):
        self.values = _as_values(values)
        if timestamps is not None:
            timestamps = [str(s) for s in timestamps]
            if len(timestamps) != len(self.values):
                raise ValueError("%i timestamps for %i values"
                                 % (len(timestamps), len(self.values)))
            _check_order(timestamps)
        self.timestamps = timestamps
        self.origin = dict(origin or {})

    def __len__(self):
        return len(self.values)

    def __repr__(self):
        return 'RawSeries(n=%i, origin=%r)' % (len(self), self.origin)


def _column_index(header, column, line):
    if isinstance(column, int):
        if not 0 <= column < len(header):
            raise DataError("no column %i in header %r" % (column, header),
                            line)
        return column
    if column not in header:
        raise DataError("no column %r in header %r" % (column, header), line)
    return header.index(column)


def load_csv(path, column='value', date_column='date'):
    """ Read a series from a CSV file with a header row.

    Parameters
    ----------
    path: str
        UTF-8 CSV file, comma separated, decimal point

    column: str or int, optional
        name or index of the value column
        (Default: ``value``)

    date_column: str, int or None, optional
        name or index of the period labels; None to ignore them
        (Default: ``date``)

    Returns
    -------
    RawSeries

    Raises
    ------
    DataError
        for an empty file, a missing column, or a malformed row (with its
        line number)
    """
    values, dates = [], []
    with open(path, newline='', encoding='utf-8') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise DataError("empty file %s" % path)
        header = [h.strip() for h in header]
        i = _column_index(header, column, reader.line_num)
        j = (None if date_column is None
             else _column_index(header, date_column, reader.line_num))

        for row in reader:
            if not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataError("expected %i fields, found %i"
                                % (len(header), len(row)), reader.line_num)
            try:
                value = float(row[i])
            except ValueError:
                raise DataError("non-numeric value %r" % row[i],
                                reader.line_num)
            if not numpy.isfinite(value):
                raise DataError("non-finite value %r" % row[i],
                                reader.line_num)
            values.append(value)
            if j is not None:
                dates.append(row[j].strip())

    if not values:
        raise DataError("no data rows in %s" % path)
    logger.info("read %i rows from %s", len(values), path)
    return RawSeries(values, dates if j is not None else None,
                     {'source': os.path.basename(path), 'column': column})


def growth_rates(raw, kind='log'):
    """ Period-on-period growth rates of a positive series.

    Parameters
    ----------
    raw: RawSeries

    kind: str, optional
        ``log`` for log-differences :math:`\\ln(x_t/x_{t-1})`, ``pct`` for
        simple relative changes :math:`x_t/x_{t-1} - 1`
        (Default: ``log``)

    Returns
    -------
    RawSeries:
        one value shorter than `raw`, labelled by the later period
    """
    x = raw.values
    _check_length(x, 2)
    if (x <= 0).any():
        i = int(numpy.argmax(x <= 0))
        raise DataError("non-positive level %g at position %i" % (x[i], i))
    if kind == 'log':
        rates = numpy.diff(numpy.log(x))
    elif kind == 'pct':
        rates = x[1:]/x[:-1] - 1
    else:
        raise ValueError("kind must be 'log' or 'pct', got %r" % kind)
    origin = dict(raw.origin, growth=kind)
    timestamps = raw.timestamps[1:] if raw.timestamps is not None else None
    return RawSeries(rates, timestamps, origin)


class EmpiricalMarginal(object):
    """ Rescaled empirical distribution function of a sample.

    The i-th order statistic sits at probability i/(n+1); in between,
    the quantile function interpolates linearly.

    Parameters
    ----------
    sample: array-like
    """
    def __init__(self, sample):
        self.sample = numpy.sort(_as_values(sample))
        if len(self.sample) == 0:
            raise ValueError("empirical marginal needs a nonempty sample")
        n = len(self.sample)
        self.probabilities = numpy.arange(1, n + 1)/(n + 1.)

    def __len__(self):
        return len(self.sample)

    def cdf(self, x):
        """ rank(x)/(n+1), ties averaged. """
        left = numpy.searchsorted(self.sample, x, side='left')
        right = numpy.searchsorted(self.sample, x, side='right')
        return (left + right + (left < right)) / 2. / (len(self) + 1)

    def quantile(self, u):
        """ Inverse of :meth:`cdf`, clamped to the sample range. """
        return numpy.interp(u, self.probabilities, self.sample)


def pseudo_observations(x):
    """ Map a series to (0,1) by rank/(n+1).

    Parameters
    ----------
    x: RawSeries or array-like

    Returns
    -------
    (PseudoSeries, EmpiricalMarginal)
    """
    values = _as_values(x)
    _check_length(values, 2)
    marginal = EmpiricalMarginal(values)
    origin = dict(getattr(x, 'origin', {}), transform='rank/(n+1)')
    return PseudoSeries(marginal.cdf(values), origin), marginal


def back_transform(u, marginal):
    """ Quantile-transform pseudo-observations with an empirical marginal.

    Parameters
    ----------
    u: PseudoSeries or array-like

    marginal: EmpiricalMarginal

    Returns
    -------
    RawSeries
    """
    origin = dict(getattr(u, 'origin', {}), transform='empirical quantile')
    return RawSeries(marginal.quantile(_as_values(u)), origin=origin)


Diagnostics = namedtuple('Diagnostics', ['lag', 'acf', 'pacf',
                                         'kendall_tau'])


def acf(x, max_lag):
    """ Sample autocorrelation at lags 0..max_lag. """
    x = _as_values(x)
    x = x - x.mean()
    n = len(x)
    c = numpy.array([numpy.dot(x[:n-k], x[k:]) for k in range(max_lag + 1)])
    return c/c[0]


def pacf(rho):
    """ Partial autocorrelations from autocorrelations `rho` (lag 0
    first), by solving the Yule-Walker equations at each order. """
    phi = numpy.ones(len(rho))
    for k in range(1, len(rho)):
        phi[k] = scipy.linalg.solve_toeplitz(rho[:k], rho[1:k+1])[-1]
    return phi


def diagnostics(u, max_lag):
    """ Lag-by-lag dependence summary for choosing model orders.

    Parameters
    ----------
    u: PseudoSeries or array-like

    max_lag: int

    Returns
    -------
    Diagnostics:
        arrays over lags 0..max_lag of the sample autocorrelation, the
        partial autocorrelation and Kendall's tau between the series and
        its lagged copy
    """
    x = _as_values(u)
    if max_lag < 0:
        raise ValueError("max_lag must be nonnegative, got %i" % max_lag)
    _check_length(x, max_lag + 3)
    rho = acf(x, max_lag)
    tau = numpy.ones(max_lag + 1)
    for k in range(1, max_lag + 1):
        tau[k] = scipy.stats.kendalltau(x[:-k], x[k:])[0]
    return Diagnostics(numpy.arange(max_lag + 1), rho, pacf(rho), tau)


@contextmanager
def open_output(path):
    if path is None or path == '-':
        yield sys.stdout
    else:
        with open(path, 'w', newline='', encoding='utf-8') as f:
            yield f


def write_csv(path, header, columns, fmt='%r'):
    """ Write columns to a CSV file (or stdout for None or ``-``).

    Parameters
    ----------
    path: str or None

    header: sequence of str

    columns: sequence of array-like
        equal-length columns; strings are written as they are, numbers
        with `fmt`

    fmt: str, optional
        format for numbers
        (Default: ``%r``, round-trip exact)
    """
    def cell(x):
        if isinstance(x, str):
            return x
        return fmt % (x.item() if hasattr(x, 'item') else x)

    with open_output(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([cell(x) for x in row])


def write_series(path, series, timestamps=None, label='value'):
    """ Write a series as ``date,<label>``; dates default to the series'
    timestamps, else the position. """
    values = _as_values(series)
    if timestamps is None:
        timestamps = getattr(series, 'timestamps', None)
    if timestamps is None:
        timestamps = [str(i) for i in range(len(values))]
    write_csv(path, ['date', label], [timestamps, values])


def write_diagnostics(path, diag):
    """ Write :func:`diagnostics` output as ``lag,acf,pacf,kendall_tau``. """
    write_csv(path, diag._fields,
              [[str(k) for k in diag.lag], diag.acf, diag.pacf,
               diag.kendall_tau], fmt='%.6g')
