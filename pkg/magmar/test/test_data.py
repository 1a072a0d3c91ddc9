import numpy
import pytest
import scipy.stats
from numpy.testing import assert_allclose, assert_array_equal
from magmar.data import (RawSeries, load_csv, growth_rates,
                         EmpiricalMarginal, pseudo_observations,
                         back_transform, acf, pacf, diagnostics, write_csv,
                         write_series, write_diagnostics)
from magmar.exceptions import DataError


def write(tmpdir, text, name='series.csv'):
    path = tmpdir.join(name)
    path.write(text)
    return str(path)


def test_load_csv(tmpdir):
    path = write(tmpdir, 'date,value\n1960Q1,29.4\n1960Q2,29.6\n\n'
                         '1960Q3,29.7\n')
    raw = load_csv(path)
    assert_array_equal(raw.values, [29.4, 29.6, 29.7])
    assert raw.timestamps == ['1960Q1', '1960Q2', '1960Q3']
    assert raw.origin['source'] == 'series.csv'

    raw = load_csv(path, column=1, date_column=None)
    assert raw.timestamps is None
    assert len(raw) == 3


def test_load_csv_errors(tmpdir):
    with pytest.raises(DataError):
        load_csv(write(tmpdir, '', 'empty.csv'))
    with pytest.raises(DataError):
        load_csv(write(tmpdir, 'date,value\n', 'header.csv'))
    with pytest.raises(DataError):
        load_csv(write(tmpdir, 'date,cpi\n1960Q1,29.4\n', 'column.csv'))

    rows = ''.join('1960Q%i,%i\n' % (i, 30 + i) for i in range(1, 6))
    path = write(tmpdir, 'date,value\n' + rows + '1961Q2,n/a\n', 'bad.csv')
    with pytest.raises(DataError) as excinfo:
        load_csv(path)
    assert excinfo.value.line == 7
    assert str(excinfo.value).startswith('line 7:')

    with pytest.raises(DataError) as excinfo:
        load_csv(write(tmpdir, 'date,value\n1960Q1,29.4,1\n', 'fields.csv'))
    assert excinfo.value.line == 2
    with pytest.raises(DataError):
        load_csv(write(tmpdir, 'date,value\n1960Q1,inf\n', 'inf.csv'))
    with pytest.raises(DataError):
        load_csv(write(tmpdir, 'date,value\n1960Q2,1\n1960Q1,2\n',
                       'order.csv'))


def test_raw_series():
    with pytest.raises(ValueError):
        RawSeries([1., 2.], ['a'])
    with pytest.raises(DataError):
        RawSeries([1., 2.], ['b', 'a'])


def test_timestamp_order():
    values = numpy.arange(12.)
    raw = RawSeries(values, [str(i) for i in range(12)])
    assert raw.timestamps[9:11] == ['9', '10']
    with pytest.raises(DataError):
        RawSeries(values[:3], ['10', '9', '11'])

    RawSeries(values[:3], ['1960-07-01', '1960-10-01', '1961-01-01'])
    with pytest.raises(DataError):
        RawSeries(values[:2], ['1960-10-01', '1960-07-01'])

    # no known order, accepted as given
    RawSeries(values[:3], ['9/1/1960', '10/1/1960', '1/1/1961'])


def test_unlabelled_roundtrip(tmpdir):
    path = str(tmpdir.join('series.csv'))
    x = numpy.random.RandomState(3).rand(12)
    write_series(path, x)
    raw = load_csv(path)
    assert_array_equal(raw.values, x)
    assert raw.timestamps[-1] == '11'


def test_growth_rates():
    assert_allclose(growth_rates(RawSeries([100., 100.])).values, [0.])
    assert_allclose(growth_rates(RawSeries([100., 102.02])).values,
                    [numpy.log(1.0202)])
    assert_allclose(growth_rates(RawSeries([100., 102.02]), 'pct').values,
                    [0.0202])

    raw = RawSeries(100*numpy.exp(numpy.linspace(0, 1, 245)),
                    ['t%03i' % i for i in range(245)], {'source': 'x'})
    rates = growth_rates(raw)
    assert len(rates) == 244
    assert rates.timestamps[0] == 't001'
    assert rates.origin == {'source': 'x', 'growth': 'log'}

    with pytest.raises(DataError):
        growth_rates(RawSeries([100., 0., 100.]))
    with pytest.raises(DataError):
        growth_rates(RawSeries([100.]))
    with pytest.raises(ValueError):
        growth_rates(RawSeries([100., 101.]), 'diff')


def test_pseudo_observations():
    u, marginal = pseudo_observations([1.0, 3.0, 2.0])
    assert_allclose(u.values, [0.25, 0.75, 0.5])
    assert len(marginal) == 3

    u, _ = pseudo_observations([5.0, 5.0])
    assert_allclose(u.values, [0.5, 0.5])
    u, _ = pseudo_observations(numpy.full(7, 2.5))
    assert_allclose(u.values, 0.5)
    x = [3., 1., 3., 2., 1., 3.]
    u, _ = pseudo_observations(x)
    assert_allclose(u.values, scipy.stats.rankdata(x)/7.)

    u, _ = pseudo_observations(RawSeries([1., 2.], origin={'source': 'x'}))
    assert u.origin['source'] == 'x'

    with pytest.raises(DataError):
        pseudo_observations([1.0])


def test_empirical_marginal():
    numpy.random.seed(0)
    x = numpy.random.randn(101)
    u, marginal = pseudo_observations(x)
    assert_allclose(marginal.cdf(x), u.values)
    assert_allclose(back_transform(u, marginal).values, x)
    assert_allclose(marginal.quantile(0.5), numpy.median(x))

    grid = numpy.linspace(0, 1, 50)
    assert numpy.all(numpy.diff(marginal.quantile(grid)) >= 0)
    assert marginal.quantile(0.) == x.min()
    assert marginal.quantile(1.) == x.max()

    marginal = EmpiricalMarginal([1., 2., 2., 3.])
    assert_allclose(marginal.cdf([1., 2., 3.]), [0.2, 0.5, 0.8])
    with pytest.raises(ValueError):
        EmpiricalMarginal([])


def test_acf():
    x = numpy.arange(10.)
    rho = acf(x, 3)
    assert rho[0] == 1
    assert numpy.all(numpy.diff(rho) < 0)
    assert_allclose(pacf(numpy.array([1., 0.5, 0.25, 0.125])),
                    [1., 0.5, 0., 0.], atol=1e-12)


def test_diagnostics():
    numpy.random.seed(1)
    diag = diagnostics(numpy.random.rand(10000), 3)
    assert_array_equal(diag.lag, [0, 1, 2, 3])
    assert diag.acf[0] == 1 and diag.kendall_tau[0] == 1
    assert numpy.all(numpy.abs(diag.kendall_tau[1:]) < 0.03)
    assert numpy.all(numpy.abs(diag.pacf[1:]) < 0.05)

    diag = diagnostics(numpy.linspace(0.01, 0.99, 50), 1)
    assert_allclose(diag.kendall_tau[1], 1)

    with pytest.raises(DataError):
        diagnostics([0.1, 0.2, 0.3], 2)
    with pytest.raises(ValueError):
        diagnostics([0.1, 0.2, 0.3], -1)


def test_write(tmpdir):
    path = str(tmpdir.join('out.csv'))
    write_csv(path, ['model', 'nll'], [['a', 'b'], [1.5, -2.25]])
    assert open(path).read() == 'model,nll\na,1.5\nb,-2.25\n'

    x = numpy.random.RandomState(2).rand(5)
    write_series(path, x)
    raw = load_csv(path)
    assert_array_equal(raw.values, x)
    assert raw.timestamps == ['0', '1', '2', '3', '4']

    write_series(path, x, ['a', 'b', 'c', 'd', 'e'], label='u')
    raw = load_csv(path, 'u')
    assert raw.timestamps == ['a', 'b', 'c', 'd', 'e']

    write_diagnostics(path, diagnostics(numpy.linspace(0.01, 0.99, 20), 2))
    lines = open(path).read().splitlines()
    assert lines[0] == 'lag,acf,pacf,kendall_tau'
    assert lines[1] == '0,1,1,1'
    assert len(lines) == 4


def test_write_stdout(capsys):
    write_csv(None, ['x'], [[0.25]])
    write_csv('-', ['y'], [[0.5]])
    assert capsys.readouterr().out == 'x\n0.25\ny\n0.5\n'
