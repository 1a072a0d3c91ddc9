""" Command-line interface.

::

    magmar transform --input cpi.csv --output u.csv
    magmar diagnose --input u.csv --max-lag 8
    magmar fit --input u.csv --model 'MAGMAR(4,1)-ging-t'
    magmar select --input u.csv --criterion bic --jobs 4
    magmar simulate --model 'MAGMAR(1,1)-n-n' --params 0.5 0.4 --seed 7

Exit codes: 0 success, 1 usage error (including malformed model strings
and out-of-domain parameters), 2 data error, 3 numerical failure.
"""
import sys
import json
import logging
import argparse
from magmar.model import (PseudoSeries, parse_model_string, simulate,
                          DEFAULT_INIT, DEFAULT_BURN_IN)
from magmar.estimation import (fit, select, published_table,
                               N_PUBLISHED_OBS, NSTARTS)
from magmar.data import (load_csv, growth_rates, pseudo_observations,
                         back_transform, EmpiricalMarginal, diagnostics,
                         write_series, write_csv, write_diagnostics,
                         open_output)
from magmar.exceptions import (MagmarError, DomainError, ModelStringError,
                               DataError, NumericalError)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


class ArgumentParser(argparse.ArgumentParser):
    """ argparse parser exiting with :data:`EXIT_USAGE` on bad usage. """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def _published_models():
    return [row.model for row in published_table()
            if row.model.startswith('MAGMAR')]


def _add_input(parser):
    parser.add_argument('--input', '-i', required=True,
                        help='input CSV with a header row')
    parser.add_argument('--column', default='value',
                        help='value column (default: %(default)s)')
    parser.add_argument('--date-column', default='date',
                        help='period label column (default: %(default)s)')


def _add_output(parser, what):
    parser.add_argument('--output', '-o', default=None,
                        help='%s (default: stdout)' % what)


def _add_fit_options(parser):
    parser.add_argument('--init', type=float, default=DEFAULT_INIT,
                        help='initial innovations (default: %(default)s)')
    parser.add_argument('--starts', type=int, default=NSTARTS,
                        help='simplex restarts (default: %(default)s)')
    parser.add_argument('--seed', type=int, default=0,
                        help='seed for random restarts (default: '
                             '%(default)s)')


def build_parser():
    parser = ArgumentParser(prog='magmar', description='MAGMAR(p,q) copula '
                            'time-series models')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (-v info, -vv debug)')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('transform', help='levels to pseudo-observations')
    _add_input(p)
    _add_output(p, 'pseudo-observation CSV')
    p.add_argument('--growth', choices=['log', 'pct'], default='log',
                   help='growth-rate convention (default: %(default)s)')
    p.add_argument('--no-growth', action='store_true',
                   help='input values are already rates')

    p = sub.add_parser('simulate', help='simulate a path')
    p.add_argument('--model', '-m', required=True, help='model string')
    p.add_argument('--params', type=float, nargs='*', default=[],
                   help='copula parameters, AR copulas first')
    p.add_argument('--length', '-T', type=int, default=N_PUBLISHED_OBS,
                   help='path length (default: %(default)s)')
    p.add_argument('--seed', type=int, default=None, help='random seed')
    p.add_argument('--burn-in', type=int, default=DEFAULT_BURN_IN,
                   help='discarded leading values (default: %(default)s)')
    p.add_argument('--marginal', default=None,
                   help='CSV whose --column defines the empirical marginal '
                        'to back-transform with')
    p.add_argument('--column', default='value',
                   help='value column of --marginal (default: '
                        '%(default)s)')
    _add_output(p, 'path CSV')

    p = sub.add_parser('fit', help='fit one model')
    _add_input(p)
    p.add_argument('--model', '-m', required=True, help='model string')
    _add_fit_options(p)
    _add_output(p, 'JSON record')

    p = sub.add_parser('select', help='fit and rank candidate models')
    _add_input(p)
    p.add_argument('--models', nargs='+', default=_published_models(),
                   help='candidate model strings (default: the published '
                        'comparison)')
    p.add_argument('--criterion', choices=['aic', 'bic'], default='aic')
    p.add_argument('--jobs', '-j', type=int, default=0,
                   help='parallel workers, -1 for all cpus (default: '
                        'serial)')
    p.add_argument('--cache', default=None,
                   help='file root for cached fits')
    p.add_argument('--with-reference', action='store_true',
                   help='append the published copula-ARMA rows')
    _add_fit_options(p)
    _add_output(p, 'ranked table CSV')

    p = sub.add_parser('diagnose', help='acf, pacf and Kendall tau by lag')
    _add_input(p)
    p.add_argument('--max-lag', type=int, default=8,
                   help='largest lag (default: %(default)s)')
    _add_output(p, 'diagnostics CSV')

    return parser


def _read_pseudo(args):
    raw = load_csv(args.input, args.column, args.date_column)
    try:
        return PseudoSeries(raw.values, raw.origin)
    except DomainError:
        raise DataError("%s does not hold pseudo-observations in (0,1); "
                        "run 'magmar transform' first" % args.input)


def transform(args):
    raw = load_csv(args.input, args.column, args.date_column)
    if not args.no_growth:
        raw = growth_rates(raw, args.growth)
    u, _ = pseudo_observations(raw)
    write_series(args.output, u, raw.timestamps)


def run_simulate(args):
    spec = parse_model_string(args.model).with_params(args.params)
    path, _ = simulate(spec, args.length, args.seed, burn_in=args.burn_in)
    if args.marginal is not None:
        marginal = EmpiricalMarginal(load_csv(args.marginal, args.column,
                                              None).values)
        path = back_transform(path, marginal)
    write_series(args.output, path)


def run_fit(args):
    result = fit(args.model, _read_pseudo(args), init=args.init,
                 nstarts=args.starts, seed=args.seed)
    with open_output(args.output) as f:
        json.dump(result.to_record(), f, indent=2)
        f.write('\n')


def run_select(args):
    selection = select(args.models, _read_pseudo(args), args.criterion,
                       parallel=args.jobs, cache=args.cache,
                       init=args.init, nstarts=args.starts, seed=args.seed)
    if not selection.ranked:
        raise NumericalError("no candidate model could be fitted")
    rows = [(r.model_string, r.n_params, r.nll, r.aic, r.bic)
            for r in selection.ranked]
    if args.with_reference:
        rows += [tuple(row) for row in published_table()
                 if not row.model.startswith('MAGMAR')]
    columns = list(zip(*rows))
    columns[1] = [str(k) for k in columns[1]]
    write_csv(args.output, ['model', 'n_params', 'nll', 'aic', 'bic'],
              columns, fmt='%.6g')


def run_diagnose(args):
    write_diagnostics(args.output, diagnostics(_read_pseudo(args),
                                               args.max_lag))


COMMANDS = {'transform': transform, 'simulate': run_simulate,
            'fit': run_fit, 'select': run_select, 'diagnose': run_diagnose}


def main(argv=None):
    """ Run the command line; returns the exit code. """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose,
                                                               2)]
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        COMMANDS[args.command](args)
    except (ModelStringError, DomainError) as e:
        code, message = EXIT_USAGE, str(e)
    except (DataError, IOError) as e:
        code, message = EXIT_DATA, str(e)
    except NumericalError as e:
        code, message = EXIT_NUMERICAL, str(e)
    except (MagmarError, ValueError) as e:
        code, message = EXIT_USAGE, str(e)
    else:
        return EXIT_OK
    logger.debug("%s failed", args.command, exc_info=True)
    sys.stderr.write('magmar %s: error: %s\n' % (args.command, message))
    return code


if __name__ == '__main__':
    sys.exit(main())
