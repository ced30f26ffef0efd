import argparse
import sys

from loguru import logger

from LagrangianGP.compute.exceptions import NumericalError
from LagrangianGP.utils.ConfigReader import ConfigReader, ConfigError
from LagrangianGP.workflow import run_experiment, COMMANDS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def parse_args(argv=None):
    """Parse command line arguments

    In python namespaces are implemented as dictionaries
    :return: namespace containing the arguments passed.
    """

    parser = argparse.ArgumentParser(prog='runLagrangianGP',
                                     description='Learn Lagrangians of dynamical systems with Gaussian fields')

    parser.add_argument('command', choices=list(COMMANDS),
                        help='experiment to run')
    parser.add_argument('--config', type=str, default=None,
                        help='path to yaml configuration file')
    parser.add_argument('--set', dest='overrides', action='append', default=[], metavar='SECTION.KEY=VALUE',
                        help='override one configuration field, may be repeated')
    parser.add_argument('--model', type=str, default=None,
                        help='trained model file (uq-grid, trajectory); defaults to <output_dir>/model.npz')
    parser.add_argument('--dump-config', action='store_true',
                        help='print the resolved configuration and exit')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log numerical diagnostics')

    args = parser.parse_args(argv)
    return args


def _configure_logging(verbose):
    logger.remove()
    logger.add(sys.stderr, level='DEBUG' if verbose else 'INFO')


def main(argv=None):
    """
    Run one subcommand and return the process exit code

    0 success, 2 configuration error, 3 numerical failure
    """
    args = parse_args(argv)
    _configure_logging(args.verbose)
    try:
        if args.dump_config:
            sys.stdout.write(ConfigReader(args.config, args.overrides).dump())
            return EXIT_OK
        run_experiment(args.command, args.config, args.overrides, args.model)
    except ConfigError as e:
        logger.error('configuration error: {}', e)
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error('numerical failure: {}', e)
        return EXIT_NUMERICAL
    return EXIT_OK


def entry():
    sys.exit(main())
