#!/usr/bin/env python3

import logging
import os
from fractions import Fraction

import toml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    'enumeration': {
        'budget': 1e8,
        'jobs': 1,
        'progress': False
    },
    'series': {
        'default_order': 8
    },
    'verify': {
        'max_M': 6,
        'partition_max_M': 3,
        'tail_cutoff': 12
    },
    'output': {
        'indent': 2
    }
}

LOG_FORMAT = '%(name)s:%(levelname)s:%(message)s'


def setup_logging(verbose=0):
    logging.basicConfig(format=LOG_FORMAT)
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.getLogger('src.hkzeta').setLevel(level)
    return level


def load_config(fname=None):
    if fname is None:
        fname = 'config.toml'

    if os.path.exists(fname):
        config = toml.load(fname)
        logger.info("Loaded config from {}".format(fname))
    else:
        config = dict()
        logger.info("No config file found, using defaults")

    for k, v in DEFAULT_CONFIG.items():
        if k not in config:
            config[k] = dict(v) if isinstance(v, dict) else v
        elif isinstance(v, dict):  # nested defaults
            for k2, v2 in v.items():
                if k2 not in config[k]:
                    config[k][k2] = v2

    return config


def frac_str(x):
    """Render an exact rational as "p/q" (or "p" for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "{}/{}".format(x.numerator, x.denominator)


def parse_frac(s):
    return Fraction(str(s))
