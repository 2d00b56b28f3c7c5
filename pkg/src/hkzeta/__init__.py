#!/usr/bin/env python3

from .. import __version__, VERSION
