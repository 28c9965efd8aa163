"""Exact arithmetic for divisorial cohomology vanishing on toric varieties.

Everything in this package computes over the integers or the rationals; no
floating point is used anywhere. The main entry points are the fan container
(`toricvanish.fan`), the cohomology engine (`toricvanish.cohomology`) and the
command line interface (`toricvanish.cli`).
"""

__version__ = "0.1.0"
