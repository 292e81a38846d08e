"""Exact mass formulas for superspecial abelian varieties.

Subpackages and modules:

* :mod:`ssmass.exactnum` -- Bernoulli numbers and zeta special values.
* :mod:`ssmass.numfield` -- base fields of degree <= 2 and prime splitting.
* :mod:`ssmass.quatalg` -- quaternion ramification data and twisting.
* :mod:`ssmass.fingrp` -- finite symplectic group orders and local indices.
* :mod:`ssmass.massfml` -- the mass formulas and point counts.
* :mod:`ssmass.dieudonne` -- desk-scale superspecial Dieudonne modules.
* :mod:`ssmass.oracle` -- brute-force enumeration ground truth.
* :mod:`ssmass.cli` -- batch command-line frontend.
"""

__version__ = "0.1.0"
