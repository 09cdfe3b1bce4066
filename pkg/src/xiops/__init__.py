"""Numerics for the Riemann Xi function and the operator calculus around it.

Modules
-------
funcspace   test functions with decay certificates, log grids
special     theta-type series and iterated regularizers
operators   operator expressions with structural adjoints
mellin      Mellin transforms, inner products, grid convolution
zeta_xi     Xi engines, critical-line zeros, heat flow, Weil sums
verify      named identity checks
cli         command-line front end
"""

__version__ = "0.1.0"
