"""Exact verification of finite group actions on complex tori."""

from .errors import HypertorusError
from .exactmath import GaussRat, I, Mat, eigenspace_basis, hnf, snf
from .lattice import Lattice, add_generator, contains, equal, index, module_lattice
from .torus import AffineTorusMap, TorusSpec, compose, descend, inverse, order_of, realify

__version__ = "0.1.0"
