"""Perfect binary Hermitian forms over Q(zeta_5) and their Voronoi cones."""

from cyclovoronoi.cyclotomic import CycNum, KNum, ZETA, U5
from cyclovoronoi.hermitian import HermForm, OVec, GMat

__all__ = ["CycNum", "KNum", "ZETA", "U5", "HermForm", "OVec", "GMat"]

__version__ = "0.1.0"
