"""Desk-scale verification of monoid-scheme reconstruction.

Finite commutative monoids, their prime spectra and topologies, classifiers
of M-set subobjects, localization, Grothendieck and Lawvere-Tierney
topologies, sheaves, and schemes glued from finitely many finite charts,
with exhaustive machine checks of the structural facts relating them.
"""

__version__ = "0.1.0"
