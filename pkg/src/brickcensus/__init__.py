"""Census of closed orientable irreducible 3-manifolds built from brick assemblings.

The pipeline has three legs: enumerate candidate 4-valent graphs and the
triangulation-dual spines carried by them (:mod:`brickcensus.quadgraph`,
:mod:`brickcensus.spinecore`), distill those down to a catalog of bricks
(:mod:`brickcensus.brickhunt`), and then reassemble bricks under a complexity
budget into a named census (:mod:`brickcensus.triodalg`,
:mod:`brickcensus.namer`, :mod:`brickcensus.censuscli`).
"""

__version__ = "0.1.0"
