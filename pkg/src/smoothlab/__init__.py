"""smoothlab: desk-scale verification of dispersive smoothing estimates.

The package builds dyadic partitions of unity, weighted shell norms,
commutator and discrete kernel operators, free and magnetic Schrodinger
propagators, and a Picard iteration for a semilinear problem, then
certifies each inequality of interest by measured-ratio experiments over
randomized ensembles.
"""

__version__ = "0.1.0"
