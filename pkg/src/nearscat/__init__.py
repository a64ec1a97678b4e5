"""2-D near-field inverse scattering toolkit.

Forward models (Born approximation, exact penetrable-disk series),
qualitative reconstructions (MUSIC, factorization method, modified linear
sampling) and Bayesian refractive-index estimation.
"""

__version__ = "0.1.0"
