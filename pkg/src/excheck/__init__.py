"""Exact and numerical checks for five explicit constructions.

Submodules: ``ordinary`` and ``embedding`` (ordinary lines on a cubic),
``expsums`` (scrambled dyadic sequence), ``gadget`` (pentagon caterpillar
graphs), ``fewnomial`` (sparse polynomials with a high-multiplicity root),
``primes`` (n - a k^2 prime searches) and ``report`` (orchestration).
"""

__version__ = "0.1.0"
