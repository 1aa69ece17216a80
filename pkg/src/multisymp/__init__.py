"""Exact toolkit for multisymplectic Hamiltonian field theory.

Modules:

* algebra     -- exact rationals, multi-index combinatorics, sparse polynomials
* linalg      -- exact rational linear algebra
* exterior    -- forms/multivectors, wedge, pairing, hook/cohook, d, Lie
* charts      -- the catalog of multisymplectic coordinate charts
* dynamics    -- Hamiltonian n-vector solving, observability sampling, pseudofibers
* observables -- AOF solving, copolarizations, classification
* brackets    -- pseudobracket, Poisson/theta/external/complementary brackets
* fieldlab    -- floating-point 1+1D field integrator and conservation experiments
* cli         -- verification-report command line
"""

__version__ = "0.1.0"
