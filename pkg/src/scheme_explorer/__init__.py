"""Exact computer-algebra workbench for constructive scheme theory.

Subpackages:

    arith      coefficient domains, univariate factorization
    multipoly  sparse multivariate polynomials, grading
    algebra    presented algebras, Groebner engine, localization, tensors
    spectrum   catalogued prime spectra with the Zariski topology
    morphism   ring morphisms, Spec functoriality, fibers, going-up
    noether    Noether normalization and zero-set decision procedures
    proj       graded algebras, projective charts, twists, Segre/Veronese
    sheaf      presheaves and sheaves on finite spaces, structure sheaves
    dsl, cli   the scheme-explorer statement language and entry point
"""

__version__ = "0.1.0"
