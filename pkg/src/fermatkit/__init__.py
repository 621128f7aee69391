"""fermatkit: exact verification machinery for the modular method.

Frobenius traces and genus-2 Euler factors over small number fields,
Igusa-Clebsch invariants, Hecke-eigenvalue packet checkers, the
auxiliary-prime elimination engine, and the cyclotomic unit sieve over
Z[zeta_13]; everything in exact arbitrary-precision arithmetic.
"""

__version__ = "0.1.0"
