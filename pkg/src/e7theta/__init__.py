"""Exact finite structures around W(E7), Sp6(2) and theta characteristics.

Modules:
  f2, symplectic   quadratic forms over F2, Arf invariants, Aronhold bases
  lattice          the Picard lattice of a del Pezzo surface, roots, exceptional classes
  weyl             W(E7), its mod-2 reduction, the bitangent action, abelian reports
  invariants       square-free polynomials over F2 and elementary symmetric expansions
  torus            characters of the root lattice over F_p and points on a nodal cubic
  kernels          numba kernels with numpy fallbacks (E7THETA_DISABLE_NUMBA=1)
"""

__version__ = "0.1.0"
