"""Integer arithmetic of canonical-degree bounds and étale covers.

Everything here is exact integer arithmetic.
"""

from typing import Optional

from .errors import NumericsError
from .models import SurfaceNumerics, ThreefoldNumerics

# K^2 of a fake projective plane
FAKE_PLANE_K2 = 9

# K^2 of the degree-36 surfaces used as the surface factor of the threefold
SURFACE_FACTOR_K2 = 36

THREEFOLD_DEGREE_NOTE = (
    "K_Y^3 is computed as 3 * K_X^2 * (2g - 2) = 3 * 36 * (2g - 2) = 216(g - 1), "
    "so that K_Y^3 = deg(Phi) * deg(W) with deg(W) = 3(g - 1) and deg(Phi) = 72. "
    "The closed form 72(g - 1) quoted alongside the degree statement is smaller "
    "by a factor of 3 and is inconsistent with deg(Phi) = 72; it is not used."
)


def beauville_bound(p_g: int) -> int:
    """Upper bound floor(9(1 + p_g) / (p_g - 2)) on the canonical degree.

    Raises:
        NumericsError: if p_g <= 2
    """
    if p_g <= 2:
        raise NumericsError(f"the canonical degree bound needs p_g >= 3, got {p_g}", p_g)
    return 9 * (1 + p_g) // (p_g - 2)


def bmy_bound(chi: int) -> int:
    """Bogomolov-Miyaoka-Yau bound K^2 <= 9 chi."""
    return 9 * chi


def etale_cover_numerics(
    chi_X: int,
    degree: int,
    q_M: int,
    K2_X: Optional[int] = None,
) -> SurfaceNumerics:
    """Invariants of an étale cover of the given degree.

    chi and K^2 are multiplicative in the degree; K2_X defaults to the
    fake projective plane value 9 * chi_X.
    """
    if degree < 1:
        raise NumericsError(f"cover degree must be at least 1, got {degree}", degree)
    if chi_X < 1:
        raise NumericsError(f"chi of the base must be at least 1, got {chi_X}", chi_X)
    if q_M < 0:
        raise NumericsError(f"irregularity must be nonnegative, got {q_M}", q_M)
    if K2_X is None:
        K2_X = FAKE_PLANE_K2 * chi_X
    chi = degree * chi_X
    p_g = chi - 1 + q_M
    if p_g < 0:
        raise NumericsError(f"cover would have negative geometric genus {p_g}", p_g)
    return SurfaceNumerics(p_g=p_g, q=q_M, chi=chi, K2=degree * K2_X)


def is_maximal_degree_candidate(numerics: SurfaceNumerics) -> bool:
    """Numerical conditions for canonical degree 36: p_g = 3, q = 0 and K^2 = 9 chi."""
    return numerics.p_g == 3 and numerics.q == 0 and numerics.K2 == bmy_bound(numerics.chi)


def product_threefold(g: int) -> ThreefoldNumerics:
    """Invariants of the product of a degree-36 surface with a genus-g curve."""
    if g < 2:
        raise NumericsError(f"curve genus must be at least 2, got {g}", g)
    K3 = 3 * SURFACE_FACTOR_K2 * (2 * g - 2)
    degW = 3 * (g - 1)
    return ThreefoldNumerics(g=g, p_gY=3 * g, K3=K3, degW=degW, degPhi=K3 // degW)
