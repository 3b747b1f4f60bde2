"""Material parameters and damping configuration for the beam model."""

from __future__ import annotations

from dataclasses import dataclass, field


class InvalidParameterError(ValueError):
    pass


def derive_xi(eps1, h_thickness, eps3):
    """Stiffness ratio xi = eps1 * h^2 / (12 * eps3).

    All three inputs must be strictly positive.
    """
    if eps1 <= 0 or h_thickness <= 0 or eps3 <= 0:
        raise InvalidParameterError("derive_xi requires strictly positive inputs")
    return eps1 * h_thickness**2 / (12.0 * eps3)


@dataclass(frozen=True)
class PhysicalParams:
    """Material constants of the beam.

    Attributes
    ----------
    rho : mass density (> 0)
    alpha : elastic stiffness (> 0)
    gamma : piezoelectric coupling (> 0)
    eps1, eps3 : permittivities in the x and z directions (> 0)
    mu : magnetic permeability (> 0)
    h_thickness : beam thickness (> 0)
    length : beam length (> 0)
    xi : stiffness ratio; derived as eps1*h^2/(12*eps3) when ``xi_mode`` is
        ``"derived"``, taken verbatim when ``"explicit"``.  The explicit mode
        exists because the standard benchmark sets every coefficient to one,
        which is not consistent with the derived formula.
    """

    rho: float = 1.0
    alpha: float = 1.0
    gamma: float = 1.0
    eps1: float = 1.0
    eps3: float = 1.0
    mu: float = 1.0
    h_thickness: float = 1.0
    length: float = 1.0
    xi: float = 1.0
    xi_mode: str = "explicit"

    def __post_init__(self):
        for name in ("rho", "alpha", "gamma", "eps1", "eps3", "mu",
                     "h_thickness", "length"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be > 0")
        if self.xi_mode not in ("derived", "explicit"):
            raise InvalidParameterError("xi_mode must be 'derived' or 'explicit'")
        if self.xi_mode == "derived":
            object.__setattr__(
                self, "xi", derive_xi(self.eps1, self.h_thickness, self.eps3))
        if self.xi <= 0:
            raise InvalidParameterError("xi must be > 0")
        lo, hi = self.coercivity_window()
        if not lo < hi:
            raise InvalidParameterError(
                f"empty coercivity window ({lo}, {hi}); "
                "the state-space inner product would not be coercive")

    def coercivity_window(self):
        """Open interval of admissible tuning constants for coercivity."""
        lo = self.gamma * self.xi / (self.alpha + self.gamma**2 / self.eps3)
        hi = self.xi * self.eps3 / self.gamma
        return lo, hi


#: zero-pattern -> case label; key is (a != 0, b != 0, c != 0)
_CASE_LABELS = {
    (False, False, False): "undamped",
    (True, True, True): "abc",
    (False, True, True): "0bc",
    (True, False, True): "a0c",
    (True, True, False): "ab0",
    (True, False, False): "a00",
    (False, True, False): "0b0",
    (False, False, True): "00c",
}


@dataclass(frozen=True)
class DampingConfig:
    """Viscous damping coefficients (a, b, c), all >= 0.

    a acts on the stretching velocity, b on the x-direction electric field,
    c on the z-direction electric field.
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.c < 0:
            raise InvalidParameterError("damping coefficients must be >= 0")

    @property
    def case_label(self) -> str:
        return _CASE_LABELS[(self.a != 0, self.b != 0, self.c != 0)]

    def as_tuple(self):
        return (self.a, self.b, self.c)
