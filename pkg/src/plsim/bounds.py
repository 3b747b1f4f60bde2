"""Closed-form stability constants: the coercivity constant of the state-space
bilinear form and the resolvent-bound families K, M, N, S for the four damped
case patterns (a,b,c all positive; a=0; b=0; c=0).

Each family is an explicit chain of scalar formulas; the report carries the
formula text used for every sub-constant plus flags for the two places where
the printed chain is degenerate (the M3 constant vanishes when b = c, and the
N5 formula retains a b-dependent factor although its case sets b = 0).

An exact-rational mode evaluates the chains in `fractions.Fraction`
arithmetic for regression pinning; it requires rational inputs whose square
roots (rho/alpha and 1/(xi eps3 mu)) are perfect squares of rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .params import DampingConfig, PhysicalParams


class CaseMismatchError(ValueError):
    pass


class InvalidConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoundConfig:
    """Tuning constants entering the bounds.

    poincare_constant defaults to the sharp constant 2L/pi for functions
    vanishing at one endpoint; pass L for the conservative alternative.
    k_coercivity defaults to the midpoint of the admissible window.
    """

    poincare_constant: float = None
    k_coercivity: float = None

    def resolved(self, params: PhysicalParams):
        cp = self.poincare_constant
        if cp is None:
            cp = 2.0 * params.length / math.pi
        if cp <= 0:
            raise InvalidConfigError("poincare_constant must be > 0")
        lo, hi = params.coercivity_window()
        k = self.k_coercivity
        if k is None:
            k = 0.5 * (lo + hi)
        if not lo < k < hi:
            raise InvalidConfigError(
                f"k_coercivity={k} outside the open window ({lo}, {hi})")
        return cp, k


@dataclass(frozen=True)
class BoundReport:
    case_label: str
    sub_constants: dict
    final_constant: float
    formulas_used: list
    flags: list = field(default_factory=list)

    def as_dict(self):
        return {
            "case": self.case_label,
            "constants": {k: _plain(v) for k, v in self.sub_constants.items()},
            "final": _plain(self.final_constant),
            "citations": list(self.formulas_used),
            "flags": list(self.flags),
        }


def _plain(v):
    if isinstance(v, Fraction):
        return {"numerator": v.numerator, "denominator": v.denominator}
    return float(v)


def coercivity_constant(params: PhysicalParams, config: BoundConfig = None):
    """(k, C) with C = min(rho, mu, xi*eps3, alpha + gamma^2/eps3 - gamma*xi/k,
    eps3*xi^2 - gamma*xi*k)."""
    config = config or BoundConfig()
    _, k = config.resolved(params)
    p = params
    C = min(p.rho, p.mu, p.xi * p.eps3,
            p.alpha + p.gamma**2 / p.eps3 - p.gamma * p.xi / k,
            p.eps3 * p.xi**2 - p.gamma * p.xi * k)
    return k, C


def _sqrt(value, exact):
    if not exact:
        return math.sqrt(value)
    frac = Fraction(value)
    num = math.isqrt(frac.numerator)
    den = math.isqrt(frac.denominator)
    if num * num != frac.numerator or den * den != frac.denominator:
        raise InvalidConfigError(
            f"exact mode needs perfect-square radicand, got {frac}")
    return Fraction(num, den)


def _coerce(params, damping, cp, exact):
    if not exact:
        return params, damping, cp
    wrap = Fraction

    class P:
        pass

    q = P()
    for name in ("rho", "alpha", "gamma", "eps1", "eps3", "mu", "xi", "length"):
        setattr(q, name, wrap(getattr(params, name)))

    class D:
        pass

    e = D()
    for name in ("a", "b", "c"):
        setattr(e, name, wrap(getattr(damping, name)))
    return q, e, wrap(cp)


def resolvent_bound(params: PhysicalParams, damping: DampingConfig,
                    config: BoundConfig = None, exact: bool = False) -> BoundReport:
    """Evaluate the resolvent-bound constant chain for the damping pattern.

    Pattern -> family: all positive -> K; a=0 (b,c>0) -> M; b=0 (a,c>0) -> N;
    c=0 (a,b>0) -> S.  Any other zero pattern has no finite printed bound and
    is rejected.
    """
    config = config or BoundConfig()
    cp_f, _ = config.resolved(params)
    a, b, c = damping.as_tuple()
    case = damping.case_label
    p, d, cp = _coerce(params, damping, cp_f, exact)

    if case == "abc":
        return _family_K(p, d, cp, exact, case)
    if case == "0bc":
        return _family_M(p, d, cp, exact, case)
    if case == "a0c":
        return _family_N(p, d, cp, exact, case)
    if case == "ab0":
        return _family_S(p, d, cp, exact, case)
    raise CaseMismatchError(
        f"no finite resolvent-bound family for damping case '{case}'")


def _family_K(p, d, cp, exact, case):
    K1 = 1 / d.a
    K2 = 1 / (d.b * p.xi * p.eps3)
    K3 = 1 / (d.c * p.eps3)
    K4 = 2 * (p.rho * K1 + 2 * _sqrt(p.rho / p.alpha, exact) * cp
              + d.a * cp**2 / p.alpha + (p.gamma**2 / p.alpha) * K3)
    K5 = 2 * p.xi * p.eps3 * (
        (1 + d.b**2 * p.xi * p.eps3 / (2 * p.mu)) * K2
        + (1 / p.xi + p.gamma**2 / (2 * p.xi**2 * p.eps3**2)) * K3
        + K4 / 2
        + 2 * _sqrt(1 / (p.xi * p.eps3 * p.mu), exact))
    K = p.rho * K1 + p.xi * p.eps3 * K2 + p.eps3 * K3 + K4 + K5
    return BoundReport(case, {"K1": K1, "K2": K2, "K3": K3, "K4": K4, "K5": K5},
                       K, [
        "K1 = 1/a",
        "K2 = 1/(b xi eps3)",
        "K3 = 1/(c eps3)",
        "K4 = 2(rho K1 + 2 sqrt(rho/alpha) c_p + a c_p^2/alpha + (gamma^2/alpha) K3)",
        "K5 = 2 xi eps3 ((1 + b^2 xi eps3/(2 mu)) K2 + (1/xi + gamma^2/(2 xi^2 eps3^2)) K3 + K4/2 + 2/sqrt(xi eps3 mu))",
        "K = rho K1 + xi eps3 K2 + eps3 K3 + K4 + K5",
    ])


def _family_M(p, d, cp, exact, case):
    M1 = 1 / (d.b * p.xi * p.eps3)
    M2 = 1 / (d.c * p.eps3)
    M3 = (2 * p.eps3 * p.alpha / (d.b * p.gamma)) * (
        (d.b - d.c) ** 2 * p.eps3 / (2 * p.gamma) * M2)
    M4 = (2 + p.gamma * _sqrt(1 / (p.eps3 * p.alpha), exact)
          + (p.gamma / 2) * M2 + (1 + p.gamma / (2 * p.alpha)) * M3)
    M5 = p.xi * p.eps3 * (
        (1 + d.b**2 * p.xi * p.eps3 / (2 * p.mu)) * M1
        + (1 / p.xi + p.gamma**2 / (2 * p.xi**2 * p.eps3**2)) * M2
        + M3 / 2
        + 2 * _sqrt(1 / (p.xi * p.eps3 * p.mu), exact))
    M = M3 + M4 + M5 + p.xi * p.eps3 * M1 + p.eps3 * M2
    flags = []
    if d.b == d.c:
        flags.append("M3 vanishes because its printed formula carries the "
                     "factor (b - c)^2; the chain omits forcing-term "
                     "contributions visible in its derivation")
    flags.append("M4 follows the final displayed inequality of its "
                 "derivation, with the coefficient (1 + gamma/(2 alpha)) on "
                 "M3, rather than the self-referential statement")
    return BoundReport(case, {"M1": M1, "M2": M2, "M3": M3, "M4": M4, "M5": M5},
                       M, [
        "M1 = 1/(b xi eps3)",
        "M2 = 1/(c eps3)",
        "M3 = (2 eps3 alpha/(b gamma)) ((b-c)^2 eps3/(2 gamma) M2)",
        "M4 = 2 + gamma/sqrt(eps3 alpha) + (gamma/2) M2 + (1 + gamma/(2 alpha)) M3",
        "M5 = xi eps3 ((1 + b^2 xi eps3/(2 mu)) M1 + (1/xi + gamma^2/(2 xi^2 eps3^2)) M2 + M3/2 + 2/sqrt(xi eps3 mu))",
        "M = M3 + M4 + M5 + xi eps3 M1 + eps3 M2",
    ], flags)


def _family_N(p, d, cp, exact, case):
    N1 = 1 / d.a
    N2 = 1 / (d.c * p.eps3)
    N3 = 2 * (p.rho * N1 + 2 * _sqrt(p.rho / p.alpha, exact) * cp
              + d.a * cp**2 / p.alpha + (p.gamma**2 / p.alpha) * N2)
    N4 = 2 * ((p.eps3 / p.xi) * N2 + (p.gamma**2 / (p.eps3 * p.xi * p.alpha)) * N3)
    # the printed N5 keeps a factor (1 + b^2 xi eps3/(2 mu)); with b = 0 in
    # this case it reduces to 1
    N5 = 2 * p.xi * p.eps3 * (
        N4
        + (1 / p.xi + p.gamma**2 / (2 * p.xi**2 * p.eps3**2)) * N2
        + N3 / 2
        + 2 * _sqrt(1 / (p.xi * p.eps3 * p.mu), exact))
    N = N3 + p.rho * N1 + N5 + N4 + p.eps3 * N2
    flags = ["N5 evaluated with b = 0 substituted in its printed "
             "b-dependent factor, (1 + b^2 xi eps3/(2 mu)) -> 1"]
    return BoundReport(case, {"N1": N1, "N2": N2, "N3": N3, "N4": N4, "N5": N5},
                       N, [
        "N1 = 1/a",
        "N2 = 1/(c eps3)",
        "N3 = 2(rho N1 + 2 sqrt(rho/alpha) c_p + a c_p^2/alpha + (gamma^2/alpha) N2)",
        "N4 = 2((eps3/xi) N2 + (gamma^2/(eps3 xi alpha)) N3)",
        "N5 = 2 xi eps3 (N4 + (1/xi + gamma^2/(2 xi^2 eps3^2)) N2 + N3/2 + 2/sqrt(xi eps3 mu))",
        "N = N3 + rho N1 + N5 + N4 + eps3 N2",
    ], flags)


def _family_S(p, d, cp, exact, case):
    S1 = 1 / d.a
    S2 = 1 / (d.b * p.xi * p.eps3)
    S3 = 2 * (_sqrt(p.rho / p.alpha, exact) * cp + 1 / d.b
              + p.gamma / d.b * _sqrt(1 / (p.alpha * p.eps3), exact)
              + d.a * cp**2 / (4 * p.alpha)) + S1
    S4 = p.xi * p.eps3 * (
        (1 + d.b**2 * p.xi * p.eps3 / (2 * p.mu)) * S2
        + ((1 / p.xi + p.gamma**2 / (2 * p.xi**2 * p.eps3**2)) / p.eps3
           + 1 / p.alpha) * S3
        + 2 * _sqrt(1 / (p.xi * p.eps3 * p.mu), exact))
    S = p.rho * S1 + p.xi * p.eps3 * S2 + 3 * S3 + S4
    return BoundReport(case, {"S1": S1, "S2": S2, "S3": S3, "S4": S4},
                       S, [
        "S1 = 1/a",
        "S2 = 1/(b xi eps3)",
        "S3 = 2(sqrt(rho/alpha) c_p + 1/b + gamma/(b sqrt(alpha eps3)) + a c_p^2/(4 alpha)) + S1",
        "S4 = xi eps3 ((1 + b^2 xi eps3/(2 mu)) S2 + ((1/xi + gamma^2/(2 xi^2 eps3^2))/eps3 + 1/alpha) S3 + 2/sqrt(xi eps3 mu))",
        "S = rho S1 + xi eps3 S2 + 3 S3 + S4",
    ])


@dataclass(frozen=True)
class BoundComparison:
    passed: bool
    ratio: float
    measured_sup: float
    bound: float
    slack: float


def bound_vs_measurement(report: BoundReport, scan, damping: DampingConfig,
                         slack: float = 2.0) -> BoundComparison:
    """Compare a measured resolvent sup against slack * final_constant.

    The slack acknowledges that the analytic constant bounds the continuous
    semigroup while the scan measures a discrete proxy.
    """
    if report.case_label != damping.case_label:
        raise CaseMismatchError(
            f"report is for case '{report.case_label}', scan damping is "
            f"'{damping.case_label}'")
    sup = scan.sup_norm
    bound = slack * float(report.final_constant)
    return BoundComparison(passed=bool(sup <= bound),
                           ratio=sup / float(report.final_constant),
                           measured_sup=sup, bound=bound, slack=slack)
