"""Morse-Bott counting polynomials and the two factorization certificates.

A certificate is the exact division of ``MB_t - P_t`` by ``1 + t`` together
with a sign check on the quotient.  A failed certificate is a result, not
an error: it shows the critical data cannot come from any Morse-Bott
function on the stated manifold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .descriptor import MorseBottDescriptor, negate, require_valid
from .errors import InputError
from .homology import CellModel, relative_poincare_polynomial
from .intpoly import IntPolynomial, ZERO, divide_by_one_plus_t, is_nonnegative, reverse

MAIN = "main"
COROLLARY = "corollary"


@dataclass(frozen=True)
class VerificationReport:
    descriptor_name: str
    theorem: str
    lhs: IntPolynomial
    quotient: IntPolynomial
    exact_division: bool
    nonnegative: bool
    failure_detail: str = ""
    details: dict = field(default_factory=dict, compare=False)

    @property
    def verdict(self) -> str:
        return "pass" if self.exact_division and self.nonnegative else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        out = {
            "descriptor": self.descriptor_name,
            "theorem": self.theorem,
            "lhs": self.lhs.to_list(),
            "quotient": self.quotient.to_list(),
            "exact_division": self.exact_division,
            "nonnegative": self.nonnegative,
            "verdict": self.verdict,
            "failure_detail": self.failure_detail,
        }
        if self.details:
            out["details"] = self.details
        return out


def certify(name: str, theorem: str, lhs: IntPolynomial, details: Optional[dict] = None) -> VerificationReport:
    """Divide ``lhs`` by ``1 + t`` and check the quotient's signs."""
    quotient, exact = divide_by_one_plus_t(lhs)
    if not exact:
        return VerificationReport(
            name, theorem, lhs, ZERO, False, False,
            f"division inexact: lhs(−1) = {lhs(-1)}, so 1+t does not divide {lhs}",
            details or {})
    if not is_nonnegative(quotient):
        bad = [k for k, c in enumerate(quotient.coeffs) if c < 0]
        return VerificationReport(
            name, theorem, lhs, quotient, True, False,
            f"quotient {quotient} has negative coefficients at degrees {bad}",
            details or {})
    return VerificationReport(name, theorem, lhs, quotient, True, True, "", details or {})


def mb_polynomial_N(d: MorseBottDescriptor) -> IntPolynomial:
    total = ZERO
    for sub in d.interior:
        total += sub.twisted_poincare().shift(sub.index)
    for sub in d.boundary_N:
        total += sub.twisted_poincare().shift(sub.index)
    return total


def mb_polynomial_D(d: MorseBottDescriptor) -> IntPolynomial:
    total = ZERO
    for sub in d.interior:
        total += sub.twisted_poincare().shift(sub.index)
    for sub in d.boundary_D:
        total += sub.twisted_poincare().shift(sub.index + 1)
    return total


def verify_main(d: MorseBottDescriptor) -> VerificationReport:
    require_valid(d)
    lhs = mb_polynomial_N(d) - d.manifold_poincare()
    return certify(d.name, MAIN, lhs)


def lefschetz_relative(d: MorseBottDescriptor) -> IntPolynomial:
    """P_t(M, dM) obtained from P_t(M) by duality; needs M oriented."""
    if not d.manifold_oriented:
        raise InputError("duality needs an oriented manifold", "manifold_oriented")
    return reverse(d.manifold_poincare(), d.ambient_dim)


def relative_poincare(d: MorseBottDescriptor) -> IntPolynomial:
    """P_t(M, dM): as supplied, else from the triangulation of M, else by duality."""
    rel = d.relative_homology
    if isinstance(rel, IntPolynomial):
        return rel
    if isinstance(rel, CellModel):
        return relative_poincare_polynomial(rel)
    if d.manifold_oriented:
        return lefschetz_relative(d)
    raise InputError("relative homology must be supplied for an unoriented manifold",
                     "relative_homology")


def _require_oriented(d: MorseBottDescriptor) -> None:
    if not d.manifold_oriented:
        raise InputError("the corollary needs an oriented manifold", "manifold_oriented")
    loose = [sub.name for _, _, sub in d.submanifolds() if not sub.oriented_bundle]
    if loose:
        raise InputError(f"the corollary needs oriented negative bundles; not oriented: {loose}",
                         "oriented_bundle")


def verify_corollary(d: MorseBottDescriptor) -> VerificationReport:
    require_valid(d)
    _require_oriented(d)
    lhs = mb_polynomial_D(d) - relative_poincare(d)
    return certify(d.name, COROLLARY, lhs)


def cross_check_negation(d: MorseBottDescriptor) -> bool:
    """Compare MB^N(-f) with t^m MB^D(f)(1/t).

    Agreement relies on every critical submanifold having a palindromic
    Poincare polynomial, which holds for closed oriented manifolds.
    """
    require_valid(d)
    flipped = negate(d)
    return mb_polynomial_N(flipped) == reverse(mb_polynomial_D(d), d.ambient_dim)
