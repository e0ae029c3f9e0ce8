"""Target-collapse compilers.

Each compiler turns a witness with many admissible targets into one whose
gap is zero on rejection and a single nonvanishing value on acceptance,
using only the closure combinators of :mod:`gaplab.programs`:

    h1(<x, i>) = f(<key(x), i>) - g(x)
    h2(x)      = prod_{1 <= i <= r(|x|)} h1(<x, i>)
    ghat(x)    = h2(x) - prod_i f(<key(x), i>)
    fhat(key)  = -prod_i f(<key, i>)

If g(x) hits a target some factor of h2 vanishes and ghat(x) = fhat; if
g(x) = 0 then h2 equals the target product and ghat(x) = 0.
"""

from __future__ import annotations

import logging

from .errors import InvalidSpecError
from .fp import (
    At,
    Enumerator,
    First,
    FPFunc,
    IndexProduct,
    Negate,
    Sum,
    inner_length_view,
    outer_length_view,
)
from .natpoly import ExpBound, NatPoly
from .programs import (
    Base,
    BaseMachine,
    ComposeFP,
    ConstFP,
    GapProgram,
    PolyProd,
    Sub,
    accepting_machine,
    eval_gap,
)
from .strings import Domain
from .targets import TargetSpec, TwoSidedTargetSpec

logger = logging.getLogger("gaplab")


def _at_first(g: GapProgram) -> GapProgram:
    """g evaluated on the first component of a paired argument."""
    return ComposeFP(g, First())


def _collapse(g: GapProgram, spec: TargetSpec) -> tuple[GapProgram, FPFunc]:
    r = spec.polynomial_bound()
    keyed = spec.keyed()
    h1 = Sub(ConstFP(keyed), _at_first(g))
    h2 = PolyProd(h1, r, 1)
    target_product = IndexProduct(keyed, r, 1)
    ghat = Sub(h2, ConstFP(target_product))
    return ghat, Negate(target_product)


def collapse_lwpp(g: GapProgram, spec: TargetSpec, domain: Domain | None = None) -> tuple[GapProgram, FPFunc]:
    """Compile an r-LWPP witness (g, f) into an LWPP witness (ghat, fhat).

    ``fhat`` depends only on the length of its argument, so fhat(x) equals
    fhat(0^{|x|}).
    """
    if spec.mode != "length":
        raise InvalidSpecError("collapse_lwpp needs length-indexed targets")
    spec.check_nonzero(domain or Domain())
    logger.debug(f"Collapsing LWPP witness with r(n) = {spec.multiplicity}")
    return _collapse(g, spec)


def collapse_wpp(g: GapProgram, spec: TargetSpec, domain: Domain | None = None) -> tuple[GapProgram, FPFunc]:
    """Compile an r-WPP witness into a WPP witness; fhat depends on x."""
    spec.check_nonzero(domain or Domain())
    logger.debug(f"Collapsing WPP witness with r(n) = {spec.multiplicity}")
    return _collapse(g, spec)


def collapse_two_sided(
    g: GapProgram, spec: TwoSidedTargetSpec, domain: Domain | None = None
) -> tuple[GapProgram, FPFunc, NatPoly]:
    """Compile an (r_A, r_R)-LWPP witness into an r_A-LWPP witness.

    ghat(x) = prod_j (f_R(<0^{|x|}, j>) - g(x)) and
    fhat(<0^l, i>) = prod_j (f_R(<0^l, j>) - f_A(<0^l, i>)).
    Feed ``two_sided_targets(fhat, r_A)`` to :func:`collapse_lwpp` for a
    single-target witness.
    """
    spec.check_disjoint(domain or Domain())
    r_reject = spec.reject.polynomial_bound()
    r_accept = spec.accept.polynomial_bound()
    ghat = PolyProd(Sub(ConstFP(spec.reject.keyed()), _at_first(g)), r_reject, 1)
    body = Sum(
        (
            At(spec.reject.target, outer_length_view()),
            Negate(At(spec.accept.target, inner_length_view())),
        )
    )
    fhat = IndexProduct(body, r_reject, 1, on_first=True)
    return ghat, fhat, r_accept


def two_sided_targets(fhat: FPFunc, r_accept: NatPoly) -> TargetSpec:
    return TargetSpec("length", fhat, r_accept)


def collapse_ceqp(machine: BaseMachine, spec: TargetSpec) -> GapProgram:
    """h2(x) = prod_i (f(<x, i>) - acc_N(x)); zero exactly when acc hits a target.

    Targets may be any integers here, zero included.
    """
    r = spec.polynomial_bound()
    h1 = Sub(ConstFP(spec.keyed()), _at_first(Base(accepting_machine(machine))))
    return PolyProd(h1, r, 1)


def coceqp_to_exp_lwpp(g: GapProgram, p: NatPoly, domain: Domain | None = None) -> TargetSpec:
    """Exp-LWPP targets covering every nonzero value of |g(x)| <= 2^{p(|x|)}.

    Raises InvalidSpecError when some input of ``domain`` exceeds the bound.
    """
    domain = domain or Domain()
    for x in domain.strings():
        value = eval_gap(g, x, domain)
        if abs(value) > 2 ** p(len(x)):
            raise InvalidSpecError(f"|g({x!r})| = {abs(value)} exceeds 2^{p(len(x))}")
    return TargetSpec("length", Enumerator(), ExpBound(p))
