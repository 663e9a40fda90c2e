"""Classifying checkers for the q1 / fractional-matching statements.

Each checker returns a :class:`TheoremReport`.  Exact quantities
(fractional matching numbers, thresholds, independence numbers) are
``Fraction``/``int``; spectral quantities are :class:`SpectralValue`
objects whose comparisons with rationals are decided by enclosure or, near
the threshold, by exact root counting on the characteristic polynomial.

Checker ids:

    l31  q1 < 2n delta/(n-k)  =>  a* > (n-k)/2
    t32  a* >= n delta / q1, equality diagnosed against H(delta, k)
    l33  q1 <= max{d(u)+d(v) : uv in E}
    t34  girth >= 5  =>  q1 < 2 + alpha
    c35  connected, girth >= 5  =>  a* > n delta / (alpha + 2)
    t41  q1 < 2n delta/(n-1)  =>  FPM
    t42  q1(G^c) < 2 delta  =>  FPM
    t43  q1(G^c) < 2 delta + 1  =>  FPM unless G is (delta+1)K1 v H2
    t44  k-regular, lambda3 <= k-1+3/(k+1) (even k) or k-1+4/(k+2) (odd k)  =>  FPM
    c45  regular with algebraic connectivity >= 1  =>  FPM
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable

from . import families
from .graph import (BudgetExceededError, Graph, bipartition, complement, girth,
                    independence_number, is_connected, min_degree, to_graph6)
from .matching import fractional_matching_number
from .spectral import DEFAULT_TOL, MatrixKind, SpectralValue, build_matrix

THEOREM_IDS = ("t32", "l31", "l33", "t34", "c35", "t41", "t42", "t43", "t44", "c45")


class Outcome(str, Enum):
    HYPOTHESIS_NOT_MET = "HypothesisNotMet"
    HOLDS_STRICT = "HoldsStrict"
    HOLDS_WITH_EQUALITY = "HoldsWithEquality"
    VIOLATED = "Violated"
    INCONCLUSIVE = "Inconclusive"


class HypothesisError(ValueError):
    """The graph does not satisfy a structural precondition of a checker."""


def fmt(x: Any) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


@dataclass
class TheoremReport:
    theorem: str
    graph6: str
    outcome: Outcome
    lhs: str = ""
    rhs: str = ""
    witness: str = ""
    evidence: dict = field(default_factory=dict)

    def csv_row(self) -> list[str]:
        return [self.theorem, self.graph6, self.outcome.value, self.lhs, self.rhs, self.witness]

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "graph6": self.graph6, "outcome": self.outcome.value,
                "lhs": self.lhs, "rhs": self.rhs, "witness": self.witness,
                "evidence": self.evidence}


# Evidence layouts understood by outcome_from_evidence:
#   {"kind": "bound", "applicable": bool, "sign": -1|0|1|None, "want": -1|1}
#       sign is sign(lhs - rhs); want is the side the claim puts lhs on.
#   {"kind": "sufficient", "applicable": bool, "hyp_sign": ..., "hyp_want": [...],
#    "conclusion": bool|None, "exception": bool}


def outcome_from_evidence(ev: dict) -> Outcome:
    if ev.get("inconclusive_reason"):
        return Outcome.INCONCLUSIVE
    if not ev["applicable"]:
        return Outcome.HYPOTHESIS_NOT_MET
    if ev["kind"] == "bound":
        sign = ev["sign"]
        if sign is None:
            return Outcome.INCONCLUSIVE
        if sign == 0:
            return Outcome.HOLDS_WITH_EQUALITY
        return Outcome.HOLDS_STRICT if sign == ev["want"] else Outcome.VIOLATED
    hyp = ev["hyp_sign"]
    if hyp is None:
        return Outcome.INCONCLUSIVE
    if hyp not in ev["hyp_want"]:
        return Outcome.HYPOTHESIS_NOT_MET
    if ev["conclusion"] or ev.get("exception"):
        return Outcome.HOLDS_STRICT
    return Outcome.VIOLATED


class GraphFacts:
    """Lazily computed, cached invariants of one graph for the checkers."""

    def __init__(self, g: Graph, tol: float = DEFAULT_TOL):
        self.g = g
        self.tol = tol

    @cached_property
    def graph6(self) -> str:
        return to_graph6(self.g)

    @property
    def n(self) -> int:
        return self.g.n

    @cached_property
    def delta(self) -> int:
        return min_degree(self.g)

    @cached_property
    def connected(self) -> bool:
        return is_connected(self.g)

    @cached_property
    def regular_degree(self) -> int | None:
        degs = set(self.g.degrees())
        return degs.pop() if len(degs) == 1 else None

    @cached_property
    def alpha_star(self) -> Fraction:
        return fractional_matching_number(self.g)

    @cached_property
    def fpm(self) -> bool:
        return 2 * self.alpha_star == self.n

    @cached_property
    def girth(self) -> int | None:
        return girth(self.g)

    @cached_property
    def independence(self) -> int:
        return independence_number(self.g)

    @cached_property
    def q1(self) -> SpectralValue:
        return SpectralValue(build_matrix(self.g, MatrixKind.SIGNLESS_LAPLACIAN), 1, self.tol)

    @cached_property
    def q1_complement(self) -> SpectralValue:
        return SpectralValue(build_matrix(complement(self.g), MatrixKind.SIGNLESS_LAPLACIAN), 1, self.tol)

    @cached_property
    def lambda3(self) -> SpectralValue:
        return SpectralValue(build_matrix(self.g, MatrixKind.ADJACENCY), 3, self.tol)

    @cached_property
    def mu_n_minus_1(self) -> SpectralValue:
        return SpectralValue(build_matrix(self.g, MatrixKind.LAPLACIAN), self.n - 1, self.tol)


def facts_of(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> GraphFacts:
    return g if isinstance(g, GraphFacts) else GraphFacts(g, tol)


def show_spectral(value: SpectralValue, r: Fraction | int, sign: int | None, method: str) -> str:
    """Exact rational when the value was proved equal to ``r``."""
    if sign == 0 and method == "exact":
        return fmt(Fraction(r))
    return str(value.enclosure)


def _report(theorem: str, f: GraphFacts, ev: dict, lhs: str = "", rhs: str = "",
            witness: str = "") -> TheoremReport:
    return TheoremReport(theorem, f.graph6, outcome_from_evidence(ev), lhs, rhs, witness, ev)


def _not_met(theorem: str, f: GraphFacts, reason: str) -> TheoremReport:
    ev = {"kind": "sufficient", "applicable": False, "reason": reason}
    return _report(theorem, f, ev, witness=reason)


def _require_connected(f: GraphFacts, min_order: int = 2) -> None:
    if f.n < min_order:
        raise HypothesisError(f"needs at least {min_order} vertices")
    if not f.connected:
        raise HypothesisError("disconnected")


def _sufficient(theorem: str, f: GraphFacts, value: SpectralValue, threshold: Fraction,
                hyp_want: list[int], value_name: str, extra: dict | None = None,
                allow_exception: bool = False) -> TheoremReport:
    """Hypothesis ``value (<|<=|>=) threshold`` implies a fractional perfect matching."""
    sign, method = value.sign_vs(threshold)
    ev = {"kind": "sufficient", "applicable": True, "hyp_sign": sign, "hyp_want": hyp_want,
          "hyp_method": method, "value": value_name,
          "enclosure": [value.enclosure.lo, value.enclosure.hi],
          "threshold": fmt(threshold), "conclusion": None, "exception": False}
    if extra:
        ev.update(extra)
    witness = ""
    if sign is not None and sign in hyp_want:
        ev["conclusion"] = f.fpm
        ev["alpha_star"] = fmt(f.alpha_star)
        witness = f"fpm={fmt(f.fpm)}"
        if not f.fpm and allow_exception:
            split = families.exception_split(f.g, f.delta)
            if split is not None:
                ev["exception"] = True
                members = [v for v in range(f.n) if (split >> v) & 1]
                ev["exception_set"] = members
                witness += ";exception A=" + ".".join(map(str, members))
    elif sign is None:
        witness = "hypothesis undecided"
    return _report(theorem, f, ev, show_spectral(value, threshold, sign, method),
                   fmt(threshold), witness)


# ---------------------------------------------------------------- checkers


def check_threshold(g: Graph | GraphFacts, k: Fraction | float | int,
                    tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    _require_connected(f)
    k = Fraction(str(k)) if isinstance(k, float) else Fraction(k)
    if not 0 < k < f.n:
        raise ValueError(f"k={fmt(k)} must lie strictly between 0 and n={f.n}")
    threshold = Fraction(2 * f.n * f.delta) / (f.n - k)
    sign, method = f.q1.sign_vs(threshold)
    target = Fraction(f.n - k, 2)
    ev = {"kind": "sufficient", "applicable": True, "hyp_sign": sign, "hyp_want": [-1],
          "hyp_method": method, "k": fmt(k), "threshold": fmt(threshold),
          "enclosure": [f.q1.enclosure.lo, f.q1.enclosure.hi],
          "conclusion": None, "exception": False}
    witness = f"k={fmt(k)}"
    if sign == -1:
        ev["conclusion"] = f.alpha_star > target
        ev["alpha_star"] = fmt(f.alpha_star)
        ev["target"] = fmt(target)
        witness += f";alpha_star={fmt(f.alpha_star)};(n-k)/2={fmt(target)}"
    return _report("l31", f, ev, show_spectral(f.q1, threshold, sign, method), fmt(threshold), witness)


def check_lower_bound(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    """alpha* >= n delta / q1, with the equality characterisation as a diagnosis."""
    f = facts_of(g, tol)
    _require_connected(f)
    a = f.alpha_star
    # a > 0 for connected n >= 2, so a >= n delta/q1  <=>  q1 >= n delta/a
    pivot = Fraction(f.n * f.delta) / a
    q_sign, method = f.q1.sign_vs(pivot)
    enc = f.q1.enclosure
    nd = f.n * f.delta
    ev = {"kind": "bound", "applicable": True, "sign": q_sign, "want": 1, "method": method,
          "alpha_star": fmt(a), "q1_enclosure": [enc.lo, enc.hi], "n": f.n, "delta": f.delta}
    if q_sign == 0 and method == "exact":
        rhs = fmt(a)
    else:
        lo, hi = nd / enc.hi, (nd / enc.lo if enc.lo > 0 else float("inf"))
        rhs = f"{(lo + hi) / 2:.12g}±{(hi - lo) / 2:.3g}"
    z = f.n - 2 * a  # equals n(q1 - 2 delta)/q1 exactly on equality
    parts = []
    if q_sign == 0:
        member, why = families.is_member_H(f.g, f.delta, int(z)) if z.denominator == 1 and z >= 0 \
            else (False, "z not a nonnegative integer")
        ev.update({"z": fmt(z), "z_integer": z.denominator == 1, "member": member,
                   "member_diagnosis": why, "characterization_gap": not member})
        parts = [f"z={fmt(z)}", f"member=H({f.delta},{fmt(z)}):{fmt(member)}"]
        if not member:
            parts.append(f"characterization-gap({why})")
    return _report("t32", f, ev, fmt(a), rhs, ";".join(parts))


def _degree_sum_class(g: Graph) -> tuple[str, bool]:
    """Structural class for the equality case and whether the printed
    characterisation (regular or semi-regular bipartite) covers it."""
    side = bipartition(g)
    degs = g.degrees()
    if side is not None:
        d1 = {degs[u] for u in range(g.n) if (side >> u) & 1}
        d2 = {degs[u] for u in range(g.n) if not (side >> u) & 1}
        if len(d1) == 1 and len(d2) == 1:
            return ("regular-bipartite" if d1 == d2 else "semi-regular-bipartite"), True
    if len(set(degs)) == 1:
        return "regular-non-bipartite", False
    return "irregular", False


def check_degree_sum(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    _require_connected(f)
    if f.g.m == 0:
        raise HypothesisError("edgeless graph")
    bound = max(f.g.degree(u) + f.g.degree(v) for u, v in f.g.edges())
    sign, method = f.q1.sign_vs(bound)
    ev = {"kind": "bound", "applicable": True, "sign": sign, "want": -1, "method": method,
          "max_degree_sum": bound, "q1_enclosure": [f.q1.enclosure.lo, f.q1.enclosure.hi]}
    witness = ""
    if sign == 0:
        cls, covered = _degree_sum_class(f.g)
        ev.update({"equality_class": cls, "characterization_gap": not covered})
        witness = cls if covered else f"{cls};characterization-gap"
    return _report("l33", f, ev, show_spectral(f.q1, bound, sign, method), str(bound), witness)


def _girth_note(f: GraphFacts) -> str:
    return "girth=acyclic(counted as >=5)" if f.girth is None else f"girth={f.girth}"


def _girth_ok(f: GraphFacts) -> bool:
    return f.girth is None or f.girth >= 5


def check_girth_bound(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n == 0 or not _girth_ok(f):
        ev = {"kind": "bound", "applicable": False, "girth": f.girth}
        return _report("t34", f, ev, witness=_girth_note(f) if f.n else "empty graph")
    try:
        alpha = f.independence
    except BudgetExceededError as exc:
        ev = {"kind": "bound", "applicable": True, "sign": None, "want": -1,
              "inconclusive_reason": str(exc)}
        return _report("t34", f, ev, witness=str(exc))
    bound = 2 + alpha
    sign, method = f.q1.sign_vs(bound)
    ev = {"kind": "bound", "applicable": True, "sign": sign, "want": -1, "method": method,
          "independence": alpha, "girth": f.girth, "acyclic": f.girth is None,
          "q1_enclosure": [f.q1.enclosure.lo, f.q1.enclosure.hi]}
    witness = _girth_note(f) + (";strict-bound-attained" if sign == 0 else "")
    return _report("t34", f, ev, show_spectral(f.q1, bound, sign, method), str(bound), witness)


def check_girth_fractional_bound(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 2 or not f.connected:
        ev = {"kind": "bound", "applicable": False}
        return _report("c35", f, ev, witness="disconnected" if f.n >= 2 else "n<2")
    if not _girth_ok(f):
        ev = {"kind": "bound", "applicable": False, "girth": f.girth}
        return _report("c35", f, ev, witness=_girth_note(f))
    try:
        alpha = f.independence
    except BudgetExceededError as exc:
        ev = {"kind": "bound", "applicable": True, "sign": None, "want": 1,
              "inconclusive_reason": str(exc)}
        return _report("c35", f, ev, witness=str(exc))
    bound = Fraction(f.n * f.delta, alpha + 2)
    diff = f.alpha_star - bound
    sign = (diff > 0) - (diff < 0)
    ev = {"kind": "bound", "applicable": True, "sign": sign, "want": 1, "method": "exact",
          "independence": alpha, "girth": f.girth, "acyclic": f.girth is None}
    witness = _girth_note(f) + (";strict-bound-attained" if sign == 0 else "")
    return _report("c35", f, ev, fmt(f.alpha_star), fmt(bound), witness)


def check_fpm_q1(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 2 or not f.connected:
        return _not_met("t41", f, "disconnected" if f.n >= 2 else "n<2")
    threshold = Fraction(2 * f.n * f.delta, f.n - 1)
    return _sufficient("t41", f, f.q1, threshold, [-1], "q1")


def check_fpm_complement(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 1 or not f.connected:
        return _not_met("t42", f, "disconnected" if f.n else "empty graph")
    return _sufficient("t42", f, f.q1_complement, Fraction(2 * f.delta), [-1], "q1_complement")


def check_fpm_complement_refined(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 1 or not f.connected:
        return _not_met("t43", f, "disconnected" if f.n else "empty graph")
    return _sufficient("t43", f, f.q1_complement, Fraction(2 * f.delta + 1), [-1],
                       "q1_complement", allow_exception=True)


def lambda3_threshold(k: int) -> Fraction:
    if k % 2 == 0:
        return k - 1 + Fraction(3, k + 1)
    return k - 1 + Fraction(4, k + 2)


def check_fpm_regular_lambda3(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 3:
        return _not_met("t44", f, "n<3")
    if not f.connected:
        return _not_met("t44", f, "disconnected")
    k = f.regular_degree
    if k is None:
        return _not_met("t44", f, "not regular")
    return _sufficient("t44", f, f.lambda3, lambda3_threshold(k), [-1, 0], "lambda3",
                       extra={"k": k})


def check_fpm_algebraic_connectivity(g: Graph | GraphFacts, tol: float = DEFAULT_TOL) -> TheoremReport:
    f = facts_of(g, tol)
    if f.n < 2:
        return _not_met("c45", f, "n<2")
    if f.regular_degree is None:
        return _not_met("c45", f, "not regular")
    return _sufficient("c45", f, f.mu_n_minus_1, Fraction(1), [0, 1], "algebraic_connectivity")


CHECKERS: dict[str, Callable[..., TheoremReport]] = {
    "l31": check_threshold,
    "t32": check_lower_bound,
    "l33": check_degree_sum,
    "t34": check_girth_bound,
    "c35": check_girth_fractional_bound,
    "t41": check_fpm_q1,
    "t42": check_fpm_complement,
    "t43": check_fpm_complement_refined,
    "t44": check_fpm_regular_lambda3,
    "c45": check_fpm_algebraic_connectivity,
}


def run_checker(theorem: str, g: Graph | GraphFacts, tol: float = DEFAULT_TOL,
                k: Fraction | None = None) -> TheoremReport:
    """Run one checker, turning precondition errors into HypothesisNotMet."""
    if theorem not in CHECKERS:
        raise KeyError(f"unknown theorem id {theorem!r}")
    f = facts_of(g, tol)
    try:
        if theorem == "l31":
            return check_threshold(f, Fraction(1) if k is None else k)
        return CHECKERS[theorem](f)
    except HypothesisError as exc:
        ev = {"kind": "sufficient", "applicable": False, "reason": str(exc)}
        return TheoremReport(theorem, f.graph6, Outcome.HYPOTHESIS_NOT_MET, "", "", str(exc), ev)
    except ValueError as exc:
        if theorem == "l31":
            ev = {"kind": "sufficient", "applicable": False, "reason": str(exc)}
            return TheoremReport(theorem, f.graph6, Outcome.HYPOTHESIS_NOT_MET, "", "", str(exc), ev)
        raise
