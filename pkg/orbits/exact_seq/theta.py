"""
The characterization isomorphisms θ for wreath and twisted products.

B is synthesized as the finite quotient of G≀ₘℤ (or (G,H)≀_{γ,m}ℤ), the
hypotheses of the characterization are checked on B itself, and θ is built
from conjugates of the embedded G (and H) by the generator g. Everything is
exhaustive over the quotient, using index arrays.
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from orbits.exact_seq.diagram import build_3x3, homomorphism_witness
from orbits.exact_seq.models import ConjugationConvention, ConventionOutcome
from orbits.group_arith.arith import apply_involution, element_to_json, enumerate_elements, identity
from orbits.group_arith.concrete import ConcreteGroup
from orbits.group_arith.involution import check_involution
from orbits.group_arith.oracle import beta
from orbits.group_arith.quotient import finite_quotient
from orbits.group_core.formatter import format_expr
from orbits.group_core.models import TwistedWrZ, Unit, WrZ
from orbits.reports import VerificationReport

logger = logging.getLogger(__name__)

ADOPTED_CONVENTION = ConjugationConvention.INVERSE_FIRST


def _merge(report: VerificationReport, sub: VerificationReport, prefix: str) -> None:
    for check in sub.checks:
        report.checks.append(check.model_copy(update={"check_name": f"{prefix}{check.check_name}"}))


def _conjugation_powers(B: ConcreteGroup, g: int, count: int, convention: ConjugationConvention) -> List[np.ndarray]:
    """Index arrays x ↦ g⁻ⁱ x gⁱ (or gⁱ x g⁻ⁱ) for i = 0..count-1."""
    step = B.inv(g) if convention == ConjugationConvention.INVERSE_FIRST else g
    step_inv = B.inv(step)
    one_step = B.table[B.table[step, :], step_inv]
    out = [np.arange(B.order)]
    for _ in range(1, count):
        out.append(one_step[out[-1]])
    return out


def _subgroup_of(G, generators: Optional[Iterable]) -> tuple:
    """Members (as G elements) and normality of the subgroup generated in a finite G."""
    concrete = finite_quotient(G, 1)
    gens = [concrete.index[x] for x in (generators or [])]
    members = concrete.generated_subgroup(gens)
    return [concrete.elements[i] for i in sorted(members)], concrete.is_normal(members)


def _product_is_direct(B: ConcreteGroup, pieces: Sequence[Sequence[int]], L: set) -> Optional[List[int]]:
    """None when the pieces commute pairwise and multiply onto L bijectively; else a witness."""
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            P, Q = np.array(pieces[i]), np.array(pieces[j])
            bad = B.table[P[:, None], Q[None, :]] != B.table[Q[None, :], P[:, None]]
            if bad.any():
                x, y = np.argwhere(bad)[0]
                return [int(P[x]), int(Q[y])]
    size = int(np.prod([len(p) for p in pieces], dtype=object))
    if size != len(L):
        return [size, len(L)]
    return None


def _finish(
    report: VerificationReport,
    B: ConcreteGroup,
    thetas: Dict[ConjugationConvention, np.ndarray],
    eta: np.ndarray,
    period: int,
    A_domain: Optional[np.ndarray],
    A: frozenset,
    L: frozenset,
) -> None:
    outcomes = []
    for convention, theta in thetas.items():
        hom = homomorphism_witness(theta, B, B) is None
        image_ok = None if A_domain is None else set(theta[A_domain].tolist()) == set(A)
        outcomes.append(ConventionOutcome(convention=convention, homomorphism=hom, image_matches_A=image_ok))
    report.details["conventions"] = [o.model_dump(mode="json") for o in outcomes]
    report.details["adopted_convention"] = ADOPTED_CONVENTION.value

    theta = thetas[ADOPTED_CONVENTION]
    pair = homomorphism_witness(theta, B, B)
    report.add(
        "theta homomorphism",
        pair is None,
        f"θ(uv) = θ(u)θ(v) on all {B.order ** 2} pairs",
        None if pair is None else [element_to_json(B.elements[pair[0]]), element_to_json(B.elements[pair[1]])],
    )
    report.add("theta bijective", len(np.unique(theta)) == B.order, f"θ is a bijection of {B.order} elements")

    lower = np.nonzero(eta[theta] % period != eta % period)[0]
    report.add(
        "identity on the lower row",
        lower.size == 0,
        "η∘θ agrees with the shift coordinate",
        [element_to_json(B.elements[int(lower[0])])] if lower.size else None,
    )
    if A_domain is not None:
        image = set(theta[A_domain].tolist())
        report.add("theta image of the P-part equals A", image == set(A), f"|θ(P-part)| = {len(image)}, |A| = {len(A)}")
        diagram = build_3x3(B, A, L)
        _merge(report, diagram.report, "3x3: ")
        report.details["3x3_orders"] = diagram.report.details.get("orders")


def verify_theta_wreath(
    G,
    m: int,
    depth: int = 1,
    p_generators: Optional[Iterable] = None,
) -> VerificationReport:
    """
    Check the characterization of G≀ₘℤ on its quotient with shift period m·depth.

    Args:
        G: Finite group expression
        m: Wreath multiplicity
        depth: Multiplier N of the shift period
        p_generators: Elements of G generating the normal subgroup P used for
            the 3×3 diagram (trivial P when omitted)

    Returns:
        VerificationReport with one check per hypothesis plus the θ checks;
        details carry the outcome under both conjugation conventions.
    """
    W = WrZ(G, m)
    B = finite_quotient(W, depth)
    report = VerificationReport(target="theta-wreath")
    report.details.update({"group": format_expr(W), "order": B.order, "period": m * depth})
    e_G = identity(G)
    period = m * depth
    g = B.index[(tuple(e_G for _ in range(m)), 1 % period)]
    eta = np.array([x[1] for x in B.elements])
    report.add("eta(g) = 1", int(eta[g]) == 1 % period, "g shifts by one column")

    L = frozenset(np.nonzero(eta == 0)[0].tolist())
    L_arr = np.array(sorted(L))
    gm = B.power(g, m)
    central = np.all(B.table[gm, L_arr] == B.table[L_arr, gm])
    report.add("g^m centralizes L", bool(central), "gᵐ commutes with every element of L")

    iota = {a: B.index[((a,) + tuple(e_G for _ in range(m - 1)), 0)] for a in enumerate_elements(G)}
    G0 = np.array(sorted(iota.values()))
    thetas: Dict[ConjugationConvention, np.ndarray] = {}
    for convention in ConjugationConvention:
        conj = _conjugation_powers(B, g, m, convention)
        if convention == ADOPTED_CONVENTION:
            pieces = [sorted(set(conj[i][G0].tolist())) for i in range(m)]
            witness = _product_is_direct(B, pieces, L)
            report.add(
                "L is the direct product of the conjugates of G",
                witness is None,
                f"{m} conjugates of G commute pairwise and fill L",
                witness,
            )
        theta = np.empty(B.order, dtype=np.int64)
        for w, (tup, k) in enumerate(B.elements):
            x = B.identity
            for i, a in enumerate(tup):
                x = B.table[x, conj[i][iota[a]]]
            theta[w] = B.table[x, B.power(g, k)]
        thetas[convention] = theta

    P, p_normal = _subgroup_of(G, p_generators)
    report.add("P normal in G", p_normal, f"P has {len(P)} elements")
    A = B.normal_closure([iota[p] for p in P] + [gm])
    P_set = set(P)
    A_domain = np.array([
        w for w, (tup, k) in enumerate(B.elements) if k % m == 0 and all(a in P_set for a in tup)
    ])
    _finish(report, B, thetas, eta, period, A_domain, A, L)
    logger.info("theta for %s on order %d: %s", format_expr(W), B.order, "pass" if report.passed else "FAIL")
    return report


def verify_theta_twisted(
    G,
    H,
    gamma,
    m: int,
    depth: int = 1,
    p_generators: Optional[Iterable] = None,
    q_generators: Optional[Iterable] = None,
) -> VerificationReport:
    """
    Check the characterization of (G,H)≀_{γ,m}ℤ on its quotient with period 2m·depth.

    ξ(x) = g x g⁻¹ on L. Besides the hypotheses, θ∘β = ξ∘θ is checked
    pointwise on L. P ⊆ G and Q ⊆ H (γ-invariant) generate the A of the
    3×3 diagram; both default to the trivial subgroup.
    """
    T = TwistedWrZ(G, H, gamma, m)
    B = finite_quotient(T, depth)
    report = VerificationReport(target="theta-twisted")
    period = 2 * m * depth
    report.details.update({"group": format_expr(T), "order": B.order, "period": period})
    _merge(report, check_involution(gamma, H), "gamma ")

    e_G, e_H = identity(G), identity(H)
    c0 = tuple(e_G for _ in range(2 * m))
    d0 = tuple(e_H for _ in range(m))
    g = B.index[(c0, d0, 1 % period)]
    eta = np.array([x[2] for x in B.elements])
    report.add("eta(g) = 1", int(eta[g]) == 1 % period, "g shifts by one column")

    L = frozenset(np.nonzero(eta == 0)[0].tolist())
    L_arr = np.array(sorted(L))
    xi = B.table[B.table[g, :], B.inv(g)]
    xi_2m = np.arange(B.order)
    for _ in range(2 * m):
        xi_2m = xi[xi_2m]
    report.add("xi^2m = id on L", bool(np.all(xi_2m[L_arr] == L_arr)), "ξ²ᵐ fixes L pointwise")

    iota_G = {a: B.index[((a,) + c0[1:], d0, 0)] for a in enumerate_elements(G)}
    iota_H = {b: B.index[(c0, (b,) + d0[1:], 0)] for b in enumerate_elements(H)}
    G0 = np.array(sorted(iota_G.values()))
    H0 = np.array(sorted(iota_H.values()))
    xi_m = np.arange(B.order)
    for _ in range(m):
        xi_m = xi[xi_m]
    report.add("xi^m(H) = H", set(xi_m[H0].tolist()) == set(H0.tolist()), "ξᵐ preserves the embedded H")

    thetas: Dict[ConjugationConvention, np.ndarray] = {}
    for convention in ConjugationConvention:
        conj = _conjugation_powers(B, g, 2 * m, convention)
        if convention == ADOPTED_CONVENTION:
            pieces = [sorted(set(conj[i][G0].tolist())) for i in range(2 * m)]
            pieces += [sorted(set(conj[j][H0].tolist())) for j in range(m)]
            witness = _product_is_direct(B, pieces, L)
            report.add(
                "L is the direct product of the conjugates of G and H",
                witness is None,
                f"{2 * m} + {m} conjugates commute pairwise and fill L",
                witness,
            )
        theta = np.empty(B.order, dtype=np.int64)
        for w, (c, d, k) in enumerate(B.elements):
            x = B.identity
            for i, a in enumerate(c):
                x = B.table[x, conj[i][iota_G[a]]]
            for j, b in enumerate(d):
                x = B.table[x, conj[j][iota_H[b]]]
            theta[w] = B.table[x, B.power(g, k)]
        thetas[convention] = theta

    theta = thetas[ADOPTED_CONVENTION]
    bad = None
    for w in L_arr:
        c, d, _ = B.elements[w]
        shifted = B.index[beta(T, c, d) + (0,)]
        if theta[shifted] != xi[theta[w]]:
            bad = [element_to_json(B.elements[w])]
            break
    report.add("theta beta = xi theta on L", bad is None, f"θ∘β = ξ∘θ on all {len(L_arr)} elements of L", bad)

    P, p_normal = _subgroup_of(G, p_generators)
    Q, q_normal = _subgroup_of(H, q_generators)
    report.add("P normal in G", p_normal, f"P has {len(P)} elements")
    report.add("Q normal in H", q_normal, f"Q has {len(Q)} elements")
    Q_set = set(Q)
    invariant = all(apply_involution(gamma, H, q) in Q_set for q in Q)
    report.add("gamma(Q) = Q", invariant, "γ preserves Q")
    A = B.normal_closure([iota_G[p] for p in P] + [iota_H[q] for q in Q] + [B.power(g, 2 * m)])
    P_set = set(P)
    A_domain = np.array([
        w for w, (c, d, k) in enumerate(B.elements)
        if k % (2 * m) == 0 and all(a in P_set for a in c) and all(b in Q_set for b in d)
    ])
    _finish(report, B, thetas, eta, period, A_domain, A, L)
    if isinstance(H, Unit):
        report.details["untwisted_order"] = finite_quotient(WrZ(G, 2 * m), depth).order
    logger.info("theta for %s on order %d: %s", format_expr(T), B.order, "pass" if report.passed else "FAIL")
    return report
