"""
Runners behind the `orbits` command line.

Each runner takes a RunConfig plus its own arguments and returns a
CommandOutcome: a JSON payload, a plain-text rendering, an optional LaTeX
rendering and the exit code. Expected failures (schema, validation,
hypothesis violations, cap overruns) are turned into outcomes here; only
I/O errors propagate to the caller.
"""
import json
import logging
import re
from enum import Enum
from random import Random
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError

from core import config
from orbits.errors import (
    ConstructionError,
    ExprSyntaxError,
    HypothesisViolation,
    InfiniteLeafError,
    InvalidDecompositionError,
    NonCellularError,
    NotNormalError,
    NotSquarefreeError,
    OrbitsError,
    OrderCapExceeded,
    PolySyntaxError,
)
from orbits.exact_seq.diagram import build_3x3
from orbits.exact_seq.theta import verify_theta_twisted, verify_theta_wreath
from orbits.group_arith.arith import (
    element_from_json,
    element_order,
    element_to_json,
    inverse,
    mul,
)
from orbits.group_arith.concrete import ConcreteGroup
from orbits.group_arith.oracle import verify_mul_oracle
from orbits.group_arith.quotient import finite_quotient
from orbits.group_core.formatter import format_expr
from orbits.group_core.grammar import parse_expr, parse_involution
from orbits.pi1.bieberbach import bieberbach_diagram
from orbits.pi1.engine import pi1_result, validate_surface
from orbits.pi1.models import SurfaceDecomposition, load_decomposition
from orbits.poly.jacobian import is_squarefree, jacobian_certificate, parse_poly
from orbits.poly.milnor import milnor_report, mu_equivalences
from orbits.reports import VerificationReport
from orbits.surface_decomp.cw_model import build_cw_model, cw_automorphism, random_decomposition
from orbits.surface_decomp.lefschetz import (
    ker_s_act_probe,
    lefschetz_check,
    sphere_lift_check,
    tamper,
    tamper_detected,
)
from orbits.surface_decomp.validator import validate_decomposition

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

SUBGROUP_PATTERN = re.compile(r"^\s*(\d*)\s*Z(\d+)\s*$")


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    LATEX = "latex"


class RunConfig(BaseModel):
    """Options shared by every subcommand."""
    command: str = Field(..., description="Subcommand name")
    inputs: List[str] = Field(default_factory=list, description="Input paths or literal arguments")
    output_format: str = Field("text", pattern="^(text|json|latex)$")
    depth: int = Field(default_factory=lambda: config.QUOTIENT_LEVEL, ge=1, description="Period multiplier N for finite quotients")
    seed: int = Field(default_factory=lambda: config.SEED)
    cap: int = Field(default_factory=lambda: config.ORDER_CAP, ge=1, description="Maximal group order")


class CommandOutcome(BaseModel):
    command: str
    exit_code: int = EXIT_OK
    payload: Dict[str, Any] = Field(default_factory=dict)
    text: str = ""
    latex: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.exit_code == EXIT_OK

    def render(self, output_format: str) -> str:
        if output_format == OutputFormat.JSON:
            return json.dumps(self.payload, indent=2, ensure_ascii=False)
        if output_format == OutputFormat.LATEX and self.latex is not None:
            return self.latex
        return self.text


def _failure(command: str, exc: Exception, code: int = EXIT_FAILED) -> CommandOutcome:
    logger.error("%s failed: %s", command, exc)
    return CommandOutcome(
        command=command,
        exit_code=code,
        payload={"error": type(exc).__name__, "message": str(exc)},
        text=f"error: {exc}",
    )


def _from_report(command: str, report: VerificationReport, extra: Optional[Dict[str, Any]] = None) -> CommandOutcome:
    payload = report.model_dump(mode="json")
    payload["passed"] = report.passed
    if extra:
        payload.update(extra)
    return CommandOutcome(
        command=command,
        exit_code=EXIT_OK if report.passed else EXIT_FAILED,
        payload=payload,
        text=report.to_text(),
    )


# --- pi1 / validate ---

def run_pi1(cfg: RunConfig, path: str) -> CommandOutcome:
    """π₁O(f) of the decomposition in path."""
    try:
        data = load_decomposition(path)
        result = pi1_result(data)
    except ValidationError as exc:
        return _failure("pi1", exc, EXIT_USAGE)
    except InvalidDecompositionError as exc:
        outcome = _from_report("pi1", exc.report)
        outcome.exit_code = EXIT_FAILED
        outcome.text = f"invalid decomposition\n{exc.report.to_text()}"
        return outcome
    except (HypothesisViolation, ExprSyntaxError) as exc:
        return _failure("pi1", exc)

    lines = [f"pi1 = {result.expression}", f"case: {result.case.value}"]
    lines += [f"{key} = {value}" for key, value in result.counts.items()]
    lines += [f"warning: {w}" for w in result.warnings]
    return CommandOutcome(command="pi1", payload=result.to_json(), text="\n".join(lines), latex=result.latex)


def run_validate(cfg: RunConfig, path: str) -> CommandOutcome:
    """Full validation report of a decomposition file."""
    try:
        data = load_decomposition(path)
    except ValidationError as exc:
        return _failure("validate", exc, EXIT_USAGE)
    if isinstance(data, SurfaceDecomposition):
        report = validate_surface(data)
    else:
        report = validate_decomposition(data)
    return _from_report("validate", report)


def run_bieberbach(cfg: RunConfig, path: str) -> CommandOutcome:
    """The stabilizer 3×3 diagram of a Möbius decomposition whose disks carry Δ."""
    try:
        data = load_decomposition(path)
        if isinstance(data, SurfaceDecomposition):
            raise HypothesisViolation("a Möbius decomposition", "surface file")
        diagram = bieberbach_diagram(data, depth=cfg.depth, cap=cfg.cap)
    except ValidationError as exc:
        return _failure("bieberbach", exc, EXIT_USAGE)
    except InvalidDecompositionError as exc:
        return _from_report("bieberbach", exc.report)
    except (HypothesisViolation, NotNormalError) as exc:
        return _failure("bieberbach", exc)

    grid = "\n".join("  ->  ".join(row) for row in diagram.labels)
    text = "\n".join([grid] + diagram.notes)
    payload: Dict[str, Any] = {"labels": diagram.labels, "notes": diagram.notes}
    code = EXIT_OK
    if diagram.report is not None:
        payload["report"] = diagram.report.model_dump(mode="json")
        payload["passed"] = diagram.report.passed
        text += "\n" + diagram.report.to_text()
        code = EXIT_OK if diagram.report.passed else EXIT_FAILED
    return CommandOutcome(command="bieberbach", exit_code=code, payload=payload, text=text)


# --- verify ---

def parse_cyclic_subgroup(text: str, n: int) -> List[int]:
    """
    Indices of the subgroup kℤₙ of ℤₙ written "kZn"; "Zn" is the whole group.

    Raises:
        ValueError: malformed text or a modulus other than n
    """
    match = SUBGROUP_PATTERN.match(text)
    if not match or int(match.group(2)) != n:
        raise ValueError(f"expected a subgroup of Z{n} such as 2Z{n}, got {text!r}")
    k = int(match.group(1) or 1)
    return sorted(ConcreteGroup.cyclic(n).generated_subgroup([k % n]))


def verify_three_by_three(b: str, a: str, l: str) -> VerificationReport:
    """3×3 diagram of the subgroups A, L of a cyclic B = ℤₙ."""
    match = SUBGROUP_PATTERN.match(b)
    if not match or match.group(1):
        raise ValueError(f"--b must be a cyclic group Zn, got {b!r}")
    n = int(match.group(2))
    B = ConcreteGroup.cyclic(n)
    diagram = build_3x3(B, parse_cyclic_subgroup(a, n), parse_cyclic_subgroup(l, n))
    return diagram.report


def verify_cw(count: int, seed: int, max_b: int = 6) -> VerificationReport:
    """
    Lefschetz, KerSAct and sphere-lift checks for every η on seeded random models.

    A single tampered automorphism per model must be rejected.
    """
    rng = Random(seed)
    report = VerificationReport(target="cw")
    automorphisms = 0
    for index in range(count):
        d = random_decomposition(rng, max_b=max_b)
        model = build_cw_model(d)
        label = f"model {index} (b={model.b}, mode={model.mode})"
        for j in range(model.b):
            w = cw_automorphism(model, j)
            automorphisms += 1
            lefschetz = lefschetz_check(w)
            ker = ker_s_act_probe(w)
            lift = sphere_lift_check(w)
            report.add(f"{label} eta={j}: Lefschetz", lefschetz.holds, f"L = {lefschetz.lefschetz_number}", [j])
            report.add(f"{label} eta={j}: KerSAct", ker.agree and ker.eta_consistent is not False, str(ker.conditions), [j])
            report.add(f"{label} eta={j}: sphere lift", lift.holds, f"counts {lift.counts}", [j])
        tampered = tamper(cw_automorphism(model, rng.randrange(model.b)), rng)
        report.add(f"{label}: tampering detected", tamper_detected(tampered), "one sign flipped")
    report.details.update({"models": count, "automorphisms": automorphisms, "seed": seed})
    return report


def run_verify(cfg: RunConfig, target: str, params: Dict[str, Any]) -> CommandOutcome:
    """
    Run one verification suite.

    params holds the target-specific options: g, h, gamma, m for wreath and
    twisted; b, a, l for 3x3; samples for mul-oracle; count for cw.
    """
    command = f"verify {target}"
    try:
        if target == "wreath":
            report = verify_theta_wreath(parse_expr(params["g"]), params["m"], depth=cfg.depth)
        elif target == "twisted":
            H = parse_expr(params["h"])
            gamma = parse_involution(params.get("gamma") or "id", H)
            report = verify_theta_twisted(parse_expr(params["g"]), H, gamma, params["m"], depth=cfg.depth)
        elif target == "3x3":
            report = verify_three_by_three(params["b"], params["a"], params["l"])
        elif target == "mul-oracle":
            report = verify_mul_oracle(params.get("samples"), seed=cfg.seed)
        elif target == "cw":
            report = verify_cw(params.get("count") or 20, cfg.seed)
        else:
            return _failure(command, ValueError(f"unknown verification target {target!r}"), EXIT_USAGE)
    except (ExprSyntaxError, ValueError, KeyError) as exc:
        return _failure(command, exc, EXIT_USAGE)
    except (OrderCapExceeded, InfiniteLeafError, HypothesisViolation, NotNormalError, NonCellularError, ConstructionError) as exc:
        return _failure(command, exc)
    return _from_report(command, report)


# --- poly ---

def run_poly(cfg: RunConfig, action: str, text: str, variable: str = "x") -> CommandOutcome:
    command = f"poly {action}"
    try:
        g = parse_poly(text)
        if action == "squarefree":
            value = is_squarefree(g)
            return CommandOutcome(
                command=command, payload={"polynomial": str(g), "squarefree": value}, text=str(value).lower()
            )
        if action == "certificate":
            certificate = jacobian_certificate(g, variable)
            lines = [
                f"P = {certificate.P}",
                f"Q = {certificate.Q}",
                f"m = {certificate.m}",
                f"identity verified: {certificate.verified}",
            ]
            return CommandOutcome(
                command=command,
                exit_code=EXIT_OK if certificate.verified else EXIT_FAILED,
                payload=certificate.to_json(),
                text="\n".join(lines),
            )
        if action == "milnor":
            profile = milnor_report(g)
            return CommandOutcome(command=command, payload=profile.model_dump(mode="json"), text=str(profile.mu))
        if action == "equivalences":
            return _from_report(command, mu_equivalences(g))
    except PolySyntaxError as exc:
        return _failure(command, exc, EXIT_USAGE)
    except NotSquarefreeError as exc:
        return _failure(command, exc)
    return _failure(command, ValueError(f"unknown poly action {action!r}"), EXIT_USAGE)


# --- group ---

def _element(G, text: str):
    return element_from_json(G, json.loads(text))


def run_group(cfg: RunConfig, action: str, expression: str, elements: List[str], leaf_modulus: Optional[int] = None) -> CommandOutcome:
    """mul, inv and order on JSON elements; quotient on the expression alone."""
    command = f"group {action}"
    try:
        G = parse_expr(expression)
        if action == "mul":
            value = mul(G, _element(G, elements[0]), _element(G, elements[1]))
        elif action == "inv":
            value = inverse(G, _element(G, elements[0]))
        elif action == "order":
            value = element_order(G, _element(G, elements[0]), cfg.cap)
        elif action == "quotient":
            Q = finite_quotient(G, N=cfg.depth, leaf_modulus=leaf_modulus, cap=cfg.cap)
            invariants = Q.abelian_invariants()
            payload = {"group": format_expr(G), "N": cfg.depth, "order": Q.order, "abelian_invariants": invariants}
            return CommandOutcome(
                command=command, payload=payload, text=f"order {Q.order}, abelian invariants {invariants}"
            )
        else:
            return _failure(command, ValueError(f"unknown group action {action!r}"), EXIT_USAGE)
    except (ExprSyntaxError, IndexError, json.JSONDecodeError) as exc:
        return _failure(command, exc, EXIT_USAGE)
    except OrbitsError as exc:
        return _failure(command, exc)

    rendered = element_to_json(value)
    return CommandOutcome(
        command=command,
        payload={"group": format_expr(G), "result": rendered},
        text=json.dumps(rendered),
    )
