import logging
from typing import List, Optional

from pydantic import ValidationError

from orbits.errors import ExprSyntaxError
from orbits.group_core.classifier import is_in_class_G
from orbits.group_core.formatter import format_expr
from orbits.group_core.grammar import parse_involution
from orbits.group_core.models import TwistedWrZ, Unit, direct
from orbits.group_core.rewrite_rules import normalize
from orbits.reports import CheckResult, CheckStatus, VerificationReport
from orbits.surface_decomp.models import MobiusDecomposition, OrbitRecord, OrbitType
from orbits.surface_decomp.orbits import enumerate_orbits, orbit_counts

logger = logging.getLogger(__name__)

ORBIT_CHECKS = (
    "star rule",
    "free action",
    "groups constant on orbits",
    "parity",
    "orbit count",
    "T2 half-turn",
    "involution",
)


class DecompositionValidator:
    """
    Checks a MobiusDecomposition against every structural constraint.

    Violations are collected into a VerificationReport; nothing is raised.
    """

    def __init__(self, d: MobiusDecomposition):
        self.d = d
        self.report = VerificationReport(target=d.name or "decomposition")

    def validate(self) -> VerificationReport:
        d, report = self.d, self.report
        b = d.b
        report.add(
            "a divides c", b is not None, f"b = c/a = {b}" if b else f"a = {d.a} does not divide c = {d.c}"
        )
        entries_ok = self._check_entries()
        if b is None or not entries_ok:
            for name in ORBIT_CHECKS:
                self._skip(name, "needs b = c/a and a bijective sigma")
            return report

        records = enumerate_orbits(d)
        counts = orbit_counts(d, records)
        report.details["counts"] = counts
        report.details["orbits"] = [
            {"type": r.type.value, "disks": r.disks, "signs": r.signs, "group": format_expr(r.representative_group)}
            for r in records
        ]
        self._check_star_rule()
        self._check_freeness(b)
        self._check_constant_groups(records)
        self._check_parity(b, counts)
        self._check_count(counts)
        self._check_half_turn(b, records)
        self._check_involution(records)
        self._check_class_G()
        logger.debug("Validated %s: %s", report.target, "pass" if report.passed else "fail")
        return report

    def _skip(self, name: str, message: str) -> None:
        self.report.checks.append(CheckResult(check_name=name, status=CheckStatus.SKIP, message=message))

    def _check_entries(self) -> bool:
        d, report = self.d, self.report
        halves = [d.sigma] if d.sigma_negative is None else [d.sigma, d.sigma_negative]
        bad = [
            [i, list(pair)] for half in halves for i, pair in enumerate(half, start=1)
            if not (1 <= pair[0] <= d.n) or pair[1] not in (1, -1)
        ]
        report.add("sigma entries", not bad, "targets in 1..n, signs ±1" if not bad else f"{len(bad)} bad entries", bad[:1])
        if bad:
            self._skip("sigma bijective", "sigma entries out of range")
            return False
        duplicate = None
        for half in halves:
            targets = [t for t, _ in half]
            duplicate = next((t for t in targets if targets.count(t) > 1), None)
            if duplicate is not None:
                break
        report.add(
            "sigma bijective",
            duplicate is None,
            "sigma permutes the disks" if duplicate is None else f"disk {duplicate} is hit twice",
            [duplicate],
        )
        return duplicate is None

    def _check_star_rule(self) -> None:
        d = self.d
        if d.sigma_negative is None:
            self.report.add("star rule", True, "sigma(Y, -1) derived from sigma(Y, +1)")
            return
        offender = next(
            (
                y for y, ((target, sign), negative) in enumerate(zip(d.sigma, d.sigma_negative), start=1)
                if tuple(negative) != (target, -sign)
            ),
            None,
        )
        self.report.add(
            "star rule",
            offender is None,
            "sigma commutes with the sign flip" if offender is None else f"sigma(disk {offender}, -1) breaks the star rule",
            [offender],
        )

    def _check_freeness(self, b: int) -> None:
        d = self.d
        witness: Optional[List] = None
        for y in range(1, d.n + 1):
            for sign in (1, -1):
                state, k = d.act(y, sign), 1
                while state != (y, sign) and k < b:
                    state, k = d.act(*state), k + 1
                if state != (y, sign) or k != b:
                    witness = [y, sign, k]
                    break
            if witness:
                break
        if witness is None:
            message = f"every signed orbit has exactly {b} elements"
        elif witness[2] < b:
            message = f"(disk {witness[0]}, {witness[1]:+d}) returns after {witness[2]} steps"
        else:
            message = f"sigma^{b} moves (disk {witness[0]}, {witness[1]:+d})"
        self.report.add("free action", witness is None, message, witness)

    def _check_constant_groups(self, records: List[OrbitRecord]) -> None:
        d = self.d
        for record in records:
            reference = normalize(d.disks[record.disks[0] - 1].group)
            for disk in record.disks[1:]:
                if normalize(d.disks[disk - 1].group) != reference:
                    self.report.add(
                        "groups constant on orbits",
                        False,
                        f"disks {record.disks[0]} and {disk} share an orbit but carry different groups",
                        [record.disks[0], disk],
                    )
                    return
        self.report.add("groups constant on orbits", True, "disk groups are constant along orbits")

    def _check_parity(self, b: int, counts: dict) -> None:
        e = counts["e"]
        if e == 0:
            ok, message = b % 2 == 1, f"all orbits are T1, so b = {b} must be odd"
        else:
            ok, message = b % 2 == 0, f"{e} T2 orbits need an even b, got b = {b}"
        self.report.add("parity", ok, "parity of b matches the orbit types" if ok else message, [b, e])

    def _check_count(self, counts: dict) -> None:
        n, b, d_, e = counts["n"], counts["b"], counts["d"], counts["e"]
        ok = 2 * n == b * (2 * d_ + e)
        self.report.add(
            "orbit count",
            ok,
            f"n = b(d + e/2) = {n}" if ok else f"n = {n} but b(d + e/2) = {b * (2 * d_ + e) / 2:g}",
            [n, b, d_, e],
        )

    def _check_half_turn(self, b: int, records: List[OrbitRecord]) -> None:
        d = self.d
        t2 = [r for r in records if r.type == OrbitType.T2]
        if not t2:
            self._skip("T2 half-turn", "no T2 orbits")
            return
        m = b // 2
        for record in t2:
            y = record.disks[0]
            if b % 2 or d.act_power(y, 1, m) != (y, -1):
                self.report.add("T2 half-turn", False, f"sigma^{m} does not reverse disk {y}", [y])
                return
        self.report.add("T2 half-turn", True, f"sigma^{m} reverses every T2 disk")

    def _check_involution(self, records: List[OrbitRecord]) -> None:
        if self.d.gamma is None:
            self._skip("involution", "no involution given; identity is used")
            return
        h = direct(*(r.representative_group for r in records if r.type == OrbitType.T2))
        try:
            TwistedWrZ(Unit(), h, parse_involution(self.d.gamma, h), 1)
        except ExprSyntaxError as exc:
            self.report.add("involution", False, f"gamma does not fit H = {format_expr(h)}: {exc.reason}")
            return
        except ValidationError as exc:
            self.report.add("involution", False, f"gamma does not fit H = {format_expr(h)}: {exc.errors()[0]['msg']}")
            return
        self.report.add("involution", True, f"gamma fits H = {format_expr(h)}")

    def _check_class_G(self) -> None:
        d = self.d
        outside = [i for i, disk in enumerate(d.disks, start=1) if not is_in_class_G(disk.group)]
        self.report.add(
            "disk groups in class G",
            not outside,
            "every disk group is in class G" if not outside else f"disks {outside} are outside class G",
            outside[:1],
            warn_only=True,
        )
        self.report.add(
            "cylinder group in class G",
            is_in_class_G(d.cylinder_group),
            f"A = {format_expr(d.cylinder_group)}",
            warn_only=True,
        )


def validate_decomposition(d: MobiusDecomposition) -> VerificationReport:
    """Run every decomposition check; the report lists the violated constraints."""
    return DecompositionValidator(d).validate()
