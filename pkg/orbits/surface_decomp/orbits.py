"""
Orbits of the ℤ_b-action on signed disks.

The orbit of (Y, +1) is enumerated by repeated application of sigma, which
is the right-shift column order used by the CW model.
"""
import logging
from typing import List

from orbits.errors import EtaError, InvalidDecompositionError
from orbits.surface_decomp.models import MobiusDecomposition, OrbitRecord, OrbitType

logger = logging.getLogger(__name__)


def signed_orbit(d: MobiusDecomposition, disk: int, sign: int = 1) -> List[tuple]:
    """(disk, sign), sigma(disk, sign), ... up to the first repetition."""
    states = [(disk, sign)]
    seen = {(disk, sign)}
    state = d.act(disk, sign)
    # a bijective sigma always returns; the bound guards malformed input
    while state not in seen and len(states) <= 2 * d.n:
        states.append(state)
        seen.add(state)
        state = d.act(*state)
    return states


def enumerate_orbits(d: MobiusDecomposition) -> List[OrbitRecord]:
    """
    Disk orbits without validation; sigma targets must at least be in range.

    The representative of each orbit is its smallest disk index.
    """
    records = []
    visited = set()
    for disk in range(1, d.n + 1):
        if disk in visited:
            continue
        states = signed_orbit(d, disk)
        members, signs = [], []
        for target, sign in states:
            if target not in members:
                members.append(target)
                signs.append(sign)
        visited.update(members)
        kind = OrbitType.T2 if (disk, -1) in states else OrbitType.T1
        records.append(
            OrbitRecord(
                type=kind,
                representative_group=d.disks[disk - 1].group,
                length=len(members),
                disks=members,
                signs=signs,
            )
        )
    return records


def orbit_counts(d: MobiusDecomposition, records: List[OrbitRecord]) -> dict:
    b = d.b or 0
    counts = {
        "n": d.n,
        "b": b,
        "d": sum(1 for r in records if r.type == OrbitType.T1),
        "e": sum(1 for r in records if r.type == OrbitType.T2),
    }
    counts["m"] = b // 2 if b % 2 == 0 else 0
    return counts


def classify_orbits(d: MobiusDecomposition) -> List[OrbitRecord]:
    """
    Partition the disks into sigma-orbits and type them T1 or T2.

    Raises:
        InvalidDecompositionError: d fails validation (the report is attached)
    """
    from orbits.surface_decomp.validator import validate_decomposition

    report = validate_decomposition(d)
    if not report.passed:
        raise InvalidDecompositionError(report)
    records = enumerate_orbits(d)
    logger.debug(
        "Classified %d orbits: %s", len(records), ", ".join(f"{r.type.value}{r.disks}" for r in records)
    )
    return records


def eta_value(d: MobiusDecomposition, shift: int) -> int:
    """
    η of an element whose raw boundary shift is `shift` edges.

    Raises:
        EtaError: shift is not a multiple of a
    """
    if shift % d.a != 0:
        raise EtaError(f"raw shift {shift} is not a multiple of a = {d.a}")
    return shift // d.a
