from orbits.group_core.models import Direct, IntLine, Unit, WrZ
from orbits.group_core.rewrite_rules import normalize


def _built_from_rules(e) -> bool:
    if isinstance(e, (Unit, IntLine)):
        return True
    if isinstance(e, Direct):
        return all(_built_from_rules(f) for f in e.factors)
    if isinstance(e, WrZ):
        return _built_from_rules(e.base)
    return False


def is_in_class_G(e) -> bool:
    """
    True when the normal form of e is generated from 1 by direct products and G ≀ₘ ℤ.

    A twisted product only qualifies when normalization turns it into a plain
    wreath product; finite cyclic leaves never do.
    """
    return _built_from_rules(normalize(e))
