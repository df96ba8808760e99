from typing import Literal

from orbits.group_core.models import (
    Cyclic,
    Direct,
    FactorPermutation,
    IdentityInvolution,
    IntLine,
    TableInvolution,
    TwistedWrZ,
    TwistedWrZm,
    Unit,
    WrZ,
    WrZm,
    WrZZ,
    WrZZmn,
)

Style = Literal["plain", "latex"]


def format_expr(e, style: Style = "plain") -> str:
    """Render a GroupExpr. Plain output parses back to the same expression."""
    if style == "plain":
        return _plain(e)
    if style == "latex":
        return _latex(e)
    raise ValueError(f"Unknown style '{style}'")


def format_involution(gamma) -> str:
    if isinstance(gamma, IdentityInvolution):
        return "id"
    if isinstance(gamma, TableInvolution):
        if gamma.name == "inv":
            return "inv"
        return "table[" + ",".join(str(i) for i in gamma.mapping) + "]"
    if isinstance(gamma, FactorPermutation):
        text = "perm[" + ",".join(str(i) for i in gamma.perm) + "]"
        if any(not isinstance(inner, IdentityInvolution) for inner in gamma.inner):
            text += "(" + ",".join(format_involution(inner) for inner in gamma.inner) + ")"
        return text
    raise TypeError(f"Not an involution: {gamma!r}")


def _plain(e) -> str:
    if isinstance(e, Unit):
        return "1"
    if isinstance(e, IntLine):
        return "Z"
    if isinstance(e, Cyclic):
        return f"Z{e.m}"
    if isinstance(e, Direct):
        parts = [f"({_plain(f)})" if isinstance(f, Direct) else _plain(f) for f in e.factors]
        return " x ".join(parts)
    if isinstance(e, WrZ):
        return f"Wr({_plain(e.base)}, {e.m})"
    if isinstance(e, WrZm):
        return f"WrM({_plain(e.base)}, {e.m})"
    if isinstance(e, WrZZ):
        return f"Wr2({_plain(e.base)}, {e.m}, {e.n})"
    if isinstance(e, WrZZmn):
        return f"Wr2M({_plain(e.base)}, {e.m}, {e.n})"
    if isinstance(e, (TwistedWrZ, TwistedWrZm)):
        keyword = "TwWr" if isinstance(e, TwistedWrZ) else "TwWrM"
        return f"{keyword}({_plain(e.g)}, {_plain(e.h)}, {format_involution(e.gamma)}, {e.m})"
    raise TypeError(f"Not a group expression: {e!r}")


def _latex_operand(e) -> str:
    text = _latex(e)
    if isinstance(e, (Unit, IntLine, Cyclic)):
        return text
    return f"({text})"


def _latex_gamma(gamma) -> str:
    return r"\mathrm{id}" if isinstance(gamma, IdentityInvolution) else r"\gamma"


def _latex(e) -> str:
    if isinstance(e, Unit):
        return r"\mathbb{1}"
    if isinstance(e, IntLine):
        return r"\mathbb{Z}"
    if isinstance(e, Cyclic):
        return rf"\mathbb{{Z}}_{{{e.m}}}"
    if isinstance(e, Direct):
        return r" \times ".join(
            _latex(f) if isinstance(f, (Unit, IntLine, Cyclic)) else _latex_operand(f)
            for f in e.factors
        )
    if isinstance(e, WrZ):
        return rf"{_latex_operand(e.base)}\wr_{{{e.m}}}\mathbb{{Z}}"
    if isinstance(e, WrZm):
        return rf"{_latex_operand(e.base)}\wr_{{{e.m}}}\mathbb{{Z}}_{{{e.m}}}"
    if isinstance(e, WrZZ):
        return rf"{_latex_operand(e.base)}\wr_{{{e.m},{e.n}}}\mathbb{{Z}}^{{2}}"
    if isinstance(e, WrZZmn):
        return (
            rf"{_latex_operand(e.base)}\wr_{{{e.m},{e.n}}}"
            rf"(\mathbb{{Z}}_{{{e.m}}}\times\mathbb{{Z}}_{{{e.n}}})"
        )
    if isinstance(e, (TwistedWrZ, TwistedWrZm)):
        pair = rf"({_latex(e.g)},{_latex(e.h)})"
        quotient = r"\mathbb{Z}" if isinstance(e, TwistedWrZ) else rf"\mathbb{{Z}}_{{{2 * e.m}}}"
        return rf"{pair}\wr_{{{_latex_gamma(e.gamma)},{e.m}}}{quotient}"
    raise TypeError(f"Not a group expression: {e!r}")
