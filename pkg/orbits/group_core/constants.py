from typing import Dict

# Sort rank of Direct factors in normal form; ℤ sorts last.
FACTOR_RANK: Dict[str, int] = {
    "unit": 0,
    "cyclic": 1,
    "direct": 2,
    "wrz": 3,
    "wrzm": 4,
    "wrzz": 5,
    "wrzzmn": 6,
    "twz": 7,
    "twzm": 8,
    "int": 9,
}

# Grammar keywords and the arity of their integer parameters.
WREATH_KEYWORDS: Dict[str, int] = {
    "Wr": 1,
    "WrM": 1,
    "Wr2": 2,
    "Wr2M": 2,
}

TWISTED_KEYWORDS = ("TwWr", "TwWrM")

INVOLUTION_KEYWORDS = ("id", "inv", "perm", "table")

PRODUCT_OPERATOR = "x"
