"""Reported invariant values: finite integers or an audited infinity.

An infinite height / index is always reported together with the cap the
scan ran to, so "infinity" is auditable.  ``cap=None`` marks values that
are infinite unconditionally (no scan was needed).  ``exact=False`` marks
caps that are only heuristic (semilinear recursions over extension fields).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Infinite:
    cap: int | None = None
    exact: bool = True

    def __str__(self):
        if self.cap is None:
            return "infinity"
        kind = "" if self.exact else ", heuristic"
        return f"infinity (cap {self.cap}{kind})"

    def __repr__(self):
        return f"Infinite(cap={self.cap}, exact={self.exact})"


def is_infinite(value) -> bool:
    return isinstance(value, Infinite)


def value_to_json(value) -> dict:
    """Uniform JSON shape: {"value": int | "infinity", "cap": int | None}."""
    if is_infinite(value):
        return {"value": "infinity", "cap": value.cap, "exact": value.exact}
    return {"value": value, "cap": None}


def format_value(value) -> str:
    return str(value)
