"""Bundled reference equations with known invariants.

These hypersurfaces are the package's golden regression set: smooth
supersingular quartic K3 surfaces realizing every Artin invariant reachable
over F_2 (3..9, each containing the line x = w = 0) and over F_3 (1..10),
one quintic Calabi-Yau threefold over F_2 with the record non-splitting
index 58, and a rational-double-point quartic over F_2 whose non-splitting
index (2) differs from the Artin invariant of its resolution -- a reminder
that the dictionary needs smoothness.

Run them all through the engine with ``qfsplit tables``; any drift is a
regression.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffield import field
from .polyring import Polynomial, RingConfig, parse_poly


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    p: int
    weights: tuple
    equation: str
    expected_sigma: int | None = None      # = ns for these smooth supersingular rows
    expected_ns: int | None = None         # set when sigma is not the right label
    line: tuple | None = None              # coordinate-axis line certificate
    smooth: bool = True

    def ring(self) -> RingConfig:
        return RingConfig(field(self.p), self.weights)

    def polynomial(self) -> Polynomial:
        return parse_poly(self.equation, self.ring())

    @property
    def expected_ns_value(self) -> int:
        return self.expected_ns if self.expected_ns is not None else self.expected_sigma


SUPERSINGULAR_QUARTICS_F2 = [
    CatalogEntry("f2-sigma3", 2, (1, 1, 1, 1), "x^4 + x^2y^2 + xy^3 + yw^3 + z^3w", 3, line=(0, 3)),
    CatalogEntry("f2-sigma4", 2, (1, 1, 1, 1), "x^4 + xy^3 + z^3w + yzw^2 + zw^3", 4, line=(0, 3)),
    CatalogEntry("f2-sigma5", 2, (1, 1, 1, 1), "x^4 + xy^3 + z^3w + y^2w^2 + yw^3", 5, line=(0, 3)),
    CatalogEntry("f2-sigma6", 2, (1, 1, 1, 1), "x^4 + x^2y^2 + xy^3 + yz^2w + z^3w + zw^3", 6, line=(0, 3)),
    CatalogEntry("f2-sigma7", 2, (1, 1, 1, 1), "x^4 + x^3y + xz^3 + y^3w + w^4", 7, line=(0, 3)),
    CatalogEntry("f2-sigma8", 2, (1, 1, 1, 1), "x^4 + xy^3 + x^2yw + z^3w + yzw^2 + xw^3", 8, line=(0, 3)),
    CatalogEntry("f2-sigma9", 2, (1, 1, 1, 1), "x^4 + xy^3 + yw^3 + z^3w", 9, line=(0, 3)),
]

SUPERSINGULAR_QUARTICS_F3 = [
    CatalogEntry("f3-sigma1", 3, (1, 1, 1, 1), "x^4 + y^4 + z^4 + w^4", 1),
    CatalogEntry("f3-sigma2", 3, (1, 1, 1, 1), "x^4 + y^3z + yz^3 + xy^2w + w^4", 2),
    CatalogEntry("f3-sigma3", 3, (1, 1, 1, 1), "x^4 + x^2y^2 + y^3z + yz^3 + w^4", 3),
    CatalogEntry("f3-sigma4", 3, (1, 1, 1, 1), "x^3y + xy^3 + x^2yz + z^3w + zw^3", 4),
    CatalogEntry("f3-sigma5", 3, (1, 1, 1, 1), "x^3y + x^2yz + y^3z + z^3w + xw^3", 5),
    CatalogEntry("f3-sigma6", 3, (1, 1, 1, 1), "x^4 + x^3y + x^2yz + y^3z + z^3w + xw^3", 6),
    CatalogEntry("f3-sigma7", 3, (1, 1, 1, 1), "-x^4 + x^3y + y^4 - x^2yz + y^3z + x^2zw + z^3w + xw^3", 7),
    CatalogEntry("f3-sigma8", 3, (1, 1, 1, 1), "x^4 + x^3y + x^3z + x^2yz - y^3z + y^2z^2 + z^3w + xyw^2 + xw^3", 8),
    CatalogEntry("f3-sigma9", 3, (1, 1, 1, 1), "-x^4 + x^3y + x^3z + x^2yz + y^3z + y^3w - z^3w + xw^3", 9),
    CatalogEntry("f3-sigma10", 3, (1, 1, 1, 1), "x^4 + x^3y + xy^3 + x^2yz + y^3z + x^3w + y^2zw + z^3w + xyw^2 + xw^3", 10),
]

QUINTIC_THREEFOLD_F2 = CatalogEntry(
    "quintic-ns58",
    2,
    (1, 1, 1, 1, 1),
    "x^5 + x^4y + x^2y^3 + y^5 + x^3yz + x^3z^2 + z^5 + x^2y^2w + x^3w^2 + xy^2w^2"
    " + yz^2w^2 + w^5 + x^4u + xy^3u + xz^2u^2 + xw^2u^2 + yw^2u^2 + u^5",
    expected_ns=58,
)

RDP_QUARTIC_F2 = CatalogEntry(
    "rdp-quartic-ns2",
    2,
    (1, 1, 1, 1),
    "x^4 + y^4 + z^4 + w^4 + x^2y^2 + x^2z^2 + y^2z^2 + x^2yz + xy^2z + xyz^2",
    expected_ns=2,
    smooth=False,  # rational double points; resolution has Artin invariant 1
)


def all_entries() -> list:
    return (
        SUPERSINGULAR_QUARTICS_F2
        + SUPERSINGULAR_QUARTICS_F3
        + [QUINTIC_THREEFOLD_F2, RDP_QUARTIC_F2]
    )
