"""Transfer of a neighborhood to a return-time set with the symmetric property.

Cylinders are clopen, so for a cylinder U the refined neighborhood V can be U
itself and F' = N(x, V).  For finite I ⊂ F' and J ⊂ G minus F', the cylinder
W fixing x on K·(I ∪ J) (K the support of V) satisfies

    N(x, W) ⊂ ∩_{f in I} f^-1 F' ∩ ∩_{f in J} f^-1 (G minus F'),

which the certificate re-checks by scanning a ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..setcalc import symmetric_intersection
from ..subshift import Cylinder, return_expr, return_set


@dataclass
class RefineLevel:
    n: int
    i_size: int
    j_size: int
    w_size: int
    scanned: int
    returns: int
    violations: list

    def to_json(self, ambient):
        return {"n": self.n, "I": self.i_size, "J": self.j_size, "W": self.w_size, "scanned": self.scanned,
                "returns": self.returns, "violations": [ambient.format(g) for g in self.violations]}


@dataclass
class RefineCertificate:
    ambient: object
    levels: list = field(default_factory=list)

    @property
    def ok(self):
        return all(not lv.violations for lv in self.levels)

    def to_json(self):
        return {"ok": self.ok, "levels": [lv.to_json(self.ambient) for lv in self.levels]}


def refine_neighborhood(x, u, horizon, levels=(1, 2, 3), scan_level=None):
    """Return (v, fprime, certificate) for the point x and cylinder u.

    For each n in ``levels``, I_n and J_n are the members of ball(n) inside and
    outside F'; the certificate records every g in ball(scan_level) that
    returns to W but misses the symmetric intersection (there should be none).
    """
    a = x.ambient
    v = u
    fprime = return_expr(x, v, horizon)
    scan_level = horizon if scan_level is None else scan_level
    cert = RefineCertificate(a)
    support = v.support
    for n in levels:
        ball = list(a.ball(n))
        inside = [f for f in ball if fprime.contains(f)]
        outside = [f for f in ball if not fprime.contains(f)]
        cells = {a.mul(k, f) for k in support for f in ball}
        w = Cylinder.of(a, {c: x.value(c) for c in cells})
        target = symmetric_intersection(fprime, inside, outside)
        hits = return_set(x, w, scan_level)
        bad = [g for g in a.sorted(hits) if not target.contains(g)]
        cert.levels.append(RefineLevel(n, len(inside), len(outside), len(cells), a.ball_size(scan_level),
                                       len(hits), bad[:10]))
    return v, fprime, cert
