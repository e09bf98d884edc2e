"""Worked examples as ready-to-run input documents.

Names take optional comma-separated parameters after a colon, e.g.
``blowup_p2:3,1`` for the class ``3H - E`` on the blow-up of P^2 at a point.
"""

from __future__ import annotations

from .exact import as_fraction


def _doc(name: str, rays, cones, divisor, labels=None) -> dict:
    doc = {
        "name": name,
        "dim": len(rays[0]),
        "rays": [list(r) for r in rays],
        "max_cones": [list(c) for c in cones],
        "divisor": [str(as_fraction(a)) for a in divisor],
    }
    if labels:
        doc["labels"] = list(labels)
    return doc


def p1(d=2):
    """P^1 with O(d): the interval [0, d]."""
    return _doc(f"p1:{d}", [(1,), (-1,)], [(0,), (1,)], [0, d], ["D0", "Dinf"])


def p2_anticanonical():
    return _doc("p2_anticanonical", [(1, 0), (0, 1), (-1, -1)],
                [(0, 1), (1, 2), (0, 2)], [1, 1, 1], ["D1", "D2", "D0"])


def p2(d=1):
    """P^2 with O(d), written as d times the divisor of the third ray."""
    return _doc(f"p2:{d}", [(1, 0), (0, 1), (-1, -1)],
                [(0, 1), (1, 2), (0, 2)], [0, 0, d], ["D1", "D2", "D0"])


def p1xp1(a=1, b=1):
    """P^1 x P^1 with bidegree (a, b): the box [0, a] x [0, b]."""
    return _doc(f"p1xp1:{a},{b}", [(1, 0), (0, 1), (-1, 0), (0, -1)],
                [(0, 1), (1, 2), (2, 3), (0, 3)], [0, 0, a, b])


def blowup_p2(x=3, y=1):
    """Bl_p P^2 with ``xH - yE``.

    The fan is the star subdivision of the P^2 fan at (1, 1).  H is the
    pullback of the line class, linearly equivalent to the divisor of the
    ray (-1, -1), and E is the divisor of the new ray (1, 1), so the
    coefficients are ``(0, 0, x, -y)``.  Ample for ``x > y > 0``.
    """
    return _doc(f"blowup_p2:{x},{y}", [(1, 0), (0, 1), (-1, -1), (1, 1)],
                [(0, 3), (1, 3), (1, 2), (0, 2)], [0, 0, x, -y],
                ["D1", "D2", "H", "E"])


def hirzebruch(a=1, b=1, c=1):
    """Hirzebruch surface F_a; the polytope is the trapezoid
    (0,0), (c,0), (c+ab, b), (0,b).  Ample for b, c > 0."""
    return _doc(f"hirzebruch:{a},{b},{c}", [(1, 0), (0, 1), (-1, a), (0, -1)],
                [(0, 1), (1, 2), (2, 3), (0, 3)], [0, 0, c, b])


def wp112():
    """Weighted projective plane P(1,1,2), anticanonically polarised."""
    return _doc("wp112", [(1, 0), (0, 1), (-1, -2)],
                [(0, 1), (1, 2), (0, 2)], [1, 1, 1])


def p3_anticanonical():
    return _doc("p3_anticanonical", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
                [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], [1, 1, 1, 1])


def p1xp1xp1(a=1, b=1, c=1):
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    cones = [tuple(sorted((i, j, k))) for i in (0, 3) for j in (1, 4) for k in (2, 5)]
    return _doc(f"p1xp1xp1:{a},{b},{c}", rays, cones, [0, 0, 0, a, b, c])


BUILDERS = {
    "p1": p1,
    "p2_anticanonical": p2_anticanonical,
    "p2": p2,
    "p1xp1": p1xp1,
    "blowup_p2": blowup_p2,
    "hirzebruch": hirzebruch,
    "wp112": wp112,
    "p3_anticanonical": p3_anticanonical,
    "p1xp1xp1": p1xp1xp1,
}

# every entry is a lattice polytope, so the counting oracle applies to all of them
DEFAULT_GALLERY = (
    "p1:2",
    "p2_anticanonical",
    "p2:1",
    "p1xp1:1,1",
    "p1xp1:2,3",
    "blowup_p2:3,1",
    "blowup_p2:3,2",
    "hirzebruch:1",
    "hirzebruch:2,1,1",
    "wp112",
    "p3_anticanonical",
)


def example(name: str) -> dict:
    base, _, args = name.partition(":")
    if base not in BUILDERS:
        raise KeyError(f"unknown example {name!r}; valid names: {', '.join(sorted(BUILDERS))}")
    params = [_param(a) for a in args.split(",")] if args else []
    return BUILDERS[base](*params)


def _param(text: str):
    value = as_fraction(text)
    return int(value) if value.denominator == 1 else value


def names() -> list[str]:
    return list(DEFAULT_GALLERY)


def load(name: str):
    """The polarised toric variety of a gallery entry, as a ToricDivisor."""
    from .fan import Fan
    from .polytope import ToricDivisor

    doc = example(name)
    fan = Fan.build(doc["rays"], doc["max_cones"])
    return ToricDivisor(fan, tuple(as_fraction(a) for a in doc["divisor"]))
