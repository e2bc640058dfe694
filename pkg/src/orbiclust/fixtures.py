"""Bundled triangulations.

``c2tilde(j)`` is the five-step flip chain of the type C~2 example on a digon
with two orbifold points; ``hexagon()`` carries two orbifold points and
``disk(m)`` is a disk with m boundary marked points and one orbifold point.
"""

from __future__ import annotations

from .orbifold import Arc, Triangulation, flip_sequence

# flip sequence carrying T0 to T4
C2TILDE_FLIPS = (1, 3, 2, 3)


def c2tilde_t0() -> Triangulation:
    return Triangulation(
        arcs=(Arc(1, True), Arc(2, False), Arc(3, True)),
        boundary=("bR", "bL"),
        triangles=((2, 1, "bR"), (3, 2, "bL")),
        orbifold_points=2,
    )


def c2tilde(j: int = 0) -> Triangulation:
    """T_j of the C~2 chain, 0 <= j <= 4."""
    if not 0 <= j <= 4:
        raise ValueError("j must be between 0 and 4")
    return flip_sequence(c2tilde_t0(), C2TILDE_FLIPS[:j])


def digon_two_points() -> Triangulation:
    """Digon with both orbifold points in one triangle: a 3-cycle with two loops."""
    return Triangulation(
        arcs=(Arc(1, False), Arc(2, True), Arc(3, True)),
        boundary=("b1", "b2"),
        triangles=((1, 3, 2), (1, "b1", "b2")),
        orbifold_points=2,
    )


def hexagon() -> Triangulation:
    """Hexagon with two orbifold points, seven arcs (k1 and k2 pending)."""
    return Triangulation(
        arcs=(Arc("k1", True), Arc("a1"), Arc("d2"), Arc("d3"), Arc("d4"), Arc("k2", True), Arc("a2")),
        boundary=("s01", "s12", "s23", "s34", "s45", "s50"),
        triangles=(
            ("s01", "k1", "a1"),
            ("d2", "s12", "a1"),
            ("d3", "s23", "d2"),
            ("d4", "a2", "d3"),
            ("s34", "k2", "a2"),
            ("s50", "s45", "d4"),
        ),
        orbifold_points=2,
    )


def disk(m: int) -> Triangulation:
    """Disk with m >= 3 marked points and one orbifold point (m - 1 arcs).

    The pending arc ``k`` sits in a digon cut off by ``a1``; diagonals ``d2``
    up to ``d{m-2}`` fan out from marked point 0.
    """
    if m < 3:
        raise ValueError("need at least three marked points")
    bnd = [f"s{i}{i + 1}" for i in range(m - 1)] + [f"s{m - 1}0"]
    arcs = [Arc("k", True), Arc("a1")]
    tris = [("k", "a1", "s01")]
    prev = "a1"
    for i in range(2, m - 1):
        d = f"d{i}"
        arcs.append(Arc(d))
        tris.append((d, f"s{i - 1}{i}", prev))
        prev = d
    tris.append((f"s{m - 1}0", f"s{m - 2}{m - 1}", prev))
    return Triangulation(tuple(arcs), tuple(bnd), tuple(tris), 1)


FIXTURES = {
    "c2tilde": c2tilde_t0,
    "hexagon": hexagon,
    "digon2": digon_two_points,
    "disk3": lambda: disk(3),
    "disk4": lambda: disk(4),
    "disk5": lambda: disk(5),
}
