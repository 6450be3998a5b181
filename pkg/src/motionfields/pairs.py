"""Concrete Riemannian-pair data: chambers, Weyl orbits, stabilizers.

Three instances ship:

* ``M2``    -- K = SO(2) acting on R^2, rank 1.
* ``M3``    -- K = SO(3) acting on R^3, rank 1 (the a-line is the z-axis,
  so the centralizer of a regular point is the z-rotation circle).
* ``M2xM2`` -- K = SO(2)^2 on R^2 + R^2, rank 2; the positive chamber is the
  open quadrant and its walls make the singular stratum non-empty.

Coordinates on the flat part are Euclidean in a fixed orthonormal basis;
the invariant form enters every predicate only through relative distances,
so its overall scale is inert.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownInstance
from .groups import (
    CircleGroup,
    CompactGroup,
    ProductGroup,
    RotationGroup3,
    TrivialGroup,
    rot_x,
    rot_z,
)

DEFAULT_WALL_TOL = 1e-9


@dataclass(frozen=True)
class WeylElement:
    """Orthogonal map on a-coordinates together with a representative in K."""

    name: str
    matrix: tuple  # rows, as tuples, for hashability
    rep_in_k: object

    def apply(self, coords):
        return tuple(
            float(sum(r * c for r, c in zip(row, coords))) for row in self.matrix
        )


@dataclass(frozen=True)
class ChamberPoint:
    """A point of the flat part, tagged by its stratum after dominantization.

    ``tag`` is "Regular", "Wall" or "Zero"; ``walls`` lists the indices of
    the positive roots vanishing at the point.
    """

    coords: tuple
    tag: str
    walls: tuple


@dataclass(eq=False)
class StabilizerDescriptor:
    """A closed connected subgroup of K with explicit embedding.

    ``pullback`` is the partial inverse of ``embed``; it raises ValueError
    on elements outside the subgroup (tolerance 1e-8).
    """

    structure: str
    group: CompactGroup
    embed: Callable
    pullback: Callable


@dataclass(eq=False)
class SymmetricPairDescriptor:
    name: str
    dim_p: int
    rank: int
    positive_roots: np.ndarray  # (n_roots, rank), acting by dot product
    weyl_group: tuple
    inner_product: np.ndarray  # (dim_p, dim_p)
    K: CompactGroup
    a_basis: np.ndarray  # (rank, dim_p): orthonormal rows embedding a into p
    adjoint_action: Callable  # (k, X in p) -> ndarray
    stabilizer_of: Callable  # coords -> StabilizerDescriptor
    ad_orbit_table: Callable  # (rule, coords) -> (n_nodes, dim_p)
    M: StabilizerDescriptor  # centralizer of the flat, = stabilizer of regular points
    wall_tol: float = DEFAULT_WALL_TOL

    def embed_a(self, coords):
        return np.asarray(coords, dtype=float) @ self.a_basis

    def project_a(self, X):
        """Coordinates of the a-component plus the orthogonal residual norm."""
        X = np.asarray(X, dtype=float)
        coords = self.a_basis @ X
        residual = X - coords @ self.a_basis
        return coords, float(np.linalg.norm(residual))

    def phi(self, coords, X):
        """The linear form <H, X> on p attached to the point H."""
        return float(self.embed_a(coords) @ self.inner_product @ np.asarray(X))

    def root_values(self, coords):
        return self.positive_roots @ np.asarray(coords, dtype=float)

    def wall_set(self, coords):
        vals = self.root_values(coords)
        return tuple(int(i) for i in np.flatnonzero(np.abs(vals) <= self.wall_tol))

    def zero_point(self):
        return tuple([0.0] * self.rank)


# ---------------------------------------------------------------------------
# stabilizer builders


def _trivial_in(identity_elt):
    g = TrivialGroup()
    return StabilizerDescriptor(
        "Trivial",
        g,
        lambda s, e=identity_elt: e,
        lambda k: (),
    )


def _full_circle():
    g = CircleGroup()
    return StabilizerDescriptor("Torus(1)", g, lambda s: s, lambda k: k)


def _z_circle_in_so3():
    g = CircleGroup()

    def pull(R):
        if abs(R[2, 2] - 1.0) > 1e-8 or abs(R[0, 2]) > 1e-8 or abs(R[1, 2]) > 1e-8:
            raise ValueError("element is not a z-axis rotation")
        return float(np.arctan2(R[1, 0], R[0, 0]) % (2.0 * np.pi))

    return StabilizerDescriptor("Torus(1)", g, rot_z, pull)


def _full_so3():
    g = RotationGroup3()
    return StabilizerDescriptor("SO3", g, lambda s: s, lambda k: k)


def _product_stab(factors, positions, k_identity):
    """Factorwise stabilizer of a product instance.

    ``factors`` are per-factor StabilizerDescriptors; ``positions`` maps the
    product element slots into K's element tuple.
    """
    g = ProductGroup([f.group for f in factors])
    structure = "Product(" + ", ".join(f.structure for f in factors) + ")"

    def embed(s):
        out = list(k_identity)
        for slot, f, part in zip(positions, factors, s):
            out[slot] = f.embed(part)
        return tuple(out)

    def pull(k):
        return tuple(f.pullback(k[slot]) for slot, f in zip(positions, factors))

    return StabilizerDescriptor(structure, g, embed, pull)


# ---------------------------------------------------------------------------
# instances


def _build_m2(wall_tol):
    K = CircleGroup()

    def adjoint(theta, X):
        c, s = np.cos(theta), np.sin(theta)
        X = np.asarray(X, dtype=float)
        return np.array([c * X[0] - s * X[1], s * X[0] + c * X[1]])

    def stab(coords):
        if abs(coords[0]) <= wall_tol:
            return _full_circle()
        return _trivial_in(0.0)

    def orbit_table(rule, coords):
        t = float(coords[0])
        theta = rule.params
        return np.stack([t * np.cos(theta), t * np.sin(theta)], axis=1)

    weyl = (
        WeylElement("id", ((1.0,),), 0.0),
        WeylElement("flip", ((-1.0,),), float(np.pi)),
    )
    return SymmetricPairDescriptor(
        name="M2",
        dim_p=2,
        rank=1,
        positive_roots=np.array([[1.0]]),
        weyl_group=weyl,
        inner_product=np.eye(2),
        K=K,
        a_basis=np.array([[1.0, 0.0]]),
        adjoint_action=adjoint,
        stabilizer_of=stab,
        ad_orbit_table=orbit_table,
        M=_trivial_in(0.0),
        wall_tol=wall_tol,
    )


def _build_m3(wall_tol):
    K = RotationGroup3()

    def adjoint(k, X):
        return np.asarray(k) @ np.asarray(X, dtype=float)

    def stab(coords):
        if abs(coords[0]) <= wall_tol:
            return _full_so3()
        return _z_circle_in_so3()

    def orbit_table(rule, coords):
        t = float(coords[0])
        alpha, beta, _ = rule.params
        sb = np.sin(beta)
        return np.stack(
            [t * np.cos(alpha) * sb, t * np.sin(alpha) * sb, t * np.cos(beta)],
            axis=1,
        )

    weyl = (
        WeylElement("id", ((1.0,),), np.eye(3)),
        WeylElement("flip", ((-1.0,),), rot_x(np.pi)),
    )
    return SymmetricPairDescriptor(
        name="M3",
        dim_p=3,
        rank=1,
        positive_roots=np.array([[1.0]]),
        weyl_group=weyl,
        inner_product=np.eye(3),
        K=K,
        a_basis=np.array([[0.0, 0.0, 1.0]]),
        adjoint_action=adjoint,
        stabilizer_of=stab,
        ad_orbit_table=orbit_table,
        M=_z_circle_in_so3(),
        wall_tol=wall_tol,
    )


def _build_m2xm2(wall_tol):
    K = ProductGroup([CircleGroup(), CircleGroup()])
    k_id = K.identity()

    def adjoint(k, X):
        X = np.asarray(X, dtype=float)
        out = np.empty(4)
        for i, theta in enumerate(k):
            c, s = np.cos(theta), np.sin(theta)
            out[2 * i] = c * X[2 * i] - s * X[2 * i + 1]
            out[2 * i + 1] = s * X[2 * i] + c * X[2 * i + 1]
        return out

    def stab(coords):
        factors = [
            _full_circle() if abs(c) <= wall_tol else _trivial_in(0.0)
            for c in coords
        ]
        return _product_stab(factors, (0, 1), k_id)

    def orbit_table(rule, coords):
        r1, r2 = rule.params
        t1 = np.repeat(r1.params, len(r2.weights))
        t2 = np.tile(r2.params, len(r1.weights))
        a, b = float(coords[0]), float(coords[1])
        return np.stack(
            [a * np.cos(t1), a * np.sin(t1), b * np.cos(t2), b * np.sin(t2)],
            axis=1,
        )

    pi = float(np.pi)
    weyl = tuple(
        WeylElement(
            f"({'flip' if s1 < 0 else 'id'},{'flip' if s2 < 0 else 'id'})",
            ((s1, 0.0), (0.0, s2)),
            (pi if s1 < 0 else 0.0, pi if s2 < 0 else 0.0),
        )
        for s1 in (1.0, -1.0)
        for s2 in (1.0, -1.0)
    )
    return SymmetricPairDescriptor(
        name="M2xM2",
        dim_p=4,
        rank=2,
        positive_roots=np.array([[1.0, 0.0], [0.0, 1.0]]),
        weyl_group=weyl,
        inner_product=np.eye(4),
        K=K,
        a_basis=np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]),
        adjoint_action=adjoint,
        stabilizer_of=stab,
        ad_orbit_table=orbit_table,
        M=_product_stab([_trivial_in(0.0), _trivial_in(0.0)], (0, 1), k_id),
        wall_tol=wall_tol,
    )


_BUILDERS = {"M2": _build_m2, "M3": _build_m3, "M2xM2": _build_m2xm2}

INSTANCE_NAMES = tuple(sorted(_BUILDERS))


def build_instance(name, wall_tol=DEFAULT_WALL_TOL):
    """Instantiate one of the shipped pairs by name ("M2", "M3", "M2xM2")."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownInstance(
            f"unknown instance {name!r}; available: {', '.join(INSTANCE_NAMES)}"
        ) from None
    return builder(wall_tol)


# ---------------------------------------------------------------------------
# chamber operations


def dominant_representative(pair, coords):
    """The unique Weyl-orbit point in the closed positive chamber.

    Returns ``(dominant_coords, weyl_element)`` with ``w.apply(coords)``
    equal to the dominant point.  For points on walls several elements work;
    the first in the stored order is returned, so the output is deterministic.
    """
    coords = tuple(float(c) for c in np.atleast_1d(coords))
    for w in pair.weyl_group:
        moved = w.apply(coords)
        if np.all(pair.root_values(moved) >= -pair.wall_tol):
            return moved, w
    raise AssertionError("no dominant representative found; broken Weyl data")


def weyl_orbit(pair, coords, tol=1e-12):
    """All distinct Weyl images of the point (deduplicated within ``tol``)."""
    coords = tuple(float(c) for c in np.atleast_1d(coords))
    out = []
    for w in pair.weyl_group:
        moved = w.apply(coords)
        if not any(
            max(abs(a - b) for a, b in zip(moved, seen)) <= tol for seen in out
        ):
            out.append(moved)
    return out


def classify_chamber_point(pair, coords):
    """Stratum tag of a flat point, computed on its dominant representative."""
    dom, _ = dominant_representative(pair, coords)
    if np.linalg.norm(dom) <= pair.wall_tol:
        return ChamberPoint(pair.zero_point(), "Zero", pair.wall_set(pair.zero_point()))
    walls = pair.wall_set(dom)
    tag = "Wall" if walls else "Regular"
    return ChamberPoint(dom, tag, walls)


def stabilizer(pair, coords):
    """Stabilizer descriptor of the point; depends only on its wall pattern."""
    return pair.stabilizer_of(tuple(float(c) for c in np.atleast_1d(coords)))


def adjoint_action(pair, k, X):
    return pair.adjoint_action(k, X)


def stab_contained(pair, coords_small, coords_big):
    """Whether the stabilizer of the first point sits inside the second's.

    For the shipped instances the stabilizer grows exactly with the set of
    vanishing positive roots, so containment is a wall-set inclusion.
    """
    return set(pair.wall_set(coords_small)) <= set(pair.wall_set(coords_big))
