"""The stratified unitary dual and sequence-level Fell convergence.

Points are stored in canonical form: the flat coordinate is replaced by its
dominant representative and the stabilizer irrep label is transported along
the Weyl element used, so equivalent inputs collapse to equal points.  The
three strata are

* ``gamma0`` -- regular dominant H with an irrep of the centralizer M,
* ``gamma1`` -- nonzero wall H with an irrep of its (larger) stabilizer,
* ``gamma2`` -- the dual of K itself (H = 0 semantics).

Convergence of a finite sequence (read as the tail of an abstract one) is
decided by a single rule covering all strata: the flat parts must converge
numerically and, on the final half of the sequence, each member's
stabilizer must sit inside the limit's and the limit's irrep must contain
the member's irrep upon restriction.  A cross-check against brute-force
neighborhood membership over a fixed radius grid is provided for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptySequence,
    EpsilonTooLarge,
    MixedInstance,
    StratumMismatch,
)
from .induction import restriction_multiplicity
from .pairs import (
    classify_chamber_point,
    dominant_representative,
    stab_contained,
    stabilizer,
)

H_CONV_TOL = 1e-6

GAMMA0, GAMMA1, GAMMA2 = "gamma0", "gamma1", "gamma2"


@dataclass(frozen=True)
class DualPoint:
    pair_name: str
    stratum: str
    label: object
    H: tuple | None  # dominant coordinates; None on gamma2

    def h_coords(self, pair):
        """Flat coordinates with the gamma2 convention H = 0."""
        return self.H if self.H is not None else pair.zero_point()


def transport_label(pair, w, H_from, label):
    """Label of the conjugated irrep when moving H by a Weyl element.

    The stabilizers of ``H_from`` and ``w.H_from`` are identified by
    conjugation with the stored representative of ``w``; the transported
    label is found by matching characters on sample elements.
    """
    stab_from = stabilizer(pair, H_from)
    stab_to = stabilizer(pair, w.apply(tuple(np.atleast_1d(H_from))))
    kw = w.rep_in_k
    kw_inv = pair.K.inverse(kw)
    band = stab_from.group.char_band(label)
    samples = [stab_to.group.random(np.random.default_rng(7 + i)) for i in range(3)]

    def conj_char(s):
        moved = pair.K.compose(kw_inv, pair.K.compose(stab_to.embed(s), kw))
        return stab_from.group.character(label, stab_from.pullback(moved))

    targets = [conj_char(s) for s in samples]
    for cand in stab_to.group.irrep_labels(band):
        if all(
            abs(stab_to.group.character(cand, s) - t) < 1e-8
            for s, t in zip(samples, targets)
        ):
            return cand
    raise AssertionError(f"no transported label found for {label!r} under {w.name}")


def make_dual_point(pair, label, H=None):
    """Canonical dual point from raw data; the stratum is derived, not trusted.

    ``H`` may be any flat coordinate (or None / zero for the K-dual); it is
    replaced by its dominant representative and the label transported
    accordingly.  StratumMismatch is raised when the label is not an irrep
    label of the stabilizer of the resulting point.
    """
    if H is not None:
        H = tuple(float(c) for c in np.atleast_1d(H))
        if np.linalg.norm(H) <= pair.wall_tol:
            H = None
    if H is None:
        if not pair.K.validate_label(label):
            raise StratumMismatch(
                f"{label!r} is not a K-irrep label on {pair.name}"
            )
        return DualPoint(pair.name, GAMMA2, label, None)
    point = classify_chamber_point(pair, H)
    _, w = dominant_representative(pair, H)
    stab = stabilizer(pair, point.coords)
    if not stab.group.validate_label(label):
        raise StratumMismatch(
            f"{label!r} is not an irrep label of stabilizer {stab.structure} "
            f"at H={point.coords} on {pair.name}"
        )
    moved = transport_label(pair, w, H, label)
    stratum = GAMMA0 if point.tag == "Regular" else GAMMA1
    return DualPoint(pair.name, stratum, moved, point.coords)


def equivalent(pair, p1, p2, tol=1e-12):
    """Whether two points parametrize equivalent representations."""
    if p1.pair_name != p2.pair_name:
        raise MixedInstance(f"{p1.pair_name} vs {p2.pair_name}")
    if p1.stratum != p2.stratum or p1.label != p2.label:
        return False
    if p1.H is None and p2.H is None:
        return True
    return max(abs(a - b) for a, b in zip(p1.H, p2.H)) <= tol


def weyl_action_on_pairs(pair, w, point):
    """Move a dual point by a Weyl element: (rho, H) -> (w.rho, w.H).

    Points are stored canonically, so the moved pair is immediately reduced
    back to its dominant form and the result is equivalent to the input
    (the action is by construction trivial on equivalence classes).
    """
    if point.stratum == GAMMA2:
        return point
    raw_H = w.apply(point.H)
    raw_label = transport_label(pair, w, point.H, point.label)
    return make_dual_point(pair, raw_label, raw_H)


def _h_distance(pair, H1, H2):
    d = pair.embed_a(H1) - pair.embed_a(H2)
    return float(np.sqrt(d @ pair.inner_product @ d))


def epsilon_threshold(pair, H):
    """Largest radius below which every nearby point has a smaller stabilizer.

    The distance from H to the wall of a positive root alpha is
    |alpha(H)| / |alpha|; radii beyond the smallest such distance allow
    points whose stabilizer is not contained in H's, breaking the
    neighborhood-basis hypothesis.
    """
    vals = pair.root_values(H)
    norms = np.linalg.norm(pair.positive_roots, axis=1)
    dists = [
        abs(v) / n
        for v, n in zip(vals, norms)
        if abs(v) > pair.wall_tol
    ]
    return min(dists) if dists else math.inf


def in_neighborhood(pair, base, eps, candidate):
    """Membership of ``candidate`` in the basic neighborhood of ``base``.

    True iff the flat parts are within ``eps`` and the base's irrep
    restricted to the candidate's stabilizer contains the candidate's irrep.
    EpsilonTooLarge is raised when ``eps`` exceeds the containment threshold
    of the base point.
    """
    if base.pair_name != candidate.pair_name:
        raise MixedInstance(f"{base.pair_name} vs {candidate.pair_name}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    Hb = base.h_coords(pair)
    Hc = candidate.h_coords(pair)
    thr = epsilon_threshold(pair, Hb)
    if eps > thr:
        raise EpsilonTooLarge(
            f"eps={eps} exceeds the stabilizer-containment threshold {thr:.3g} "
            f"at H={Hb} on {pair.name}"
        )
    if _h_distance(pair, Hb, Hc) >= eps:
        return False
    big_ctx = stabilizer(pair, Hb)
    sub = stabilizer(pair, Hc)
    return (
        restriction_multiplicity(big_ctx, base.label, sub, candidate.label) > 0
    )


@dataclass
class ConvergenceCertificate:
    verdict: bool
    tail_index: int | None
    evidence: list = field(default_factory=list)

    @property
    def converges(self):
        return self.verdict


def converges(pair, seq, limit, h_tol=H_CONV_TOL):
    """Decide Fell convergence of a finite tail toward ``limit``.

    The numeric reading of "H_n converges": over the last quarter of the
    sequence, distances to the limit have mean below ``h_tol`` and are
    non-increasing.  The representation-theoretic clause ("for n large
    enough") is required on the final half: the member's stabilizer is
    contained in the limit's, and the limit's irrep restricted to it
    contains the member's irrep.  For a K-dual limit over a K-dual tail
    this reduces to the sequence being eventually constant.
    """
    if not seq:
        raise EmptySequence("convergence query needs at least one element")
    names = {p.pair_name for p in seq} | {limit.pair_name}
    if names != {pair.name}:
        raise MixedInstance(f"points from instances {sorted(names)} on {pair.name}")

    n = len(seq)
    H_lim = limit.h_coords(pair)
    dists = [_h_distance(pair, p.h_coords(pair), H_lim) for p in seq]
    tail_start = n - math.ceil(n / 2)
    quarter_start = n - max(1, math.ceil(n / 4))

    evidence = []
    branch_ok = True
    for i, p in enumerate(seq):
        rec = {"n": i, "distance": dists[i]}
        if i >= tail_start:
            contained = stab_contained(pair, p.h_coords(pair), H_lim)
            rec["stabilizer_contained"] = contained
            if contained:
                mult = restriction_multiplicity(
                    stabilizer(pair, H_lim),
                    limit.label,
                    stabilizer(pair, p.h_coords(pair)),
                    p.label,
                )
                rec["multiplicity"] = mult
                if mult <= 0:
                    branch_ok = False
            else:
                branch_ok = False
        evidence.append(rec)

    quarter = dists[quarter_start:]
    h_ok = float(np.mean(quarter)) < h_tol and all(
        b <= a + 1e-15 for a, b in zip(quarter, quarter[1:])
    )
    verdict = bool(h_ok and branch_ok)
    # from the last-quarter start both clauses hold: multiplicities are
    # positive (the quarter sits inside the checked half) and distances
    # are small and non-increasing
    return ConvergenceCertificate(
        verdict=verdict,
        tail_index=quarter_start if verdict else None,
        evidence=evidence,
    )


def neighborhood_cross_check(pair, seq, limit, eps_grid=(0.5, 0.1, 0.01)):
    """Brute-force verdict: final half lies in every eps-neighborhood of the limit."""
    if not seq:
        raise EmptySequence("convergence query needs at least one element")
    tail = seq[len(seq) - math.ceil(len(seq) / 2):]
    for eps in eps_grid:
        for p in tail:
            if not in_neighborhood(pair, limit, eps, p):
                return False
    return True
