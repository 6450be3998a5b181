"""Compact groups used as K and as stabilizer factors.

Groups are small value-like objects.  Elements are plain data: an angle for
the circle, a 3x3 rotation matrix for SO(3), ``()`` for the trivial group,
and tuples of factor elements for products.  Irreps are addressed by integer
weights (SO(2): m in Z; SO(3): ell >= 0; products: tuples), and the group
knows how to evaluate irrep matrices, characters, and normalized-Haar
quadrature rules on itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import eval_jacobi


@dataclass(frozen=True)
class IrrepDescriptor:
    """An irreducible representation: owning group, weight label, dimension."""

    group: "CompactGroup"
    weight: object
    dim: int


@dataclass(eq=False)
class QuadratureRule:
    """Nodes and positive weights realizing the normalized Haar integral.

    ``params`` holds the raw parametrization arrays (angles, Euler triples)
    used for vectorized tabulation; ``nodes`` are the corresponding group
    elements.
    """

    group: "CompactGroup"
    order: int
    weights: np.ndarray
    params: object
    _nodes: list = field(default=None, repr=False)

    @property
    def nodes(self):
        if self._nodes is None:
            self._nodes = self.group._nodes_from_params(self.params)
        return self._nodes

    def __len__(self):
        return len(self.weights)


class CompactGroup:
    """Common interface; concrete groups override everything that matters."""

    name = "?"

    # -- elements ---------------------------------------------------------
    def identity(self):
        raise NotImplementedError

    def compose(self, a, b):
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def random(self, rng):
        raise NotImplementedError

    # -- irreps -----------------------------------------------------------
    def irrep_labels(self, cutoff):
        raise NotImplementedError

    def irrep_dim(self, label):
        raise NotImplementedError

    def validate_label(self, label):
        raise NotImplementedError

    def char_band(self, label):
        """Max weight magnitude occurring in the irrep (quadrature sizing)."""
        raise NotImplementedError

    def irrep_matrix(self, label, elt):
        raise NotImplementedError

    def character(self, label, elt):
        return complex(np.trace(self.irrep_matrix(label, elt)))

    def irrep(self, label):
        return IrrepDescriptor(self, label, self.irrep_dim(label))

    # -- integration ------------------------------------------------------
    def quadrature(self, order):
        raise NotImplementedError

    def irrep_node_table(self, label, rule):
        """tau_label(k) at every node of ``rule``, shape (n, d, d)."""
        raise NotImplementedError

    def _nodes_from_params(self, params):
        raise NotImplementedError


class TrivialGroup(CompactGroup):
    name = "Trivial"

    def identity(self):
        return ()

    def compose(self, a, b):
        return ()

    def inverse(self, a):
        return ()

    def random(self, rng):
        return ()

    def irrep_labels(self, cutoff):
        return [0]

    def irrep_dim(self, label):
        return 1

    def validate_label(self, label):
        return label == 0

    def char_band(self, label):
        return 0

    def irrep_matrix(self, label, elt):
        return np.ones((1, 1), dtype=complex)

    def quadrature(self, order):
        return QuadratureRule(self, order, np.ones(1), np.zeros(1))

    def irrep_node_table(self, label, rule):
        return np.ones((len(rule), 1, 1), dtype=complex)

    def _nodes_from_params(self, params):
        return [()] * len(params)


class CircleGroup(CompactGroup):
    """SO(2), elements are angles; irrep m acts by exp(i m theta)."""

    name = "SO(2)"

    def identity(self):
        return 0.0

    def compose(self, a, b):
        return float(np.mod(a + b, 2.0 * np.pi))

    def inverse(self, a):
        return float(np.mod(-a, 2.0 * np.pi))

    def random(self, rng):
        return float(rng.uniform(0.0, 2.0 * np.pi))

    def irrep_labels(self, cutoff):
        return list(range(-cutoff, cutoff + 1))

    def irrep_dim(self, label):
        return 1

    def validate_label(self, label):
        return isinstance(label, (int, np.integer))

    def char_band(self, label):
        return abs(int(label))

    def irrep_matrix(self, label, elt):
        return np.array([[np.exp(1j * label * elt)]], dtype=complex)

    def quadrature(self, order):
        n = max(int(order), 1)
        theta = 2.0 * np.pi * np.arange(n) / n
        return QuadratureRule(self, order, np.full(n, 1.0 / n), theta)

    def irrep_node_table(self, label, rule):
        return np.exp(1j * label * rule.params)[:, None, None]

    def _nodes_from_params(self, params):
        return [float(t) for t in params]


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_y(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_x(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def euler_zyz(R):
    """Extract (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma)."""
    r22 = min(1.0, max(-1.0, float(R[2, 2])))
    beta = math.acos(r22)
    if abs(r22) < 1.0 - 1e-12:
        alpha = math.atan2(R[1, 2], R[0, 2])
        gamma = math.atan2(R[2, 1], -R[2, 0])
    elif r22 > 0.0:  # beta ~ 0: R = Rz(alpha + gamma)
        alpha = math.atan2(R[1, 0], R[0, 0])
        gamma = 0.0
    else:  # beta ~ pi: R = Rz(alpha - gamma) Ry(pi)
        alpha = math.atan2(-R[1, 0], -R[0, 0])
        gamma = 0.0
    return alpha, beta, gamma


def rotation_angle(R):
    """Rotation angle in [0, pi] of an SO(3) element."""
    return math.acos(min(1.0, max(-1.0, (float(np.trace(R)) - 1.0) / 2.0)))


@lru_cache(maxsize=None)
def _wigner_d_coeffs(ell):
    """Exponents and exact prefactors of the Jacobi form of little-d."""
    coeffs = []
    for mp in range(-ell, ell + 1):
        row = []
        for m in range(-ell, ell + 1):
            k = min(ell + m, ell - m, ell + mp, ell - mp)
            if k == ell + m:
                a, lam = mp - m, mp - m
            elif k == ell - m:
                a, lam = m - mp, 0
            elif k == ell + mp:
                a, lam = m - mp, 0
            else:
                a, lam = mp - m, mp - m
            b = 2 * (ell - k) - a
            ratio = Fraction(math.comb(2 * ell - k, k + a), math.comb(k + b, b))
            pref = (-1.0) ** lam * math.sqrt(ratio)
            row.append((k, a, b, pref))
        coeffs.append(row)
    return coeffs


def wigner_d(ell, beta):
    """Little-d matrices d^ell(beta), shape (len(beta), 2ell+1, 2ell+1).

    Row/column indices run over m', m = -ell..ell.  Entries follow the
    z-y-z convention D^ell_{m'm}(a,b,c) = e^{-i m' a} d^ell_{m'm}(b) e^{-i m c}.
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    s, c = np.sin(beta / 2.0), np.cos(beta / 2.0)
    x = np.cos(beta)
    dim = 2 * ell + 1
    out = np.empty((beta.size, dim, dim))
    coeffs = _wigner_d_coeffs(ell)
    for i in range(dim):
        for j in range(dim):
            k, a, b, pref = coeffs[i][j]
            out[:, i, j] = pref * (s ** a) * (c ** b) * eval_jacobi(k, a, b, x)
    return out


class RotationGroup3(CompactGroup):
    """SO(3), elements are 3x3 rotation matrices; irrep ell has dim 2ell+1."""

    name = "SO(3)"

    def identity(self):
        return np.eye(3)

    def compose(self, a, b):
        return a @ b

    def inverse(self, a):
        return a.T.copy()

    def random(self, rng):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, x, y, z = q
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )

    def from_euler(self, alpha, beta, gamma):
        return rot_z(alpha) @ rot_y(beta) @ rot_z(gamma)

    def irrep_labels(self, cutoff):
        return list(range(0, cutoff + 1))

    def irrep_dim(self, label):
        return 2 * int(label) + 1

    def validate_label(self, label):
        return isinstance(label, (int, np.integer)) and label >= 0

    def char_band(self, label):
        return int(label)

    def irrep_matrix(self, label, elt):
        alpha, beta, gamma = euler_zyz(elt)
        ell = int(label)
        d = wigner_d(ell, np.array([beta]))[0]
        m = np.arange(-ell, ell + 1)
        return np.exp(-1j * m[:, None] * alpha) * d * np.exp(-1j * m[None, :] * gamma)

    def character(self, label, elt):
        theta = rotation_angle(elt)
        ell = int(label)
        if abs(math.sin(theta / 2.0)) < 1e-8:
            # Dirichlet kernel limit at the identity class
            return complex(2 * ell + 1)
        return complex(math.sin((ell + 0.5) * theta) / math.sin(theta / 2.0))

    def quadrature(self, order):
        """Product rule exact for matrix-coefficient products of total degree <= order.

        Equispaced angles in alpha and gamma kill Fourier modes up to the
        order; Gauss-Legendre in cos(beta) handles the Jacobi-polynomial part.
        """
        q = max(int(order), 1)
        n_ang = q + 1
        n_beta = q // 2 + 1
        ang = 2.0 * np.pi * np.arange(n_ang) / n_ang
        xb, wb = np.polynomial.legendre.leggauss(n_beta)
        beta = np.arccos(xb)
        A, B, G = np.meshgrid(ang, beta, ang, indexing="ij")
        WB = np.broadcast_to(wb[None, :, None], A.shape)
        weights = (WB / (2.0 * n_ang * n_ang)).ravel()
        params = (A.ravel(), B.ravel(), G.ravel())
        return QuadratureRule(self, order, weights, params)

    def irrep_node_table(self, label, rule):
        alpha, beta, gamma = rule.params
        ell = int(label)
        ub, inv = np.unique(beta, return_inverse=True)
        d = wigner_d(ell, ub)[inv]
        m = np.arange(-ell, ell + 1)
        ea = np.exp(-1j * np.outer(alpha, m))
        eg = np.exp(-1j * np.outer(gamma, m))
        return ea[:, :, None] * d * eg[:, None, :]

    def _nodes_from_params(self, params):
        alpha, beta, gamma = params
        return [self.from_euler(a, b, g) for a, b, g in zip(alpha, beta, gamma)]


class ProductGroup(CompactGroup):
    """Direct product; elements and irrep labels are tuples over the factors."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        self.name = " x ".join(f.name for f in self.factors)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def compose(self, a, b):
        return tuple(f.compose(x, y) for f, x, y in zip(self.factors, a, b))

    def inverse(self, a):
        return tuple(f.inverse(x) for f, x in zip(self.factors, a))

    def random(self, rng):
        return tuple(f.random(rng) for f in self.factors)

    def irrep_labels(self, cutoff):
        labels = [[]]
        for f in self.factors:
            labels = [prefix + [w] for prefix in labels for w in f.irrep_labels(cutoff)]
        return [tuple(lab) for lab in labels]

    def irrep_dim(self, label):
        return int(np.prod([f.irrep_dim(w) for f, w in zip(self.factors, label)]))

    def validate_label(self, label):
        return (
            isinstance(label, tuple)
            and len(label) == len(self.factors)
            and all(f.validate_label(w) for f, w in zip(self.factors, label))
        )

    def char_band(self, label):
        return max(f.char_band(w) for f, w in zip(self.factors, label))

    def irrep_matrix(self, label, elt):
        mat = np.ones((1, 1), dtype=complex)
        for f, w, x in zip(self.factors, label, elt):
            mat = np.kron(mat, f.irrep_matrix(w, x))
        return mat

    def character(self, label, elt):
        out = 1.0 + 0.0j
        for f, w, x in zip(self.factors, label, elt):
            out *= f.character(w, x)
        return out

    def quadrature(self, order):
        rules = [f.quadrature(order) for f in self.factors]
        weights = np.ones(1)
        for r in rules:
            weights = np.outer(weights, r.weights).ravel()
        return QuadratureRule(self, order, weights, tuple(rules))

    def irrep_node_table(self, label, rule):
        tables = [
            f.irrep_node_table(w, r)
            for f, w, r in zip(self.factors, label, rule.params)
        ]
        out = tables[0]
        n0 = out.shape[0]
        for t in tables[1:]:
            n1 = t.shape[0]
            out = np.einsum("iab,jcd->ijacbd", out, t).reshape(
                n0 * n1,
                out.shape[1] * t.shape[1],
                out.shape[2] * t.shape[2],
            )
            n0 *= n1
        return out

    def _nodes_from_params(self, params):
        factor_nodes = [r.nodes for r in params]
        nodes = [()]
        for fn in factor_nodes:
            nodes = [n + (x,) for n in nodes for x in fn]
        return nodes
