import numpy as np
import pytest

from motionfields.groups import (
    CircleGroup,
    ProductGroup,
    RotationGroup3,
    TrivialGroup,
    euler_zyz,
    rot_x,
    rot_y,
    rot_z,
    rotation_angle,
    wigner_d,
)


class TestCircle:
    def test_irrep_values(self):
        g = CircleGroup()
        assert g.irrep_matrix(3, 0.4)[0, 0] == pytest.approx(np.exp(0.4j * 3))
        assert g.character(-2, 1.1) == pytest.approx(np.exp(-2.2j))

    def test_quadrature_nodes(self):
        rule = CircleGroup().quadrature(8)
        assert len(rule) == 8
        assert np.allclose(rule.weights, 1.0 / 8)
        # exactness: modes below the order integrate to 0, mode 0 to 1
        for m in range(-7, 8):
            val = np.sum(rule.weights * np.exp(1j * m * rule.params))
            assert abs(val - (1.0 if m == 0 else 0.0)) < 1e-14

    def test_compose_inverse(self):
        g = CircleGroup()
        a = g.compose(5.0, g.inverse(5.0))
        assert a == pytest.approx(0.0)


class TestWignerD:
    def test_ell_one_closed_form(self):
        # indices [m'+1, m+1], m', m = -1..1
        beta = np.array([0.0, 0.3, np.pi / 2, 2.2])
        d = wigner_d(1, beta)
        c, s = np.cos(beta), np.sin(beta)
        expect = np.empty((beta.size, 3, 3))
        expect[:, 2, 2] = (1 + c) / 2
        expect[:, 2, 1] = -s / np.sqrt(2)
        expect[:, 2, 0] = (1 - c) / 2
        expect[:, 1, 2] = s / np.sqrt(2)
        expect[:, 1, 1] = c
        expect[:, 1, 0] = -s / np.sqrt(2)
        expect[:, 0, 2] = (1 - c) / 2
        expect[:, 0, 1] = s / np.sqrt(2)
        expect[:, 0, 0] = (1 + c) / 2
        assert np.abs(d - expect).max() < 1e-13
        assert np.abs(d[0] - np.eye(3)).max() < 1e-14
        for i in range(beta.size):
            assert np.abs(d[i] @ d[i].T - np.eye(3)).max() < 1e-13

    def test_euler_round_trip(self, rng):
        g = RotationGroup3()
        for _ in range(25):
            R = g.random(rng)
            a, b, c = euler_zyz(R)
            assert np.abs(g.from_euler(a, b, c) - R).max() < 1e-12
        # gimbal cases
        for R in (np.eye(3), rot_z(0.7), rot_y(np.pi), rot_z(0.4) @ rot_y(np.pi)):
            a, b, c = euler_zyz(R)
            assert np.abs(g.from_euler(a, b, c) - R).max() < 1e-12


class TestSO3:
    def test_identity_matrix(self, rng):
        g = RotationGroup3()
        assert np.abs(g.irrep_matrix(1, np.eye(3)) - np.eye(3)).max() < 1e-14

    def test_unitary(self, rng):
        g = RotationGroup3()
        for ell in (0, 1, 3, 8):
            U = g.irrep_matrix(ell, g.random(rng))
            assert np.abs(U @ U.conj().T - np.eye(2 * ell + 1)).max() < 1e-10

    def test_homomorphism(self, rng):
        g = RotationGroup3()
        for _ in range(8):
            a, b = g.random(rng), g.random(rng)
            for ell in (1, 2, 5):
                lhs = g.irrep_matrix(ell, a) @ g.irrep_matrix(ell, b)
                rhs = g.irrep_matrix(ell, g.compose(a, b))
                assert np.abs(lhs - rhs).max() < 1e-9

    def test_ell_one_trace_is_rotation_trace(self, rng):
        # the dim-3 irrep is the standard action: traces agree with the
        # 3x3 rotation matrix itself
        g = RotationGroup3()
        for _ in range(10):
            R = g.random(rng)
            assert g.character(1, R) == pytest.approx(np.trace(R), abs=1e-10)

    def test_character_dirichlet(self, rng):
        # oracle: sum of weight exponentials at the rotation angle
        g = RotationGroup3()
        for _ in range(6):
            R = g.random(rng)
            theta = rotation_angle(R)
            for ell in (0, 1, 2, 4):
                oracle = sum(np.exp(1j * m * theta) for m in range(-ell, ell + 1))
                assert g.character(ell, R) == pytest.approx(oracle, abs=1e-9)

    def test_character_at_identity(self):
        g = RotationGroup3()
        for ell in range(5):
            assert g.character(ell, np.eye(3)) == pytest.approx(2 * ell + 1)

    def test_axis_rotation_trace(self):
        # rotation by theta about a fixed axis: trace of the dim-3 irrep
        g = RotationGroup3()
        theta = 0.9
        axis_rot = rot_x(theta)
        assert g.character(1, axis_rot) == pytest.approx(1 + 2 * np.cos(theta))

    def test_quadrature_schur(self):
        g = RotationGroup3()
        rule = g.quadrature(8)
        tabs = {l: g.irrep_node_table(l, rule) for l in (0, 1, 2, 3, 4)}
        # int |D^1_00|^2 = 1/3
        val = np.sum(rule.weights * np.abs(tabs[1][:, 1, 1]) ** 2)
        assert val == pytest.approx(1.0 / 3.0, abs=1e-12)
        # orthogonality for lambda, lambda' <= order/2 on sampled entries
        rng = np.random.default_rng(5)
        for _ in range(25):
            l1, l2 = rng.integers(0, 5, size=2)
            i1, j1 = rng.integers(0, 2 * l1 + 1, size=2)
            i2, j2 = rng.integers(0, 2 * l2 + 1, size=2)
            got = np.sum(
                rule.weights * tabs[l1][:, i1, j1] * np.conj(tabs[l2][:, i2, j2])
            )
            expect = (
                1.0 / (2 * l1 + 1)
                if (l1, i1, j1) == (l2, i2, j2)
                else 0.0
            )
            assert abs(got - expect) < 1e-10

    def test_node_table_matches_pointwise(self, rng):
        g = RotationGroup3()
        rule = g.quadrature(4)
        tab = g.irrep_node_table(2, rule)
        for idx in (0, 7, len(rule) - 1):
            direct = g.irrep_matrix(2, rule.nodes[idx])
            assert np.abs(tab[idx] - direct).max() < 1e-12


class TestProductAndTrivial:
    def test_product_rule_weights_multiply(self):
        g = ProductGroup([CircleGroup(), CircleGroup()])
        rule = g.quadrature(4)
        assert len(rule) == 16
        assert np.allclose(rule.weights, 1.0 / 16)
        assert rule.weights.sum() == pytest.approx(1.0)

    def test_product_matrix_is_kron(self):
        g = ProductGroup([CircleGroup(), CircleGroup()])
        val = g.irrep_matrix((2, -1), (0.3, 0.7))[0, 0]
        assert val == pytest.approx(np.exp(1j * (2 * 0.3 - 0.7)))

    def test_product_node_table_consistent(self):
        g = ProductGroup([CircleGroup(), CircleGroup()])
        rule = g.quadrature(3)
        tab = g.irrep_node_table((1, 2), rule)
        for i, node in enumerate(rule.nodes):
            assert tab[i, 0, 0] == pytest.approx(g.irrep_matrix((1, 2), node)[0, 0])

    def test_trivial(self):
        g = TrivialGroup()
        assert g.irrep_labels(5) == [0]
        rule = g.quadrature(3)
        assert len(rule) == 1 and rule.weights[0] == 1.0


def _random_trig_poly(group, rng, band):
    """Coefficients for a random trigonometric polynomial on the group."""
    terms = []
    for lab in group.irrep_labels(band):
        d = group.irrep_dim(lab)
        i, j = rng.integers(0, d, size=2)
        c = rng.normal() + 1j * rng.normal()
        terms.append((c, lab, int(i), int(j)))
    return terms


@pytest.mark.parametrize("make_group,band", [(CircleGroup, 4), (RotationGroup3, 3)])
def test_plancherel_identity(make_group, band, rng):
    """L2 norm equals the weighted HS mass of the integrated irreps."""
    group = make_group()
    terms = _random_trig_poly(group, rng, band)
    rule = group.quadrature(4 * band + 4)
    tabs = {lab: group.irrep_node_table(lab, rule) for lab in group.irrep_labels(2 * band)}
    vals = np.zeros(len(rule), dtype=complex)
    for c, lab, i, j in terms:
        vals += c * tabs[lab][:, i, j]
    l2 = np.sum(rule.weights * np.abs(vals) ** 2)
    mass = 0.0
    for lab in group.irrep_labels(2 * band):
        op = np.einsum("n,nab->ab", rule.weights * vals, tabs[lab])
        mass += group.irrep_dim(lab) * np.linalg.norm(op) ** 2
    assert abs(l2 - mass) < 1e-8
