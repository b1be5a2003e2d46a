#include "test_util.hpp"

using namespace c3g;
using namespace c3g::testing;

TEST(pauli, algebra) {
    ASSERT_EQ(pauli(0), Mat2::Identity());
    ASSERT_EQ(commutator(pauli(1), pauli(2)), Mat2(2.0 * kI * pauli(3)));
    ASSERT_EQ(pauli(3) * pauli(3), Mat2::Identity());
    for (int k = 1; k < 4; ++k) {
        ASSERT_EQ(pauli(k) * pauli(k), Mat2::Identity());
        ASSERT_EQ(pauli(k).adjoint(), pauli(k));
    }
    ASSERT_THROW(pauli(4), ValidationError);
    ASSERT_THROW(pauli(-1), ValidationError);
}

TEST(c3_basis, unitary) {
    const auto &b = C3Basis::instance();
    ASSERT_LE((b.U.adjoint() * b.U - Mat3::Identity()).norm(), 1e-14);
    ASSERT_LE((b.U * b.U.adjoint() - Mat3::Identity()).norm(), 1e-14);
    ASSERT_NEAR(b.phi0.norm(), 1.0, 1e-15);
    ASSERT_NEAR(b.phi_s1.norm(), 1.0, 1e-15);
    ASSERT_NEAR(b.phi_s2.norm(), 1.0, 1e-15);
    ASSERT_LE(std::abs(b.epsilon - std::polar(1.0, 2.0 * std::numbers::pi / 3.0)), 1e-15);
}

TEST(block_decompose, triangle_operator) {
    Mat3 mo;
    mo << -2.0, 1.0, 1.0, 1.0, -2.0, 1.0, 1.0, 1.0, -2.0;
    const auto d = block_decompose(mo);
    ASSERT_LE(std::abs(d.constant), 1e-14);
    ASSERT_LE((d.spin + 3.0 * pauli(0)).norm(), 1e-14);
    ASSERT_LE(d.offdiag_norm, 1e-14);
}

TEST(block_decompose, identity_and_transposition) {
    auto d = block_decompose(Mat3(Mat3::Identity()));
    ASSERT_LE(std::abs(d.constant - 1.0), 1e-15);
    ASSERT_LE((d.spin - pauli(0)).norm(), 1e-15);

    Mat3 swap;
    swap << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    d = block_decompose(swap);
    const Mat3 oracle = conjugate_by_c3(swap);
    ASSERT_LE(std::abs(d.constant - oracle(0, 0)), 1e-14);
    ASSERT_LE((d.spin - oracle.block<2, 2>(1, 1)).norm(), 1e-14);
    ASSERT_LE((d.spin - pauli(1)).norm(), 1e-14);
    ASSERT_LE(d.offdiag_norm, 1e-14);
}

TEST(block_decompose, antisymmetric_circulant) {
    Mat3 a;
    a << 0, 1, -1, -1, 0, 1, 1, -1, 0;
    const auto d = block_decompose(a);
    // (eps, eps*, 1) is an eigenvector of the circulant with eigenvalue c1 eps + c2 eps*, c1 = 1, c2 = -1.
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const Complex lam_s1 = w - std::conj(w), lam_s2 = std::conj(lam_s1);
    ASSERT_LE((d.spin - conjugate_by_c3(a).block<2, 2>(1, 1)).norm(), 1e-14);
    ASSERT_LE(std::abs(d.constant), 1e-14);
    ASSERT_LE(d.offdiag_norm, 1e-14);
    ASSERT_LE(std::abs(d.spin(0, 1)) + std::abs(d.spin(1, 0)), 1e-14);
    ASSERT_LE(std::abs(d.spin(0, 0) - lam_s1), 1e-14);
    ASSERT_LE(std::abs(d.spin(1, 1) - lam_s2), 1e-14);
    ASSERT_LE((d.spin - Complex(0, std::sqrt(3.0)) * pauli(3)).norm(), 1e-14);
}

TEST(block_decompose, random_circulants_are_clean) {
    Gen g(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Complex c0 = g.complex(), c1 = g.complex(), c2 = g.complex();
        Mat3 m;
        m << c0, c1, c2, c2, c0, c1, c1, c2, c0;
        const auto d = block_decompose(m);
        ASSERT_LE(d.offdiag_norm, 1e-13 * m.norm());
        ASSERT_TRUE(d.clean(m.norm()));
    }
}

TEST(block_decompose, linear) {
    Gen g(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 a = g.mat3(), b = g.mat3();
        const Complex alpha = g.complex(), beta = g.complex();
        const auto da = block_decompose(a), db = block_decompose(b);
        const auto dab = block_decompose(Mat3(alpha * a + beta * b));
        ASSERT_LE(std::abs(dab.constant - (alpha * da.constant + beta * db.constant)), 1e-14);
        ASSERT_LE((dab.spin - (alpha * da.spin + beta * db.spin)).norm(), 1e-14);
    }
}

TEST(block_decompose, matches_explicit_conjugation) {
    Gen g(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 m = g.mat3();
        const Mat3 oracle = conjugate_by_c3(m);
        const auto d = block_decompose(m);
        ASSERT_LE(std::abs(d.constant - oracle(0, 0)), 1e-14);
        ASSERT_LE((d.spin - oracle.block<2, 2>(1, 1)).norm(), 1e-14);
    }
}

TEST(path_product, order) {
    ASSERT_LE((path_product({pauli(1), pauli(2)}) - kI * pauli(3)).norm(), 0.0);
    ASSERT_LE((path_product({pauli(2), pauli(1)}) + kI * pauli(3)).norm(), 0.0);
    for (int k = 1; k <= 6; ++k) {
        std::vector<Mat2> ids(std::size_t(k), Mat2::Identity());
        ASSERT_EQ(path_product<double>(ids), Mat2::Identity());
    }
    ASSERT_THROW(path_product<double>(std::span<const Mat2>()), ValidationError);
}

TEST(path_product, circuit1_hopping_chain) {
    const auto blocks = extract_blocks(chain(circuit1_ids()), s15k());
    const Mat2 &h21 = blocks.h_backward[0], &h32 = blocks.h_backward[1], &h43 = blocks.h_backward[2];
    Mat2 oracle;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex acc = 0.0;
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) acc += h21(i, k) * h32(k, l) * h43(l, j);
            }
            oracle(i, j) = acc;
        }
    }
    ASSERT_LE(rel_err(path_product({h21, h32, h43}), oracle), 1e-15);
}

TEST(commutator, properties) {
    Gen g(14);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2 a = g.mat2(), b = g.mat2();
        ASSERT_LE((commutator(a, b) + commutator(b, a)).norm(), 1e-15);
        ASSERT_LE(commutator(pauli(0), a).norm(), 0.0);
    }
}

TEST(commutator, swapped_couplings_do_not_commute) {
    const double wc = 2.0 * std::numbers::pi * 15e3 * 2.7e-9;
    const Mat2 m01 = kI * wc * (pauli(0) + pauli(1));
    const Mat2 m02 = kI * wc * (pauli(0) + pauli(2));
    const Mat2 want = -2.0 * kI * wc * wc * pauli(3);
    ASSERT_LE(rel_err(commutator(m01, m02), want), 1e-15);
    ASSERT_GT(commutator(m01, m02).norm(), 0.0);
}

TEST(channels, round_trip) {
    Gen g(15);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 v = g.vec3();
        ASSERT_LE((from_c3_channels(to_c3_channels(v)) - v).norm(), 1e-14);
    }
}
