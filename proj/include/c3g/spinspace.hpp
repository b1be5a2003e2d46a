#pragma once

// Complex 2x2 / 3x3 algebra for C3-symmetric node triples: the symmetry
// transform U, Pauli matrices, and the constant (+) pseudospin split of a
// node-space operator.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "c3g/error.hpp"

namespace c3g {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using Mat2T = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Mat3T = Eigen::Matrix<std::complex<Real>, 3, 3>;
template <typename Real>
using Vec3T = Eigen::Matrix<std::complex<Real>, 3, 1>;

using Complex = ComplexT<double>;
using Mat2 = Mat2T<double>;
using Mat3 = Mat3T<double>;
using Vec3 = Vec3T<double>;
using MatX = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// sigma_0 .. sigma_3.
template <typename Real = double>
Mat2T<Real> pauli(int k) {
    using C = ComplexT<Real>;
    Mat2T<Real> m;
    switch (k) {
        case 0: m << C(1), C(0), C(0), C(1); break;
        case 1: m << C(0), C(1), C(1), C(0); break;
        case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
        case 3: m << C(1), C(0), C(0), C(-1); break;
        default: throw ValidationError("pauli index must be in 0..3");
    }
    return m;
}

/// Irreducible-representation basis of C3 acting on a node triple.
///
/// Columns of U are phi0 = (1,1,1)/sqrt3, phi_s1 = (e, e*, 1)/sqrt3 and
/// phi_s2 = (e*, e, 1)/sqrt3 with e = exp(i 2pi/3). phi0 spans the constant
/// channel; phi_s1, phi_s2 span the doubly degenerate pseudospin channel.
/// Use `instance()` so every module shares bit-identical basis values.
template <typename Real = double>
struct C3BasisT {
    ComplexT<Real> epsilon;
    Mat3T<Real> U;
    Vec3T<Real> phi0, phi_s1, phi_s2;

    static const C3BasisT &instance() {
        static const C3BasisT basis = make();
        return basis;
    }

private:
    static C3BasisT make() {
        const Real angle = Real(2) * std::numbers::pi_v<Real> / Real(3);
        C3BasisT b;
        b.epsilon = ComplexT<Real>(std::cos(angle), std::sin(angle));
        const Real norm = Real(1) / std::sqrt(Real(3));
        const ComplexT<Real> one(1), e = b.epsilon, ec = std::conj(b.epsilon);
        b.phi0 << one * norm, one * norm, one * norm;
        b.phi_s1 << e * norm, ec * norm, one * norm;
        b.phi_s2 << ec * norm, e * norm, one * norm;
        b.U.col(0) = b.phi0;
        b.U.col(1) = b.phi_s1;
        b.U.col(2) = b.phi_s2;
        return b;
    }
};
using C3Basis = C3BasisT<double>;

template <typename Real>
struct BlockDecompositionT {
    ComplexT<Real> constant;
    Mat2T<Real> spin;
    /// Largest magnitude among the four entries mixing the two sectors.
    Real offdiag_norm;

    /// Mixing is rounding noise only (relative to `scale`, usually the input norm).
    bool clean(Real scale, Real rel_tol = Real(1e-12)) const {
        return offdiag_norm <= rel_tol * std::max(scale, std::numeric_limits<Real>::min());
    }
};
using BlockDecomposition = BlockDecompositionT<double>;

/// U^dagger m U split into its (0,0) constant entry and lower-right 2x2 spin block.
template <typename Derived>
auto block_decompose(const Eigen::MatrixBase<Derived> &m,
                     const C3BasisT<typename Derived::RealScalar> &basis =
                         C3BasisT<typename Derived::RealScalar>::instance()) {
    using Real = typename Derived::RealScalar;
    static_assert(Derived::RowsAtCompileTime == 3 && Derived::ColsAtCompileTime == 3,
                  "block_decompose expects a 3x3 operator");
    const Mat3T<Real> t = basis.U.adjoint() * m.template cast<ComplexT<Real>>() * basis.U;
    BlockDecompositionT<Real> out;
    out.constant = t(0, 0);
    out.spin = t.template block<2, 2>(1, 1);
    out.offdiag_norm = std::max({std::abs(t(0, 1)), std::abs(t(0, 2)), std::abs(t(1, 0)),
                                 std::abs(t(2, 0))});
    return out;
}

/// Left-to-right product blocks[0] * blocks[1] * ...
template <typename Real = double>
Mat2T<Real> path_product(std::span<const Mat2T<Real>> blocks) {
    if (blocks.empty()) {
        throw ValidationError("path_product needs at least one block");
    }
    Mat2T<Real> acc = blocks.front();
    for (std::size_t k = 1; k < blocks.size(); ++k) {
        acc = acc * blocks[k];
    }
    return acc;
}

inline Mat2 path_product(std::initializer_list<Mat2> blocks) {
    return path_product<double>(std::span<const Mat2>(blocks.begin(), blocks.size()));
}

template <typename A, typename B>
auto commutator(const Eigen::MatrixBase<A> &a, const Eigen::MatrixBase<B> &b) {
    using Plain = typename A::PlainObject;
    return Plain(a * b - b * a);
}

/// Coefficients (c0, c_s1, c_s2) of v in the C3 basis: c_k = phi_k^dagger v.
template <typename Real = double>
Vec3T<Real> to_c3_channels(const Vec3T<Real> &v) {
    return C3BasisT<Real>::instance().U.adjoint() * v;
}

template <typename Real = double>
Vec3T<Real> from_c3_channels(const Vec3T<Real> &c) {
    return C3BasisT<Real>::instance().U * c;
}

}  // namespace c3g
