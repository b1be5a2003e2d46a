#include "c3g/solver.hpp"

#include <cmath>
#include <ostream>

#include "c3g/format.hpp"
#include "c3g/parallel.hpp"

namespace c3g {

namespace {

template <typename Matrix>
double condition_of(const Eigen::PartialPivLU<Matrix> &lu) {
    const double rcond = lu.rcond();
    return rcond > 0.0 && std::isfinite(rcond) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

void check_condition(double condition, const char *what) {
    if (!(condition <= kMaxCondition)) {
        throw ResonanceError(std::string(what) + ": matrix is singular or ill-conditioned (condition estimate " +
                                 format_double(condition) + "); the frequency is at or near a resonance",
                             condition);
    }
}

}  // namespace

DirectSolution solve_direct_checked(const AdmittanceMatrix &y, const VecX &i_in) {
    if (y.y.rows() != y.y.cols() || y.y.rows() != i_in.size()) {
        throw ValidationError("solve_direct: dimension mismatch");
    }
    if (!y.y.allFinite() || !i_in.allFinite()) {
        throw ValidationError("solve_direct: non-finite input");
    }
    Eigen::PartialPivLU<MatX> lu(y.y);
    DirectSolution out;
    out.condition = condition_of(lu);
    check_condition(out.condition, "solve_direct");
    out.v = lu.solve(i_in);
    const double norm_i = i_in.norm();
    const double r = (y.y * out.v - i_in).norm();
    out.residual = norm_i > 0.0 ? r / norm_i : r;
    if (!out.v.allFinite() || out.residual > 1e-10) {
        throw ResonanceError("solve_direct: residual check failed (relative residual " +
                                 format_double(out.residual) + ")",
                             out.condition);
    }
    return out;
}

VecX solve_direct(const AdmittanceMatrix &y, const VecX &i_in) { return solve_direct_checked(y, i_in).v; }

bool PseudospinBlocks::uniform(double rel_tol) const {
    double scale = 0.0;
    for (std::size_t c = 0; c < cells(); ++c) {
        scale = std::max({scale, std::abs(lambda1[c]), onsite_spin[c].cwiseAbs().maxCoeff()});
    }
    const double tol = rel_tol * std::max(scale, std::numeric_limits<double>::min());
    const Mat2 ref = lambda2(0) * Mat2::Identity();
    for (std::size_t c = 0; c < cells(); ++c) {
        if (std::abs(lambda1[c] - lambda1[0]) > tol) return false;
        if ((onsite_spin[c] - ref).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

MatX PseudospinBlocks::constant_chain() const {
    const auto n = Eigen::Index(cells());
    MatX m = MatX::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) m(c, c) = lambda1[c];
    for (Eigen::Index c = 0; c + 1 < n; ++c) {
        m(c, c + 1) = t[c];
        m(c + 1, c) = t[c];
    }
    return m;
}

MatX PseudospinBlocks::spin_chain() const {
    const auto n = Eigen::Index(cells());
    MatX m = MatX::Zero(2 * n, 2 * n);
    for (Eigen::Index c = 0; c < n; ++c) m.block<2, 2>(2 * c, 2 * c) = onsite_spin[c];
    for (Eigen::Index c = 0; c + 1 < n; ++c) {
        m.block<2, 2>(2 * c, 2 * c + 2) = h_forward[c];
        m.block<2, 2>(2 * c + 2, 2 * c) = h_backward[c];
    }
    return m;
}

PseudospinBlocks extract_blocks(const ChainCircuit &circuit, Complex s) {
    const AdmittanceMatrix y = assemble(circuit, s);
    const std::size_t n = y.cells;
    const Mat3 &u = C3Basis::instance().U;
    MatX w = MatX::Zero(3 * n, 3 * n);
    for (std::size_t c = 0; c < n; ++c) w.block<3, 3>(3 * c, 3 * c) = u;
    const MatX tr = w.adjoint() * y.y * w;

    // Mixing entries between constant rows/cols (3c) and spin rows/cols (3c+1, 3c+2).
    double mix = 0.0;
    for (std::size_t a = 0; a < 3 * n; ++a) {
        for (std::size_t b = 0; b < 3 * n; ++b) {
            const bool ca = a % 3 == 0, cb = b % 3 == 0;
            if (ca != cb) mix += std::norm(tr(a, b));
        }
    }
    PseudospinBlocks out;
    out.s = s;
    const double ynorm = y.y.norm();
    out.leakage = ynorm > 0.0 ? std::sqrt(mix) / ynorm : std::sqrt(mix);
    if (out.leakage > 1e-12) {
        throw ValidationError("extract_blocks: constant and pseudospin channels do not decouple (relative leakage " +
                              format_double(out.leakage) + ")");
    }
    for (std::size_t c = 0; c < n; ++c) {
        out.lambda1.push_back(tr(3 * c, 3 * c));
        out.onsite_spin.push_back(tr.block<2, 2>(3 * c + 1, 3 * c + 1));
    }
    for (std::size_t c = 0; c + 1 < n; ++c) {
        out.t.push_back(tr(3 * c, 3 * c + 3));
        out.h_forward.push_back(tr.block<2, 2>(3 * c + 1, 3 * c + 4));
        out.h_backward.push_back(tr.block<2, 2>(3 * c + 4, 3 * c + 1));
    }
    return out;
}

ChainEvaluator::ChainEvaluator(std::shared_ptr<const Catalog> catalog, ReferenceValues reference,
                               Component triangle, Complex s)
    : catalog_(std::move(catalog)), reference_(reference), s_(s), y_triangle_(triangle.admittance(s)) {
    const Mat2 x = pauli(1);
    for (const auto &module : catalog_->entries()) {
        ModuleData d;
        d.left = left_load(module, reference_);
        d.right = right_load(module, reference_);
        const ModuleSignature sig = signature_of(module, s_);
        d.constant = sig.constant;
        d.spin_forward = sig.spin;
        // Pattern transpose in node space is (sigma1 H sigma1)^T in spin space.
        d.spin_backward = (x * sig.spin * x).transpose();
        modules_.push_back(d);
    }
}

KindMultiples ChainEvaluator::totals(std::span<const std::size_t> idx) const {
    const std::size_t n = idx.size() + 1;
    KindMultiples target{};
    for (std::size_t c = 0; c < n; ++c) {
        for (int a = 0; a < 3; ++a) {
            KindMultiples node{};
            if (c > 0) node += modules_.at(idx[c - 1]).right[a];
            if (c + 1 < n) node += modules_.at(idx[c]).left[a];
            target = elementwise_max(target, node);
        }
    }
    return target;
}

PseudospinBlocks ChainEvaluator::blocks(std::span<const std::size_t> idx) const {
    const std::size_t n = idx.size() + 1;
    const Complex shunt = totals(idx).admittance(s_, reference_);
    PseudospinBlocks out;
    out.s = s_;
    out.lambda1.assign(n, -shunt);
    out.onsite_spin.assign(n, Mat2((-3.0 * y_triangle_ - shunt) * Mat2::Identity()));
    for (std::size_t m = 0; m + 1 < n; ++m) {
        const ModuleData &d = modules_.at(idx[m]);
        out.t.push_back(d.constant);
        out.h_forward.push_back(d.spin_forward);
        out.h_backward.push_back(d.spin_backward);
    }
    return out;
}

namespace {

Mat2 spin_transfer_numeric(const PseudospinBlocks &b, double &condition) {
    const MatX chain = b.spin_chain();
    Eigen::PartialPivLU<MatX> lu(chain);
    condition = std::max(condition, condition_of(lu));
    check_condition(condition, "spin chain");
    MatX rhs = MatX::Zero(chain.rows(), 2);
    rhs(0, 0) = 1.0;
    rhs(1, 1) = 1.0;
    const MatX z = lu.solve(rhs);
    return z.block<2, 2>(chain.rows() - 2, 0);
}

void require_shape(const PseudospinBlocks &b) {
    const std::size_t n = b.cells();
    if (n < 2 || b.onsite_spin.size() != n || b.t.size() + 1 != n || b.h_forward.size() + 1 != n ||
        b.h_backward.size() + 1 != n) {
        throw ValidationError("pseudospin blocks have inconsistent lengths");
    }
}

}  // namespace

TransferResult transfer_numeric(const PseudospinBlocks &b) {
    require_shape(b);
    TransferResult out;
    out.s = b.s;
    const MatX chain = b.constant_chain();
    Eigen::PartialPivLU<MatX> lu(chain);
    out.condition = condition_of(lu);
    check_condition(out.condition, "constant chain");
    VecX e1 = VecX::Zero(chain.rows());
    e1(0) = 1.0;
    out.constant_coeff = lu.solve(e1)(chain.rows() - 1);
    out.spin_block = spin_transfer_numeric(b, out.condition);
    return out;
}

Complex constant_gamma(const PseudospinBlocks &b) {
    if (b.cells() != 4) throw ValidationError("gamma is defined for 4-cell chains");
    const Complex l2 = b.lambda1[0] * b.lambda1[0];
    const Complex t1 = b.t[0] * b.t[0], t2 = b.t[1] * b.t[1], t3 = b.t[2] * b.t[2];
    return l2 * (-l2 + t1 + t2 + t3) - t1 * t3;
}

TransferResult transfer_closed_form(const PseudospinBlocks &b) {
    require_shape(b);
    const std::size_t n = b.cells();
    if (n != 3 && n != 4) throw ValidationError("closed-form transfer needs 3 or 4 cells");
    if (!b.uniform()) throw ValidationError("closed-form transfer needs equal on-site blocks");
    TransferResult out;
    out.s = b.s;
    const Complex l = b.lambda1[0];
    double scale = std::abs(l);
    for (const auto &t : b.t) scale = std::max(scale, std::abs(t));
    if (n == 4) {
        const Complex gamma = constant_gamma(b);
        const double rel = std::abs(gamma) / std::pow(scale, 4);
        out.condition = rel > 0.0 ? 1.0 / rel : std::numeric_limits<double>::infinity();
        check_condition(out.condition, "constant chain (gamma)");
        out.constant_coeff = b.t[0] * b.t[1] * b.t[2] / gamma;
    } else {
        const Complex d = b.t[0] * b.t[0] + b.t[1] * b.t[1] - l * l;
        const double rel = std::abs(l * d) / std::pow(scale, 3);
        out.condition = rel > 0.0 ? 1.0 / rel : std::numeric_limits<double>::infinity();
        check_condition(out.condition, "constant chain (lambda1 d)");
        out.constant_coeff = -b.t[0] * b.t[1] / (l * d);
    }
    out.spin_block = spin_transfer_numeric(b, out.condition);
    return out;
}

Mat2 printed_spin_transfer(const PseudospinBlocks &b) {
    require_shape(b);
    const Mat2 id = Mat2::Identity();
    const Complex l2 = b.lambda2(0);
    const auto &hf = b.h_forward;
    const auto &hb = b.h_backward;
    if (b.cells() == 4) {
        const Mat2 delta = l2 * l2 * (hf[0] * hb[0] + hf[1] * hb[1] + hf[2] * hb[2] - l2 * l2 * id) -
                           hf[0] * hb[0] * hf[2] * hb[2];
        return hb[0] * hb[1] * hb[2] * delta.inverse();
    }
    if (b.cells() == 3) {
        const Mat2 xi = (l2 * hf[1] * hb[1] + l2 * hb[0] * hf[0] - l2 * l2 * l2 * id).inverse();
        return -hb[1] * xi * hb[0];
    }
    throw ValidationError("printed spin transfer is defined for 3 or 4 cells");
}

VecX drive_first_cell(std::size_t cells, const Vec3 &cell1) {
    VecX i = VecX::Zero(Eigen::Index(3 * cells));
    i.head<3>() = cell1;
    return i;
}

TransferResult transfer_direct(const ChainCircuit &circuit, Complex s) {
    const AdmittanceMatrix y = assemble(circuit, s);
    const std::size_t n = y.cells;
    const C3Basis &basis = C3Basis::instance();
    Eigen::PartialPivLU<MatX> lu(y.y);
    TransferResult out;
    out.s = s;
    out.condition = condition_of(lu);
    check_condition(out.condition, "transfer_direct");
    MatX rhs = MatX::Zero(Eigen::Index(3 * n), 3);
    rhs.block<3, 3>(0, 0) = basis.U;
    const MatX v = lu.solve(rhs);
    const Mat3 projected = basis.U.adjoint() * v.block<3, 3>(Eigen::Index(3 * (n - 1)), 0);
    out.constant_coeff = projected(0, 0);
    out.spin_block = projected.block<2, 2>(1, 1);
    return out;
}

std::vector<double> sweep_grid(double f_lo, double f_hi, std::size_t n_points, SweepGrid grid) {
    if (n_points < 2) throw ValidationError("sweep needs at least 2 points");
    if (!(f_lo > 0.0) || !(f_lo < f_hi) || !std::isfinite(f_hi)) {
        throw ValidationError("sweep needs 0 < f_lo < f_hi");
    }
    std::vector<double> f(n_points);
    const double last = double(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double frac = double(k) / last;
        f[k] = grid == SweepGrid::Linear ? f_lo + (f_hi - f_lo) * frac : f_lo * std::pow(f_hi / f_lo, frac);
    }
    f.front() = f_lo;
    f.back() = f_hi;
    return f;
}

std::vector<SweepRow> frequency_sweep(const ChainCircuit &circuit, double f_lo, double f_hi,
                                      std::size_t n_points, const VecX &i_in, SweepGrid grid,
                                      unsigned workers) {
    circuit.validate();
    const auto freqs = sweep_grid(f_lo, f_hi, n_points, grid);
    const std::size_t n = circuit.size();
    if (std::size_t(i_in.size()) != 3 * n) throw ValidationError("sweep: current vector has wrong length");
    std::vector<SweepRow> rows(freqs.size());
    parallel_for(freqs.size(), workers, [&](std::size_t k) {
        SweepRow &row = rows[k];
        row.f_hz = freqs[k];
        try {
            const VecX v = solve_direct(assemble(circuit, angular(freqs[k])), i_in);
            for (std::size_t a = 0; a < 3; ++a) row.v_out.push_back(v(Eigen::Index(3 * (n - 1) + a)));
        } catch (const ResonanceError &e) {
            row.error = e.what();
        }
    });
    return rows;
}

double phase_deg(Complex z) {
    double deg = std::atan2(z.imag(), z.real()) * 180.0 / std::numbers::pi;
    if (deg >= 180.0) deg -= 360.0;
    if (deg < -180.0) deg += 360.0;
    return deg;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, std::size_t cells) {
    out << "f_hz,node,re_v,im_v,mag_v,phase_deg\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto &row : rows) {
        for (std::size_t a = 0; a < 3; ++a) {
            const std::size_t node = 3 * (cells - 1) + a + 1;
            const Complex v = row.error.empty() ? row.v_out[a] : Complex(nan, nan);
            out << format_double(row.f_hz) << ',' << node << ',' << format_double(v.real()) << ','
                << format_double(v.imag()) << ',' << format_double(std::abs(v)) << ','
                << format_double(row.error.empty() ? phase_deg(v) : nan) << '\n';
        }
    }
}

}  // namespace c3g
