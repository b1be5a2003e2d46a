#pragma once

// Node voltages and cell-1 -> cell-N transfer functions. The dense direct
// solve of the full admittance matrix is ground truth; the pseudospin chain
// forms are cross-checked against it.

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "c3g/lattice.hpp"

namespace c3g {

/// Condition estimate above which a solve is treated as sitting on a resonance.
inline constexpr double kMaxCondition = 1e12;

struct DirectSolution {
    VecX v;
    double condition = 0.0;
    double residual = 0.0;  // ||Y v - i|| / ||i||
};

/// Dense LU solve of Y v = i. Throws ResonanceError (carrying the condition
/// estimate) when Y is singular or its condition estimate exceeds kMaxCondition.
DirectSolution solve_direct_checked(const AdmittanceMatrix &y, const VecX &i_in);
VecX solve_direct(const AdmittanceMatrix &y, const VecX &i_in);

/// The admittance matrix rewritten in the C3 basis and split into a scalar
/// constant chain and a 2x2-block pseudospin chain.
struct PseudospinBlocks {
    Complex s;
    std::vector<Complex> lambda1;     // constant on-site, per cell
    std::vector<Mat2> onsite_spin;    // spin on-site, per cell (lambda2 * sigma0 when balanced)
    std::vector<Complex> t;           // constant hopping m -> m+1
    std::vector<Mat2> h_forward;      // h12, h23, ...
    std::vector<Mat2> h_backward;     // h21, h32, ...
    double leakage = 0.0;             // relative constant/spin mixing norm

    std::size_t cells() const { return lambda1.size(); }
    Complex lambda2(std::size_t cell = 0) const { return onsite_spin.at(cell)(0, 0); }
    /// All cells share lambda1 and a lambda2 * sigma0 spin on-site block.
    bool uniform(double rel_tol = 1e-12) const;
    MatX constant_chain() const;
    MatX spin_chain() const;
};

/// Reads the blocks off U^dagger Y U of the assembled matrix. Throws
/// ValidationError when the constant/spin mixing exceeds 1e-12 relative.
PseudospinBlocks extract_blocks(const ChainCircuit &circuit, Complex s);

/// Second route to the same blocks, built from per-module signatures without
/// assembling the node-space matrix. Auto grounding only. Used for bulk
/// evaluation over the enumerated design space.
class ChainEvaluator {
public:
    ChainEvaluator(std::shared_ptr<const Catalog> catalog, ReferenceValues reference, Component triangle,
                   Complex s);

    PseudospinBlocks blocks(std::span<const std::size_t> module_indices) const;
    /// Equalized per-node total multiples for the chain.
    KindMultiples totals(std::span<const std::size_t> module_indices) const;

    const Catalog &catalog() const { return *catalog_; }
    Complex s() const { return s_; }

private:
    struct ModuleData {
        NodeMultiples left, right;
        Complex constant;
        Mat2 spin_forward, spin_backward;
    };
    std::shared_ptr<const Catalog> catalog_;
    ReferenceValues reference_;
    Complex s_;
    Complex y_triangle_;
    std::vector<ModuleData> modules_;
};

struct TransferResult {
    Complex constant_coeff;
    Mat2 spin_block;
    Complex s;
    double condition = 0.0;
};

/// Numeric inversion of both chains; any N >= 2.
TransferResult transfer_numeric(const PseudospinBlocks &blocks);

/// N = 4: t1 t2 t3 / gamma for the constant channel; N = 3: -t1 t2 / (lambda1 d)
/// with d = t1^2 + t2^2 - lambda1^2. The spin block always comes from numeric
/// inversion of the spin chain. Throws ResonanceError when gamma (or d) vanishes.
TransferResult transfer_closed_form(const PseudospinBlocks &blocks);

/// gamma = lambda1^2 (-lambda1^2 + t1^2 + t2^2 + t3^2) - t1^2 t3^2 (N = 4).
Complex constant_gamma(const PseudospinBlocks &blocks);

/// The scalar-style printed spin transfer: h21 h32 h43 Delta^-1 (N = 4) or
/// -h32 xi h21 (N = 3). Exact only when all blocks commute.
Mat2 printed_spin_transfer(const PseudospinBlocks &blocks);

/// Ground truth: drives cell 1 with phi0, phi_s1, phi_s2 through the full
/// 3N x 3N solve and projects the cell-N response onto the same basis.
TransferResult transfer_direct(const ChainCircuit &circuit, Complex s);

/// Full-length current vector with `cell1` applied at the first cell.
VecX drive_first_cell(std::size_t cells, const Vec3 &cell1);

enum class SweepGrid { Linear, Log };

struct SweepRow {
    double f_hz = 0.0;
    std::vector<Complex> v_out;  // last-cell node voltages
    std::string error;           // empty unless this point failed
};

std::vector<double> sweep_grid(double f_lo, double f_hi, std::size_t n_points, SweepGrid grid);

std::vector<SweepRow> frequency_sweep(const ChainCircuit &circuit, double f_lo, double f_hi,
                                      std::size_t n_points, const VecX &i_in,
                                      SweepGrid grid = SweepGrid::Linear, unsigned workers = 1);

/// CSV `f_hz,node,re_v,im_v,mag_v,phase_deg`, nodes numbered globally from 1.
void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows, std::size_t cells);

/// Degrees in [-180, 180).
double phase_deg(Complex z);

}  // namespace c3g
