#pragma once

// Bloch-sphere drive encoding, C3 channel decomposition, transfer signatures
// and steady-state waveforms.

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "json.hpp"

#include "c3g/solver.hpp"

namespace c3g {

/// (i0, i_s, eta, kappa): constant amplitude, spin amplitude and the spin
/// direction on the Bloch sphere. Angles in radians.
struct BlochState {
    double i0 = 0.0;
    double i_s = 0.0;
    double eta = 0.0;
    double kappa = 0.0;

    void validate() const;
};

/// i0 phi0 + i_s (cos(eta/2) phi_s1 + sin(eta/2) e^{i kappa} phi_s2).
Vec3 encode_bloch(const BlochState &state);

struct Channels {
    Complex constant;
    Complex s1;
    Complex s2;
};

Channels decompose_channels(const Vec3 &v);

/// [constant coefficient, spin eigenvalue A, spin eigenvalue B] with the two
/// eigenvalues ordered by (real, imag). Parts below 1e-12 of the largest
/// entry are stored as exact zeros.
struct TransferSignature {
    std::array<Complex, 3> vec{};

    bool operator==(const TransferSignature &) const = default;
};

/// Eigenvalues of a 2x2 matrix, ordered by (real, imag).
std::array<Complex, 2> sorted_eigenvalues(const Mat2 &m);

TransferSignature signature_from_transfer(const TransferResult &transfer);

/// Signature of the cell-1 -> cell-N response of `circuit` at s.
TransferSignature signature(const ChainCircuit &circuit, Complex s);

/// Max over entries of |a_k - b_k| / max(|b_k|, 1e-12).
double signature_distance(const TransferSignature &a, const TransferSignature &target);

nlohmann::json signature_to_json(const TransferSignature &sig);
TransferSignature signature_from_json(const nlohmann::json &j);

struct Waveform {
    double frequency = 0.0;
    std::vector<std::pair<double, double>> samples;  // (t seconds, volts)
};

/// Re[v e^{i 2 pi f t}] sampled uniformly over `periods` whole periods.
Waveform waveform(Complex v_phasor, double f_hz, int periods, int samples_per_period);

/// CSV `t_s,v_volts`.
void write_waveform_csv(std::ostream &out, const Waveform &w);

}  // namespace c3g
