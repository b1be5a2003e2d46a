#include "c3g/signals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <ostream>

#include "c3g/format.hpp"

namespace c3g {

void BlochState::validate() const {
    const double pi = std::numbers::pi;
    if (!std::isfinite(i0) || !std::isfinite(i_s) || !(i_s >= 0.0)) {
        throw ValidationError("bloch state: i_s must be finite and >= 0");
    }
    if (!(eta >= 0.0 && eta <= pi)) throw ValidationError("bloch state: eta must lie in [0, pi]");
    if (!(kappa >= 0.0 && kappa < 2.0 * pi)) throw ValidationError("bloch state: kappa must lie in [0, 2pi)");
}

Vec3 encode_bloch(const BlochState &state) {
    state.validate();
    const C3Basis &b = C3Basis::instance();
    const Complex up = std::cos(state.eta / 2.0);
    const Complex down = std::sin(state.eta / 2.0) * std::polar(1.0, state.kappa);
    return state.i0 * b.phi0 + state.i_s * (up * b.phi_s1 + down * b.phi_s2);
}

Channels decompose_channels(const Vec3 &v) {
    const Vec3 c = to_c3_channels(v);
    return {c(0), c(1), c(2)};
}

std::array<Complex, 2> sorted_eigenvalues(const Mat2 &m) {
    const Complex half_trace = 0.5 * (m(0, 0) + m(1, 1));
    const Complex half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const Complex root = std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));
    std::array<Complex, 2> e = {half_trace + root, half_trace - root};
    auto less = [](Complex a, Complex b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    };
    if (less(e[1], e[0])) std::swap(e[0], e[1]);
    return e;
}

namespace {

// Real and imaginary parts below 1e-12 of the signature scale are rounding noise; zero them.
Complex snap(Complex z, double scale) {
    const double floor = 1e-12 * scale;
    return {std::abs(z.real()) <= floor ? 0.0 : z.real(), std::abs(z.imag()) <= floor ? 0.0 : z.imag()};
}

}  // namespace

TransferSignature signature_from_transfer(const TransferResult &transfer) {
    const Mat2 &m = transfer.spin_block;
    const Complex half_trace = 0.5 * (m(0, 0) + m(1, 1));
    const Complex half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const Complex disc = half_diff * half_diff + m(0, 1) * m(1, 0);
    // A discriminant that cancels to rounding level is a degenerate (possibly defective) pair.
    const double terms = std::max({std::norm(half_diff), std::abs(m(0, 1) * m(1, 0)), std::norm(half_trace)});
    const Complex root = std::abs(disc) <= 1e-13 * terms ? Complex(0.0) : std::sqrt(disc);
    const std::array<Complex, 2> e = {half_trace + root, half_trace - root};
    const double scale = std::max({std::abs(transfer.constant_coeff), std::abs(e[0]), std::abs(e[1])});
    Complex a = snap(e[0], scale), b = snap(e[1], scale);
    if (std::pair(b.real(), b.imag()) < std::pair(a.real(), a.imag())) std::swap(a, b);
    return TransferSignature{{snap(transfer.constant_coeff, scale), a, b}};
}

TransferSignature signature(const ChainCircuit &circuit, Complex s) {
    const PseudospinBlocks blocks = extract_blocks(circuit, s);
    const TransferResult r = (blocks.cells() == 3 || blocks.cells() == 4) && blocks.uniform()
                                 ? transfer_closed_form(blocks)
                                 : transfer_numeric(blocks);
    return signature_from_transfer(r);
}

double signature_distance(const TransferSignature &a, const TransferSignature &target) {
    double d = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        d = std::max(d, std::abs(a.vec[k] - target.vec[k]) / std::max(std::abs(target.vec[k]), 1e-12));
    }
    return d;
}

nlohmann::json signature_to_json(const TransferSignature &sig) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &z : sig.vec) j.push_back({z.real(), z.imag()});
    return j;
}

TransferSignature signature_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 3) throw ValidationError("signature: expected [[re,im] x 3]");
    TransferSignature sig;
    for (std::size_t k = 0; k < 3; ++k) {
        const auto &p = j[k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw ValidationError("signature[" + std::to_string(k) + "]: expected [re, im]");
        }
        sig.vec[k] = Complex(p[0].get<double>(), p[1].get<double>());
    }
    return sig;
}

Waveform waveform(Complex v_phasor, double f_hz, int periods, int samples_per_period) {
    if (periods < 1) throw ValidationError("waveform: periods must be >= 1");
    if (samples_per_period < 8) throw ValidationError("waveform: samples_per_period must be >= 8");
    if (!(f_hz > 0.0)) throw ValidationError("waveform: frequency must be > 0");
    Waveform w;
    w.frequency = f_hz;
    const int total = periods * samples_per_period;
    w.samples.reserve(std::size_t(total));
    for (int k = 0; k < total; ++k) {
        // Phase taken modulo one period to keep the argument small.
        const double frac = double(k % samples_per_period) / samples_per_period;
        const double t = double(k) / (f_hz * samples_per_period);
        const Complex rot = std::polar(1.0, 2.0 * std::numbers::pi * frac);
        w.samples.emplace_back(t, (v_phasor * rot).real());
    }
    return w;
}

void write_waveform_csv(std::ostream &out, const Waveform &w) {
    out << "t_s,v_volts\n";
    for (const auto &[t, v] : w.samples) out << format_double(t) << ',' << format_double(v) << '\n';
}

}  // namespace c3g
