// c3g: batch front end for simulation, sweeps, signatures, inverse design,
// corpus generation and schematic rendering. Data goes to stdout, diagnostics
// to stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "c3g/datagen.hpp"
#include "c3g/format.hpp"
#include "c3g/parallel.hpp"

using namespace c3g;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitResonance = 2;
constexpr int kExitIo = 3;

std::shared_ptr<const Catalog> catalog_from(const std::string &path) {
    if (path.empty()) return std::make_shared<const Catalog>(default_catalog());
    return std::make_shared<const Catalog>(load_catalog(path));
}

BlochState parse_bloch(const std::string &text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ValidationError("--bloch: '" + item + "' is not a number");
        }
    }
    if (v.size() != 4) throw ValidationError("--bloch expects i0,is,eta,kappa");
    BlochState b{v[0], v[1], v[2], v[3]};
    b.validate();
    return b;
}

/// 3 values drive cell 1; 3N values drive every node.
VecX currents_from_file(const std::string &path, std::size_t cells) {
    const json doc = read_json_file(path);
    if (!doc.is_array()) throw ValidationError(path + ": expected [[re,im], ...]");
    VecX out;
    if (doc.size() == 3) {
        out = VecX::Zero(Eigen::Index(3 * cells));
    } else if (doc.size() == 3 * cells) {
        out.resize(Eigen::Index(3 * cells));
    } else {
        throw ValidationError(path + ": expected 3 or " + std::to_string(3 * cells) + " currents");
    }
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const json &z = doc[k];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
            throw ValidationError(path + "[" + std::to_string(k) + "]: expected [re, im]");
        }
        out(Eigen::Index(k)) = Complex(z[0].get<double>(), z[1].get<double>());
    }
    return out;
}

struct DriveOptions {
    std::string bloch;
    std::string currents;
};

void add_drive(CLI::App *cmd, DriveOptions &d) {
    auto *b = cmd->add_option("--bloch", d.bloch, "i0,is,eta,kappa (amperes, radians) applied to cell 1");
    auto *c = cmd->add_option("--currents", d.currents, "JSON [[re,im]x3 or x3N] node currents (amperes)");
    b->excludes(c);
}

VecX drive_vector(const DriveOptions &d, std::size_t cells, json *echo = nullptr) {
    if (d.bloch.empty() == d.currents.empty()) {
        throw ValidationError("give exactly one of --bloch or --currents");
    }
    if (!d.bloch.empty()) {
        const BlochState b = parse_bloch(d.bloch);
        if (echo) (*echo)["bloch"] = {{"i0", b.i0}, {"is", b.i_s}, {"eta", b.eta}, {"kappa", b.kappa}};
        return drive_first_cell(cells, encode_bloch(b));
    }
    return currents_from_file(d.currents, cells);
}

json phasor_json(Complex z) {
    return {{"re", z.real()}, {"im", z.imag()}, {"mag", std::abs(z)}, {"phase_deg", phase_deg(z)}};
}

double khz_to_hz(double khz) {
    if (!(khz > 0.0) || !std::isfinite(khz)) throw ValidationError("frequency must be > 0 kHz");
    return khz * 1e3;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"C3-symmetric circuit chains: simulation, inverse design and corpus generation"};
    app.require_subcommand(1);

    std::string circuit_path, catalog_path, out_path, format = "json", query_path, grid = "linear";
    double freq_khz = 15.0, f_lo_khz = 10.0, f_hi_khz = 20.0;
    std::size_t points = 101, n_records = 4096;
    std::uint64_t seed = 1;
    int max_results = 0, node = 1, periods = 2, spp = 64;
    bool emit_default = false;
    std::string validate_path;
    DriveOptions drive;

    auto *sim = app.add_subcommand("simulate", "node voltages for one drive at one frequency (JSON)");
    sim->add_option("--circuit", circuit_path, "circuit JSON")->required();
    sim->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    sim->add_option("--freq-khz", freq_khz, "drive frequency in kHz");
    add_drive(sim, drive);

    auto *sweep = app.add_subcommand("sweep", "last-cell voltages over a frequency grid");
    sweep->add_option("--circuit", circuit_path, "circuit JSON")->required();
    sweep->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    sweep->add_option("--f-lo-khz", f_lo_khz, "lower frequency in kHz");
    sweep->add_option("--f-hi-khz", f_hi_khz, "upper frequency in kHz");
    sweep->add_option("--points", points, "grid points (>= 2)");
    sweep->add_option("--grid", grid, "linear|log")->check(CLI::IsMember({"linear", "log"}));
    sweep->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    add_drive(sweep, drive);

    auto *sig = app.add_subcommand("signature", "transfer signature [[re,im]x3] of a circuit");
    sig->add_option("--circuit", circuit_path, "circuit JSON")->required();
    sig->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    sig->add_option("--freq-khz", freq_khz, "frequency in kHz");

    auto *design = app.add_subcommand("design", "exhaustive search for circuits matching a target signature");
    design->add_option("--query", query_path, "query JSON")->required();
    design->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    design->add_option("--max-results", max_results, "override the query's max_results");

    auto *dataset = app.add_subcommand("dataset", "seeded corpus: manifest.json + svg/<id>.svg");
    dataset->add_option("--n", n_records, "number of records");
    dataset->add_option("--seed", seed, "generator seed");
    dataset->add_option("--out", out_path, "output directory")->required();
    dataset->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    dataset->add_option("--freq-khz", freq_khz, "frequency in kHz");

    auto *cat = app.add_subcommand("catalog", "emit or validate a coupling catalog");
    auto *emit = cat->add_flag("--emit-default", emit_default, "print the built-in catalog");
    auto *val = cat->add_option("--validate", validate_path, "catalog JSON to check");
    emit->excludes(val);

    auto *render = app.add_subcommand("render", "SVG schematic of a circuit");
    render->add_option("--circuit", circuit_path, "circuit JSON")->required();
    render->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    render->add_option("--out", out_path, "output SVG (default: stdout)");

    auto *wave = app.add_subcommand("waveform", "steady-state v(t) of one node (CSV t_s,v_volts)");
    wave->add_option("--circuit", circuit_path, "circuit JSON")->required();
    wave->add_option("--catalog", catalog_path, "catalog JSON (default: built-in)");
    wave->add_option("--freq-khz", freq_khz, "frequency in kHz");
    wave->add_option("--node", node, "global node number, from 1");
    wave->add_option("--periods", periods, "whole periods (>= 1)");
    wave->add_option("--samples-per-period", spp, "samples per period (>= 8)");
    add_drive(wave, drive);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (sim->parsed()) {
            const ChainCircuit circuit = load_circuit(circuit_path, catalog_from(catalog_path));
            const double f = khz_to_hz(freq_khz);
            json input;
            const VecX i_in = drive_vector(drive, circuit.size(), &input);
            const VecX v = solve_direct(assemble(circuit, angular(f)), i_in);
            json currents = json::array(), voltages = json::array();
            for (Eigen::Index k = 0; k < v.size(); ++k) {
                json c = phasor_json(i_in(k));
                c["node"] = k + 1;
                currents.push_back(c);
                json e = phasor_json(v(k));
                e["node"] = k + 1;
                e["cell"] = k / 3 + 1;
                e["output"] = std::size_t(k / 3 + 1) == circuit.size();
                voltages.push_back(e);
            }
            input["currents"] = currents;
            json doc = {{"frequency_khz", freq_khz}, {"input", input}, {"voltages", voltages}};
            std::cout << doc.dump(2) << "\n";
        } else if (sweep->parsed()) {
            const ChainCircuit circuit = load_circuit(circuit_path, catalog_from(catalog_path));
            const VecX i_in = drive_vector(drive, circuit.size());
            const auto rows = frequency_sweep(circuit, khz_to_hz(f_lo_khz), khz_to_hz(f_hi_khz), points, i_in,
                                              grid == "log" ? SweepGrid::Log : SweepGrid::Linear, worker_count());
            if (format == "csv") {
                write_sweep_csv(std::cout, rows, circuit.size());
            } else {
                json out = json::array();
                for (const auto &r : rows) {
                    json row = {{"f_hz", r.f_hz}};
                    if (!r.error.empty()) {
                        row["error"] = r.error;
                    } else {
                        json vs = json::array();
                        for (const auto &z : r.v_out) vs.push_back(phasor_json(z));
                        row["v_out"] = vs;
                    }
                    out.push_back(row);
                }
                std::cout << out.dump(2) << "\n";
            }
            for (const auto &r : rows) {
                if (!r.error.empty()) std::cerr << "f = " << format_double(r.f_hz) << " Hz: " << r.error << "\n";
            }
        } else if (sig->parsed()) {
            const ChainCircuit circuit = load_circuit(circuit_path, catalog_from(catalog_path));
            std::cout << signature_to_json(signature(circuit, angular(khz_to_hz(freq_khz)))).dump() << "\n";
        } else if (design->parsed()) {
            DesignQuery q;
            try {
                q = query_from_json(read_json_file(query_path));
            } catch (const ValidationError &e) {
                throw ValidationError(query_path + ": " + e.what());
            }
            if (max_results > 0) q.max_results = max_results;
            const auto results = search(q, catalog_from(catalog_path), worker_count());
            std::cout << results_to_json(results).dump(2) << "\n";
        } else if (dataset->parsed()) {
            const auto records = generate_dataset(n_records, seed, catalog_from(catalog_path), khz_to_hz(freq_khz),
                                                  [](const std::string &msg) { std::cerr << msg << "\n"; });
            write_dataset(records, out_path);
        } else if (cat->parsed()) {
            if (emit_default) {
                std::cout << catalog_to_json(default_catalog()).dump(2) << "\n";
            } else if (!validate_path.empty()) {
                const Catalog c = load_catalog(validate_path);
                std::cout << json{{"valid", true}, {"entries", c.size()}}.dump() << "\n";
            } else {
                throw ValidationError("catalog: give --emit-default or --validate FILE");
            }
        } else if (render->parsed()) {
            const ChainCircuit circuit = load_circuit(circuit_path, catalog_from(catalog_path));
            const std::string svg = render_svg(circuit);
            if (out_path.empty()) {
                std::cout << svg;
            } else {
                write_text_file(out_path, svg);
            }
        } else if (wave->parsed()) {
            const ChainCircuit circuit = load_circuit(circuit_path, catalog_from(catalog_path));
            const double f = khz_to_hz(freq_khz);
            if (node < 1 || std::size_t(node) > 3 * circuit.size()) {
                throw ValidationError("--node must lie in 1.." + std::to_string(3 * circuit.size()));
            }
            const VecX v = solve_direct(assemble(circuit, angular(f)), drive_vector(drive, circuit.size()));
            write_waveform_csv(std::cout, waveform(v(node - 1), f, periods, spp));
        }
    } catch (const ResonanceError &e) {
        std::cerr << "resonance: " << e.what() << "\n";
        return kExitResonance;
    } catch (const IoError &e) {
        std::cerr << "io: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError &e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kExitValidation;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kExitValidation;
    }
    std::cout.flush();
    return std::cout ? 0 : kExitIo;
}
