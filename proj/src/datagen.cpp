#include "c3g/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>

#include "c3g/format.hpp"

namespace c3g {

using nlohmann::json;

std::vector<DatasetRecord> generate_dataset(std::size_t n, std::uint64_t seed,
                                            std::shared_ptr<const Catalog> catalog, double frequency_hz,
                                            const std::function<void(const std::string &)> &on_skip) {
    if (!catalog) throw ValidationError("generate_dataset: no catalog");
    const TripleSpace space = enumerate_space(*catalog);
    if (n > space.size()) {
        throw ValidationError("dataset size " + std::to_string(n) + " exceeds the " +
                              std::to_string(space.size()) + " enumerable circuits");
    }
    const Complex s = angular(frequency_hz);
    std::mt19937_64 engine(seed);
    std::vector<std::uint32_t> order(space.size());
    std::iota(order.begin(), order.end(), 0u);

    std::vector<DatasetRecord> records;
    records.reserve(n);
    const int width = int(std::to_string(n > 0 ? n - 1 : 0).size());
    for (std::size_t k = 0; k < order.size() && records.size() < n; ++k) {
        std::swap(order[k], order[k + bounded_draw(engine, order.size() - k)]);
        const Triple t = space.at(order[k]);
        ChainCircuit circuit =
            make_chain(catalog, {catalog->at(t[0]).id, catalog->at(t[1]).id, catalog->at(t[2]).id});
        DatasetRecord rec;
        try {
            rec.signature = signature(circuit, s);
        } catch (const ResonanceError &e) {
            if (on_skip) {
                on_skip("skipped " + circuit.couplings[0] + "," + circuit.couplings[1] + "," +
                        circuit.couplings[2] + ": " + e.what());
            }
            continue;
        }
        std::string index = std::to_string(records.size());
        rec.id = "rec-" + std::string(std::size_t(std::max(0, width - int(index.size()))), '0') + index;
        rec.budget = component_budget_of(circuit);
        rec.circuit = std::move(circuit);
        rec.seed = seed;
        rec.svg_path = "svg/" + rec.id + ".svg";
        rec.prompt = prompt_text(rec);
        records.push_back(std::move(rec));
    }
    if (records.size() < n) throw ValidationError("not enough non-resonant circuits for the requested size");
    return records;
}

namespace {

std::string complex_text(Complex z) {
    std::string re = format_sci3(z.real());
    std::string im = format_sci3(std::abs(z.imag()));
    const bool negative = z.imag() < 0.0 && im != "0.00e0";
    return re + (negative ? "-" : "+") + im + "i";
}

}  // namespace

std::string prompt_text(const TransferSignature &signature, const ComponentBudget &budget, std::size_t cells) {
    std::string out = "transfer function coefficient vector [";
    for (int k = 0; k < 3; ++k) {
        if (k) out += ", ";
        out += complex_text(signature.vec[k]);
    }
    out += "]; node connection components " + format_double(budget.capacitive) + "C + " +
           format_double(budget.resistive) + "R; circuit composition: " + std::to_string(cells) + " C3 units, " +
           std::to_string(cells > 0 ? cells - 1 : 0) + " couplings";
    return out;
}

std::string prompt_text(const DatasetRecord &record) {
    return prompt_text(record.signature, record.budget, record.circuit.size());
}

ParsedPrompt parse_prompt(const std::string &text) {
    static const std::regex shape(
        R"(transfer function coefficient vector \[([^\]]*)\]; node connection components (\S+)C \+ (\S+)R; circuit composition: (\d+) C3 units, (\d+) couplings)");
    static const std::regex number(R"(([-+]?[0-9.]+e[-+]?[0-9]+)([-+])([0-9.]+e[-+]?[0-9]+)i)");
    std::smatch m;
    if (!std::regex_match(text, m, shape)) throw ValidationError("prompt does not match the template");
    ParsedPrompt p;
    const std::string coeffs = m[1].str();
    int k = 0;
    for (auto it = std::sregex_iterator(coeffs.begin(), coeffs.end(), number); it != std::sregex_iterator(); ++it) {
        if (k == 3) throw ValidationError("prompt: more than 3 coefficients");
        const double re = std::stod((*it)[1].str());
        const double im = std::stod((*it)[3].str());
        p.signature.vec[k++] = Complex(re, (*it)[2].str() == "-" ? -im : im);
    }
    if (k != 3) throw ValidationError("prompt: expected 3 coefficients");
    p.budget = {std::stod(m[2].str()), std::stod(m[3].str())};
    p.cells = std::stoul(m[4].str());
    p.couplings = std::stoul(m[5].str());
    return p;
}

json record_to_json(const DatasetRecord &record) {
    return {{"id", record.id},
            {"seed", record.seed},
            {"prompt", record.prompt},
            {"circuit", circuit_to_json(record.circuit)},
            {"signature", signature_to_json(record.signature)},
            {"svg_path", record.svg_path},
            {"format_version", kPromptFormatVersion}};
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write failed: " + path.string());
}

void write_dataset(const std::vector<DatasetRecord> &records, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir / "svg", ec);
    if (ec) throw IoError("cannot create " + (dir / "svg").string() + ": " + ec.message());
    json manifest = json::array();
    for (const auto &r : records) {
        manifest.push_back(record_to_json(r));
        write_text_file(dir / r.svg_path, render_svg(r.circuit));
    }
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace c3g
