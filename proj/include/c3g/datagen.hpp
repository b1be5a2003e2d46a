#pragma once

// Seeded corpus of (structure-info prompt, circuit, schematic) records and
// the schematic renderer.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "c3g/design.hpp"

namespace c3g {

inline constexpr int kPromptFormatVersion = 1;

struct DatasetRecord {
    std::string id;
    std::string prompt;
    ChainCircuit circuit;
    TransferSignature signature;
    ComponentBudget budget;
    std::string svg_path;
    std::uint64_t seed = 0;
};

/// Uniform integer in [0, bound) from a full-range 64-bit engine by
/// rejection, so the stream is identical on every standard library.
template <typename Engine>
std::uint64_t bounded_draw(Engine &engine, std::uint64_t bound) {
    static_assert(Engine::min() == 0 && Engine::max() == ~std::uint64_t(0));
    if (bound == 0) throw ValidationError("bounded_draw: empty range");
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound + 1) % bound;
    for (;;) {
        const std::uint64_t x = engine();
        if (x <= limit) return x % bound;
    }
}

/// n distinct coupling triples sampled without replacement (seeded partial
/// Fisher-Yates over the enumerated space), 4 cells each. Circuits that are
/// resonant at `frequency_hz` are skipped, reported through `on_skip`, and
/// replaced by the next draw.
std::vector<DatasetRecord> generate_dataset(std::size_t n, std::uint64_t seed,
                                            std::shared_ptr<const Catalog> catalog, double frequency_hz,
                                            const std::function<void(const std::string &)> &on_skip = {});

/// `transfer function coefficient vector [a+bi, ...]; node connection
/// components <p>C + <q>R; circuit composition: N C3 units, N-1 couplings`.
std::string prompt_text(const TransferSignature &signature, const ComponentBudget &budget, std::size_t cells);
std::string prompt_text(const DatasetRecord &record);

struct ParsedPrompt {
    TransferSignature signature;
    ComponentBudget budget;
    std::size_t cells = 0;
    std::size_t couplings = 0;
};

/// Inverse of prompt_text. Throws ValidationError on malformed text.
ParsedPrompt parse_prompt(const std::string &text);

/// Deterministic schematic: cells left to right, solid capacitors, dashed
/// resistors, dotted inductors, arrowheads on negative-entry branches and a
/// ground glyph under each node.
std::string render_svg(const ChainCircuit &circuit);

nlohmann::json record_to_json(const DatasetRecord &record);

/// Writes `manifest.json` and `svg/<id>.svg` under `dir`. Throws IoError.
void write_dataset(const std::vector<DatasetRecord> &records, const std::filesystem::path &dir);

/// Writes text to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path &path, const std::string &text);

}  // namespace c3g
