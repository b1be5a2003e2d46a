#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "test_util.hpp"

using namespace c3g;
using namespace c3g::testing;

namespace {

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string bundle(const std::string &svg, int m) {
    const auto start = svg.find("<g id=\"bundle-" + std::to_string(m) + "\"");
    return svg.substr(start, svg.find("</g>", start) - start);
}

std::size_t count(const std::string &text, const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

struct ScriptedEngine {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~std::uint64_t(0); }
    std::vector<result_type> values;
    std::size_t next = 0;
    result_type operator()() { return values.at(next++); }
};

}  // namespace

TEST(bounded_draw, rejection) {
    // 2^64 = 1 (mod 3): exactly one value at the top must be rejected.
    ScriptedEngine e{{~std::uint64_t(0), 5}};
    ASSERT_EQ(bounded_draw(e, 3), 2u);
    ASSERT_EQ(e.next, 2u);
    ScriptedEngine f{{~std::uint64_t(0) - 1}};
    ASSERT_EQ(bounded_draw(f, 3), (~std::uint64_t(0) - 1) % 3);
    ScriptedEngine pow2{{~std::uint64_t(0)}};
    ASSERT_EQ(bounded_draw(pow2, 8), 7u);

    std::mt19937_64 engine(3);
    std::vector<int> hist(7, 0);
    for (int k = 0; k < 70000; ++k) ++hist[bounded_draw(engine, 7)];
    for (int h : hist) ASSERT_NEAR(h, 10000, 500);
}

TEST(generate_dataset, records) {
    const auto catalog = shared_default_catalog();
    const auto records = generate_dataset(300, 7, catalog, 15e3);
    ASSERT_EQ(records.size(), 300u);
    std::set<std::vector<std::string>> triples;
    std::set<std::string> ids;
    for (const auto &r : records) {
        ASSERT_TRUE(r.circuit.couplings_distinct());
        ASSERT_EQ(r.circuit.size(), 4u);
        triples.insert(r.circuit.couplings);
        ids.insert(r.id);
        ASSERT_EQ(signature(r.circuit, s15k()), r.signature);
        ASSERT_EQ(r.seed, 7u);
        ASSERT_EQ(r.svg_path, "svg/" + r.id + ".svg");
        ASSERT_EQ(r.prompt, prompt_text(r));
        ASSERT_EQ(r.budget, component_budget_of(r.circuit));
    }
    ASSERT_EQ(triples.size(), 300u);
    ASSERT_EQ(ids.size(), 300u);
}

TEST(generate_dataset, deterministic) {
    const auto catalog = shared_default_catalog();
    auto dump = [&](std::size_t n, std::uint64_t seed) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto &r : generate_dataset(n, seed, catalog, 15e3)) j.push_back(record_to_json(r));
        return j.dump();
    };
    ASSERT_EQ(dump(1, 99), dump(1, 99));
    ASSERT_EQ(dump(50, 5), dump(50, 5));
    ASSERT_NE(dump(50, 5), dump(50, 6));
    // A prefix of a larger draw is the smaller draw.
    const auto small = generate_dataset(20, 5, catalog, 15e3);
    const auto large = generate_dataset(40, 5, catalog, 15e3);
    for (std::size_t k = 0; k < 20; ++k) ASSERT_EQ(small[k].circuit.couplings, large[k].circuit.couplings);
}

TEST(generate_dataset, size_limits) {
    const auto &e = shared_default_catalog()->entries();
    const auto three = std::make_shared<const Catalog>(std::vector<CouplingModule>{e[2], e[4], e[20]});
    ASSERT_EQ(generate_dataset(6, 1, three, 15e3).size(), 6u);
    ASSERT_THROW(generate_dataset(7, 1, three, 15e3), ValidationError);
}

TEST(prompt_text, format) {
    const TransferSignature m{{Complex(8.57e-18, 7.06e-17), Complex(0.05, -0.13), Complex(0.10, -0.01)}};
    ASSERT_EQ(prompt_text(m, {5.0, 1.5}, 4),
              "transfer function coefficient vector [8.57e-18+7.06e-17i, 5.00e-2-1.30e-1i, 1.00e-1-1.00e-2i]; "
              "node connection components 5C + 1.5R; circuit composition: 4 C3 units, 3 couplings");
    const std::string zero = prompt_text(TransferSignature{}, {0.0, 0.0}, 4);
    ASSERT_NE(zero.find("[0.00e0+0.00e0i, 0.00e0+0.00e0i, 0.00e0+0.00e0i]"), std::string::npos);
    ASSERT_NE(prompt_text(TransferSignature{{Complex(-3.44e-18, -1.82e-17), 0.0, 0.0}}, {1, 0}, 4)
                  .find("[-3.44e-18-1.82e-17i, "),
              std::string::npos);
}

TEST(prompt_text, parse_round_trip) {
    const auto records = generate_dataset(100, 11, shared_default_catalog(), 15e3);
    for (const auto &r : records) {
        const ParsedPrompt p = parse_prompt(r.prompt);
        for (int k = 0; k < 3; ++k) {
            const Complex want = r.signature.vec[k];
            ASSERT_LE(std::abs(p.signature.vec[k].real() - want.real()), 5e-3 * std::abs(want.real()) + 1e-300);
            ASSERT_LE(std::abs(p.signature.vec[k].imag() - want.imag()), 5e-3 * std::abs(want.imag()) + 1e-300);
        }
        ASSERT_EQ(p.budget, r.budget);
        ASSERT_EQ(p.cells, 4u);
        ASSERT_EQ(p.couplings, 3u);
        ASSERT_EQ(prompt_text(p.signature, p.budget, p.cells), r.prompt);
    }
    ASSERT_THROW(parse_prompt("hello"), ValidationError);
}

TEST(render_svg, strokes_and_determinism) {
    const ChainCircuit c = chain(circuit1_ids());
    const std::string svg = render_svg(c);
    ASSERT_EQ(svg, render_svg(chain(circuit1_ids())));
    std::string why;
    ASSERT_TRUE(well_formed_xml(svg, &why)) << why;
    ASSERT_EQ(count(svg, "class=\"coupling\""), 3u);
    for (int m = 1; m <= 2; ++m) {
        ASSERT_GT(count(bundle(svg, m), "branch capacitor"), 0u);
        ASSERT_EQ(count(bundle(svg, m), "branch resistor"), 0u);
    }
    const std::string last = bundle(svg, 3);
    ASSERT_GT(count(last, "branch capacitor"), 0u);
    ASSERT_GT(count(last, "branch resistor"), 0u);
    ASSERT_GT(count(last, "stroke-dasharray=\"8 5\""), 0u);
    // 3 cells' worth of node labels, triangle edges and ground glyphs.
    ASSERT_EQ(count(svg, "class=\"node\""), 12u);
    ASSERT_EQ(count(svg, "class=\"ground\""), 12u);
    ASSERT_EQ(count(svg, "id=\"tri-"), 12u);
    ASSERT_EQ(count(svg, "marker-end"), 0u);
}

TEST(render_svg, arrowheads_on_negative_branches) {
    const auto p = builtin_patterns();
    std::vector<CouplingModule> entries = default_catalog().entries();
    entries.push_back({"is3<&>", {{p.at("+is3"), Component::resistor_kOhm(1.0)}}});
    const auto catalog = std::make_shared<const Catalog>(std::move(entries));
    const ChainCircuit c = make_chain(catalog, {"s0_C+s1p_C", "is3<&>", "s0_C+s2p_C"});
    const std::string svg = render_svg(c);
    std::string why;
    ASSERT_TRUE(well_formed_xml(svg, &why)) << why;
    ASSERT_EQ(count(bundle(svg, 2), "marker-end"), 6u);
    ASSERT_EQ(count(bundle(svg, 1), "marker-end"), 0u);
    ASSERT_EQ(count(svg, "marker-end"), 6u);
}

TEST(write_dataset, layout) {
    const auto dir = std::filesystem::temp_directory_path() / "c3g_dataset_test";
    std::filesystem::remove_all(dir);
    const auto records = generate_dataset(5, 3, shared_default_catalog(), 15e3);
    write_dataset(records, dir);
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    ASSERT_EQ(manifest.size(), 5u);
    for (const auto &entry : manifest) {
        std::set<std::string> keys;
        for (const auto &[k, v] : entry.items()) keys.insert(k);
        ASSERT_EQ(keys, (std::set<std::string>{"id", "seed", "prompt", "circuit", "signature", "svg_path",
                                               "format_version"}));
        ASSERT_EQ(entry["format_version"], kPromptFormatVersion);
        const auto svg_path = dir / entry["svg_path"].get<std::string>();
        ASSERT_TRUE(std::filesystem::exists(svg_path));
        const ChainCircuit c = circuit_from_json(entry["circuit"], shared_default_catalog());
        ASSERT_EQ(signature(c, s15k()), signature_from_json(entry["signature"]));
        ASSERT_EQ(read_file(svg_path), render_svg(c));
    }
    const auto blocker = dir / "blocker";
    std::ofstream(blocker) << "x";
    ASSERT_THROW(write_dataset(records, blocker / "sub"), IoError);
}
