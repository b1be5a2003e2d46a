#include "c3g/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace c3g {

using nlohmann::json;

double Component::si() const {
    switch (type) {
        case ComponentType::Capacitor: return value * 1e-9;
        case ComponentType::Resistor: return value * 1e3;
        case ComponentType::Inductor: return value * 1e-3;
    }
    return 0.0;
}

Complex Component::admittance(Complex s) const {
    switch (type) {
        case ComponentType::Capacitor: return s * si();
        case ComponentType::Resistor: return Complex(1.0 / si(), 0.0);
        case ComponentType::Inductor:
            if (s == Complex(0.0)) {
                throw ValidationError("inductor admittance is singular at s = 0");
            }
            return 1.0 / (s * si());
    }
    return {};
}

char kind_letter(ComponentType type) {
    switch (type) {
        case ComponentType::Capacitor: return 'C';
        case ComponentType::Resistor: return 'R';
        case ComponentType::Inductor: return 'L';
    }
    return '?';
}

std::string_view unit_of(ComponentType type) {
    switch (type) {
        case ComponentType::Capacitor: return "nF";
        case ComponentType::Resistor: return "kOhm";
        case ComponentType::Inductor: return "mH";
    }
    return "";
}

ComponentType component_type_from_letter(std::string_view letter) {
    if (letter == "C") return ComponentType::Capacitor;
    if (letter == "R") return ComponentType::Resistor;
    if (letter == "L") return ComponentType::Inductor;
    throw ValidationError("unknown component kind '" + std::string(letter) + "' (expected C, R or L)");
}

Mat3 CouplingModule::node_matrix(Complex s) const {
    Mat3 m = Mat3::Zero();
    for (const auto &part : parts) {
        m += part.component.admittance(s) * part.pattern.as_complex();
    }
    return m;
}

ModuleSignature signature_of(const CouplingModule &module, Complex s) {
    ModuleSignature sig{Complex(0.0), Mat2::Zero()};
    for (const auto &part : module.parts) {
        const auto d = block_decompose(part.pattern.as_complex());
        const Complex y = part.component.admittance(s);
        sig.constant += y * d.constant;
        sig.spin += y * d.spin;
    }
    return sig;
}

void validate_pattern(const ConnectionPattern &pattern, const std::string &where) {
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const int v = pattern.entries(a, b);
            if (v < -1 || v > 1) {
                throw ValidationError(where + "[" + std::to_string(a) + "][" + std::to_string(b) +
                                      "]: entry outside {-1,0,1} (got " + std::to_string(v) + ")");
            }
        }
    }
    const Mat3 m = pattern.as_complex();
    const auto d = block_decompose(m);
    if (!d.clean(std::max(1.0, m.norm()))) {
        throw ValidationError(where + ": pattern mixes the constant and pseudospin channels "
                              "(not C3-compatible)");
    }
}

namespace {

void validate_module(const CouplingModule &module, const std::string &where) {
    if (module.id.empty()) {
        throw ValidationError(where + ".id: empty id");
    }
    if (module.parts.empty()) {
        throw ValidationError(where + ".parts: module '" + module.id + "' has no parts");
    }
    for (std::size_t p = 0; p < module.parts.size(); ++p) {
        const auto &part = module.parts[p];
        const std::string pw = where + ".parts[" + std::to_string(p) + "]";
        validate_pattern(part.pattern, pw + ".pattern");
        if (!(part.component.value > 0.0) || !std::isfinite(part.component.value)) {
            throw ValidationError(pw + ".component.value: must be finite and > 0");
        }
    }
}

Eigen::Matrix3i permutation(int p0, int p1, int p2) {
    Eigen::Matrix3i m = Eigen::Matrix3i::Zero();
    m(0, p0) = 1;
    m(1, p1) = 1;
    m(2, p2) = 1;
    return m;
}

}  // namespace

Catalog::Catalog(std::vector<CouplingModule> entries) : entries_(std::move(entries)) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const std::string where = "entries[" + std::to_string(k) + "]";
        validate_module(entries_[k], where);
        if (!index_.emplace(entries_[k].id, k).second) {
            throw ValidationError(where + ".id: duplicate id '" + entries_[k].id + "'");
        }
    }
}

const CouplingModule *Catalog::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t Catalog::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        throw ValidationError("unknown coupling id '" + std::string(id) + "'");
    }
    return it->second;
}

std::map<std::string, ConnectionPattern> builtin_patterns() {
    std::map<std::string, ConnectionPattern> p;
    const Eigen::Matrix3i I = permutation(0, 1, 2);
    const Eigen::Matrix3i swap12 = permutation(1, 0, 2);
    const Eigen::Matrix3i swap13 = permutation(2, 1, 0);
    const Eigen::Matrix3i swap23 = permutation(0, 2, 1);
    const Eigen::Matrix3i cyc = permutation(1, 2, 0);
    const Eigen::Matrix3i J = Eigen::Matrix3i::Ones();

    p["I"] = ConnectionPattern(I);
    p["swap12"] = ConnectionPattern(swap12);
    p["swap13"] = ConnectionPattern(swap13);
    p["swap23"] = ConnectionPattern(swap23);
    p["cyc"] = ConnectionPattern(cyc);
    p["cyc_t"] = ConnectionPattern(cyc.transpose());
    p["J"] = ConnectionPattern(J);

    // Signed single-pattern forms, named by their pseudospin block.
    p["s0"] = ConnectionPattern(I);                              // 1 (+) sigma0
    p["s1"] = ConnectionPattern(swap12);                         // 1 (+) sigma1
    p["-s1"] = ConnectionPattern(J - swap12);                    // 2 (+) -sigma1
    p["s2"] = ConnectionPattern(swap13 - swap23);                // 0 (+) sqrt3 sigma2
    p["-s2"] = ConnectionPattern(swap23 - swap13);               // 0 (+) -sqrt3 sigma2
    p["+is3"] = ConnectionPattern(cyc - Eigen::Matrix3i(cyc.transpose()));  // 0 (+) i sqrt3 sigma3
    p["-is3"] = ConnectionPattern(Eigen::Matrix3i(cyc.transpose()) - cyc);  // 0 (+) -i sqrt3 sigma3
    return p;
}

const std::vector<TwistTarget> &default_twists() {
    static const std::vector<TwistTarget> twists = {
        {"s0p", "+sigma0", {"I"}},
        {"s0m", "-sigma0", {"cyc", "cyc_t"}},
        {"s1p", "+sigma1", {"swap12"}},
        {"s1m", "-sigma1", {"swap13", "swap23"}},
        {"s2p", "+sigma2", {"swap12", "swap13", "swap13"}},
        {"s2m", "-sigma2", {"swap12", "swap23", "swap23"}},
        {"s3p", "+i sigma3", {"I", "cyc", "cyc"}},
        {"s3m", "-i sigma3", {"I", "cyc_t", "cyc_t"}},
    };
    return twists;
}

Catalog default_catalog() {
    const auto patterns = builtin_patterns();
    const Component cap = Component::capacitor_nF(2.7);
    const Component res = Component::resistor_kOhm(1.0);
    const std::array<Component, 2> kinds = {cap, res};

    auto twist_parts = [&](const TwistTarget &twist, const Component &c) {
        std::vector<CouplingPart> parts;
        for (const auto &name : twist.permutations) {
            parts.push_back({patterns.at(name), c});
        }
        return parts;
    };

    std::vector<CouplingModule> entries;
    for (const auto &twist : default_twists()) {
        for (const auto &tc : kinds) {
            entries.push_back({twist.tag + "_" + kind_letter(tc.type), twist_parts(twist, tc)});
        }
        for (const auto &bc : kinds) {
            for (const auto &tc : kinds) {
                CouplingModule m;
                m.id = std::string("s0_") + kind_letter(bc.type) + "+" + twist.tag + "_" +
                       kind_letter(tc.type);
                m.parts.push_back({patterns.at("I"), bc});
                for (auto &part : twist_parts(twist, tc)) {
                    m.parts.push_back(std::move(part));
                }
                entries.push_back(std::move(m));
            }
        }
    }
    return Catalog(std::move(entries));
}

json component_to_json(const Component &c) {
    return json{{"kind", std::string(1, kind_letter(c.type))},
                {"value", c.value},
                {"unit", std::string(unit_of(c.type))}};
}

namespace {

const json &require(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

}  // namespace

Component component_from_json(const json &j, const std::string &where) {
    const json &kind = require(j, "kind", where);
    const json &value = require(j, "value", where);
    const json &unit = require(j, "unit", where);
    if (!kind.is_string()) throw ValidationError(where + ".kind: expected string");
    if (!value.is_number()) throw ValidationError(where + ".value: expected number");
    if (!unit.is_string()) throw ValidationError(where + ".unit: expected string");
    Component c;
    try {
        c.type = component_type_from_letter(kind.get<std::string>());
    } catch (const ValidationError &e) {
        throw ValidationError(where + ".kind: " + e.what());
    }
    if (unit.get<std::string>() != unit_of(c.type)) {
        throw ValidationError(where + ".unit: expected '" + std::string(unit_of(c.type)) + "' for kind " +
                              kind_letter(c.type) + ", got '" + unit.get<std::string>() + "'");
    }
    c.value = value.get<double>();
    if (!(c.value > 0.0) || !std::isfinite(c.value)) {
        throw ValidationError(where + ".value: must be finite and > 0");
    }
    return c;
}

json catalog_to_json(const Catalog &catalog) {
    json entries = json::array();
    for (const auto &m : catalog.entries()) {
        json parts = json::array();
        for (const auto &part : m.parts) {
            json rows = json::array();
            for (int a = 0; a < 3; ++a) {
                rows.push_back({part.pattern.entries(a, 0), part.pattern.entries(a, 1),
                                part.pattern.entries(a, 2)});
            }
            parts.push_back({{"pattern", rows}, {"component", component_to_json(part.component)}});
        }
        entries.push_back({{"id", m.id}, {"parts", parts}});
    }
    return json{{"entries", entries}};
}

Catalog catalog_from_json(const json &doc) {
    const json &entries = require(doc, "entries", "catalog");
    if (!entries.is_array()) throw ValidationError("catalog.entries: expected array");
    std::vector<CouplingModule> modules;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string where = "entries[" + std::to_string(k) + "]";
        const json &e = entries[k];
        const json &id = require(e, "id", where);
        if (!id.is_string()) throw ValidationError(where + ".id: expected string");
        const json &parts = require(e, "parts", where);
        if (!parts.is_array()) throw ValidationError(where + ".parts: expected array");
        CouplingModule m;
        m.id = id.get<std::string>();
        for (std::size_t p = 0; p < parts.size(); ++p) {
            const std::string pw = where + ".parts[" + std::to_string(p) + "]";
            const json &rows = require(parts[p], "pattern", pw);
            if (!rows.is_array() || rows.size() != 3) {
                throw ValidationError(pw + ".pattern: expected 3x3 integer array");
            }
            ConnectionPattern pattern;
            for (int a = 0; a < 3; ++a) {
                if (!rows[a].is_array() || rows[a].size() != 3) {
                    throw ValidationError(pw + ".pattern[" + std::to_string(a) + "]: expected 3 integers");
                }
                for (int b = 0; b < 3; ++b) {
                    if (!rows[a][b].is_number_integer()) {
                        throw ValidationError(pw + ".pattern[" + std::to_string(a) + "][" +
                                              std::to_string(b) + "]: expected integer");
                    }
                    pattern.entries(a, b) = rows[a][b].get<int>();
                }
            }
            validate_pattern(pattern, pw + ".pattern");
            m.parts.push_back({pattern, component_from_json(require(parts[p], "component", pw),
                                                            pw + ".component")});
        }
        modules.push_back(std::move(m));
    }
    return Catalog(std::move(modules));
}

json parse_json_text(const std::string &text, const std::string &source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t line = 1, col = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < limit; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                              ": JSON syntax error");
    }
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path.string());
}

Catalog load_catalog(const std::filesystem::path &path) {
    const json doc = read_json_file(path);
    try {
        return catalog_from_json(doc);
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_catalog(const Catalog &catalog, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << catalog_to_json(catalog).dump(2) << '\n';
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

}  // namespace c3g
