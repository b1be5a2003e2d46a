#pragma once

// Coupling-connection catalog: named inter-cell wiring modules, each a sum of
// 3x3 connection patterns realized with one component kind.

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "c3g/spinspace.hpp"

namespace c3g {

enum class ComponentType { Capacitor, Resistor, Inductor };

/// A two-terminal component. `value` is kept in the catalog unit of its type
/// (nF, kOhm, mH) so files round-trip exactly.
struct Component {
    ComponentType type = ComponentType::Capacitor;
    double value = 0.0;

    static Component capacitor_nF(double nF) { return {ComponentType::Capacitor, nF}; }
    static Component resistor_kOhm(double kOhm) { return {ComponentType::Resistor, kOhm}; }
    static Component inductor_mH(double mH) { return {ComponentType::Inductor, mH}; }

    /// Farads, ohms or henries.
    double si() const;
    /// sC, 1/R or 1/(sL). Throws ValidationError for an inductor at s = 0.
    Complex admittance(Complex s) const;

    bool operator==(const Component &) const = default;
};

char kind_letter(ComponentType type);
std::string_view unit_of(ComponentType type);
ComponentType component_type_from_letter(std::string_view letter);

/// Entry (a, b) is the admittance multiple linking node b of the right-hand
/// cell to node a of the left-hand cell. Entries are restricted to {-1, 0, 1};
/// a negative entry is a negative-admittance (non-reciprocal) branch.
struct ConnectionPattern {
    Eigen::Matrix3i entries = Eigen::Matrix3i::Zero();

    ConnectionPattern() = default;
    explicit ConnectionPattern(const Eigen::Matrix3i &m) : entries(m) {}

    bool has_negative() const { return (entries.array() < 0).any(); }
    int nonzero_count() const { return int((entries.array() != 0).count()); }
    ConnectionPattern transposed() const { return ConnectionPattern(entries.transpose()); }
    Mat3 as_complex() const { return entries.cast<double>().cast<Complex>(); }

    bool operator==(const ConnectionPattern &o) const { return entries == o.entries; }
};

struct CouplingPart {
    ConnectionPattern pattern;
    Component component;

    bool operator==(const CouplingPart &) const = default;
};

struct CouplingModule {
    std::string id;
    std::vector<CouplingPart> parts;

    /// Sum over parts of admittance(component, s) * pattern.
    Mat3 node_matrix(Complex s) const;

    bool operator==(const CouplingModule &) const = default;
};

/// Constant-channel coefficient and pseudospin block of a module at s.
struct ModuleSignature {
    Complex constant;
    Mat2 spin;
};

ModuleSignature signature_of(const CouplingModule &module, Complex s);

/// Ordered, id-unique collection of coupling modules. Immutable once built.
class Catalog {
public:
    Catalog() = default;
    /// Validates every entry; throws ValidationError on duplicate ids, empty
    /// modules, pattern entries outside {-1,0,1}, non-positive values or
    /// patterns that do not split cleanly into constant (+) spin sectors.
    explicit Catalog(std::vector<CouplingModule> entries);

    std::size_t size() const { return entries_.size(); }
    const std::vector<CouplingModule> &entries() const { return entries_; }
    const CouplingModule &at(std::size_t index) const { return entries_.at(index); }
    const CouplingModule *find(std::string_view id) const;
    /// Throws ValidationError for unknown ids.
    std::size_t index_of(std::string_view id) const;

    bool operator==(const Catalog &o) const { return entries_ == o.entries_; }

private:
    std::vector<CouplingModule> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Throws ValidationError naming `where` when the pattern is out of range or unclean.
void validate_pattern(const ConnectionPattern &pattern, const std::string &where);

/// Named single patterns. Includes the six node permutations ("I", "swap12",
/// "swap13", "swap23", "cyc", "cyc_t"), the all-ones "J", and the signed
/// Pauli-target forms "s0", "s1", "-s1", "s2", "-s2", "+is3", "-is3".
std::map<std::string, ConnectionPattern> builtin_patterns();

/// Twist targets of the default catalog, in catalog order.
/// Each twist is a list of node permutations (a passive realization).
struct TwistTarget {
    std::string tag;   // e.g. "s1p"
    std::string label; // e.g. "+sigma1"
    std::vector<std::string> permutations;
};
const std::vector<TwistTarget> &default_twists();

/// 48 modules: 8 twist targets x {twist alone in C or R, sigma0 base in C/R
/// plus twist in C/R}. Component values are 2.7 nF and 1 kOhm.
Catalog default_catalog();

nlohmann::json catalog_to_json(const Catalog &catalog);
/// Throws ValidationError with a field path on schema or content errors.
Catalog catalog_from_json(const nlohmann::json &doc);

Catalog load_catalog(const std::filesystem::path &path);
void save_catalog(const Catalog &catalog, const std::filesystem::path &path);

nlohmann::json component_to_json(const Component &c);
Component component_from_json(const nlohmann::json &j, const std::string &where);

/// Parses JSON text; syntax errors are reported with line and column.
nlohmann::json parse_json_text(const std::string &text, const std::string &source);
nlohmann::json read_json_file(const std::filesystem::path &path);

}  // namespace c3g
