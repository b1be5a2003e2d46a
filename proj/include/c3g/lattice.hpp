#pragma once

// Chains of C3 cells joined by catalog couplings, grounding balance, and the
// full 3N x 3N Kirchhoff admittance matrix.

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "c3g/catalog.hpp"
#include "c3g/spinspace.hpp"

namespace c3g {

/// Reference component values; admittances elsewhere are expressed as
/// multiples of sC0, 1/R0 and 1/(sL0).
struct ReferenceValues {
    double c0_nF = 2.7;
    double r0_kOhm = 1.0;
    std::optional<double> l0_mH;

    bool operator==(const ReferenceValues &) const = default;
};

struct KindMultiples {
    double capacitive = 0.0;
    double resistive = 0.0;
    double inductive = 0.0;

    KindMultiples &operator+=(const KindMultiples &o) {
        capacitive += o.capacitive;
        resistive += o.resistive;
        inductive += o.inductive;
        return *this;
    }
    friend KindMultiples operator+(KindMultiples a, const KindMultiples &b) { return a += b; }
    friend KindMultiples operator-(const KindMultiples &a, const KindMultiples &b) {
        return {a.capacitive - b.capacitive, a.resistive - b.resistive, a.inductive - b.inductive};
    }
    friend KindMultiples operator*(double k, const KindMultiples &a) {
        return {k * a.capacitive, k * a.resistive, k * a.inductive};
    }
    bool operator==(const KindMultiples &) const = default;

    /// m_C sC0 + m_R / R0 + m_L / (s L0).
    Complex admittance(Complex s, const ReferenceValues &ref) const;
};

KindMultiples elementwise_max(const KindMultiples &a, const KindMultiples &b);

using NodeMultiples = std::array<KindMultiples, 3>;

/// Admittance of one unit pattern entry of `c`, as multiples of the reference.
KindMultiples multiples_of(const Component &c, const ReferenceValues &ref);

/// Per-node diagonal load a module puts on its left cell (signed row sums) or
/// on its right cell (signed column sums, since the lower block is the transpose).
NodeMultiples left_load(const CouplingModule &module, const ReferenceValues &ref);
NodeMultiples right_load(const CouplingModule &module, const ReferenceValues &ref);

struct Cell {
    /// The three identical triangle edges.
    Component triangle = Component::capacitor_nF(2.7);
    /// Extra shunt admittance to ground per node.
    NodeMultiples grounding{};

    bool operator==(const Cell &) const = default;
};

enum class GroundingMode { Auto, Manual };

struct ChainCircuit {
    std::vector<Cell> cells;
    std::vector<std::string> couplings;
    ReferenceValues reference;
    std::shared_ptr<const Catalog> catalog;
    GroundingMode grounding_mode = GroundingMode::Auto;

    std::size_t size() const { return cells.size(); }
    const CouplingModule &coupling(std::size_t m) const;
    /// Throws ValidationError if the circuit is structurally invalid.
    void validate() const;
    bool couplings_distinct() const;

    /// Same cells, couplings, reference and grounding (catalog compared by value).
    bool operator==(const ChainCircuit &o) const;
};

/// N = ids.size() + 1 identical cells, grounding auto-equalized.
ChainCircuit make_chain(std::shared_ptr<const Catalog> catalog, std::vector<std::string> ids,
                        ReferenceValues reference = {},
                        Component triangle = Component::capacitor_nF(2.7));

/// Diagonal load each cell's nodes receive from attached couplings.
std::vector<NodeMultiples> coupling_loads(const ChainCircuit &circuit);

/// y_triangle * M_o - diag(admittance of coupling load + grounding).
Mat3 onsite_block(const Cell &cell, const NodeMultiples &coupling_load, Complex s,
                  const ReferenceValues &ref);

/// Sets grounding so that every node of every cell carries the same total
/// diagonal multiple per component kind (the maximum over all nodes).
/// Manual-grounding circuits are returned unchanged.
ChainCircuit equalize_onsite(ChainCircuit circuit);

/// Per-node total (coupling load + grounding) of one cell.
NodeMultiples node_totals(const ChainCircuit &circuit, std::size_t cell);

/// The triangle Laplacian [[-2,1,1],[1,-2,1],[1,1,-2]].
Mat3 triangle_matrix();

struct AdmittanceMatrix {
    MatX y;
    Complex s;
    std::size_t cells = 0;
};

/// Block-tridiagonal Y with upper coupling blocks equal to the module node
/// matrix and lower blocks equal to its transpose.
AdmittanceMatrix assemble(const ChainCircuit &circuit, Complex s);

/// s = i 2 pi f.
inline Complex angular(double f_hz) { return Complex(0.0, 2.0 * std::numbers::pi * f_hz); }

nlohmann::json circuit_to_json(const ChainCircuit &circuit);
ChainCircuit circuit_from_json(const nlohmann::json &doc, std::shared_ptr<const Catalog> catalog);
ChainCircuit load_circuit(const std::filesystem::path &path, std::shared_ptr<const Catalog> catalog);
void save_circuit(const ChainCircuit &circuit, const std::filesystem::path &path);

}  // namespace c3g
