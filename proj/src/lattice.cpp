#include "c3g/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace c3g {

using nlohmann::json;

Complex KindMultiples::admittance(Complex s, const ReferenceValues &ref) const {
    Complex y = capacitive * s * (ref.c0_nF * 1e-9) + Complex(resistive / (ref.r0_kOhm * 1e3), 0.0);
    if (inductive != 0.0) {
        if (!ref.l0_mH) throw ValidationError("inductive load requires a reference L0");
        if (s == Complex(0.0)) throw ValidationError("inductive admittance is singular at s = 0");
        y += inductive / (s * (*ref.l0_mH * 1e-3));
    }
    return y;
}

KindMultiples elementwise_max(const KindMultiples &a, const KindMultiples &b) {
    return {std::max(a.capacitive, b.capacitive), std::max(a.resistive, b.resistive),
            std::max(a.inductive, b.inductive)};
}

KindMultiples multiples_of(const Component &c, const ReferenceValues &ref) {
    switch (c.type) {
        case ComponentType::Capacitor: return {c.value / ref.c0_nF, 0.0, 0.0};
        case ComponentType::Resistor: return {0.0, ref.r0_kOhm / c.value, 0.0};
        case ComponentType::Inductor:
            if (!ref.l0_mH) throw ValidationError("inductive coupling requires a reference L0");
            return {0.0, 0.0, *ref.l0_mH / c.value};
    }
    return {};
}

namespace {

NodeMultiples load(const CouplingModule &module, const ReferenceValues &ref, bool rows) {
    NodeMultiples out{};
    for (const auto &part : module.parts) {
        const KindMultiples unit = multiples_of(part.component, ref);
        const Eigen::Vector3i sums =
            rows ? Eigen::Vector3i(part.pattern.entries.rowwise().sum())
                 : Eigen::Vector3i(part.pattern.entries.colwise().sum().transpose());
        for (int a = 0; a < 3; ++a) {
            out[a] += double(sums(a)) * unit;
        }
    }
    return out;
}

}  // namespace

NodeMultiples left_load(const CouplingModule &module, const ReferenceValues &ref) {
    return load(module, ref, true);
}

NodeMultiples right_load(const CouplingModule &module, const ReferenceValues &ref) {
    return load(module, ref, false);
}

const CouplingModule &ChainCircuit::coupling(std::size_t m) const {
    return catalog->at(catalog->index_of(couplings.at(m)));
}

void ChainCircuit::validate() const {
    if (!catalog) throw ValidationError("circuit has no catalog");
    if (cells.size() < 2) throw ValidationError("circuit needs at least 2 cells");
    if (couplings.size() + 1 != cells.size()) {
        throw ValidationError("circuit with " + std::to_string(cells.size()) + " cells needs " +
                              std::to_string(cells.size() - 1) + " couplings, got " +
                              std::to_string(couplings.size()));
    }
    if (!(reference.c0_nF > 0.0) || !(reference.r0_kOhm > 0.0) ||
        (reference.l0_mH && !(*reference.l0_mH > 0.0))) {
        throw ValidationError("reference values must be > 0");
    }
    for (std::size_t m = 0; m < couplings.size(); ++m) {
        const CouplingModule &module = catalog->at(catalog->index_of(couplings[m]));
        for (const auto &part : module.parts) {
            if (part.component.type == ComponentType::Inductor && !reference.l0_mH) {
                throw ValidationError("coupling '" + module.id + "' has inductors; set L0_mH");
            }
        }
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell &cell = cells[c];
        if (cell.triangle.type == ComponentType::Resistor) {
            throw ValidationError("cell " + std::to_string(c + 1) + ": triangle must be C or L");
        }
        if (!(cell.triangle.value > 0.0) || !std::isfinite(cell.triangle.value)) {
            throw ValidationError("cell " + std::to_string(c + 1) + ": triangle value must be > 0");
        }
        for (const auto &g : cell.grounding) {
            for (double v : {g.capacitive, g.resistive, g.inductive}) {
                if (!(v >= 0.0) || !std::isfinite(v)) {
                    throw ValidationError("cell " + std::to_string(c + 1) +
                                          ": grounding multiples must be finite and >= 0");
                }
            }
            if (g.inductive > 0.0 && !reference.l0_mH) {
                throw ValidationError("inductive grounding requires L0_mH");
            }
        }
    }
}

bool ChainCircuit::couplings_distinct() const {
    return std::set<std::string>(couplings.begin(), couplings.end()).size() == couplings.size();
}

bool ChainCircuit::operator==(const ChainCircuit &o) const {
    const bool same_catalog =
        catalog == o.catalog || (catalog && o.catalog && *catalog == *o.catalog);
    return same_catalog && cells == o.cells && couplings == o.couplings &&
           reference == o.reference && grounding_mode == o.grounding_mode;
}

ChainCircuit make_chain(std::shared_ptr<const Catalog> catalog, std::vector<std::string> ids,
                        ReferenceValues reference, Component triangle) {
    ChainCircuit c;
    c.catalog = std::move(catalog);
    c.couplings = std::move(ids);
    c.reference = reference;
    c.cells.assign(c.couplings.size() + 1, Cell{triangle, {}});
    c.validate();
    return equalize_onsite(std::move(c));
}

std::vector<NodeMultiples> coupling_loads(const ChainCircuit &circuit) {
    std::vector<NodeMultiples> loads(circuit.size(), NodeMultiples{});
    for (std::size_t m = 0; m + 1 < circuit.size(); ++m) {
        const CouplingModule &module = circuit.coupling(m);
        const NodeMultiples left = left_load(module, circuit.reference);
        const NodeMultiples right = right_load(module, circuit.reference);
        for (int a = 0; a < 3; ++a) {
            loads[m][a] += left[a];
            loads[m + 1][a] += right[a];
        }
    }
    return loads;
}

Mat3 triangle_matrix() {
    Mat3 m;
    m << -2.0, 1.0, 1.0, 1.0, -2.0, 1.0, 1.0, 1.0, -2.0;
    return m;
}

Mat3 onsite_block(const Cell &cell, const NodeMultiples &coupling_load, Complex s,
                  const ReferenceValues &ref) {
    Mat3 block = cell.triangle.admittance(s) * triangle_matrix();
    for (int a = 0; a < 3; ++a) {
        block(a, a) -= (coupling_load[a] + cell.grounding[a]).admittance(s, ref);
    }
    return block;
}

ChainCircuit equalize_onsite(ChainCircuit circuit) {
    if (circuit.grounding_mode == GroundingMode::Manual) {
        return circuit;
    }
    const auto loads = coupling_loads(circuit);
    KindMultiples target{};
    for (const auto &cell : loads) {
        for (const auto &node : cell) {
            target = elementwise_max(target, node);
        }
    }
    for (std::size_t c = 0; c < circuit.size(); ++c) {
        for (int a = 0; a < 3; ++a) {
            circuit.cells[c].grounding[a] = target - loads[c][a];
        }
    }
    return circuit;
}

NodeMultiples node_totals(const ChainCircuit &circuit, std::size_t cell) {
    const auto loads = coupling_loads(circuit);
    NodeMultiples out{};
    for (int a = 0; a < 3; ++a) {
        out[a] = loads.at(cell)[a] + circuit.cells.at(cell).grounding[a];
    }
    return out;
}

AdmittanceMatrix assemble(const ChainCircuit &circuit, Complex s) {
    circuit.validate();
    const std::size_t n = circuit.size();
    const auto loads = coupling_loads(circuit);
    AdmittanceMatrix out;
    out.s = s;
    out.cells = n;
    out.y = MatX::Zero(3 * n, 3 * n);
    for (std::size_t c = 0; c < n; ++c) {
        out.y.block<3, 3>(3 * c, 3 * c) = onsite_block(circuit.cells[c], loads[c], s, circuit.reference);
    }
    for (std::size_t m = 0; m + 1 < n; ++m) {
        const Mat3 link = circuit.coupling(m).node_matrix(s);
        out.y.block<3, 3>(3 * m, 3 * (m + 1)) = link;
        out.y.block<3, 3>(3 * (m + 1), 3 * m) = link.transpose();
    }
    return out;
}

json circuit_to_json(const ChainCircuit &circuit) {
    json j;
    j["cells"] = circuit.size();
    j["triangle"] = component_to_json(circuit.cells.empty() ? Cell{}.triangle : circuit.cells[0].triangle);
    j["couplings"] = circuit.couplings;
    j["C0_nF"] = circuit.reference.c0_nF;
    j["R0_kOhm"] = circuit.reference.r0_kOhm;
    if (circuit.reference.l0_mH) {
        j["L0_mH"] = *circuit.reference.l0_mH;
    }
    if (circuit.grounding_mode == GroundingMode::Auto) {
        j["grounding"] = "auto";
    } else {
        json cells = json::array();
        for (const auto &cell : circuit.cells) {
            json nodes = json::array();
            for (const auto &g : cell.grounding) {
                json pair = {g.capacitive, g.resistive};
                if (g.inductive != 0.0) pair.push_back(g.inductive);
                nodes.push_back(pair);
            }
            cells.push_back(nodes);
        }
        j["grounding"] = cells;
    }
    return j;
}

namespace {

double require_number(const json &doc, const char *key) {
    if (!doc.contains(key)) throw ValidationError(std::string("circuit: missing field '") + key + "'");
    if (!doc.at(key).is_number()) throw ValidationError(std::string("circuit.") + key + ": expected number");
    return doc.at(key).get<double>();
}

}  // namespace

ChainCircuit circuit_from_json(const json &doc, std::shared_ptr<const Catalog> catalog) {
    if (!doc.is_object()) throw ValidationError("circuit: expected JSON object");
    ChainCircuit c;
    c.catalog = std::move(catalog);
    const double cells = require_number(doc, "cells");
    if (cells < 2 || cells != std::floor(cells)) {
        throw ValidationError("circuit.cells: expected integer >= 2");
    }
    if (!doc.contains("triangle")) throw ValidationError("circuit: missing field 'triangle'");
    const Component triangle = component_from_json(doc.at("triangle"), "circuit.triangle");
    if (!doc.contains("couplings") || !doc.at("couplings").is_array()) {
        throw ValidationError("circuit.couplings: expected array of ids");
    }
    for (const auto &id : doc.at("couplings")) {
        if (!id.is_string()) throw ValidationError("circuit.couplings: ids must be strings");
        c.couplings.push_back(id.get<std::string>());
    }
    c.reference.c0_nF = require_number(doc, "C0_nF");
    c.reference.r0_kOhm = require_number(doc, "R0_kOhm");
    if (doc.contains("L0_mH")) c.reference.l0_mH = require_number(doc, "L0_mH");
    c.cells.assign(std::size_t(cells), Cell{triangle, {}});

    const json g = doc.value("grounding", json("auto"));
    if (g.is_string()) {
        if (g.get<std::string>() != "auto") {
            throw ValidationError("circuit.grounding: expected \"auto\" or per-cell array");
        }
        c.grounding_mode = GroundingMode::Auto;
    } else {
        if (!g.is_array() || g.size() != c.cells.size()) {
            throw ValidationError("circuit.grounding: expected one entry per cell");
        }
        c.grounding_mode = GroundingMode::Manual;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const std::string where = "circuit.grounding[" + std::to_string(k) + "]";
            if (!g[k].is_array() || g[k].size() != 3) {
                throw ValidationError(where + ": expected 3 [capMult, resMult] pairs");
            }
            for (int a = 0; a < 3; ++a) {
                const json &pair = g[k][a];
                if (!pair.is_array() || pair.size() < 2 || pair.size() > 3) {
                    throw ValidationError(where + "[" + std::to_string(a) + "]: expected [capMult, resMult]");
                }
                for (const auto &v : pair) {
                    if (!v.is_number()) throw ValidationError(where + ": multiples must be numbers");
                }
                KindMultiples &m = c.cells[k].grounding[a];
                m.capacitive = pair[0].get<double>();
                m.resistive = pair[1].get<double>();
                if (pair.size() == 3) m.inductive = pair[2].get<double>();
            }
        }
    }
    c.validate();
    return equalize_onsite(std::move(c));
}

ChainCircuit load_circuit(const std::filesystem::path &path, std::shared_ptr<const Catalog> catalog) {
    const json doc = read_json_file(path);
    try {
        return circuit_from_json(doc, std::move(catalog));
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_circuit(const ChainCircuit &circuit, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << circuit_to_json(circuit).dump(2) << '\n';
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace c3g
