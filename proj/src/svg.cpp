#include <cmath>
#include <map>
#include <sstream>

#include "c3g/datagen.hpp"
#include "c3g/format.hpp"

namespace c3g {

namespace {

struct Point {
    double x, y;
};

constexpr double kPitch = 280.0;
constexpr double kMargin = 110.0;

Point node_position(std::size_t cell, int node) {
    const double cx = kMargin + kPitch * double(cell);
    switch (node) {
        case 0: return {cx, 90.0};
        case 1: return {cx - 60.0, 190.0};
        default: return {cx + 60.0, 190.0};
    }
}

std::string num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

std::string escape(const std::string &text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char *kind_class(ComponentType t) {
    switch (t) {
        case ComponentType::Capacitor: return "capacitor";
        case ComponentType::Resistor: return "resistor";
        default: return "inductor";
    }
}

std::string dash_attr(ComponentType t) {
    switch (t) {
        case ComponentType::Capacitor: return "";
        case ComponentType::Resistor: return " stroke-dasharray=\"8 5\"";
        default: return " stroke-dasharray=\"2 3\"";
    }
}

}  // namespace

std::string render_svg(const ChainCircuit &circuit) {
    circuit.validate();
    const std::size_t n = circuit.size();
    const double width = 2.0 * kMargin + kPitch * double(n > 0 ? n - 1 : 0);
    const double height = 280.0;
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    out << "  <defs>\n"
        << "    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" "
           "markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#b00\"/></marker>\n"
        << "  </defs>\n";

    for (std::size_t m = 0; m < n; ++m) {
        const Cell &cell = circuit.cells[m];
        out << "  <g id=\"cell-" << m + 1 << "\" class=\"cell\">\n";
        static constexpr int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (int e = 0; e < 3; ++e) {
            const Point a = node_position(m, edges[e][0]), b = node_position(m, edges[e][1]);
            out << "    <line id=\"tri-" << m + 1 << "-" << e + 1 << "\" class=\"branch "
                << kind_class(cell.triangle.type) << "\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y)
                << "\" x2=\"" << num(b.x) << "\" y2=\"" << num(b.y) << "\" stroke=\"#000\" stroke-width=\"2\""
                << dash_attr(cell.triangle.type) << "/>\n";
        }
        for (int k = 0; k < 3; ++k) {
            const Point p = node_position(m, k);
            const std::string base = std::to_string(m + 1) + "-" + std::to_string(k + 1);
            const KindMultiples &g = cell.grounding[k];
            out << "    <g id=\"gnd-" << base << "\" class=\"ground\"><title>ground " << format_double(g.capacitive)
                << "C + " << format_double(g.resistive) << "R";
            if (g.inductive != 0.0) out << " + " << format_double(g.inductive) << "L";
            out << "</title>"
                << "<line x1=\"" << num(p.x) << "\" y1=\"" << num(p.y) << "\" x2=\"" << num(p.x) << "\" y2=\""
                << num(p.y + 26) << "\" stroke=\"#555\"/>";
            for (int bar = 0; bar < 3; ++bar) {
                const double half = 10.0 - 3.0 * bar, y = p.y + 26 + 4.0 * bar;
                out << "<line x1=\"" << num(p.x - half) << "\" y1=\"" << num(y) << "\" x2=\"" << num(p.x + half)
                    << "\" y2=\"" << num(y) << "\" stroke=\"#555\"/>";
            }
            out << "</g>\n";
            out << "    <circle id=\"node-" << base << "\" class=\"node\" cx=\"" << num(p.x) << "\" cy=\""
                << num(p.y) << "\" r=\"4\" fill=\"#000\"/>\n";
            out << "    <text id=\"label-" << base << "\" x=\"" << num(p.x + (k == 1 ? -16 : 8)) << "\" y=\""
                << num(p.y - 8) << "\" font-size=\"13\" font-family=\"sans-serif\">" << k + 1 << "</text>\n";
        }
        out << "  </g>\n";
    }

    for (std::size_t m = 0; m + 1 < n; ++m) {
        const CouplingModule &module = circuit.coupling(m);
        struct Branch {
            std::size_t part;
            int a, b, sign;
            bool directed;
            ComponentType type;
        };
        std::vector<Branch> branches;
        std::map<std::pair<int, int>, int> multiplicity;
        for (std::size_t p = 0; p < module.parts.size(); ++p) {
            const auto &e = module.parts[p].pattern.entries;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    if (e(a, b) == 0) continue;
                    branches.push_back({p, a, b, e(a, b), module.parts[p].pattern.has_negative(),
                                        module.parts[p].component.type});
                    ++multiplicity[{a, b}];
                }
            }
        }
        const double label_x = kMargin + kPitch * (double(m) + 0.5);
        out << "  <g id=\"bundle-" << m + 1 << "\" class=\"coupling\" data-coupling=\"" << escape(module.id)
            << "\">\n";
        out << "    <text id=\"bundle-label-" << m + 1 << "\" x=\"" << num(label_x) << "\" y=\"24\" "
            << "font-size=\"12\" font-family=\"monospace\" text-anchor=\"middle\">" << escape(module.id)
            << "</text>\n";
        std::map<std::pair<int, int>, int> seen;
        for (const auto &br : branches) {
            const int count = multiplicity[{br.a, br.b}];
            const int index = seen[{br.a, br.b}]++;
            const Point from = node_position(m, br.a), to = node_position(m + 1, br.b);
            const double offset = 16.0 * (double(index) - double(count - 1) / 2.0);
            const Point ctrl{(from.x + to.x) / 2.0, (from.y + to.y) / 2.0 - 40.0 + offset};
            out << "    <path id=\"cpl-" << m + 1 << "-" << br.part + 1 << "-" << br.a + 1 << br.b + 1
                << "\" class=\"branch " << kind_class(br.type) << (br.directed ? " nonreciprocal" : "")
                << "\" d=\"M" << num(from.x) << "," << num(from.y) << " Q" << num(ctrl.x) << "," << num(ctrl.y)
                << " " << num(to.x) << "," << num(to.y) << "\" fill=\"none\" stroke=\""
                << (br.sign < 0 ? "#b00" : "#246") << "\" stroke-width=\"1.5\"" << dash_attr(br.type)
                << (br.directed ? " marker-end=\"url(#arrow)\"" : "") << "/>\n";
        }
        out << "  </g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace c3g
