#include "c3g/design.hpp"

#include <algorithm>
#include <cmath>

#include "c3g/parallel.hpp"

namespace c3g {

using nlohmann::json;

TripleSpace::TripleSpace(std::size_t catalog_size)
    : n_(catalog_size), total_(catalog_size < 3 ? 0 : catalog_size * (catalog_size - 1) * (catalog_size - 2)) {}

Triple TripleSpace::at(std::size_t k) const {
    if (k >= total_) throw ValidationError("triple index out of range");
    const std::size_t per_first = (n_ - 1) * (n_ - 2);
    const std::size_t a = k / per_first;
    std::size_t rem = k % per_first;
    std::size_t b = rem / (n_ - 2);
    std::size_t c = rem % (n_ - 2);
    if (b >= a) ++b;
    // c indexes the n-2 values not in {a, b}, in increasing order.
    const std::size_t lo = std::min(a, b), hi = std::max(a, b);
    if (c >= lo) ++c;
    if (c >= hi) ++c;
    return {a, b, c};
}

TripleSpace::iterator &TripleSpace::iterator::operator++() {
    auto &[a, b, c] = t_;
    auto advance = [&]() -> bool {
        if (++c < n_) return true;
        c = 0;
        if (++b < n_) return true;
        b = 0;
        return ++a < n_;
    };
    do {
        if (!advance()) {
            end_ = true;
            return *this;
        }
    } while (a == b || b == c || a == c);
    return *this;
}

TripleSpace::iterator TripleSpace::begin() const {
    if (total_ == 0) return end();
    return iterator(n_, {0, 1, 2}, false);
}

TripleSpace enumerate_space(const Catalog &catalog) {
    if (catalog.size() < 3) {
        throw ValidationError("catalog needs at least 3 entries to form coupling triples");
    }
    return TripleSpace(catalog.size());
}

ComponentBudget component_budget_of(const ChainCircuit &circuit) {
    const KindMultiples node = node_totals(circuit, 0)[0];
    return {node.capacitive, node.resistive};
}

void DesignQuery::validate() const {
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw ValidationError("query.tolerance must lie in (0, 1)");
    if (max_results < 1) throw ValidationError("query.max_results must be >= 1");
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
        throw ValidationError("query.frequency must be > 0");
    }
    for (const auto &z : target.vec) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("query.target must be finite");
        }
    }
}

SignatureTable::SignatureTable(std::shared_ptr<const Catalog> catalog, ReferenceValues reference,
                               Component triangle, double frequency_hz, unsigned workers)
    : catalog_(std::move(catalog)), reference_(reference), triangle_(triangle), frequency_hz_(frequency_hz) {
    const TripleSpace space = enumerate_space(*catalog_);
    const ChainEvaluator evaluator(catalog_, reference_, triangle_, angular(frequency_hz_));
    entries_.resize(space.size());
    parallel_for(space.size(), workers, [&](std::size_t k) {
        Entry &e = entries_[k];
        e.triple = space.at(k);
        const KindMultiples totals = evaluator.totals(e.triple);
        e.budget = {totals.capacitive, totals.resistive};
        try {
            e.signature = signature_from_transfer(transfer_closed_form(evaluator.blocks(e.triple)));
            e.solvable = true;
        } catch (const ResonanceError &) {
            e.solvable = false;
        }
    });
}

bool SignatureTable::matches(const DesignQuery &q) const {
    return q.frequency_hz == frequency_hz_ && q.reference == reference_ && q.triangle == triangle_;
}

namespace {

bool budget_matches(const ComponentBudget &have, const ComponentBudget &want) {
    constexpr double tol = 1e-9;
    return std::abs(have.capacitive - want.capacitive) <= tol * std::max(1.0, std::abs(want.capacitive)) &&
           std::abs(have.resistive - want.resistive) <= tol * std::max(1.0, std::abs(want.resistive));
}

}  // namespace

std::vector<DesignResult> search(const DesignQuery &query, const SignatureTable &table) {
    query.validate();
    if (!table.matches(query)) {
        throw ValidationError("signature table was built for a different frequency or reference");
    }
    const Catalog &catalog = *table.catalog();
    struct Hit {
        std::size_t entry;
        double distance;
    };
    std::vector<Hit> hits;
    const auto &entries = table.entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto &e = entries[k];
        if (!e.solvable) continue;
        if (query.budget && !budget_matches(e.budget, *query.budget)) continue;
        const double d = signature_distance(e.signature, query.target);
        if (d <= query.tolerance) hits.push_back({k, d});
    }
    auto ids = [&](std::size_t k) {
        const Triple &t = entries[k].triple;
        return std::array<const std::string *, 3>{&catalog.at(t[0]).id, &catalog.at(t[1]).id,
                                                  &catalog.at(t[2]).id};
    };
    std::sort(hits.begin(), hits.end(), [&](const Hit &x, const Hit &y) {
        if (x.distance != y.distance) return x.distance < y.distance;
        const auto a = ids(x.entry), b = ids(y.entry);
        for (int i = 0; i < 3; ++i) {
            if (*a[i] != *b[i]) return *a[i] < *b[i];
        }
        return false;
    });
    if (hits.size() > std::size_t(query.max_results)) hits.resize(std::size_t(query.max_results));

    std::vector<DesignResult> results;
    for (std::size_t r = 0; r < hits.size(); ++r) {
        const auto &e = entries[hits[r].entry];
        const auto id = ids(hits[r].entry);
        DesignResult out{make_chain(table.catalog(), {*id[0], *id[1], *id[2]}, table.reference(), table.triangle()),
                         e.signature, hits[r].distance, int(r)};
        results.push_back(std::move(out));
    }
    return results;
}

std::vector<DesignResult> search(const DesignQuery &query, std::shared_ptr<const Catalog> catalog,
                                 unsigned workers) {
    query.validate();
    const SignatureTable table(std::move(catalog), query.reference, query.triangle, query.frequency_hz, workers);
    return search(query, table);
}

DesignQuery query_from_json(const json &doc) {
    if (!doc.is_object()) throw ValidationError("query: expected JSON object");
    DesignQuery q;
    if (!doc.contains("target")) throw ValidationError("query: missing field 'target'");
    try {
        q.target = signature_from_json(doc.at("target"));
    } catch (const ValidationError &e) {
        throw ValidationError(std::string("query.") + e.what());
    }
    auto number = [&](const char *key) {
        if (!doc.contains(key)) throw ValidationError(std::string("query: missing field '") + key + "'");
        if (!doc.at(key).is_number()) throw ValidationError(std::string("query.") + key + ": expected number");
        return doc.at(key).get<double>();
    };
    q.tolerance = number("tolerance");
    q.frequency_hz = number("frequency_khz") * 1e3;
    if (!doc.contains("max_results") || !doc.at("max_results").is_number_integer()) {
        throw ValidationError("query.max_results: expected integer");
    }
    q.max_results = doc.at("max_results").get<int>();
    if (doc.contains("budget") && !doc.at("budget").is_null()) {
        const json &b = doc.at("budget");
        if (!b.is_object() || !b.contains("C") || !b.contains("R") || !b.at("C").is_number() ||
            !b.at("R").is_number()) {
            throw ValidationError("query.budget: expected {\"C\": num, \"R\": num} or null");
        }
        q.budget = ComponentBudget{b.at("C").get<double>(), b.at("R").get<double>()};
    }
    if (doc.contains("C0_nF")) q.reference.c0_nF = number("C0_nF");
    if (doc.contains("R0_kOhm")) q.reference.r0_kOhm = number("R0_kOhm");
    q.triangle = Component::capacitor_nF(q.reference.c0_nF);
    q.validate();
    return q;
}

json query_to_json(const DesignQuery &q) {
    json j;
    j["target"] = signature_to_json(q.target);
    j["tolerance"] = q.tolerance;
    j["budget"] = q.budget ? json{{"C", q.budget->capacitive}, {"R", q.budget->resistive}} : json(nullptr);
    j["frequency_khz"] = q.frequency_hz / 1e3;
    j["max_results"] = q.max_results;
    return j;
}

json results_to_json(const std::vector<DesignResult> &results) {
    json out = json::array();
    for (const auto &r : results) {
        out.push_back({{"rank", r.rank},
                       {"circuit", circuit_to_json(r.circuit)},
                       {"signature", signature_to_json(r.achieved)},
                       {"distance", r.distance}});
    }
    return out;
}

}  // namespace c3g
