#include <set>

#include "c3g/parallel.hpp"
#include "test_util.hpp"

using namespace c3g;
using namespace c3g::testing;

namespace {

const SignatureTable &table_15k() {
    static const SignatureTable table(shared_default_catalog(), ReferenceValues{}, Component::capacitor_nF(2.7), 15e3,
                                      worker_count());
    return table;
}

DesignQuery query_for(const TransferSignature &target, double tol, int max_results) {
    DesignQuery q;
    q.target = target;
    q.tolerance = tol;
    q.max_results = max_results;
    return q;
}

std::vector<std::string> ids_of(const DesignResult &r) { return r.circuit.couplings; }

}  // namespace

TEST(enumerate_space, counts_and_order) {
    const TripleSpace space = enumerate_space(default_catalog());
    ASSERT_EQ(space.size(), 48u * 47u * 46u);
    ASSERT_EQ(space.size(), 103776u);
    std::size_t k = 0;
    Triple prev{};
    for (const Triple &t : space) {
        ASSERT_EQ(t, space.at(k)) << k;
        ASSERT_TRUE(t[0] != t[1] && t[1] != t[2] && t[0] != t[2]);
        if (k > 0) ASSERT_LT(prev, t);
        prev = t;
        ++k;
    }
    ASSERT_EQ(k, space.size());
    ASSERT_THROW(space.at(space.size()), ValidationError);
}

TEST(enumerate_space, small_catalogs) {
    const auto &e = shared_default_catalog()->entries();
    const Catalog three({e[0], e[1], e[2]});
    const TripleSpace space = enumerate_space(three);
    ASSERT_EQ(space.size(), 6u);
    std::set<Triple> seen(space.begin(), space.end());
    ASSERT_EQ(seen.size(), 6u);
    ASSERT_THROW(enumerate_space(Catalog({e[0], e[1]})), ValidationError);
}

TEST(component_budget, examples) {
    const ComponentBudget b = component_budget_of(chain(circuit1_ids()));
    ASSERT_EQ(b.capacitive, 6.0);
    ASSERT_EQ(b.resistive, 3.0);
    const ComponentBudget single = component_budget_of(chain({"s0p_C", "s0p_R"}));
    ASSERT_EQ(single.capacitive, 1.0);
    ASSERT_EQ(single.resistive, 1.0);
    ASSERT_EQ(component_budget_of(chain({"s0p_C"})), (ComponentBudget{1.0, 0.0}));
}

TEST(component_budget, permutation_invariant) {
    Gen g(61);
    const auto catalog = shared_default_catalog();
    for (int trial = 0; trial < 50; ++trial) {
        auto ids = g.triple(*catalog);
        const ComponentBudget want = component_budget_of(chain(ids));
        std::sort(ids.begin(), ids.end());
        do {
            const ComponentBudget got = component_budget_of(chain(ids));
            ASSERT_EQ(got, want) << ids[0] << " | " << ids[1] << " | " << ids[2] << ": " << got.capacitive << "C + "
                                 << got.resistive << "R vs " << want.capacitive << "C + " << want.resistive << "R";
        } while (std::next_permutation(ids.begin(), ids.end()));
    }
}

TEST(component_budget, reversal_invariant) {
    Gen g(63);
    const auto catalog = shared_default_catalog();
    for (int trial = 0; trial < 200; ++trial) {
        auto ids = g.triple(*catalog);
        const ComponentBudget want = component_budget_of(chain(ids));
        std::reverse(ids.begin(), ids.end());
        ASSERT_EQ(component_budget_of(chain(ids)), want);
    }
}

TEST(search, planted_round_trip) {
    Gen g(62);
    const auto catalog = shared_default_catalog();
    for (int trial = 0; trial < 10; ++trial) {
        const auto ids = g.triple(*catalog);
        const TransferSignature target = signature(chain(ids), s15k());
        const auto results = search(query_for(target, 1e-6, 200000), table_15k());
        ASSERT_FALSE(results.empty());
        ASSERT_LE(results[0].distance, 1e-9);
        bool found = false;
        for (const auto &r : results) {
            ASSERT_LE(r.distance, 1e-6);
            found = found || ids_of(r) == ids;
        }
        ASSERT_TRUE(found);
    }
}

TEST(search, every_hit_is_genuine) {
    const auto catalog = shared_default_catalog();
    const TransferSignature target = signature(chain(circuit2_ids()), s15k());
    const auto results = search(query_for(target, 0.2, 50), table_15k());
    ASSERT_FALSE(results.empty());
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto &r = results[k];
        ASSERT_EQ(r.rank, int(k));
        const double d = signature_distance(signature(r.circuit, s15k()), target);
        ASSERT_NEAR(d, r.distance, 1e-9);
        ASSERT_LE(d, 0.2 + 1e-9);
        ASSERT_TRUE(r.circuit.couplings_distinct());
        if (k > 0) {
            const auto &p = results[k - 1];
            ASSERT_TRUE(p.distance < r.distance || (p.distance == r.distance && ids_of(p) < ids_of(r)));
        }
    }
}

TEST(search, infeasible_target) {
    TransferSignature target{{Complex(1e6, 0.0), Complex(1e6, 0.0), Complex(1e6, 0.0)}};
    ASSERT_TRUE(search(query_for(target, 0.5, 10), table_15k()).empty());
}

TEST(search, tolerance_monotone) {
    const TransferSignature target = signature(chain(circuit3_ids()), s15k());
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (double tol : {0.9, 0.5, 0.1, 1e-2, 1e-6}) {
        const auto results = search(query_for(target, tol, 1 << 20), table_15k());
        ASSERT_LE(results.size(), previous);
        previous = results.size();
        std::set<std::vector<std::string>> smaller;
        for (const auto &r : search(query_for(target, tol / 2, 1 << 20), table_15k())) smaller.insert(ids_of(r));
        std::set<std::vector<std::string>> larger;
        for (const auto &r : results) larger.insert(ids_of(r));
        for (const auto &s : smaller) ASSERT_TRUE(larger.count(s));
    }
}

TEST(search, budget_filter_and_truncation) {
    const TransferSignature target = signature(chain(circuit1_ids()), s15k());
    DesignQuery q = query_for(target, 0.9, 1 << 20);
    q.budget = ComponentBudget{6.0, 3.0};
    const auto filtered = search(q, table_15k());
    ASSERT_FALSE(filtered.empty());
    for (const auto &r : filtered) ASSERT_EQ(component_budget_of(r.circuit), *q.budget);
    q.max_results = 5;
    const auto few = search(q, table_15k());
    ASSERT_EQ(few.size(), std::min<std::size_t>(5, filtered.size()));
    for (std::size_t k = 0; k < few.size(); ++k) ASSERT_EQ(ids_of(few[k]), ids_of(filtered[k]));
}

TEST(search, paper_style_target) {
    DesignQuery q = query_for(
        TransferSignature{{Complex(8.57e-18, 7.06e-17), Complex(0.05, -0.13), Complex(0.10, -0.01)}}, 0.05, 10);
    q.budget = ComponentBudget{5.0, 1.5};
    for (const auto &r : search(q, table_15k())) {
        ASSERT_LE(signature_distance(signature(r.circuit, s15k()), q.target), 0.05 + 1e-9);
    }
}

TEST(search, deterministic_across_workers) {
    const auto &e = shared_default_catalog()->entries();
    std::vector<CouplingModule> subset(e.begin(), e.begin() + 14);
    const auto small = std::make_shared<const Catalog>(std::move(subset));
    const SignatureTable one(small, ReferenceValues{}, Component::capacitor_nF(2.7), 15e3, 1);
    const SignatureTable many(small, ReferenceValues{}, Component::capacitor_nF(2.7), 15e3, 5);
    ASSERT_EQ(one.entries().size(), many.entries().size());
    for (std::size_t k = 0; k < one.entries().size(); ++k) {
        ASSERT_EQ(one.entries()[k].triple, many.entries()[k].triple);
        ASSERT_EQ(one.entries()[k].signature, many.entries()[k].signature);
    }
    const TransferSignature target = one.entries()[100].signature;
    DesignQuery q = query_for(target, 0.5, 40);
    const auto a = search(q, one), b = search(q, many), c = search(q, small, 3);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        ASSERT_EQ(ids_of(a[k]), ids_of(b[k]));
        ASSERT_EQ(ids_of(a[k]), ids_of(c[k]));
        ASSERT_EQ(a[k].distance, c[k].distance);
    }
}

TEST(search, table_must_match_query) {
    DesignQuery q = query_for(TransferSignature{}, 0.1, 1);
    q.frequency_hz = 16e3;
    ASSERT_THROW(search(q, table_15k()), ValidationError);
}

TEST(design_query, json) {
    const auto doc = nlohmann::json::parse(R"({
        "target": [[8.57e-18, 7.06e-17], [0.05, -0.13], [0.10, -0.01]],
        "tolerance": 0.05, "budget": {"C": 5, "R": 1.5}, "frequency_khz": 15, "max_results": 10})");
    const DesignQuery q = query_from_json(doc);
    ASSERT_EQ(q.target.vec[1], Complex(0.05, -0.13));
    ASSERT_EQ(q.tolerance, 0.05);
    ASSERT_EQ(*q.budget, (ComponentBudget{5.0, 1.5}));
    ASSERT_EQ(q.frequency_hz, 15e3);
    ASSERT_EQ(q.max_results, 10);
    ASSERT_EQ(query_from_json(query_to_json(q)).target, q.target);

    auto bad = doc;
    bad["tolerance"] = 1.0;
    ASSERT_THROW(query_from_json(bad), ValidationError);
    bad = doc;
    bad["max_results"] = 0;
    ASSERT_THROW(query_from_json(bad), ValidationError);
    bad = doc;
    bad["budget"] = nullptr;
    ASSERT_FALSE(query_from_json(bad).budget.has_value());
    bad.erase("target");
    ASSERT_THROW(query_from_json(bad), ValidationError);
}
