#pragma once

// Exhaustive inverse design over ordered coupling triples drawn without
// repetition from a catalog.

#include <array>
#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"

#include "c3g/signals.hpp"

namespace c3g {

using Triple = std::array<std::size_t, 3>;

/// Ordered triples (a, b, c) of pairwise-distinct catalog indices in
/// lexicographic order; |C| (|C|-1) (|C|-2) of them.
class TripleSpace {
public:
    explicit TripleSpace(std::size_t catalog_size);

    std::size_t size() const { return total_; }
    /// The k-th triple in lexicographic order.
    Triple at(std::size_t k) const;

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Triple;
        using difference_type = std::ptrdiff_t;
        using pointer = const Triple *;
        using reference = const Triple &;

        iterator() = default;
        iterator(std::size_t n, Triple t, bool end) : n_(n), t_(t), end_(end) {}
        reference operator*() const { return t_; }
        iterator &operator++();
        iterator operator++(int) {
            iterator copy = *this;
            ++*this;
            return copy;
        }
        bool operator==(const iterator &o) const { return end_ == o.end_ && (end_ || t_ == o.t_); }

    private:
        std::size_t n_ = 0;
        Triple t_{};
        bool end_ = true;
    };

    iterator begin() const;
    iterator end() const { return iterator(n_, {}, true); }

private:
    std::size_t n_;
    std::size_t total_;
};

/// Throws ValidationError when the catalog has fewer than 3 entries.
TripleSpace enumerate_space(const Catalog &catalog);

/// Per-node admittance multiples of C0 and 1/R0 ("5C + 1.5R").
struct ComponentBudget {
    double capacitive = 0.0;
    double resistive = 0.0;

    bool operator==(const ComponentBudget &) const = default;
};

/// Total coupling + grounding multiples at a representative node (all nodes
/// agree once grounding is equalized).
ComponentBudget component_budget_of(const ChainCircuit &circuit);

struct DesignQuery {
    TransferSignature target;
    double tolerance = 1e-6;
    std::optional<ComponentBudget> budget;
    double frequency_hz = 15e3;
    int max_results = 10;
    ReferenceValues reference;
    Component triangle = Component::capacitor_nF(2.7);

    void validate() const;
};

struct DesignResult {
    ChainCircuit circuit;
    TransferSignature achieved;
    double distance = 0.0;
    int rank = 0;
};

/// Signatures of every enumerated 4-cell circuit at one frequency.
class SignatureTable {
public:
    struct Entry {
        Triple triple{};
        TransferSignature signature;
        ComponentBudget budget;
        bool solvable = false;
    };

    SignatureTable(std::shared_ptr<const Catalog> catalog, ReferenceValues reference, Component triangle,
                   double frequency_hz, unsigned workers = 1);

    const std::vector<Entry> &entries() const { return entries_; }
    const std::shared_ptr<const Catalog> &catalog() const { return catalog_; }
    const ReferenceValues &reference() const { return reference_; }
    const Component &triangle() const { return triangle_; }
    double frequency_hz() const { return frequency_hz_; }

    /// Whether this table was built for the same physical setting as `q`.
    bool matches(const DesignQuery &q) const;

private:
    std::shared_ptr<const Catalog> catalog_;
    ReferenceValues reference_;
    Component triangle_;
    double frequency_hz_;
    std::vector<Entry> entries_;
};

/// Circuits within `tolerance` of the target (and matching the budget when
/// given), ascending by distance, ties by coupling-id triple, truncated to
/// max_results. An empty result is a valid answer.
std::vector<DesignResult> search(const DesignQuery &query, const SignatureTable &table);
std::vector<DesignResult> search(const DesignQuery &query, std::shared_ptr<const Catalog> catalog,
                                 unsigned workers = 1);

DesignQuery query_from_json(const nlohmann::json &doc);
nlohmann::json query_to_json(const DesignQuery &q);
nlohmann::json results_to_json(const std::vector<DesignResult> &results);

}  // namespace c3g
