#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/measure.hpp"

namespace anhomlog {

/// A multiplicative truth valuation, identified with its dual set A:
/// phi_A(B) = 1 iff A is a subset of B.
class CoEvent {
public:
    explicit CoEvent(Event dual) : dual_(std::move(dual)) {
        detail::require(!dual_.is_empty(), "co-event dual must be nonempty");
    }

    const Event& dual() const { return dual_; }
    const SpacePtr& space() const { return dual_.space(); }

    bool evaluate(const Event& b) const { return dual_.is_subset_of(b); }

    friend bool operator==(const CoEvent& a, const CoEvent& b) { return a.dual_ == b.dual_; }
    friend bool operator!=(const CoEvent& a, const CoEvent& b) { return !(a == b); }

private:
    Event dual_;
};

/// Whether a measure value counts as null at a given threshold.
/// epsilon = 0 selects exact preclusion (|mu| <= tol); epsilon > 0 selects
/// approximate preclusion with a strict bound (mu < epsilon).
inline bool is_null_measure(double mu, double epsilon, double tol = kDefaultTolerance) {
    return epsilon == 0.0 ? std::abs(mu) <= tol : mu < epsilon;
}

/// The inclusion-maximal null events. Every null event is contained in some
/// member; no member contains another.
struct NullFamily {
    double epsilon = 0.0;
    std::vector<Event> maximal_null_sets;
};

namespace detail {

struct NullScan {
    std::vector<bool> null;     // mask is a null event
    std::vector<bool> covered;  // mask is null or contained in a null event
};

inline NullScan null_scan(const std::vector<double>& mu, std::size_t n, double epsilon,
                          double tol) {
    const std::size_t count = std::size_t{1} << n;
    NullScan scan;
    scan.null.resize(count);
    scan.covered.resize(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        scan.null[mask] = is_null_measure(mu[mask], epsilon, tol);
    }
    // Supersets of mask have larger integer value, so a descending pass sees
    // covered[mask | bit] before covered[mask].
    for (std::size_t mask = count; mask-- > 0;) {
        bool covered = scan.null[mask];
        for (std::size_t i = 0; i < n && !covered; ++i) {
            if (!(mask >> i & 1)) covered = scan.covered[mask | (std::size_t{1} << i)];
        }
        scan.covered[mask] = covered;
    }
    return scan;
}

}  // namespace detail

/// Scans all 2^n events and returns the inclusion-maximal ones below the
/// null threshold. The empty event is always null, so the family is never
/// empty; it is {empty} exactly when no nonempty event qualifies.
inline NullFamily maximal_null_sets(const DecoherenceFunctional& d, double epsilon,
                                    double tol = kDefaultTolerance,
                                    std::size_t cap = kDefaultCap) {
    detail::require(epsilon >= 0.0, "epsilon must be nonnegative");
    const std::size_t n = d.size();
    detail::require_cap(n, cap, "maximal_null_sets");
    const auto table = detail::mu_table(d, cap);
    const auto scan = detail::null_scan(table.mu, n, epsilon, tol);

    NullFamily family;
    family.epsilon = epsilon;
    for (std::size_t mask = 0; mask < scan.null.size(); ++mask) {
        if (!scan.null[mask]) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < n && maximal; ++i) {
            if (!(mask >> i & 1)) maximal = !scan.covered[mask | (std::size_t{1} << i)];
        }
        if (maximal) family.maximal_null_sets.push_back(Event::from_mask(d.space(), mask));
    }
    sort_canonically(family.maximal_null_sets);
    return family;
}

/// All inclusion-minimal sets intersecting every edge, in canonical order.
/// Berge-style incremental update: fold edges in one at a time, extending
/// the transversals that miss the new edge and pruning subsumed candidates.
inline std::vector<Event> minimal_transversals(const SpacePtr& space,
                                               const std::vector<Event>& edges) {
    for (const auto& edge : edges) {
        detail::require_same_space(space, edge.space());
        detail::require(!edge.is_empty(), "transversal: an empty edge cannot be hit");
    }

    std::vector<Bits> transversals = {Bits(space->size())};
    for (const auto& edge : edges) {
        std::vector<Bits> hit;
        std::vector<Bits> miss;
        for (auto& t : transversals) {
            (t.intersects(edge.bits()) ? hit : miss).push_back(std::move(t));
        }

        std::vector<Bits> candidates;
        for (const auto& t : miss) {
            for (std::size_t v = edge.bits().find_first(); v != Bits::npos;
                 v = edge.bits().find_next(v)) {
                Bits c = t;
                c.set(v);
                candidates.push_back(std::move(c));
            }
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const Bits& a, const Bits& b) { return a.count() < b.count(); });

        // A candidate survives unless an already-hitting transversal or a
        // smaller kept candidate is contained in it.
        std::vector<Bits> kept;
        for (const auto& c : candidates) {
            const auto subset_of_c = [&c](const Bits& s) { return s.is_subset_of(c); };
            if (std::any_of(hit.begin(), hit.end(), subset_of_c)) continue;
            if (std::any_of(kept.begin(), kept.end(), subset_of_c)) continue;
            kept.push_back(c);
        }

        transversals = std::move(hit);
        transversals.insert(transversals.end(), std::make_move_iterator(kept.begin()),
                            std::make_move_iterator(kept.end()));
    }

    std::vector<Event> out;
    out.reserve(transversals.size());
    for (auto& t : transversals) out.emplace_back(space, std::move(t));
    sort_canonically(out);
    return out;
}

namespace detail {

inline std::vector<CoEvent> enumerate_primitive(const DecoherenceFunctional& d, double epsilon,
                                                double tol, std::size_t cap) {
    const NullFamily family = maximal_null_sets(d, epsilon, tol, cap);
    std::vector<Event> edges;
    edges.reserve(family.maximal_null_sets.size());
    for (const auto& null_set : family.maximal_null_sets) {
        if (null_set.is_full()) {
            throw TotalPreclusionError(
                "the full history space is below the preclusion threshold; "
                "no preclusive co-event exists");
        }
        edges.push_back(null_set.complement());
    }
    std::vector<Event> duals = minimal_transversals(d.space(), edges);
    std::vector<CoEvent> out;
    out.reserve(duals.size());
    for (auto& dual : duals) out.emplace_back(std::move(dual));
    return out;
}

}  // namespace detail

/// Primitive preclusive co-events under exact preclusion: the duals are the
/// minimal transversals of the complements of the maximal null sets, i.e.
/// the inclusion-minimal nonempty sets contained in no null event.
inline std::vector<CoEvent> enumerate_ppc(const DecoherenceFunctional& d,
                                          double tol = kDefaultTolerance,
                                          std::size_t cap = kDefaultCap) {
    return detail::enumerate_primitive(d, 0.0, tol, cap);
}

/// Same with the approximate null threshold mu(A) < epsilon.
inline std::vector<CoEvent> enumerate_appc(const DecoherenceFunctional& d, double epsilon,
                                           double tol = kDefaultTolerance,
                                           std::size_t cap = kDefaultCap) {
    detail::require(epsilon > 0.0, "approximate preclusion needs epsilon > 0");
    return detail::enumerate_primitive(d, epsilon, tol, cap);
}

/// The finest partition on whose generated subalgebra every given co-event
/// acts as a Boolean homomorphism.
struct ClassicalDomain {
    Partition partition;
};

/// Blocks are the connected components of the hypergraph whose hyperedges
/// are the duals; histories in no dual become singleton blocks.
inline ClassicalDomain classical_domain(const std::vector<CoEvent>& coevents) {
    detail::require(!coevents.empty(), "classical domain needs at least one co-event");
    const SpacePtr& space = coevents.front().space();
    const std::size_t n = space->size();

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (const auto& c : coevents) {
        detail::require_same_space(space, c.space());
        const auto members = c.dual().members();
        for (std::size_t i = 1; i < members.size(); ++i) {
            parent[find(members[i])] = find(members[0]);
        }
    }

    std::vector<Bits> roots(n);
    for (std::size_t h = 0; h < n; ++h) {
        const std::size_t r = find(h);
        if (roots[r].empty()) roots[r].resize(n);
        roots[r].set(h);
    }
    std::vector<Event> blocks;
    for (auto& bits : roots) {
        if (!bits.empty()) blocks.emplace_back(space, std::move(bits));
    }
    return ClassicalDomain{Partition(space, std::move(blocks))};
}

/// True iff the co-event restricted to the subalgebra generated by p is a
/// Boolean homomorphism; equivalent to the dual lying inside one block.
inline bool is_homomorphism_on(const CoEvent& c, const Partition& p) {
    detail::require_same_space(c.space(), p.space());
    for (const auto& block : p.blocks()) {
        if (c.dual().is_subset_of(block)) return true;
    }
    return false;
}

/// The same predicate by definition: scans every pair of subalgebra events
/// and checks both ring operations. Exponential in the block count.
inline bool is_homomorphism_on_exhaustive(const CoEvent& c, const Partition& p,
                                          std::size_t cap = 12) {
    detail::require_same_space(c.space(), p.space());
    const std::size_t k = p.blocks().size();
    detail::require_cap(k, cap, "is_homomorphism_on_exhaustive");

    // Blocks are disjoint, so the subalgebra is isomorphic to masks over
    // blocks: union(m1) ^ union(m2) = union(m1 ^ m2), likewise for &.
    const std::size_t count = std::size_t{1} << k;
    std::vector<Event> event_of(count, Event::empty(p.space()));
    std::vector<char> value(count);
    for (std::size_t m = 0; m < count; ++m) {
        Bits b(p.space()->size());
        for (std::size_t bi = 0; bi < k; ++bi) {
            if (m >> bi & 1) b |= p.blocks()[bi].bits();
        }
        event_of[m] = Event(p.space(), std::move(b));
        value[m] = c.evaluate(event_of[m]) ? 1 : 0;
    }
    for (std::size_t m1 = 0; m1 < count; ++m1) {
        for (std::size_t m2 = m1; m2 < count; ++m2) {
            if (value[m1 ^ m2] != (value[m1] ^ value[m2])) return false;
            if (value[m1 & m2] != (value[m1] & value[m2])) return false;
        }
    }
    return true;
}

/// Co-events answering NO on every cell of the question: the dual straddles
/// cells, so no outcome of the question is affirmed.
inline std::vector<CoEvent> find_boolean_anomalies(const std::vector<CoEvent>& coevents,
                                                   const Partition& question) {
    std::vector<CoEvent> flagged;
    for (const auto& c : coevents) {
        detail::require_same_space(c.space(), question.space());
        const bool affirms_some_cell =
            std::any_of(question.blocks().begin(), question.blocks().end(),
                        [&c](const Event& cell) { return c.evaluate(cell); });
        if (!affirms_some_cell) flagged.push_back(c);
    }
    return flagged;
}

}  // namespace anhomlog
