#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/measure.hpp"

namespace anhomlog {

/// N independent repetitions of a base system. The product functional
/// D_N((h_1..h_N),(h'_1..h'_N)) = prod_k D(h_k,h'_k) is never materialized;
/// all measures here come from factorization.
class RepeatedTrial {
public:
    RepeatedTrial(DecoherenceFunctional base, int repetitions)
        : base_(std::move(base)), repetitions_(repetitions) {
        detail::require(repetitions >= 1, "repeated trial needs at least one repetition");
    }

    const DecoherenceFunctional& base() const { return base_; }
    int repetitions() const { return repetitions_; }

private:
    DecoherenceFunctional base_;
    int repetitions_;
};

/// mu of the product event A_1 x ... x A_N, which factorizes exactly:
/// D_N(prod A_k, prod A_k) = prod_k D(A_k, A_k).
inline double product_event_measure(const RepeatedTrial& t, const std::vector<Event>& factors,
                                    double tol = kDefaultTolerance) {
    detail::require(factors.size() == static_cast<std::size_t>(t.repetitions()),
                    "need exactly one factor event per repetition");
    double product = 1.0;
    for (const auto& factor : factors) {
        detail::require_same_space(t.base().space(), factor.space());
        product *= mu_event(t.base(), factor, tol);
    }
    return product;
}

namespace detail {

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;  // exact at every step
    }
    return r;
}

}  // namespace detail

/// How many trials land in each cell of a partition of the base space.
class OccupationEvent {
public:
    OccupationEvent(Partition cells, std::vector<std::uint64_t> counts)
        : cells_(std::move(cells)), counts_(std::move(counts)) {
        detail::require(counts_.size() == cells_.blocks().size(),
                        "need one count per partition cell");
    }

    const Partition& cells() const { return cells_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (std::uint64_t c : counts_) sum += c;
        return sum;
    }

private:
    Partition cells_;
    std::vector<std::uint64_t> counts_;
};

struct OccupationMeasure {
    std::uint64_t arrangements = 0;   // multinomial(N; counts)
    double per_arrangement = 0.0;     // prod_j mu(cell_j)^count_j
    double total = 0.0;               // arrangements * per_arrangement
};

/// Measure of an occupation event, computed without materializing the
/// product space. Valid only for interference-free cells (D vanishes across
/// cells), which is what makes disjoint arrangements measure-additive; the
/// precondition is validated and violations are refused.
inline OccupationMeasure occupation_event_measure(const RepeatedTrial& t,
                                                  const OccupationEvent& o,
                                                  double tol = kDefaultTolerance) {
    const DecoherenceFunctional& d = t.base();
    detail::require_same_space(d.space(), o.cells().space());
    detail::require(o.total() == static_cast<std::uint64_t>(t.repetitions()),
                    "occupation counts must sum to the repetition count");
    detail::require_cap(static_cast<std::size_t>(t.repetitions()), 20,
                        "occupation_event_measure repetitions");

    const auto& blocks = o.cells().blocks();
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        for (std::size_t bj = bi + 1; bj < blocks.size(); ++bj) {
            for (std::size_t h : blocks[bi].members()) {
                for (std::size_t g : blocks[bj].members()) {
                    if (std::abs(d(h, g)) > tol || std::abs(d(g, h)) > tol) {
                        throw std::invalid_argument(
                            "occupation cells interfere: D(" + d.space()->label(h) + "," +
                            d.space()->label(g) + ") != 0; refusing the additive total");
                    }
                }
            }
        }
    }

    OccupationMeasure result;
    result.arrangements = 1;
    std::uint64_t remaining = o.total();
    result.per_arrangement = 1.0;
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const std::uint64_t k = o.counts()[bi];
        result.arrangements *= detail::binomial_u64(remaining, k);
        remaining -= k;
        const double cell_mu = mu_event(d, blocks[bi], tol);
        for (std::uint64_t c = 0; c < k; ++c) result.per_arrangement *= cell_mu;
    }
    result.total = static_cast<double>(result.arrangements) * result.per_arrangement;
    return result;
}

/// A materialized sequence space for N tosses of a (possibly biased) coin.
/// Histories are labeled by outcome strings ("hh", "ht", ...), in
/// lexicographic order; index 0 is the all-heads sequence.
struct CoinModel {
    SpacePtr space;
    DecoherenceFunctional functional;
    int tosses = 0;
    double bias = 0.5;
};

inline CoinModel coin_model(int tosses, double bias,
                            std::size_t materialize_cap = kDefaultMaterializeCap) {
    detail::require(tosses >= 1, "coin model needs at least one toss");
    detail::require(bias > 0.0 && bias < 1.0, "coin bias must lie strictly inside (0,1)");
    detail::require(tosses < 63, "coin model toss count out of range");
    const std::size_t count = std::size_t{1} << tosses;
    detail::require_cap(count, materialize_cap, "coin_model");

    std::vector<std::string> labels;
    std::vector<double> weights;
    labels.reserve(count);
    weights.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string label(static_cast<std::size_t>(tosses), 'h');
        double weight = 1.0;
        for (int k = 0; k < tosses; ++k) {
            const bool tails = i >> (tosses - 1 - k) & 1;
            label[static_cast<std::size_t>(k)] = tails ? 't' : 'h';
            weight *= tails ? 1.0 - bias : bias;
        }
        labels.push_back(std::move(label));
        weights.push_back(weight);
    }
    SpacePtr space = make_space(std::move(labels));
    auto functional = DecoherenceFunctional::diagonal(space, weights);
    return CoinModel{std::move(space), std::move(functional), tosses, bias};
}

/// Sequences whose toss number `toss` (0-based) came up heads (or tails).
inline Event toss_outcome_event(const CoinModel& m, int toss, bool heads) {
    detail::require(toss >= 0 && toss < m.tosses, "toss index out of range");
    Bits b(m.space->size());
    for (std::size_t i = 0; i < m.space->size(); ++i) {
        const bool tails = i >> (m.tosses - 1 - toss) & 1;
        if (tails != heads) b.set(i);
    }
    return Event(m.space, std::move(b));
}

/// The two-cell question "did toss number `toss` come up heads?".
inline Partition toss_partition(const CoinModel& m, int toss) {
    return Partition(m.space,
                     {toss_outcome_event(m, toss, true), toss_outcome_event(m, toss, false)});
}

/// Sequences with a total heads count in [lo, hi].
inline Event heads_count_event(const CoinModel& m, int lo, int hi) {
    detail::require(lo >= 0 && hi <= m.tosses, "heads-count range must lie within [0, N]");
    Bits b(m.space->size());
    for (std::size_t i = 0; i < m.space->size(); ++i) {
        const int heads = m.tosses - std::popcount(i);
        if (heads >= lo && heads <= hi) b.set(i);
    }
    return Event(m.space, std::move(b));
}

/// Probability of a heads count in [lo, hi] over N tosses, computed from
/// binomial terms without materializing the sequence space. An empty range
/// yields 0.
inline double binomial_tail_measure(int tosses, double bias, int lo, int hi) {
    detail::require(tosses >= 1, "need at least one toss");
    detail::require(bias > 0.0 && bias < 1.0, "coin bias must lie strictly inside (0,1)");
    detail::require(lo >= 0 && hi <= tosses, "heads-count range must lie within [0, N]");
    if (lo > hi) return 0.0;

    double term = 1.0;  // C(N,k) bias^k (1-bias)^(N-k), starting at k = 0
    for (int i = 0; i < tosses; ++i) term *= 1.0 - bias;
    const double ratio = bias / (1.0 - bias);
    double sum = (lo == 0) ? term : 0.0;
    for (int k = 1; k <= hi; ++k) {
        term = term * static_cast<double>(tosses - k + 1) / static_cast<double>(k) * ratio;
        if (k >= lo) sum += term;
    }
    return sum;
}

/// Single particle through two slits onto a discrete five-slot screen.
/// Histories (slit, slot) for slit in {s1,s2}, slot in {-2,-1,0,+1,+2}.
/// Slots 0 and +-2 are bright fringes, +-1 dark: crossing terms raise the
/// bright two-slit measure to 0.3 and cancel the dark one down to 0.05,
/// while different slots never interfere.
inline DecoherenceFunctional double_slit_model() {
    static const char* kSlotNames[] = {"-2", "-1", "0", "+1", "+2"};
    std::vector<std::string> labels;
    labels.reserve(10);
    for (const char* slit : {"s1", "s2"}) {
        for (const char* slot : kSlotNames) {
            labels.push_back(std::string(slit) + ":" + slot);
        }
    }
    SpacePtr space = make_space(std::move(labels));

    const std::size_t n = 10;
    std::vector<Complex> m(n * n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = Complex{0.1, 0.0};
    for (std::size_t slot = 0; slot < 5; ++slot) {
        const bool bright = slot != 1 && slot != 3;  // slots -2, 0, +2
        const double cross = bright ? 0.05 : -0.075;
        m[slot * n + (slot + 5)] = Complex{cross, 0.0};
        m[(slot + 5) * n + slot] = Complex{cross, 0.0};
    }
    return DecoherenceFunctional(std::move(space), std::move(m));
}

/// The five screen-slot cells {(s1,i),(s2,i)}, ordered by slot -2..+2.
inline Partition double_slit_slot_cells(const SpacePtr& space) {
    std::vector<Event> cells;
    cells.reserve(5);
    for (std::size_t slot = 0; slot < 5; ++slot) {
        cells.push_back(Event::of_indices(space, {slot, slot + 5}));
    }
    return Partition(space, std::move(cells));
}

/// Slot names aligned with double_slit_slot_cells block order.
inline std::vector<std::string> double_slit_slot_names() {
    return {"-2", "-1", "0", "+1", "+2"};
}

}  // namespace anhomlog
