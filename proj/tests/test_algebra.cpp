#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "support/generators.hpp"

using namespace anhomlog;
namespace at = anhomlog::testing;

TEST_CASE("make_space preserves order and rejects bad label lists", "[algebra]") {
    const auto abc = make_space({"A", "B", "C"});
    REQUIRE(abc->size() == 3);
    REQUIRE(abc->labels() == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(abc->index_of("B") == 1);
    REQUIRE_FALSE(abc->index_of("D").has_value());

    REQUIRE(make_space({"h"})->size() == 1);

    REQUIRE_THROWS_AS(make_space({"x", "x"}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_space({}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_space({"a", ""}), std::invalid_argument);
}

TEST_CASE("set operations follow set semantics", "[algebra]") {
    const auto space = make_space({"A", "B", "C"});
    const Event ab = Event::of_labels(space, {"A", "B"});
    const Event bc = Event::of_labels(space, {"B", "C"});
    const Event ac = Event::of_labels(space, {"A", "C"});
    const Event a = Event::of_labels(space, {"A"});

    REQUIRE((ab ^ bc) == ac);
    REQUIRE((ac & ab) == a);
    REQUIRE(a.complement() == bc);
    REQUIRE((ab | bc) == Event::full(space));
    REQUIRE(a.is_subset_of(ab));
    REQUIRE_FALSE(ab.is_subset_of(a));

    const auto other = make_space({"X", "Y", "Z"});
    REQUIRE_THROWS_AS(ab & Event::full(other), SpaceMismatchError);
    REQUIRE_THROWS_AS(ab ^ Event::full(other), SpaceMismatchError);

    // Equal label lists identify the space even across separate instances.
    const auto clone = make_space({"A", "B", "C"});
    REQUIRE((ab & Event::full(clone)) == ab);
}

TEST_CASE("event construction validates indices and labels", "[algebra]") {
    const auto space = make_space({"A", "B"});
    REQUIRE_THROWS_AS(Event::singleton(space, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(Event::of_labels(space, {"Q"}), std::invalid_argument);
    REQUIRE(Event::of_indices(space, {0, 1}) == Event::full(space));
    REQUIRE(Event::empty(space).is_empty());
}

TEST_CASE("enumerate_events yields all subsets in canonical order", "[algebra]") {
    const auto two = at::space_of(2);
    const auto events = enumerate_events(two);
    REQUIRE(events.size() == 4);
    REQUIRE(events[0] == Event::empty(two));
    REQUIRE(events[1] == Event::singleton(two, 0));
    REQUIRE(events[2] == Event::singleton(two, 1));
    REQUIRE(events[3] == Event::full(two));

    const auto three = at::space_of(3);
    const auto eight = enumerate_events(three);
    REQUIRE(eight.size() == 8);
    std::set<std::uint64_t> distinct;
    for (const auto& e : eight) distinct.insert(e.to_mask());
    REQUIRE(distinct.size() == 8);
    REQUIRE(std::is_sorted(eight.begin(), eight.end(), canonical_less));

    REQUIRE_THROWS_AS(enumerate_events(at::space_of(21)), CapExceededError);
}

TEST_CASE("canonical order compares size first, then member sequence", "[algebra]") {
    const auto space = at::space_of(4);
    const Event e03 = Event::of_indices(space, {0, 3});
    const Event e12 = Event::of_indices(space, {1, 2});
    const Event e1 = Event::singleton(space, 1);
    REQUIRE(canonical_less(e1, e03));       // smaller set first
    REQUIRE(canonical_less(e03, e12));      // {0,3} before {1,2}
    REQUIRE_FALSE(canonical_less(e03, e03));
}

TEST_CASE("partitions validate disjointness, coverage and nonemptiness", "[algebra]") {
    const auto space = make_space({"A", "B", "C"});
    const Event ac = Event::of_labels(space, {"A", "C"});
    const Event b = Event::of_labels(space, {"B"});

    REQUIRE_NOTHROW(Partition(space, {ac, b}));
    REQUIRE_THROWS_AS(Partition(space, {ac}), std::invalid_argument);             // not exhaustive
    REQUIRE_THROWS_AS(Partition(space, {ac, b, b}), std::invalid_argument);       // overlap
    REQUIRE_THROWS_AS(Partition(space, {ac, b, Event::empty(space)}), std::invalid_argument);

    const Partition p(space, {b, ac});
    REQUIRE(p.blocks().front() == ac);  // blocks sorted by smallest member
    REQUIRE(p.block_index_of(1) == 1);
}

TEST_CASE("subalgebra_events closes the block unions under both ring ops", "[algebra]") {
    const auto space = make_space({"A", "B", "C"});
    const Partition p(space, {Event::of_labels(space, {"A", "C"}), Event::of_labels(space, {"B"})});

    const auto events = subalgebra_events(p);
    REQUIRE(events.size() == 4);
    REQUIRE(events[0] == Event::empty(space));
    REQUIRE(events[1] == Event::of_labels(space, {"B"}));
    REQUIRE(events[2] == Event::of_labels(space, {"A", "C"}));
    REQUIRE(events[3] == Event::full(space));

    REQUIRE(subalgebra_events(Partition::discrete(space)).size() == 8);
    REQUIRE(subalgebra_events(Partition::trivial(space)).size() == 2);

    // Closure under both operations, exhaustively (k <= 4).
    at::Rng rng(811);
    for (int round = 0; round < 20; ++round) {
        const auto sp = at::space_of(4);
        const auto part = at::random_partition(rng, sp);
        const auto sub = subalgebra_events(part);
        const auto contains = [&sub](const Event& e) {
            return std::find(sub.begin(), sub.end(), e) != sub.end();
        };
        for (const auto& x : sub) {
            for (const auto& y : sub) {
                REQUIRE(contains(x ^ y));
                REQUIRE(contains(x & y));
            }
        }
    }
}

TEST_CASE("refines matches containment of blocks", "[algebra]") {
    const auto space = make_space({"A", "B", "C"});
    const Partition coarse(space,
                           {Event::of_labels(space, {"A", "C"}), Event::of_labels(space, {"B"})});
    const Partition discrete = Partition::discrete(space);

    REQUIRE(refines(discrete, coarse));
    REQUIRE_FALSE(refines(coarse, discrete));
    REQUIRE(refines(coarse, coarse));

    const auto other = at::space_of(3);
    REQUIRE_THROWS_AS(refines(coarse, Partition::discrete(other)), SpaceMismatchError);
}

TEST_CASE("refines is a partial order", "[algebra]") {
    at::Rng rng(812);
    for (int round = 0; round < 50; ++round) {
        const auto space = at::space_of(6);
        const Partition p = at::random_partition(rng, space);
        const Partition q = at::random_coarsening(rng, p);
        const Partition r = at::random_coarsening(rng, q);

        REQUIRE(refines(p, p));
        REQUIRE(refines(p, q));
        REQUIRE(refines(q, r));
        REQUIRE(refines(p, r));  // transitivity along the constructed chain
        if (refines(q, p)) REQUIRE(p == q);  // antisymmetry
    }
}

TEST_CASE("symmetric difference and intersection satisfy the ring laws", "[algebra]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto space = at::space_of(n);
        const auto events = enumerate_events(space);
        const Event zero = Event::empty(space);
        for (const auto& e : events) {
            REQUIRE((e ^ zero) == e);
            REQUIRE((e ^ e) == zero);
            for (const auto& f : events) {
                REQUIRE((e ^ f) == (f ^ e));
                REQUIRE((e & f) == (f & e));
                for (const auto& g : events) {
                    REQUIRE(((e ^ f) ^ g) == (e ^ (f ^ g)));
                    REQUIRE((e & (f ^ g)) == ((e & f) ^ (e & g)));
                }
            }
        }
    }
}
