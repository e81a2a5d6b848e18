#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "anhomlog/cournot.hpp"
#include "anhomlog/trials.hpp"
#include "support/generators.hpp"

using namespace anhomlog;
namespace at = anhomlog::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("prediction verdicts use the non-strict threshold", "[cournot]") {
    REQUIRE(classify(0.5e-3, 1e-3) == Outcome::Precluded);
    REQUIRE(classify(1e-3, 1e-3) == Outcome::Precluded);  // boundary counts as precluded
    REQUIRE(classify(1.1e-3, 1e-3) == Outcome::NotRuledOut);
    REQUIRE_THROWS_AS(classify(0.5, 0.0), std::invalid_argument);

    const auto d = at::three_slit_functional();
    const auto& space = d.space();
    const Verdict null_verdict = predict(d, Event::of_labels(space, {"A", "B"}), 1e-3);
    REQUIRE(null_verdict.outcome == Outcome::Precluded);  // exactly-null events always precluded
    CHECK_THAT(null_verdict.measure, WithinAbs(0.0, 1e-12));

    const Verdict live = predict(d, Event::of_labels(space, {"A", "C"}), 1e-3);
    REQUIRE(live.outcome == Outcome::NotRuledOut);
    CHECK_THAT(live.measure, WithinAbs(4.0, 1e-12));
    CHECK_THAT(live.epsilon, WithinAbs(1e-3, 0.0));
}

TEST_CASE("verdicts are monotone in epsilon", "[cournot]") {
    at::Rng rng(201);
    for (int round = 0; round < 50; ++round) {
        const auto space = at::space_of(2 + static_cast<std::size_t>(round % 4));
        const auto d = at::random_functional(rng, space);
        const Event a = at::random_event(rng, space);
        std::uniform_real_distribution<double> eps(1e-6, 0.5);
        double e1 = eps(rng);
        double e2 = eps(rng);
        if (e1 > e2) std::swap(e1, e2);
        if (predict(d, a, e1).outcome == Outcome::Precluded) {
            REQUIRE(predict(d, a, e2).outcome == Outcome::Precluded);
        }
    }
}

TEST_CASE("complement of a precluded event survives on classical coins", "[cournot]") {
    for (int tosses : {3, 6, 10}) {
        const auto model = coin_model(tosses, 0.5);
        const double epsilon = 0.4;
        for (std::size_t i = 0; i < model.space->size(); i += 7) {
            const Event a = Event::singleton(model.space, i);
            const Verdict v = predict(model.functional, a, epsilon);
            if (v.outcome == Outcome::Precluded && epsilon < 0.5) {
                REQUIRE(predict(model.functional, a.complement(), epsilon).outcome ==
                        Outcome::NotRuledOut);
            }
        }
    }
}

TEST_CASE("fair-coin sequence singletons cover the space below 1e-3", "[cournot]") {
    const auto model = coin_model(10, 0.5);
    std::vector<Event> singletons;
    for (std::size_t i = 0; i < model.space->size(); ++i) {
        singletons.push_back(Event::singleton(model.space, i));
    }

    const NullCover cover = strong_cournot_cover(model.functional, 1e-3, singletons);
    REQUIRE(cover.pieces.size() == 1024);
    REQUIRE(cover.covered);

    Bits all(model.space->size());
    for (const auto& piece : cover.pieces) all |= piece.bits();
    REQUIRE(all.all());  // covered=true means the union is exactly the space

    const NullCover tighter = strong_cournot_cover(model.functional, 1e-4, singletons);
    REQUIRE(tighter.pieces.empty());
    REQUIRE_FALSE(tighter.covered);
}

TEST_CASE("three-slit exact nulls cover the space", "[cournot]") {
    const auto d = at::three_slit_functional();
    const auto& space = d.space();
    const std::vector<Event> pieces = {Event::of_labels(space, {"A", "B"}),
                                       Event::of_labels(space, {"B", "C"})};
    const NullCover cover = strong_cournot_cover(d, 0.0, pieces);
    REQUIRE(cover.pieces.size() == 2);
    REQUIRE(cover.covered);
}

TEST_CASE("cover candidates above threshold are filtered out", "[cournot]") {
    const auto d = at::three_slit_functional();
    const auto& space = d.space();
    const std::vector<Event> pieces = {Event::of_labels(space, {"A", "B"}),
                                       Event::of_labels(space, {"A", "C"})};
    const NullCover cover = strong_cournot_cover(d, 0.0, pieces);
    REQUIRE(cover.pieces == std::vector<Event>{Event::of_labels(space, {"A", "B"})});
    REQUIRE_FALSE(cover.covered);
}
