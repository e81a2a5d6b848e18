#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "anhomlog/measure.hpp"
#include "anhomlog/trials.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace anhomlog;
namespace at = anhomlog::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("from_amplitudes realizes |sum over A|^2 as the measure", "[measure]") {
    const auto d = at::three_slit_functional();
    const auto& space = d.space();

    CHECK_THAT(mu_event(d, Event::of_labels(space, {"A", "B"})), WithinAbs(0.0, 1e-12));
    CHECK_THAT(mu_event(d, Event::of_labels(space, {"B", "C"})), WithinAbs(0.0, 1e-12));
    CHECK_THAT(mu_event(d, Event::of_labels(space, {"A", "C"})), WithinAbs(4.0, 1e-12));
    CHECK_THAT(mu_event(d, Event::full(space)), WithinAbs(1.0, 1e-12));
    CHECK_THAT(mu_event(d, Event::empty(space)), WithinAbs(0.0, 1e-12));

    const auto two = at::space_of(2);
    const auto pure = DecoherenceFunctional::from_amplitudes(two, {Complex{1, 0}, Complex{0, 0}});
    CHECK_THAT(mu_event(pure, Event::singleton(two, 0)), WithinAbs(1.0, 1e-12));
    CHECK_THAT(mu_event(pure, Event::singleton(two, 1)), WithinAbs(0.0, 1e-12));

    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE_THROWS_AS(
        DecoherenceFunctional::from_amplitudes(two, {Complex{r, 0}, Complex{r, 0}}),
        std::invalid_argument);
}

TEST_CASE("validate_decoherence reports each axiom", "[measure]") {
    SECTION("three-slit functional passes all checks") {
        const auto report = validate_decoherence(at::three_slit_functional());
        REQUIRE(report.passed());
        REQUIRE(report.find("hermiticity") != nullptr);
        REQUIRE(report.find("normalization") != nullptr);
        REQUIRE(report.find("weak-positivity") != nullptr);
    }

    SECTION("normalization failure is caught with its magnitude") {
        const auto two = at::space_of(2);
        const DecoherenceFunctional d(two, {Complex{0.1, 0}, Complex{0.6, 0},
                                            Complex{0.6, 0}, Complex{0.9, 0}});
        const auto report = validate_decoherence(d);
        REQUIRE_FALSE(report.passed());
        const auto* norm = report.find("normalization");
        REQUIRE(norm != nullptr);
        REQUIRE_FALSE(norm->passed);
        CHECK_THAT(norm->violation, WithinAbs(1.2, 1e-12));
        REQUIRE(report.find("hermiticity")->passed);
    }

    SECTION("negative full-space measure fails weak positivity") {
        const auto two = at::space_of(2);
        const DecoherenceFunctional d(two, {Complex{1, 0}, Complex{-1.5, 0},
                                            Complex{-1.5, 0}, Complex{1, 0}});
        const auto report = validate_decoherence(d);
        const auto* positivity = report.find("weak-positivity");
        REQUIRE(positivity != nullptr);
        REQUIRE_FALSE(positivity->passed);
        CHECK_THAT(positivity->violation, WithinAbs(1.0, 1e-12));
    }

    SECTION("hermiticity violations are caught") {
        const auto two = at::space_of(2);
        const DecoherenceFunctional d(two, {Complex{0.5, 0}, Complex{0, 0.25},
                                            Complex{0, 0.25}, Complex{0.5, 0}});
        REQUIRE_FALSE(validate_decoherence(d).find("hermiticity")->passed);
    }

    SECTION("dimension mismatch is rejected at construction") {
        REQUIRE_THROWS_AS(DecoherenceFunctional(at::space_of(3), std::vector<Complex>(4)),
                          std::invalid_argument);
    }
}

TEST_CASE("validation above the cap falls back to a partial positivity scan", "[measure]") {
    const auto model = coin_model(10, 0.5);  // 1024 histories, beyond the 2^n scan cap
    const auto report = validate_decoherence(model.functional);
    REQUIRE(report.passed());
    const auto* positivity = report.find("weak-positivity");
    REQUIRE(positivity != nullptr);
    REQUIRE_THAT(positivity->note, Catch::Matchers::ContainsSubstring("partial"));
}

TEST_CASE("mu_event rejects imaginary residues above tolerance", "[measure]") {
    const auto two = at::space_of(2);
    const DecoherenceFunctional broken(two, {Complex{0.5, 0}, Complex{0, 1},
                                             Complex{0, 0}, Complex{0.5, 0}});
    REQUIRE_THROWS_AS(mu_event(broken, Event::full(two)), Error);
}

TEST_CASE("double-slit single-particle measures match the slot table", "[measure]") {
    const auto d = double_slit_model();
    const auto& space = d.space();
    for (const auto& label : space->labels()) {
        CHECK_THAT(mu_event(d, Event::of_labels(space, {label})), WithinAbs(0.1, 1e-12));
    }
    CHECK_THAT(mu_event(d, Event::of_labels(space, {"s1:0", "s2:0"})), WithinAbs(0.3, 1e-12));
    CHECK_THAT(mu_event(d, Event::of_labels(space, {"s1:+1", "s2:+1"})), WithinAbs(0.05, 1e-12));
    // Different slots never interfere: the pair measure is additive.
    CHECK_THAT(mu_event(d, Event::of_labels(space, {"s1:0", "s2:+1"})), WithinAbs(0.2, 1e-12));
    REQUIRE(validate_decoherence(d).passed());
    REQUIRE(check_sum_rule(d).passed());
}

TEST_CASE("gray-code measure table equals the direct double sum", "[measure]") {
    at::Rng rng(901);
    for (int round = 0; round < 25; ++round) {
        const auto space = at::space_of(1 + static_cast<std::size_t>(round % 6));
        const auto d = at::random_functional(rng, space);
        const auto table = detail::mu_table(d);
        for (std::uint64_t mask = 0; mask < table.mu.size(); ++mask) {
            REQUIRE_THAT(table.mu[mask], WithinAbs(at::mu_direct(d, mask), 1e-10));
        }
    }
}

TEST_CASE("the three-event sum rule holds for bilinear measures", "[measure]") {
    SECTION("three-slit triple arithmetic") {
        const auto d = at::three_slit_functional();
        const auto& space = d.space();
        const double lhs = mu_event(d, Event::full(space));
        const double rhs = mu_event(d, Event::of_labels(space, {"A", "B"})) +
                           mu_event(d, Event::of_labels(space, {"A", "C"})) +
                           mu_event(d, Event::of_labels(space, {"B", "C"})) -
                           mu_event(d, Event::of_labels(space, {"A"})) -
                           mu_event(d, Event::of_labels(space, {"B"})) -
                           mu_event(d, Event::of_labels(space, {"C"}));
        CHECK_THAT(lhs, WithinAbs(rhs, 1e-12));
        REQUIRE(check_sum_rule(d).passed());
    }

    SECTION("a perturbed table fails") {
        const auto d = at::three_slit_functional();
        const auto table = MeasureTable::from_decoherence(d);
        const Event outer = Event::of_labels(d.space(), {"A", "C"});
        const auto broken = table.with_value(outer, table(outer) + 0.1);
        const auto report = check_sum_rule(broken);
        REQUIRE_FALSE(report.passed());
        CHECK_THAT(report.checks.front().violation, WithinAbs(0.1, 1e-12));
    }

    SECTION("cap is enforced") {
        at::Rng rng(1);
        const auto big = at::random_diagonal(rng, at::space_of(11), false);
        REQUIRE_THROWS_AS(check_sum_rule(big), CapExceededError);
    }
}

TEST_CASE("biadditivity of the pair function on disjoint unions", "[measure]") {
    at::Rng rng(902);
    const auto space = at::space_of(5);
    const auto d = at::random_mixture(rng, space);
    const auto events = enumerate_events(space);
    for (const auto& a : events) {
        for (const auto& b : events) {
            if ((a & b).is_empty()) {
                for (const auto& c : events) {
                    const Complex lhs = decoherence_pair(d, a | b, c);
                    const Complex rhs = decoherence_pair(d, a, c) + decoherence_pair(d, b, c);
                    REQUIRE(std::abs(lhs - rhs) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("disjoint additivity fails for the three-slit measure", "[measure]") {
    const auto d = at::three_slit_functional();
    const auto& space = d.space();
    const double left = mu_event(d, Event::of_labels(space, {"A", "B"}));
    const double sum = mu_event(d, Event::of_labels(space, {"A"})) +
                       mu_event(d, Event::of_labels(space, {"B"}));
    REQUIRE(left == 0.0);
    REQUIRE(sum == 2.0);
}

TEST_CASE("measure tables validate their invariants", "[measure]") {
    const auto two = at::space_of(2);
    REQUIRE_NOTHROW(MeasureTable(two, {0.0, 0.5, 0.5, 1.0}));
    REQUIRE_THROWS_AS(MeasureTable(two, {0.1, 0.5, 0.5, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(MeasureTable(two, {0.0, 0.5, 0.5, 2.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(MeasureTable(two, {0.0, -0.5, 0.5, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(MeasureTable(two, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("measure_to_decoherence reconstructs the real symmetric form", "[measure]") {
    SECTION("three-slit off-diagonal is -1") {
        const auto table = MeasureTable::from_decoherence(at::three_slit_functional());
        const auto d = measure_to_decoherence(table);
        CHECK_THAT(d(0, 1).real(), WithinAbs(-1.0, 1e-12));
        CHECK_THAT(d(0, 1).imag(), WithinAbs(0.0, 1e-12));
        CHECK_THAT(d(0, 2).real(), WithinAbs(1.0, 1e-12));
        for (const auto& event : enumerate_events(table.space())) {
            CHECK_THAT(mu_event(d, event), WithinAbs(table(event), 1e-9));
        }
    }

    SECTION("fully additive tables reconstruct to diagonal form") {
        at::Rng rng(903);
        const auto space = at::space_of(4);
        const auto classical = at::random_diagonal(rng, space, false);
        const auto d = measure_to_decoherence(MeasureTable::from_decoherence(classical));
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i != j) CHECK_THAT(std::abs(d(i, j)), WithinAbs(0.0, 1e-12));
            }
        }
    }

    SECTION("a sum-rule-breaking table is refused") {
        const auto table = MeasureTable::from_decoherence(at::three_slit_functional());
        const Event outer = Event::of_labels(table.space(), {"A", "C"});
        REQUIRE_THROWS_AS(measure_to_decoherence(table.with_value(outer, 5.0)), SumRuleError);
    }
}
