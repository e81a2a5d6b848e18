#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "anhomlog/coevent.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/cournot.hpp"
#include "anhomlog/experiment.hpp"
#include "anhomlog/measure.hpp"
#include "anhomlog/trials.hpp"

namespace anhomlog {

struct DemoSettings {
    double epsilon = 1e-3;
    double tolerance = kDefaultTolerance;
    std::size_t cap = kDefaultCap;
};

namespace detail {

inline Json verdict_json(const std::string& name, const Verdict& v) {
    Json out;
    out["event"] = name;
    out["members"] = v.event.member_labels();
    out["measure"] = v.measure;
    out["epsilon"] = v.epsilon;
    out["outcome"] = to_string(v.outcome);
    return out;
}

}  // namespace detail

/// Three histories A, B, C with amplitudes (1, -1, 1): both pairs {A,B} and
/// {B,C} are exactly null, yet {A,C} is not. The single primitive
/// preclusive co-event has dual {A,C}.
inline Report demo_three_slit(const DemoSettings& settings = {}) {
    Report report("demo three-slit");
    const SpacePtr space = make_space({"A", "B", "C"});
    const auto d = DecoherenceFunctional::from_amplitudes(
        space, {Complex{1, 0}, Complex{-1, 0}, Complex{1, 0}}, settings.tolerance);

    report.model()["name"] = "three-slit";
    report.model()["source"] = "builtin amplitudes (1, -1, 1)";
    report.model()["n"] = space->size();
    report.model()["histories"] = space->labels();

    report.results()["validation"] =
        report_json(validate_decoherence(d, settings.tolerance, settings.cap));
    report.results()["sum_rule"] = report_json(check_sum_rule(d, settings.tolerance));

    Json measures = Json::array();
    for (const auto& event : enumerate_events(space, settings.cap)) {
        Json row;
        row["members"] = event.member_labels();
        row["mu"] = mu_event(d, event, settings.tolerance);
        measures.push_back(std::move(row));
    }
    report.results()["measures"] = std::move(measures);

    const NullFamily family = maximal_null_sets(d, 0.0, settings.tolerance, settings.cap);
    report.results()["maximal_null_sets"] = events_to_json(family.maximal_null_sets);

    const auto coevents = enumerate_ppc(d, settings.tolerance, settings.cap);
    Json duals = Json::array();
    for (const auto& c : coevents) duals.push_back(event_to_json(c.dual()));
    report.results()["duals"] = std::move(duals);

    const auto domain = classical_domain(coevents);
    report.results()["classical_domain"] = events_to_json(domain.partition.blocks());

    Json verdicts = Json::array();
    verdicts.push_back(detail::verdict_json(
        "left-pair", predict(d, Event::of_labels(space, {"A", "B"}), settings.epsilon,
                             settings.tolerance)));
    verdicts.push_back(detail::verdict_json(
        "outer-pair", predict(d, Event::of_labels(space, {"A", "C"}), settings.epsilon,
                              settings.tolerance)));
    report.results()["verdicts"] = std::move(verdicts);
    return report;
}

/// N tosses of a fair coin. Every individual sequence has measure 2^-N, so
/// for epsilon above that the sequence singletons jointly cover the whole
/// space while each is below threshold: taking strong Cournot seriously
/// precludes everything. Weak Cournot only rules on pre-selected events.
/// When the sequence space is within the cap, approximate co-events are
/// enumerated and checked for Boolean anomalies on each toss question.
inline Report demo_coin(int tosses, const DemoSettings& settings = {}) {
    Report report("demo coin");
    const CoinModel model = coin_model(tosses, 0.5);

    report.model()["name"] = "coin";
    report.model()["source"] = "builtin fair coin";
    report.model()["n"] = model.space->size();
    report.model()["tosses"] = tosses;
    report.results()["epsilon"] = settings.epsilon;

    const Event all_heads = Event::singleton(model.space, 0);
    report.results()["all_heads"] =
        detail::verdict_json("all-heads", predict(model.functional, all_heads, settings.epsilon,
                                                  settings.tolerance));

    const int sixty_pct = tosses * 6 / 10;
    const double tail = binomial_tail_measure(tosses, 0.5, 0, sixty_pct);
    Json tail_json;
    tail_json["event"] = "heads-count <= " + std::to_string(sixty_pct);
    tail_json["measure"] = tail;
    tail_json["epsilon"] = settings.epsilon;
    tail_json["outcome"] = to_string(classify(tail, settings.epsilon));
    report.results()["heads_at_most_60pct"] = std::move(tail_json);

    std::vector<Event> singletons;
    singletons.reserve(model.space->size());
    for (std::size_t i = 0; i < model.space->size(); ++i) {
        singletons.push_back(Event::singleton(model.space, i));
    }
    const NullCover cover = strong_cournot_cover(model.functional, settings.epsilon, singletons,
                                                 settings.tolerance);
    Json cover_json;
    cover_json["sequence_measure"] = mu_event(model.functional, all_heads, settings.tolerance);
    cover_json["candidate_pieces"] = singletons.size();
    cover_json["pieces_below_threshold"] = cover.pieces.size();
    cover_json["covered"] = cover.covered;
    report.results()["strong_cournot"] = std::move(cover_json);
    if (cover.covered) {
        report.warn("every sequence singleton is below epsilon and together they cover the "
                    "whole space; strong Cournot would preclude everything that can happen");
    }

    if (model.space->size() <= settings.cap) {
        const auto coevents =
            enumerate_appc(model.functional, settings.epsilon, settings.tolerance, settings.cap);
        Json duals = Json::array();
        for (const auto& c : coevents) duals.push_back(event_to_json(c.dual()));
        Json appc;
        appc["epsilon"] = settings.epsilon;
        appc["duals"] = std::move(duals);

        Json anomalies = Json::array();
        for (int toss = 0; toss < tosses; ++toss) {
            const Partition question = toss_partition(model, toss);
            const auto flagged = find_boolean_anomalies(coevents, question);
            Json entry;
            entry["question"] = "toss " + std::to_string(toss + 1);
            entry["cells"] = events_to_json(question.blocks());
            Json flagged_json = Json::array();
            for (const auto& c : flagged) flagged_json.push_back(event_to_json(c.dual()));
            entry["flagged"] = std::move(flagged_json);
            anomalies.push_back(std::move(entry));
            if (!flagged.empty()) {
                report.warn("approximate co-events answer NO to every outcome of toss " +
                            std::to_string(toss + 1) +
                            "; their duals mix outcomes of an observable question");
            }
        }
        appc["anomalies"] = std::move(anomalies);
        report.results()["appc"] = std::move(appc);
    } else {
        report.warn("sequence space of size " + std::to_string(model.space->size()) +
                    " exceeds cap " + std::to_string(settings.cap) +
                    "; co-event enumeration skipped");
    }
    return report;
}

/// Ten particles through the discrete double slit. The uniform screen
/// distribution has many arrangements but total measure below epsilon, so
/// it is precluded; the bright-heavy pattern stays above epsilon.
inline Report demo_double_slit(const DemoSettings& settings = {}) {
    Report report("demo double-slit");
    const auto d = double_slit_model();
    const SpacePtr& space = d.space();

    report.model()["name"] = "double-slit";
    report.model()["source"] = "builtin 2-slit / 5-slot screen";
    report.model()["n"] = space->size();
    report.model()["histories"] = space->labels();

    report.results()["validation"] =
        report_json(validate_decoherence(d, settings.tolerance, settings.cap));
    report.results()["sum_rule"] = report_json(check_sum_rule(d, settings.tolerance));

    const Partition cells = double_slit_slot_cells(space);
    const auto slot_names = double_slit_slot_names();
    Json slot_json = Json::array();
    for (std::size_t i = 0; i < cells.blocks().size(); ++i) {
        Json row;
        row["slot"] = slot_names[i];
        row["members"] = cells.blocks()[i].member_labels();
        row["mu"] = mu_event(d, cells.blocks()[i], settings.tolerance);
        slot_json.push_back(std::move(row));
    }
    report.results()["slot_measures"] = std::move(slot_json);

    const int repetitions = 10;
    const RepeatedTrial trial(d, repetitions);
    report.results()["repetitions"] = repetitions;
    report.results()["epsilon"] = settings.epsilon;

    // All slots equally occupied: 2 particles per slot.
    const OccupationEvent uniform(cells, {2, 2, 2, 2, 2});
    const OccupationMeasure uniform_measure =
        occupation_event_measure(trial, uniform, settings.tolerance);
    Json uniform_json;
    uniform_json["counts_by_slot"] = Json::array({2, 2, 2, 2, 2});
    uniform_json["arrangements"] = uniform_measure.arrangements;
    uniform_json["per_arrangement"] = uniform_measure.per_arrangement;
    uniform_json["total"] = uniform_measure.total;
    uniform_json["outcome"] = to_string(classify(uniform_measure.total, settings.epsilon));
    report.results()["uniform_distribution"] = std::move(uniform_json);

    // The interference pattern: 3 particles at each bright slot (-2, 0, +2)
    // and 1 at either dark slot. Slot order in counts is (-2,-1,0,+1,+2).
    const OccupationEvent pattern_dark_plus(cells, {3, 0, 3, 1, 3});
    const OccupationEvent pattern_dark_minus(cells, {3, 1, 3, 0, 3});
    const OccupationMeasure plus = occupation_event_measure(trial, pattern_dark_plus,
                                                            settings.tolerance);
    const OccupationMeasure minus = occupation_event_measure(trial, pattern_dark_minus,
                                                             settings.tolerance);
    const double pattern_total = plus.total + minus.total;
    Json pattern_json;
    pattern_json["counts_by_slot"] =
        Json::array({Json::array({3, 0, 3, 1, 3}), Json::array({3, 1, 3, 0, 3})});
    pattern_json["arrangements_per_variant"] = plus.arrangements;
    pattern_json["arrangements"] = plus.arrangements + minus.arrangements;
    pattern_json["per_arrangement"] = plus.per_arrangement;
    pattern_json["total"] = pattern_total;
    pattern_json["outcome"] = to_string(classify(pattern_total, settings.epsilon));
    report.results()["pattern_distribution"] = std::move(pattern_json);

    report.warn("the arrangement count for the bright-heavy pattern is sometimes quoted as "
                "4800; the exact multinomial count is 16800 per dark-slot choice (33600 in "
                "total). The verdicts are unaffected: the pattern stays above epsilon either "
                "way");
    return report;
}

}  // namespace anhomlog
