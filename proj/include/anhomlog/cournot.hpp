#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "anhomlog/coevent.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/measure.hpp"

namespace anhomlog {

enum class Outcome { Precluded, NotRuledOut };

inline const char* to_string(Outcome o) {
    return o == Outcome::Precluded ? "Precluded" : "NotRuledOut";
}

/// The weak-Cournot prediction rule: an event singled out in advance is
/// precluded when mu(A) <= epsilon. Note the non-strict bound, in contrast
/// to the strict bound used for approximate co-event preclusion; both rules
/// are in use and this module keeps them apart.
inline Outcome classify(double measure, double epsilon) {
    detail::require(epsilon > 0.0, "prediction needs epsilon > 0");
    return measure <= epsilon ? Outcome::Precluded : Outcome::NotRuledOut;
}

/// A prediction record for one pre-selected event.
struct Verdict {
    Event event;
    double measure = 0.0;
    double epsilon = 0.0;
    Outcome outcome = Outcome::NotRuledOut;
};

using MeasureFn = std::function<double(const Event&)>;

/// Pre-selection is the caller's contract: this evaluation is stateless and
/// the discipline of fixing A before looking at outcomes lives with the
/// experimenter.
inline Verdict predict(const MeasureFn& mu, const Event& a, double epsilon) {
    const double measure = mu(a);
    return Verdict{a, measure, epsilon, classify(measure, epsilon)};
}

inline Verdict predict(const DecoherenceFunctional& d, const Event& a, double epsilon,
                       double tol = kDefaultTolerance) {
    return predict([&d, tol](const Event& e) { return mu_event(d, e, tol); }, a, epsilon);
}

/// Candidate pieces filtered to those below the null threshold, plus
/// whether they jointly cover the whole space. A covered=true result is the
/// strong-Cournot contradiction: something happens, yet every piece of what
/// could happen is precluded.
struct NullCover {
    double epsilon = 0.0;
    std::vector<Event> pieces;
    bool covered = false;
};

inline NullCover strong_cournot_cover(const MeasureFn& mu, double epsilon,
                                      const std::vector<Event>& candidate_pieces,
                                      double tol = kDefaultTolerance) {
    detail::require(epsilon >= 0.0, "epsilon must be nonnegative");
    NullCover cover;
    cover.epsilon = epsilon;
    for (const auto& piece : candidate_pieces) {
        detail::require_same_space(candidate_pieces.front().space(), piece.space());
        if (is_null_measure(mu(piece), epsilon, tol)) cover.pieces.push_back(piece);
    }
    if (!cover.pieces.empty()) {
        Bits covered_bits(cover.pieces.front().space()->size());
        for (const auto& piece : cover.pieces) covered_bits |= piece.bits();
        cover.covered = covered_bits.all();
    }
    return cover;
}

inline NullCover strong_cournot_cover(const DecoherenceFunctional& d, double epsilon,
                                      const std::vector<Event>& candidate_pieces,
                                      double tol = kDefaultTolerance) {
    return strong_cournot_cover([&d, tol](const Event& e) { return mu_event(d, e, tol); },
                                epsilon, candidate_pieces, tol);
}

}  // namespace anhomlog
