#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anhomlog/algebra.hpp"
#include "anhomlog/core.hpp"

namespace anhomlog {

using Complex = std::complex<double>;

/// Pair-function on histories encoding interference. Hermiticity,
/// normalization and positivity are not enforced on construction;
/// validate_decoherence reports on them.
class DecoherenceFunctional {
public:
    DecoherenceFunctional(SpacePtr space, std::vector<Complex> row_major)
        : space_(std::move(space)), matrix_(std::move(row_major)) {
        detail::require(space_ != nullptr, "decoherence functional needs a space");
        detail::require(matrix_.size() == space_->size() * space_->size(),
                        "matrix must be square and match the space size");
    }

    /// Rank-1 functional D(i,j) = a_i * conj(a_j); the induced measure is
    /// mu(A) = |sum of amplitudes over A|^2. Requires |sum a|^2 = 1.
    static DecoherenceFunctional from_amplitudes(SpacePtr space, const std::vector<Complex>& a,
                                                 double tol = kDefaultTolerance) {
        detail::require(a.size() == space->size(), "amplitude count must match the space size");
        Complex total{0.0, 0.0};
        for (const Complex& v : a) total += v;
        detail::require(std::abs(std::norm(total) - 1.0) <= tol,
                        "amplitude sum must satisfy |sum a|^2 = 1");
        const std::size_t n = space->size();
        std::vector<Complex> m(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m[i * n + j] = a[i] * std::conj(a[j]);
            }
        }
        return DecoherenceFunctional(std::move(space), std::move(m));
    }

    /// Classical model: D = diag(weights), no interference.
    static DecoherenceFunctional diagonal(SpacePtr space, const std::vector<double>& weights) {
        detail::require(weights.size() == space->size(), "weight count must match the space size");
        const std::size_t n = space->size();
        std::vector<Complex> m(n * n, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) m[i * n + i] = Complex{weights[i], 0.0};
        return DecoherenceFunctional(std::move(space), std::move(m));
    }

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return space_->size(); }

    Complex operator()(std::size_t i, std::size_t j) const {
        return matrix_[i * space_->size() + j];
    }

    const std::vector<Complex>& matrix() const { return matrix_; }

private:
    SpacePtr space_;
    std::vector<Complex> matrix_;  // row-major, n x n
};

/// D(A,B) = sum over h in A, h' in B of D(h,h'); the bilinear extension.
inline Complex decoherence_pair(const DecoherenceFunctional& d, const Event& a, const Event& b) {
    detail::require_same_space(d.space(), a.space());
    detail::require_same_space(d.space(), b.space());
    Complex total{0.0, 0.0};
    for (std::size_t i = a.bits().find_first(); i != Bits::npos; i = a.bits().find_next(i)) {
        for (std::size_t j = b.bits().find_first(); j != Bits::npos; j = b.bits().find_next(j)) {
            total += d(i, j);
        }
    }
    return total;
}

/// The quantum measure mu(A) = D(A,A). The double sum over a Hermitian
/// matrix is real; an imaginary residue above tol means the matrix is not
/// Hermitian and the value would be meaningless.
inline double mu_event(const DecoherenceFunctional& d, const Event& a,
                       double tol = kDefaultTolerance) {
    detail::require_same_space(d.space(), a.space());
    const Complex total = decoherence_pair(d, a, a);
    if (std::abs(total.imag()) > tol) {
        throw Error("mu(A) has imaginary residue " + std::to_string(total.imag()) +
                    "; functional is not Hermitian");
    }
    return total.real();
}

namespace detail {

struct MuTable {
    std::vector<double> mu;  // indexed by subset mask, bit i = history i
    double max_imag = 0.0;
};

/// mu for all 2^n subsets in O(n 2^n), walking the subset lattice in
/// Gray-code order with running row/column sums.
inline MuTable mu_table(const DecoherenceFunctional& d, std::size_t cap = kDefaultCap) {
    const std::size_t n = d.size();
    require_cap(n, cap, "mu_table");
    MuTable out;
    out.mu.assign(std::size_t{1} << n, 0.0);

    std::vector<Complex> row(n, Complex{0.0, 0.0});  // row[i] = sum_{j in A} D(i,j)
    std::vector<Complex> col(n, Complex{0.0, 0.0});  // col[i] = sum_{j in A} D(j,i)
    Complex total{0.0, 0.0};
    std::uint64_t mask = 0;

    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t k = 0;; ++k) {
        out.mu[mask] = total.real();
        out.max_imag = std::max(out.max_imag, std::abs(total.imag()));
        if (k + 1 == end) break;
        const std::size_t t = std::countr_zero(k + 1);
        if (mask >> t & 1) {
            for (std::size_t i = 0; i < n; ++i) {
                row[i] -= d(i, t);
                col[i] -= d(t, i);
            }
            total -= row[t] + col[t] + d(t, t);
            mask &= ~(std::uint64_t{1} << t);
        } else {
            total += row[t] + col[t] + d(t, t);
            for (std::size_t i = 0; i < n; ++i) {
                row[i] += d(i, t);
                col[i] += d(t, i);
            }
            mask |= std::uint64_t{1} << t;
        }
    }
    return out;
}

inline std::string event_note(const SpacePtr& space, std::uint64_t mask) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < space->size(); ++i) {
        if (mask >> i & 1) {
            if (!first) out += ",";
            out += space->label(i);
            first = false;
        }
    }
    return out + "}";
}

}  // namespace detail

struct CheckResult {
    std::string name;
    bool passed = false;
    double violation = 0.0;
    std::string note;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.passed; });
    }

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }
};

/// Checks hermiticity, normalization and weak positivity (mu(A) >= 0 for
/// every event). Positivity is scanned over all 2^n events when n <= cap,
/// otherwise over singletons and the full space only, flagged as partial.
inline ValidationReport validate_decoherence(const DecoherenceFunctional& d,
                                             double tol = kDefaultTolerance,
                                             std::size_t cap = kDefaultCap) {
    const std::size_t n = d.size();
    ValidationReport report;

    double herm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            herm = std::max(herm, std::abs(d(i, j) - std::conj(d(j, i))));
        }
    }
    report.checks.push_back({"hermiticity", herm <= tol, herm, ""});

    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) total += d(i, j);
    }
    const double norm_violation = std::abs(total - Complex{1.0, 0.0});
    report.checks.push_back({"normalization", norm_violation <= tol, norm_violation,
                             "sum of all entries = " + std::to_string(total.real())});

    if (n <= cap) {
        const auto table = detail::mu_table(d, cap);
        double worst = 0.0;
        std::uint64_t worst_mask = 0;
        for (std::uint64_t mask = 0; mask < table.mu.size(); ++mask) {
            const double deficit = -table.mu[mask];
            if (deficit > worst) {
                worst = deficit;
                worst_mask = mask;
            }
        }
        std::string note = worst > tol
                               ? "mu" + detail::event_note(d.space(), worst_mask) + " = " +
                                     std::to_string(-worst)
                               : "all 2^n events scanned";
        report.checks.push_back({"weak-positivity", worst <= tol, worst, std::move(note)});
    } else {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, -d(i, i).real());
        }
        worst = std::max(worst, -total.real());
        report.checks.push_back(
            {"weak-positivity", worst <= tol, worst, "partial: singletons and full space only"});
    }
    return report;
}

/// Every quantum measure table over all 2^n events, indexed by subset mask.
class MeasureTable {
public:
    MeasureTable(SpacePtr space, std::vector<double> values, double tol = kDefaultTolerance)
        : space_(std::move(space)), values_(std::move(values)) {
        const std::size_t n = space_->size();
        detail::require(n <= kDefaultCap, "measure table limited to capped spaces");
        detail::require(values_.size() == (std::size_t{1} << n),
                        "measure table must cover all 2^n events");
        detail::require(std::abs(values_.front()) <= tol, "mu(empty) must be 0");
        detail::require(std::abs(values_.back() - 1.0) <= tol, "mu(full space) must be 1");
        for (double v : values_) {
            detail::require(v >= -tol, "measure values must be nonnegative");
        }
    }

    static MeasureTable from_decoherence(const DecoherenceFunctional& d,
                                         double tol = kDefaultTolerance,
                                         std::size_t cap = kDefaultCap) {
        auto table = detail::mu_table(d, cap);
        if (table.max_imag > tol) {
            throw Error("measure table has imaginary residue; functional is not Hermitian");
        }
        return MeasureTable(d.space(), std::move(table.mu), tol);
    }

    const SpacePtr& space() const { return space_; }
    std::size_t size() const { return space_->size(); }

    double at_mask(std::uint64_t mask) const { return values_.at(mask); }

    double operator()(const Event& a) const {
        detail::require_same_space(space_, a.space());
        return values_[a.to_mask()];
    }

    const std::vector<double>& values() const { return values_; }

    /// Returns a copy with one event's value replaced. For probing how
    /// downstream checks react to broken tables.
    MeasureTable with_value(const Event& a, double value) const {
        detail::require_same_space(space_, a.space());
        std::vector<double> v = values_;
        v[a.to_mask()] = value;
        return MeasureTable(space_, std::move(v), 0);
    }

private:
    MeasureTable(SpacePtr space, std::vector<double> values, int /*unchecked*/)
        : space_(std::move(space)), values_(std::move(values)) {}

    SpacePtr space_;
    std::vector<double> values_;
};

namespace detail {

struct SumRuleScan {
    double worst = 0.0;
    std::uint64_t a = 0, b = 0, c = 0;
};

/// Worst violation of
///   mu(A|B|C) = mu(A|B) + mu(A|C) + mu(B|C) - mu(A) - mu(B) - mu(C)
/// over all triples of pairwise-disjoint events.
inline SumRuleScan sum_rule_scan(const std::vector<double>& mu, std::size_t n) {
    SumRuleScan scan;
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t a = 0; a <= full; ++a) {
        const std::uint64_t rest_a = full & ~a;
        for (std::uint64_t b = rest_a;; b = (b - 1) & rest_a) {
            const std::uint64_t rest_ab = rest_a & ~b;
            for (std::uint64_t c = rest_ab;; c = (c - 1) & rest_ab) {
                const double lhs = mu[a | b | c];
                const double rhs = mu[a | b] + mu[a | c] + mu[b | c] - mu[a] - mu[b] - mu[c];
                const double violation = std::abs(lhs - rhs);
                if (violation > scan.worst) {
                    scan.worst = violation;
                    scan.a = a;
                    scan.b = b;
                    scan.c = c;
                }
                if (c == 0) break;
            }
            if (b == 0) break;
        }
    }
    return scan;
}

inline ValidationReport sum_rule_report(const std::vector<double>& mu, const SpacePtr& space,
                                        double tol) {
    const auto scan = sum_rule_scan(mu, space->size());
    ValidationReport report;
    std::string note = scan.worst > tol ? "worst triple " + event_note(space, scan.a) + ", " +
                                              event_note(space, scan.b) + ", " +
                                              event_note(space, scan.c)
                                        : "all disjoint triples scanned";
    report.checks.push_back({"sum-rule", scan.worst <= tol, scan.worst, std::move(note)});
    return report;
}

}  // namespace detail

/// Verifies the three-event sum rule for every triple of pairwise-disjoint
/// events. Quadratic interference satisfies it identically; a violation
/// means no decoherence functional can reproduce the measure.
inline ValidationReport check_sum_rule(const DecoherenceFunctional& d,
                                       double tol = kDefaultTolerance,
                                       std::size_t cap = kDefaultTripleCap) {
    detail::require_cap(d.size(), cap, "check_sum_rule");
    const auto table = detail::mu_table(d, cap);
    return detail::sum_rule_report(table.mu, d.space(), tol);
}

inline ValidationReport check_sum_rule(const MeasureTable& m, double tol = kDefaultTolerance,
                                       std::size_t cap = kDefaultTripleCap) {
    detail::require_cap(m.size(), cap, "check_sum_rule");
    return detail::sum_rule_report(m.values(), m.space(), tol);
}

/// Reconstructs the real symmetric decoherence functional realizing a
/// measure table:
///   D(i,i) = mu({h_i}),  Re D(i,j) = (mu({h_i,h_j}) - mu({h_i}) - mu({h_j})) / 2.
/// The reconstruction is verified against the table on every event; a
/// mismatch means the table violates the sum rule and throws.
inline DecoherenceFunctional measure_to_decoherence(const MeasureTable& m,
                                                    double tol = kDefaultTolerance) {
    const std::size_t n = m.size();
    const SpacePtr& space = m.space();
    std::vector<Complex> matrix(n * n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        const double mu_i = m.at_mask(std::uint64_t{1} << i);
        matrix[i * n + i] = Complex{mu_i, 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mu_j = m.at_mask(std::uint64_t{1} << j);
            const double mu_ij = m.at_mask((std::uint64_t{1} << i) | (std::uint64_t{1} << j));
            const double re = (mu_ij - mu_i - mu_j) / 2.0;
            matrix[i * n + j] = Complex{re, 0.0};
            matrix[j * n + i] = Complex{re, 0.0};
        }
    }
    DecoherenceFunctional d(space, std::move(matrix));

    const auto round_trip = detail::mu_table(d, n);
    double worst = 0.0;
    std::uint64_t worst_mask = 0;
    for (std::uint64_t mask = 0; mask < round_trip.mu.size(); ++mask) {
        const double err = std::abs(round_trip.mu[mask] - m.at_mask(mask));
        if (err > worst) {
            worst = err;
            worst_mask = mask;
        }
    }
    if (worst > tol) {
        throw SumRuleError("no bilinear realization reproduces the table: mismatch " +
                           std::to_string(worst) + " on " +
                           detail::event_note(space, worst_mask));
    }
    return d;
}

}  // namespace anhomlog
