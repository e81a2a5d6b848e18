#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anhomlog/algebra.hpp"
#include "anhomlog/core.hpp"
#include "anhomlog/measure.hpp"

namespace anhomlog {

using Json = nlohmann::ordered_json;

struct ExperimentOptions {
    std::optional<double> epsilon;
    std::optional<double> tolerance;
    std::optional<std::size_t> cap;

    double epsilon_or(double fallback) const { return epsilon.value_or(fallback); }
    double tolerance_or(double fallback) const { return tolerance.value_or(fallback); }
    std::size_t cap_or(std::size_t fallback) const { return cap.value_or(fallback); }
};

/// One experiment: a labeled history space, a decoherence source (either an
/// amplitude vector or an explicit matrix, never both), named events, and
/// optional numeric options.
struct ExperimentFile {
    std::string name;
    std::vector<std::string> histories;
    std::optional<std::vector<Complex>> amplitudes;
    std::optional<std::vector<std::vector<Complex>>> decoherence;
    std::vector<std::pair<std::string, std::vector<std::string>>> events;
    ExperimentOptions options;
};

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(context + ": missing field '" + key + "'");
    }
    return *it;
}

inline double number_at(const Json& j, const std::string& context) {
    if (!j.is_number()) {
        throw ParseError(context + ": expected a number");
    }
    return j.get<double>();
}

inline std::vector<double> number_array(const Json& j, std::size_t expected,
                                        const std::string& context) {
    if (!j.is_array() || j.size() != expected) {
        throw ParseError(context + ": expected an array of " + std::to_string(expected) +
                         " numbers");
    }
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        out.push_back(number_at(j[i], context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline std::vector<std::vector<double>> number_matrix(const Json& j, std::size_t n,
                                                      const std::string& context) {
    if (!j.is_array() || j.size() != n) {
        throw ParseError(context + ": expected a " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrix");
    }
    std::vector<std::vector<double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(number_array(j[i], n, context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

}  // namespace detail

inline ExperimentFile parse_experiment_json(const Json& j, const std::string& context) {
    if (!j.is_object()) {
        throw ParseError(context + ": experiment must be a JSON object");
    }
    ExperimentFile out;

    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ParseError(context + ": name: expected a string");
        out.name = it->get<std::string>();
    }

    const Json& histories = detail::field(j, "histories", context);
    if (!histories.is_array() || histories.empty()) {
        throw ParseError(context + ": histories: expected a nonempty array of labels");
    }
    for (std::size_t i = 0; i < histories.size(); ++i) {
        if (!histories[i].is_string() || histories[i].get<std::string>().empty()) {
            throw ParseError(context + ": histories[" + std::to_string(i) +
                             "]: expected a nonempty string");
        }
        out.histories.push_back(histories[i].get<std::string>());
    }
    for (std::size_t i = 0; i < out.histories.size(); ++i) {
        for (std::size_t k = i + 1; k < out.histories.size(); ++k) {
            if (out.histories[i] == out.histories[k]) {
                throw ParseError(context + ": histories: duplicate label '" + out.histories[i] +
                                 "'");
            }
        }
    }
    const std::size_t n = out.histories.size();

    const bool has_amplitudes = j.contains("amplitudes");
    const bool has_decoherence = j.contains("decoherence");
    if (has_amplitudes == has_decoherence) {
        throw ParseError(context + ": exactly one of 'amplitudes' or 'decoherence' must be given");
    }

    if (has_amplitudes) {
        const Json& src = j["amplitudes"];
        const auto re = detail::number_array(detail::field(src, "re", context + ": amplitudes"),
                                             n, context + ": amplitudes.re");
        std::vector<double> im(n, 0.0);
        if (src.contains("im")) {
            im = detail::number_array(src["im"], n, context + ": amplitudes.im");
        }
        std::vector<Complex> a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = Complex{re[i], im[i]};
        out.amplitudes = std::move(a);
    } else {
        const Json& src = j["decoherence"];
        const auto re = detail::number_matrix(detail::field(src, "re", context + ": decoherence"),
                                              n, context + ": decoherence.re");
        std::vector<std::vector<double>> im(n, std::vector<double>(n, 0.0));
        if (src.contains("im")) {
            im = detail::number_matrix(src["im"], n, context + ": decoherence.im");
        }
        std::vector<std::vector<Complex>> rows(n, std::vector<Complex>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) rows[i][k] = Complex{re[i][k], im[i][k]};
        }
        out.decoherence = std::move(rows);
    }

    if (auto it = j.find("events"); it != j.end()) {
        if (!it->is_object()) throw ParseError(context + ": events: expected an object");
        for (const auto& [event_name, labels] : it->items()) {
            if (!labels.is_array()) {
                throw ParseError(context + ": events." + event_name +
                                 ": expected an array of history labels");
            }
            std::vector<std::string> members;
            for (const auto& label : labels) {
                if (!label.is_string()) {
                    throw ParseError(context + ": events." + event_name +
                                     ": expected history labels");
                }
                const auto text = label.get<std::string>();
                if (std::find(out.histories.begin(), out.histories.end(), text) ==
                    out.histories.end()) {
                    throw ParseError(context + ": events." + event_name +
                                     ": unknown history label '" + text + "'");
                }
                members.push_back(text);
            }
            out.events.emplace_back(event_name, std::move(members));
        }
    }

    if (auto it = j.find("options"); it != j.end()) {
        if (!it->is_object()) throw ParseError(context + ": options: expected an object");
        if (it->contains("epsilon")) {
            const double e = detail::number_at((*it)["epsilon"], context + ": options.epsilon");
            if (e < 0.0) throw ParseError(context + ": options.epsilon: must be nonnegative");
            out.options.epsilon = e;
        }
        if (it->contains("tolerance")) {
            const double t = detail::number_at((*it)["tolerance"], context + ": options.tolerance");
            if (t <= 0.0) throw ParseError(context + ": options.tolerance: must be positive");
            out.options.tolerance = t;
        }
        if (it->contains("cap")) {
            const Json& c = (*it)["cap"];
            if (!c.is_number_unsigned() || c.get<std::uint64_t>() == 0) {
                throw ParseError(context + ": options.cap: expected a positive integer");
            }
            out.options.cap = c.get<std::size_t>();
        }
    }
    return out;
}

inline ExperimentFile parse_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    ExperimentFile out = parse_experiment_json(j, path.filename().string());
    if (out.name.empty()) out.name = path.stem().string();
    return out;
}

inline Json to_json(const ExperimentFile& file) {
    Json j;
    j["name"] = file.name;
    j["histories"] = file.histories;
    const auto all_zero = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    };
    if (file.amplitudes) {
        std::vector<double> re, im;
        for (const Complex& a : *file.amplitudes) {
            re.push_back(a.real());
            im.push_back(a.imag());
        }
        j["amplitudes"]["re"] = re;
        if (!all_zero(im)) j["amplitudes"]["im"] = im;
    }
    if (file.decoherence) {
        std::vector<std::vector<double>> re, im;
        bool any_imag = false;
        for (const auto& row : *file.decoherence) {
            std::vector<double> rrow, irow;
            for (const Complex& v : row) {
                rrow.push_back(v.real());
                irow.push_back(v.imag());
                any_imag = any_imag || v.imag() != 0.0;
            }
            re.push_back(std::move(rrow));
            im.push_back(std::move(irow));
        }
        j["decoherence"]["re"] = re;
        if (any_imag) j["decoherence"]["im"] = im;
    }
    if (!file.events.empty()) {
        Json events = Json::object();
        for (const auto& [name, members] : file.events) events[name] = members;
        j["events"] = std::move(events);
    }
    Json options = Json::object();
    if (file.options.epsilon) options["epsilon"] = *file.options.epsilon;
    if (file.options.tolerance) options["tolerance"] = *file.options.tolerance;
    if (file.options.cap) options["cap"] = *file.options.cap;
    if (!options.empty()) j["options"] = std::move(options);
    return j;
}

/// A ready-to-query model: the space, the functional, and the named events.
struct Model {
    std::string name;
    std::string source;  // "amplitudes", "decoherence" or "builtin"
    SpacePtr space;
    DecoherenceFunctional functional;
    std::vector<std::pair<std::string, Event>> events;
    ExperimentOptions options;

    const Event* find_event(const std::string& event_name) const {
        for (const auto& [name, event] : events) {
            if (name == event_name) return &event;
        }
        return nullptr;
    }
};

inline Model build_model(const ExperimentFile& file, double tol = kDefaultTolerance) {
    SpacePtr space = make_space(file.histories);
    std::optional<DecoherenceFunctional> functional;
    if (file.amplitudes) {
        functional = DecoherenceFunctional::from_amplitudes(space, *file.amplitudes,
                                                            file.options.tolerance_or(tol));
    } else {
        const std::size_t n = space->size();
        std::vector<Complex> matrix;
        matrix.reserve(n * n);
        for (const auto& row : *file.decoherence) {
            matrix.insert(matrix.end(), row.begin(), row.end());
        }
        functional = DecoherenceFunctional(space, std::move(matrix));
    }
    std::vector<std::pair<std::string, Event>> events;
    for (const auto& [name, labels] : file.events) {
        events.emplace_back(name, Event::of_labels(space, labels));
    }
    return Model{file.name,
                 file.amplitudes ? "amplitudes" : "decoherence",
                 space,
                 std::move(*functional),
                 std::move(events),
                 file.options};
}

/// Machine-readable result document: {command, model, results, warnings}.
/// Field order is fixed; rendering the same inputs is byte-identical.
struct Report {
    Json root;

    explicit Report(std::string command) {
        root["command"] = std::move(command);
        root["model"] = Json::object();
        root["results"] = Json::object();
        root["warnings"] = Json::array();
    }

    Json& model() { return root["model"]; }
    Json& results() { return root["results"]; }
    void warn(std::string message) { root["warnings"].push_back(std::move(message)); }
};

namespace detail {

inline std::string scalar_text(const Json& j) {
    return j.is_string() ? j.get<std::string>() : j.dump();
}

inline bool all_scalar(const Json& j) {
    return std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
}

/// Short scalar arrays render inline; long ones go one element per line.
inline bool render_inline(const Json& j) {
    if (!all_scalar(j)) return false;
    std::size_t total = 0;
    for (const auto& v : j) total += scalar_text(v).size() + 2;
    return total <= 72;
}

inline void render_text_value(const Json& j, std::ostringstream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out << pad << "(none)\n";
            return;
        }
        for (const auto& [key, value] : j.items()) {
            if (value.is_primitive()) {
                out << pad << key << ": " << scalar_text(value) << "\n";
            } else if (value.is_array() && render_inline(value)) {
                out << pad << key << ": [";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    out << (i ? ", " : "") << scalar_text(value[i]);
                }
                out << "]\n";
            } else {
                out << pad << key << ":";
                if (value.empty()) {
                    out << " (none)\n";
                } else {
                    out << "\n";
                    render_text_value(value, out, indent + 1);
                }
            }
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            if (value.is_primitive()) {
                out << pad << "- " << scalar_text(value) << "\n";
            } else if (value.is_array() && render_inline(value)) {
                out << pad << "- [";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    out << (i ? ", " : "") << scalar_text(value[i]);
                }
                out << "]\n";
            } else {
                out << pad << "-\n";
                render_text_value(value, out, indent + 1);
            }
        }
    } else {
        out << pad << scalar_text(j) << "\n";
    }
}

}  // namespace detail

inline std::string render_json(const Report& report) { return report.root.dump(2) + "\n"; }

inline std::string render_text(const Report& report) {
    std::ostringstream out;
    detail::render_text_value(report.root, out, 0);
    return out.str();
}

/// Shared JSON shapes used across commands.
inline Json event_to_json(const Event& e) { return Json(e.member_labels()); }

inline Json events_to_json(const std::vector<Event>& events) {
    Json out = Json::array();
    for (const auto& e : events) out.push_back(event_to_json(e));
    return out;
}

inline Json report_json(const ValidationReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json entry;
        entry["name"] = c.name;
        entry["passed"] = c.passed;
        entry["violation"] = c.violation;
        if (!c.note.empty()) entry["note"] = c.note;
        checks.push_back(std::move(entry));
    }
    Json out;
    out["passed"] = report.passed();
    out["checks"] = std::move(checks);
    return out;
}

inline Json model_summary_json(const Model& model) {
    Json out;
    out["name"] = model.name;
    out["source"] = model.source;
    out["n"] = model.space->size();
    out["histories"] = model.space->labels();
    return out;
}

}  // namespace anhomlog
