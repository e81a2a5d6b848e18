// Command-line front end: validates experiment files, enumerates co-events,
// computes classical domains, issues weak-Cournot verdicts and runs the
// bundled demos. Reports render as stable text or JSON.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anhomlog/anhomlog.hpp"

namespace {

using namespace anhomlog;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapExceeded = 3;
constexpr int kExitTotalPreclusion = 4;

struct GlobalOptions {
    std::string output = "text";
    double tolerance = kDefaultTolerance;
    std::size_t cap = kDefaultCap;
};

void emit(const Report& report, const GlobalOptions& global) {
    std::cout << (global.output == "json" ? render_json(report) : render_text(report));
}

/// File options fill in whatever the command line left at defaults.
DemoSettings settings_for(const Model& model, const GlobalOptions& global, double epsilon,
                          bool epsilon_set, bool tolerance_set, bool cap_set) {
    DemoSettings s;
    s.epsilon = epsilon_set ? epsilon : model.options.epsilon_or(epsilon);
    s.tolerance = tolerance_set ? global.tolerance : model.options.tolerance_or(global.tolerance);
    s.cap = cap_set ? global.cap : model.options.cap_or(global.cap);
    return s;
}

/// Raised when a parsed file cannot form a valid model (e.g. unnormalized
/// amplitudes); maps to the validation-failure exit code.
struct ModelBuildError : Error {
    using Error::Error;
};

Model load_model(const std::string& path, double tolerance) {
    const ExperimentFile file = parse_experiment(path);
    try {
        return build_model(file, tolerance);
    } catch (const std::invalid_argument& e) {
        throw ModelBuildError(path + ": model fails validation: " + e.what());
    }
}

int require_valid(const Model& model, double tolerance, std::size_t cap, Report& report,
                  const GlobalOptions& global) {
    const auto validation = validate_decoherence(model.functional, tolerance, cap);
    if (!validation.passed()) {
        report.results()["validation"] = report_json(validation);
        report.warn("model fails decoherence-functional validation");
        emit(report, global);
        return kExitValidationFailed;
    }
    return kExitOk;
}

int run_validate(const std::string& path, const GlobalOptions& global, bool tolerance_set,
                 bool cap_set) {
    const Model model = load_model(path, global.tolerance);
    const DemoSettings s =
        settings_for(model, global, 0.0, true, tolerance_set, cap_set);
    Report report("validate");
    report.model() = model_summary_json(model);
    auto validation = validate_decoherence(model.functional, s.tolerance, s.cap);
    report.results()["validation"] = report_json(validation);
    if (model.space->size() <= kDefaultTripleCap) {
        report.results()["sum_rule"] = report_json(check_sum_rule(model.functional, s.tolerance));
    } else {
        report.warn("sum-rule triple scan skipped: space larger than " +
                    std::to_string(kDefaultTripleCap) + " histories");
    }
    emit(report, global);
    return validation.passed() ? kExitOk : kExitValidationFailed;
}

int run_coevents(const std::string& path, double epsilon, bool epsilon_set,
                 const GlobalOptions& global, bool tolerance_set, bool cap_set,
                 bool domain_only) {
    const Model model = load_model(path, global.tolerance);
    const DemoSettings s = settings_for(model, global, epsilon, epsilon_set, tolerance_set,
                                        cap_set);
    // Exact preclusion is the default; a positive --epsilon switches to
    // approximate preclusion.
    const bool exact = !epsilon_set || epsilon == 0.0;
    const double eps = exact ? 0.0 : epsilon;

    Report report(domain_only ? "classical-domain" : "coevents");
    report.model() = model_summary_json(model);
    if (int rc = require_valid(model, s.tolerance, s.cap, report, global); rc != kExitOk) {
        return rc;
    }

    const auto coevents = exact
                              ? enumerate_ppc(model.functional, s.tolerance, s.cap)
                              : enumerate_appc(model.functional, eps, s.tolerance, s.cap);
    report.results()["preclusion"] = exact ? "exact" : "approximate";
    report.results()["epsilon"] = eps;
    if (!domain_only) {
        const auto family = maximal_null_sets(model.functional, eps, s.tolerance, s.cap);
        report.results()["maximal_null_sets"] = events_to_json(family.maximal_null_sets);
    }
    Json duals = Json::array();
    for (const auto& c : coevents) duals.push_back(event_to_json(c.dual()));
    report.results()["duals"] = std::move(duals);
    if (domain_only) {
        const auto domain = classical_domain(coevents);
        report.results()["blocks"] = events_to_json(domain.partition.blocks());
    }
    emit(report, global);
    return kExitOk;
}

int run_predict(const std::string& path, const std::string& event_name, double epsilon,
                bool epsilon_set, const GlobalOptions& global, bool tolerance_set,
                bool cap_set) {
    const Model model = load_model(path, global.tolerance);
    const DemoSettings s = settings_for(model, global, epsilon, epsilon_set, tolerance_set,
                                        cap_set);
    const Event* event = model.find_event(event_name);
    if (event == nullptr) {
        throw ParseError(path + ": event '" + event_name + "' is not defined in the file");
    }
    Report report("predict");
    report.model() = model_summary_json(model);
    if (int rc = require_valid(model, s.tolerance, s.cap, report, global); rc != kExitOk) {
        return rc;
    }
    const Verdict verdict = predict(model.functional, *event, s.epsilon, s.tolerance);
    Json v;
    v["event"] = event_name;
    v["members"] = verdict.event.member_labels();
    v["measure"] = verdict.measure;
    v["epsilon"] = verdict.epsilon;
    v["outcome"] = to_string(verdict.outcome);
    report.results()["verdict"] = std::move(v);
    emit(report, global);
    return kExitOk;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const CapExceededError*>(&e) != nullptr) return kExitCapExceeded;
    if (dynamic_cast<const TotalPreclusionError*>(&e) != nullptr) return kExitTotalPreclusion;
    if (dynamic_cast<const ModelBuildError*>(&e) != nullptr) return kExitValidationFailed;
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anhomomorphic-logic toolkit: quantum measures, preclusive co-events and "
                 "weak-Cournot predictions on finite history spaces"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--output", global.output, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    auto* tol_opt = app.add_option("--tolerance", global.tolerance,
                                   "Absolute tolerance for measure equality checks");
    auto* cap_opt =
        app.add_option("--cap", global.cap, "Largest space size for exhaustive 2^n scans");

    std::string path;
    std::string event_name;
    double epsilon = 1e-3;

    auto* validate_cmd = app.add_subcommand("validate", "Check decoherence-functional axioms");
    validate_cmd->fallthrough();
    validate_cmd->add_option("file", path, "Experiment file (JSON)")->required();

    auto* coevents_cmd =
        app.add_subcommand("coevents", "Enumerate primitive preclusive co-events");
    coevents_cmd->fallthrough();
    coevents_cmd->add_option("file", path, "Experiment file (JSON)")->required();
    auto* coevents_eps =
        coevents_cmd->add_option("--epsilon", epsilon, "Approximate-preclusion threshold");

    auto* domain_cmd =
        app.add_subcommand("classical-domain", "Compute the finest classical domain");
    domain_cmd->fallthrough();
    domain_cmd->add_option("file", path, "Experiment file (JSON)")->required();
    auto* domain_eps =
        domain_cmd->add_option("--epsilon", epsilon, "Approximate-preclusion threshold");

    auto* predict_cmd =
        app.add_subcommand("predict", "Weak-Cournot verdict for a pre-selected event");
    predict_cmd->fallthrough();
    predict_cmd->add_option("file", path, "Experiment file (JSON)")->required();
    predict_cmd->add_option("--event", event_name, "Event name from the file")->required();
    auto* predict_eps = predict_cmd->add_option("--epsilon", epsilon, "Preclusion threshold");

    auto* demo_cmd = app.add_subcommand("demo", "Run a bundled worked example");
    demo_cmd->fallthrough();
    std::string which_demo;
    int tosses = 10;
    demo_cmd->add_option("name", which_demo, "Demo name")
        ->required()
        ->check(CLI::IsMember({"three-slit", "double-slit", "coin"}));
    demo_cmd->add_option("--n", tosses, "Coin demo: number of tosses");
    auto* demo_eps = demo_cmd->add_option("--epsilon", epsilon, "Preclusion threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints the message or the help text
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) {
            return run_validate(path, global, tol_opt->count() > 0, cap_opt->count() > 0);
        }
        if (*coevents_cmd) {
            return run_coevents(path, epsilon, coevents_eps->count() > 0, global,
                                tol_opt->count() > 0, cap_opt->count() > 0, false);
        }
        if (*domain_cmd) {
            return run_coevents(path, epsilon, domain_eps->count() > 0, global,
                                tol_opt->count() > 0, cap_opt->count() > 0, true);
        }
        if (*predict_cmd) {
            return run_predict(path, event_name, epsilon, predict_eps->count() > 0, global,
                               tol_opt->count() > 0, cap_opt->count() > 0);
        }
        if (*demo_cmd) {
            DemoSettings settings;
            settings.epsilon = demo_eps->count() > 0 ? epsilon : 1e-3;
            settings.tolerance = global.tolerance;
            settings.cap = global.cap;
            Report report = which_demo == "three-slit"   ? demo_three_slit(settings)
                            : which_demo == "double-slit" ? demo_double_slit(settings)
                                                          : demo_coin(tosses, settings);
            emit(report, global);
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return kExitUsage;
}
