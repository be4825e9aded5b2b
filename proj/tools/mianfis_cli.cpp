#include "mianfis/data_io.hpp"
#include "mianfis/datagen.hpp"
#include "mianfis/error.hpp"
#include "mianfis/eval.hpp"
#include "mianfis/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mianfis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

// Every key a config file may set. Anything else is rejected so typos do not
// silently fall back to defaults.
const std::vector<std::string> kConfigKeys{
    "eta",      "epochs",     "epsilon", "dropout_p",     "gradient_mode",    "update_mode",
    "seed",     "rules",      "init",    "sigma_init",    "b_init",           "alpha_premise",
    "alpha_consequent", "order", "pca_dims", "folds", "threshold"};

std::uint64_t env_seed() {
    const char* raw = std::getenv("MIANFIS_SEED");
    if (!raw || !*raw) return 0;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw DomainError(std::string("MIANFIS_SEED is not an unsigned integer: '") + raw + "'");
    }
}

json default_config() {
    const ExperimentConfig d;
    return {{"eta", d.train.eta},
            {"epochs", d.train.epochs_max},
            {"epsilon", d.train.epsilon},
            {"dropout_p", d.train.dropout_p},
            {"gradient_mode", to_string(d.train.gradient_mode)},
            {"update_mode", to_string(d.train.update_mode)},
            {"seed", env_seed()},
            {"rules", d.rules},
            {"init", to_string(d.init.strategy)},
            {"sigma_init", d.init.sigma_init},
            {"b_init", d.init.b_init},
            {"alpha_premise", d.init.alpha_premise},
            {"alpha_consequent", d.init.alpha_consequent},
            {"order", to_string(d.init.order)},
            {"pca_dims", nullptr},
            {"folds", 10},
            {"threshold", d.threshold}};
}

// Flag values; only the ones actually given end up in the effective config.
struct Overrides {
    std::optional<double> eta, epsilon, dropout_p, sigma_init, b_init, alpha_premise, alpha_consequent, threshold;
    std::optional<int> epochs;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> rules, pca_dims, folds;
    std::optional<std::string> gradient_mode, update_mode, init, order;
    std::string config_path;
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "seed (falls back to the config, then MIANFIS_SEED)");
    cmd->add_option("--eta", o.eta, "learning rate");
    cmd->add_option("--epochs", o.epochs, "maximum epochs");
    cmd->add_option("--epsilon", o.epsilon, "stop when no parameter moves more than this");
    cmd->add_option("--dropout-p,--p", o.dropout_p, "probability of keeping a rule");
    cmd->add_option("--gradient-mode", o.gradient_mode, "exact | paper");
    cmd->add_option("--update-mode", o.update_mode, "batch | online");
    cmd->add_option("--rules", o.rules, "number of rules");
    cmd->add_option("--init", o.init, "fcm | random");
    cmd->add_option("--sigma-init", o.sigma_init, "initial membership width");
    cmd->add_option("--b-init", o.b_init, "initial consequent bias");
    cmd->add_option("--alpha-premise", o.alpha_premise, "softmax alpha over instance truths");
    cmd->add_option("--alpha-consequent", o.alpha_consequent, "softmax alpha over instance responses");
    cmd->add_option("--order", o.order, "consequent order: zero | first");
    cmd->add_option("--pca-dims", o.pca_dims, "project instances onto this many principal axes");
    cmd->add_option("--folds", o.folds, "cross-validation folds");
    cmd->add_option("--threshold", o.threshold, "classification threshold");
}

template <class T>
void put(json& cfg, const char* key, const std::optional<T>& v) {
    if (v) cfg[key] = *v;
}

json effective_config(const Overrides& o) {
    json cfg = default_config();
    if (!o.config_path.empty()) {
        json file;
        try {
            file = json::parse(read_text_file(o.config_path));
        } catch (const json::parse_error& e) {
            throw DomainError("config '" + o.config_path + "' is not valid JSON: " + e.what());
        }
        if (!file.is_object()) throw DomainError("config '" + o.config_path + "' must be a JSON object");
        for (const auto& [key, value] : file.items()) {
            if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
                throw DomainError("config '" + o.config_path + "': unknown key '" + key + "'");
            }
            cfg[key] = value;
        }
    }
    put(cfg, "eta", o.eta);
    put(cfg, "epochs", o.epochs);
    put(cfg, "epsilon", o.epsilon);
    put(cfg, "dropout_p", o.dropout_p);
    put(cfg, "gradient_mode", o.gradient_mode);
    put(cfg, "update_mode", o.update_mode);
    put(cfg, "seed", o.seed);
    put(cfg, "rules", o.rules);
    put(cfg, "init", o.init);
    put(cfg, "sigma_init", o.sigma_init);
    put(cfg, "b_init", o.b_init);
    put(cfg, "alpha_premise", o.alpha_premise);
    put(cfg, "alpha_consequent", o.alpha_consequent);
    put(cfg, "order", o.order);
    put(cfg, "pca_dims", o.pca_dims);
    put(cfg, "folds", o.folds);
    put(cfg, "threshold", o.threshold);
    return cfg;
}

struct Settings {
    ExperimentConfig exp;
    std::size_t folds = 10;
    std::uint64_t seed = 0;
};

Settings to_settings(const json& cfg) {
    Settings s;
    try {
        s.seed = cfg.at("seed").get<std::uint64_t>();
        s.exp.train.eta = cfg.at("eta").get<double>();
        s.exp.train.epochs_max = cfg.at("epochs").get<int>();
        s.exp.train.epsilon = cfg.at("epsilon").get<double>();
        s.exp.train.dropout_p = cfg.at("dropout_p").get<double>();
        s.exp.train.gradient_mode = parse_gradient_mode(cfg.at("gradient_mode").get<std::string>());
        s.exp.train.update_mode = parse_update_mode(cfg.at("update_mode").get<std::string>());
        s.exp.train.seed = s.seed;
        const auto rules = cfg.at("rules").get<long long>();
        if (rules < 1) throw DomainError("rules must be >= 1");
        s.exp.rules = static_cast<std::size_t>(rules);
        s.exp.init.strategy = parse_init_strategy(cfg.at("init").get<std::string>());
        s.exp.init.sigma_init = cfg.at("sigma_init").get<double>();
        s.exp.init.b_init = cfg.at("b_init").get<double>();
        s.exp.init.alpha_premise = cfg.at("alpha_premise").get<double>();
        s.exp.init.alpha_consequent = cfg.at("alpha_consequent").get<double>();
        s.exp.init.order = parse_order(cfg.at("order").get<std::string>());
        s.exp.init.seed = s.seed;
        if (!cfg.at("pca_dims").is_null()) {
            const auto d = cfg.at("pca_dims").get<long long>();
            if (d < 1) throw DomainError("pca_dims must be >= 1");
            s.exp.pca_dims = static_cast<std::size_t>(d);
        }
        const auto folds = cfg.at("folds").get<long long>();
        if (folds < 2) throw DomainError("folds must be >= 2");
        s.folds = static_cast<std::size_t>(folds);
        s.exp.threshold = cfg.at("threshold").get<double>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("bad config value: ") + e.what());
    }
    validate(s.exp);
    return s;
}

// Fails before any work if an output could not be created.
void check_output(const std::string& path) {
    if (path.empty()) return;
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
        throw DomainError("cannot write '" + path + "': directory '" + parent.string() + "' does not exist");
    }
    if (fs::is_directory(path)) throw DomainError("cannot write '" + path + "': it is a directory");
}

std::string header(const std::string& command, const json& cfg) {
    return comment_block("mianfis " + command + "\nconfig " + cfg.dump());
}

std::vector<double> iota_from_one(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = double(i + 1);
    return x;
}

// ---- synth

struct SynthArgs {
    std::string out;
    std::optional<std::uint64_t> seed;
    SynthSpec spec;
};

int run_synth(const SynthArgs& a) {
    SynthSpec spec = a.spec;
    spec.seed = a.seed ? *a.seed : env_seed();
    validate(spec);
    check_output(a.out);
    const auto ds = generate(spec);
    const json echo{{"seed", spec.seed},
                    {"concept_sigma", spec.concept_sigma},
                    {"bags_per_concept", spec.bags_per_concept},
                    {"negative_bags", spec.negative_bags},
                    {"instances_min", spec.instances_min},
                    {"instances_max", spec.instances_max},
                    {"exclusion_radius", spec.exclusion_radius}};
    write_bags(ds, a.out, "mianfis synth\nspec " + echo.dump());
    std::cout << "wrote " << ds.size() << " bags, " << ds.instance_count() << " instances to " << a.out << "\n";
    return kExitOk;
}

// ---- train

struct TrainArgs {
    Overrides o;
    std::string data, out_model, report, plot;
};

int run_train(const TrainArgs& a) {
    const auto cfg = effective_config(a.o);
    const auto s = to_settings(cfg);
    check_output(a.out_model);
    check_output(a.report);
    check_output(a.plot);
    const auto ds = read_bags(a.data);
    const auto fitted = fit_pipeline(ds, s.exp);
    const auto& rep = fitted.report;

    const auto report_text = format_report_csv(rep, "mianfis train\nconfig " + cfg.dump());
    std::string plot_text;
    if (!a.plot.empty()) {
        plot_text = svg_line_plot({{"training RMSE", iota_from_one(rep.rmse.size()), rep.rmse}}, "Training RMSE",
                                  "epoch", "RMSE");
    }
    save_model(fitted.model, fitted.pca, a.out_model, cfg);
    if (!a.report.empty()) write_text_file(a.report, report_text);
    if (!a.plot.empty()) write_text_file(a.plot, plot_text);

    std::cout << "epochs " << rep.epochs << " (" << to_string(rep.stop_reason) << "), final RMSE "
              << format_real(rep.rmse.empty() ? 0.0 : rep.rmse.back()) << ", seed " << s.seed << "\n";
    return kExitOk;
}

// ---- predict

struct PredictArgs {
    std::string model, data, out;
    std::optional<double> threshold;
};

int run_predict(const PredictArgs& a) {
    if (a.threshold && !std::isfinite(*a.threshold)) throw DomainError("threshold must be finite");
    check_output(a.out);
    const auto loaded = load_model(a.model);
    double threshold = 0.5;
    double keep = 1.0;
    if (loaded.config.is_object()) {
        threshold = loaded.config.value("threshold", threshold);
        keep = loaded.config.value("dropout_p", keep);
    }
    if (a.threshold) threshold = *a.threshold;
    const auto ds = read_bags(a.data);

    TrainedPipeline pipe{loaded.model, loaded.pca, {}};
    std::string out = comment_block("mianfis predict\nmodel " + a.model + "\nthreshold " + format_real(threshold) +
                                    "\nconfig " + loaded.config.dump());
    out += "bag_id,score,class\n";
    for (const auto& bag : ds.bags) {
        const double score = pipeline_score(pipe, bag, keep);
        out += bag.id + "," + format_real(score) + "," +
               (classify(score, threshold) == BagClass::positive ? "1" : "0") + "\n";
    }
    if (a.out.empty()) {
        std::cout << out;
    } else {
        write_text_file(a.out, out);
        std::cout << "scored " << ds.size() << " bags to " << a.out << "\n";
    }
    return kExitOk;
}

// ---- cv

struct CvArgs {
    Overrides o;
    std::string data, out, roc_out, roc_plot;
    bool naive = false;
    unsigned threads = 1;
};

int run_cv(const CvArgs& a) {
    if (a.threads < 1) throw DomainError("threads must be >= 1");
    auto cfg = effective_config(a.o);
    const auto s = to_settings(cfg);
    check_output(a.out);
    check_output(a.roc_out);
    check_output(a.roc_plot);
    const auto ds = read_bags(a.data);
    const auto res = a.naive ? naive_baseline_cv(ds, s.exp, s.folds, s.seed, a.threads)
                             : cross_validate(ds, s.exp, s.folds, s.seed, a.threads);

    std::vector<std::pair<double, bool>> scored;
    for (const auto& b : res.scores) scored.emplace_back(b.score, is_positive_label(b.label));
    const auto curve = roc(scored);

    const std::string what = a.naive ? "cv --naive" : "cv";
    const auto cv_text = format_cv_csv(res, "mianfis " + what + "\nconfig " + cfg.dump());
    const auto roc_text = format_roc_csv(curve, "mianfis " + what + " roc\nconfig " + cfg.dump() +
                                                    "\nauc " + format_real(curve.auc));
    std::string plot_text;
    if (!a.roc_plot.empty()) {
        PlotSeries series{a.naive ? "naive" : "multiple instance", {}, {}};
        for (const auto& p : curve.points) {
            series.x.push_back(p.false_alarm_rate);
            series.y.push_back(p.detection_rate);
        }
        plot_text = svg_line_plot({series}, "ROC (AUC " + format_real(curve.auc) + ")", "false alarm rate",
                                  "detection rate");
    }
    if (a.out.empty()) {
        std::cout << cv_text;
    } else {
        write_text_file(a.out, cv_text);
    }
    if (!a.roc_out.empty()) write_text_file(a.roc_out, roc_text);
    if (!a.roc_plot.empty()) write_text_file(a.roc_plot, plot_text);

    std::cout << std::fixed << std::setprecision(4) << "mean accuracy " << res.mean << " (std " << res.stddev
              << ") over " << s.folds << " folds, AUC " << curve.auc << ", seed " << s.seed << "\n";
    return kExitOk;
}

// ---- gradcheck

struct GradcheckArgs {
    int trials = 100;
    std::optional<std::uint64_t> seed;
    std::string mode = "exact";
    double rel = 1e-5;
};

double fd(const MiAnfisModel& model, const Bag& bag, auto&& set, double base) {
    constexpr double h = 1e-6;
    MiAnfisModel plus = model;
    MiAnfisModel minus = model;
    set(plus, base + h);
    set(minus, base - h);
    return (bag_loss(plus, bag) - bag_loss(minus, bag)) / (2.0 * h);
}

// Worst relative error over every parameter; differences under 1e-8 count as agreement.
double worst_error(const MiAnfisModel& model, const Bag& bag, GradientMode mode) {
    const auto g = bag_gradient(model, bag, forward(model, bag), mode);
    double worst = 0.0;
    auto track = [&](double analytic, double numeric) {
        const double err = std::abs(analytic - numeric);
        if (err <= 1e-8) return;
        worst = std::max(worst, err / std::max(std::abs(analytic), std::abs(numeric)));
    };
    for (std::size_t k = 0; k < model.rule_count(); ++k) {
        for (std::size_t j = 0; j < model.dim(); ++j) {
            const auto& mf = model.rules[k].premise[j];
            track(g.c(k, j), fd(model, bag, [&](MiAnfisModel& m, double v) { m.rules[k].premise[j].set_center(v); },
                                mf.center()));
            track(g.sigma(k, j), fd(model, bag, [&](MiAnfisModel& m, double v) { m.rules[k].premise[j].set_sigma(v); },
                                    mf.sigma()));
        }
        const std::size_t n = model.order == ConsequentOrder::zero ? 1 : model.dim() + 1;
        for (std::size_t j = 0; j < n; ++j) {
            track(g.b(k, j),
                  fd(model, bag, [&](MiAnfisModel& m, double v) { m.rules[k].consequent[j] = v; },
                     model.rules[k].consequent[j]));
        }
    }
    return worst;
}

int run_gradcheck(const GradcheckArgs& a) {
    if (a.trials < 1) throw DomainError("trials must be >= 1");
    if (!(a.rel > 0.0)) throw DomainError("rel must be > 0");
    const auto mode = parse_gradient_mode(a.mode);
    const std::uint64_t seed = a.seed ? *a.seed : env_seed();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> rules_d(1, 5), dim_d(1, 4), inst_d(1, 6);
    std::uniform_real_distribution<double> alpha_d(-3.0, 3.0), unit(-1.0, 1.0), width(0.5, 1.5);
    std::bernoulli_distribution first_order(0.5);

    std::cout << "# mianfis gradcheck mode=" << a.mode << " seed=" << seed << " rel=" << a.rel << "\n";
    std::cout << "trial,rules,dim,instances,order,alpha_premise,alpha_consequent,max_rel_error,result\n";
    int passed = 0;
    for (int t = 1; t <= a.trials; ++t) {
        MiAnfisModel model;
        const auto R = static_cast<std::size_t>(rules_d(rng));
        const auto D = static_cast<std::size_t>(dim_d(rng));
        const auto M = static_cast<std::size_t>(inst_d(rng));
        model.order = first_order(rng) ? ConsequentOrder::first : ConsequentOrder::zero;
        model.alpha_premise = alpha_d(rng);
        model.alpha_consequent = alpha_d(rng);
        for (std::size_t k = 0; k < R; ++k) {
            MiRule rule;
            for (std::size_t j = 0; j < D; ++j) rule.premise.emplace_back(unit(rng), width(rng));
            rule.consequent.assign(D + 1, 0.0);
            const std::size_t n = model.order == ConsequentOrder::zero ? 1 : D + 1;
            for (std::size_t j = 0; j < n; ++j) rule.consequent[j] = unit(rng);
            model.rules.push_back(std::move(rule));
        }
        Bag bag{"g" + std::to_string(t), std::bernoulli_distribution(0.5)(rng) ? 1.0 : 0.0, {}};
        for (std::size_t m = 0; m < M; ++m) {
            std::vector<double> x(D);
            for (auto& v : x) v = unit(rng);
            bag.instances.append_row(x);
        }
        const double err = worst_error(model, bag, mode);
        const bool ok = err <= a.rel;
        passed += ok;
        std::ostringstream row;
        row << t << "," << R << "," << D << "," << M << "," << to_string(model.order) << ","
            << format_real(model.alpha_premise) << "," << format_real(model.alpha_consequent) << ","
            << std::scientific << std::setprecision(3) << err << "," << (ok ? "pass" : "FAIL");
        std::cout << row.str() << "\n";
    }
    std::cout << "# " << passed << "/" << a.trials << " pass\n";
    return passed == a.trials ? kExitOk : kExitInternal;
}

// ---- dropout-compare

struct DropoutArgs {
    Overrides o;
    std::string data, out, plot;
    double split = 0.9;
};

int run_dropout(const DropoutArgs& a) {
    if (!(a.split > 0.0 && a.split < 1.0)) throw DomainError("split must lie in (0, 1)");
    const auto cfg = effective_config(a.o);
    const auto s = to_settings(cfg);
    check_output(a.out);
    check_output(a.plot);
    const auto ds = read_bags(a.data);
    const auto t = dropout_comparison(ds, s.exp, s.exp.train.dropout_p, a.split, s.seed);

    const auto text = format_dropout_csv(t, "mianfis dropout-compare\nconfig " + cfg.dump() + "\nsplit " +
                                                format_real(a.split) + " train_bags " +
                                                std::to_string(t.train_bags) + " test_bags " +
                                                std::to_string(t.test_bags));
    std::string plot_text;
    if (!a.plot.empty()) {
        plot_text = svg_line_plot({{"train, dropout", iota_from_one(t.train_sse_dropout.size()), t.train_sse_dropout},
                                   {"test, dropout", iota_from_one(t.test_sse_dropout.size()), t.test_sse_dropout},
                                   {"train, plain", iota_from_one(t.train_sse_plain.size()), t.train_sse_plain},
                                   {"test, plain", iota_from_one(t.test_sse_plain.size()), t.test_sse_plain}},
                                  "Rule dropout (p = " + format_real(t.p) + ")", "epoch", "SSE");
    }
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(a.out, text);
    }
    if (!a.plot.empty()) write_text_file(a.plot, plot_text);

    auto last = [](const std::vector<double>& v) { return v.empty() ? 0.0 : v.back(); };
    std::cout << "final test SSE: dropout " << format_real(last(t.test_sse_dropout)) << ", plain "
              << format_real(last(t.test_sse_plain)) << " (p " << format_real(t.p) << ", seed " << s.seed << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple-instance ANFIS: train, evaluate and inspect bag classifiers"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "generate the two-concept synthetic dataset");
    c_synth->add_option("--out", synth.out, "output bag CSV")->required();
    c_synth->add_option("--seed", synth.seed, "seed (falls back to MIANFIS_SEED)");
    c_synth->add_option("--bags-per-concept", synth.spec.bags_per_concept);
    c_synth->add_option("--negative-bags", synth.spec.negative_bags);
    c_synth->add_option("--instances-min", synth.spec.instances_min);
    c_synth->add_option("--instances-max", synth.spec.instances_max);
    c_synth->add_option("--concept-sigma", synth.spec.concept_sigma);
    c_synth->add_option("--exclusion-radius", synth.spec.exclusion_radius, "in multiples of concept sigma");

    TrainArgs train;
    auto* c_train = app.add_subcommand("train", "fit a model on a bag file");
    c_train->add_option("--data", train.data, "bag CSV")->required();
    c_train->add_option("--out-model", train.out_model, "model JSON to write")->required();
    c_train->add_option("--report", train.report, "per-epoch RMSE CSV");
    c_train->add_option("--plot", train.plot, "RMSE curve as SVG");
    add_config_flags(c_train, train.o);

    PredictArgs pred;
    auto* c_pred = app.add_subcommand("predict", "score bags with a saved model");
    c_pred->add_option("--model", pred.model, "model JSON")->required();
    c_pred->add_option("--data", pred.data, "bag CSV")->required();
    c_pred->add_option("--out", pred.out, "scores CSV (stdout if omitted)");
    c_pred->add_option("--threshold", pred.threshold, "overrides the threshold stored with the model");

    CvArgs cv;
    auto* c_cv = app.add_subcommand("cv", "stratified k-fold cross-validation");
    c_cv->add_option("--data", cv.data, "bag CSV")->required();
    c_cv->add_option("--out", cv.out, "per-fold CSV (stdout if omitted)");
    c_cv->add_option("--roc", cv.roc_out, "ROC points CSV over all held-out bags");
    c_cv->add_option("--roc-plot", cv.roc_plot, "ROC curve as SVG");
    c_cv->add_flag("--naive", cv.naive, "train on instances labelled with their bag's label");
    c_cv->add_option("--threads", cv.threads, "worker threads for folds");
    add_config_flags(c_cv, cv.o);

    GradcheckArgs gc;
    auto* c_gc = app.add_subcommand("gradcheck", "compare analytic gradients with central differences");
    c_gc->add_option("--trials", gc.trials, "random models to check");
    c_gc->add_option("--seed", gc.seed, "seed (falls back to MIANFIS_SEED)");
    c_gc->add_option("--gradient-mode", gc.mode, "exact | paper");
    c_gc->add_option("--rel", gc.rel, "relative tolerance");

    DropoutArgs drop;
    auto* c_drop = app.add_subcommand("dropout-compare", "train with and without rule dropout from one init");
    c_drop->add_option("--data", drop.data, "bag CSV")->required();
    c_drop->add_option("--out", drop.out, "per-epoch SSE CSV (stdout if omitted)");
    c_drop->add_option("--plot", drop.plot, "SSE curves as SVG");
    c_drop->add_option("--split", drop.split, "training fraction");
    add_config_flags(c_drop, drop.o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (c_synth->parsed()) return run_synth(synth);
        if (c_train->parsed()) return run_train(train);
        if (c_pred->parsed()) return run_predict(pred);
        if (c_cv->parsed()) return run_cv(cv);
        if (c_gc->parsed()) return run_gradcheck(gc);
        if (c_drop->parsed()) return run_dropout(drop);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
