// Command-line front end: dataset construction, model evaluation,
// out-of-time experiments, single-song prediction, yearly trends, and the
// synthetic data generator.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dancehit/analysis.hpp"
#include "dancehit/chart.hpp"
#include "dancehit/cv.hpp"
#include "dancehit/dataset.hpp"
#include "dancehit/features.hpp"
#include "dancehit/predictor.hpp"
#include "dancehit/report.hpp"
#include "dancehit/svm_tuning.hpp"
#include "dancehit/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dancehit;

struct CommonInputs {
    std::string charts;
    std::string analyses;
    std::string scheme = "D1";
    std::string out = "out";
    std::uint64_t seed = 1;
};

struct EvalSettings {
    int runs = 10;
    int folds = 10;
    bool fs_only = false;
    bool no_fs_only = false;
    std::string fs_scope = "fold";
    std::vector<std::string> models = {"c45", "ripper", "nb", "logistic", "svm-poly", "svm-rbf"};
    bool svm_grid = false;
    int grid_neighborhood = 8;
    GaConfig ga;
};

void add_common_inputs(CLI::App* cmd, CommonInputs& in, bool needs_scheme = true) {
    cmd->add_option("--charts", in.charts, "chart listings CSV (title,artist,position,date)")
        ->required()
        ->envname("DANCEHIT_CHARTS");
    cmd->add_option("--analyses", in.analyses, "directory of song analysis JSON files")
        ->required()
        ->envname("DANCEHIT_ANALYSES");
    if (needs_scheme)
        cmd->add_option("--scheme", in.scheme, "gap scheme: D1, D2 or D3")
            ->check(CLI::IsMember({"D1", "D2", "D3"}));
    cmd->add_option("--out", in.out, "output directory")->envname("DANCEHIT_OUT");
    cmd->add_option("--seed", in.seed, "root seed; all randomness derives from it")
        ->envname("DANCEHIT_SEED");
}

void add_eval_settings(CLI::App* cmd, EvalSettings& ev) {
    cmd->add_option("--runs", ev.runs, "cross-validation repetitions")
        ->envname("DANCEHIT_RUNS");
    cmd->add_option("--folds", ev.folds, "folds per run")->envname("DANCEHIT_FOLDS");
    auto* fs_flag = cmd->add_flag("--fs", ev.fs_only, "evaluate with feature selection only");
    cmd->add_flag("--no-fs", ev.no_fs_only, "evaluate without feature selection only")
        ->excludes(fs_flag);
    cmd->add_option("--fs-scope", ev.fs_scope,
                    "feature-selection scope: per training fold, or once on the whole dataset")
        ->check(CLI::IsMember({"fold", "dataset"}));
    cmd->add_option("--models", ev.models,
                    "model list: c45, ripper, nb, logistic, svm-poly, svm-rbf")
        ->delimiter(',');
    cmd->add_flag("--svm-grid", ev.svm_grid,
                  "tune SVM hyperparameters by grid search on each training set");
    cmd->add_option("--grid-neighborhood", ev.grid_neighborhood,
                    "grid-search neighborhood for hill climbing")
        ->check(CLI::IsMember({4, 8}));
    cmd->add_option("--ga-population", ev.ga.population_size, "GA population size");
    cmd->add_option("--ga-generations", ev.ga.generations, "GA generations");
    cmd->add_option("--ga-crossover", ev.ga.crossover_prob, "GA crossover probability");
    cmd->add_option("--ga-mutation", ev.ga.mutation_prob, "GA per-bit mutation probability");
}

AssembleReport build_from_inputs(const CommonInputs& in) {
    auto parsed = parse_chart_csv(in.charts);
    if (parsed.skipped_rows > 0)
        std::cerr << "warning: skipped " << parsed.skipped_rows << " unparseable chart rows\n";
    auto peaks = compute_peaks(parsed.listings);
    auto analyses = load_analysis_dir(in.analyses);
    return assemble_dataset(peaks, analyses, GapScheme::by_name(in.scheme),
                            [](const SongAnalysis& a) { return feature_vector(a); },
                            feature_schema());
}

std::vector<ModelSpec> build_specs(const EvalSettings& ev, std::uint64_t seed) {
    GridSearchOptions gopt;
    gopt.eight_neighborhood = ev.grid_neighborhood == 8;
    gopt.seed = seed;
    std::vector<ModelSpec> specs;
    for (const auto& id : ev.models) {
        if (ev.svm_grid && id == "svm-poly")
            specs.push_back(spec_svm_poly_tuned(gopt));
        else if (ev.svm_grid && id == "svm-rbf")
            specs.push_back(spec_svm_rbf_tuned(gopt));
        else
            specs.push_back(model_spec_by_id(id));
    }
    return specs;
}

std::string fs_file_tag(bool with_fs) { return with_fs ? "fs" : "nofs"; }

int cmd_gen_synthetic(const SyntheticConfig& config, const std::string& out) {
    auto paths = generate_synthetic(config, out);
    std::cout << "charts: " << paths.charts_csv.string() << '\n'
              << "analyses: " << paths.analyses_dir.string() << '\n';
    return 0;
}

int cmd_build_dataset(const CommonInputs& in) {
    auto report = build_from_inputs(in);
    fs::create_directories(in.out);
    fs::path csv = fs::path(in.out) / ("dataset_" + in.scheme + ".csv");
    write_dataset_csv(csv, report.dataset);

    std::ofstream rep(fs::path(in.out) / ("build_report_" + in.scheme + ".txt"),
                      std::ios::binary);
    rep << "scheme: " << in.scheme << '\n'
        << "rows: " << report.dataset.n_rows() << '\n'
        << "hits: " << report.dataset.count(SongClass::Hit) << '\n'
        << "non_hits: " << report.dataset.count(SongClass::NonHit) << '\n'
        << "dropped_excluded_by_gap: " << report.dropped_excluded << '\n'
        << "dropped_missing_analysis: " << report.dropped_no_analysis << '\n'
        << "dropped_unusable_features: " << report.dropped_bad_features << '\n';
    std::cout << "wrote " << csv.string() << " (" << report.dataset.n_rows() << " rows)\n";
    return 0;
}

int cmd_evaluate(const CommonInputs& in, const EvalSettings& ev) {
    auto report = build_from_inputs(in);
    const Dataset& ds = report.dataset;
    auto specs = build_specs(ev, in.seed);

    std::vector<bool> fs_conditions;
    if (ev.fs_only) fs_conditions = {true};
    else if (ev.no_fs_only) fs_conditions = {false};
    else fs_conditions = {false, true};

    std::vector<std::pair<std::string, ModelComparison>> tagged;
    for (bool with_fs : fs_conditions) {
        CvOptions opt;
        opt.runs = ev.runs;
        opt.folds = ev.folds;
        opt.seed = in.seed;
        opt.feature_selection = with_fs;
        opt.fs_whole_dataset = ev.fs_scope == "dataset";
        opt.ga = ev.ga;
        tagged.emplace_back(with_fs ? "FS" : "-", evaluate_models(ds, specs, opt));
    }

    fs::create_directories(in.out);
    {
        std::ofstream csv(fs::path(in.out) / ("results_" + in.scheme + ".csv"),
                          std::ios::binary);
        write_comparison_csv(csv, tagged);
    }
    {
        std::ofstream txt(fs::path(in.out) / ("results_" + in.scheme + ".txt"),
                          std::ios::binary);
        txt << "scheme " << in.scheme << ", " << ev.runs << " runs x " << ev.folds
            << "-fold cross-validation\n\n";
        write_comparison_text(txt, tagged);
    }

    // Cross-validated ROC points (first run, folds pooled) per model, and a
    // final bundle trained on the whole dataset for later prediction.
    for (std::size_t t = 0; t < tagged.size(); ++t) {
        bool with_fs = fs_conditions[t];
        for (std::size_t s = 0; s < specs.size(); ++s) {
            const auto& row = tagged[t].second.rows[s];
            std::ofstream roc(fs::path(in.out) / ("roc_" + specs[s].id + "_" +
                                                  fs_file_tag(with_fs) + "_" + in.scheme +
                                                  ".csv"),
                              std::ios::binary);
            write_roc_csv(roc, roc_auc(row.result.pooled_labels, row.result.pooled_scores).curve);

            BundleOptions bopt;
            bopt.feature_selection = with_fs;
            bopt.ga = ev.ga;
            bopt.seed = in.seed;
            auto bundle = train_bundle(ds, specs[s], bopt);
            save_bundle(fs::path(in.out) / ("model_" + specs[s].id + "_" +
                                            fs_file_tag(with_fs) + "_" + in.scheme + ".json"),
                        bundle);
        }
    }

    std::ofstream(fs::path(in.out) / ("class_distribution_" + in.scheme + ".txt"),
                  std::ios::binary)
        << "hits: " << ds.count(SongClass::Hit) << '\n'
        << "non_hits: " << ds.count(SongClass::NonHit) << '\n';
    std::cout << "wrote results for scheme " << in.scheme << " to " << in.out << '\n';
    return 0;
}

int cmd_oot(const CommonInputs& in, const EvalSettings& ev, double fraction) {
    auto report = build_from_inputs(in);
    const Dataset& ds = report.dataset;
    auto specs = build_specs(ev, in.seed);
    bool with_fs = !ev.no_fs_only;  // feature selection on by default here

    auto [train, test] = out_of_time_split(ds, fraction);

    CvOptions opt;
    opt.runs = ev.runs;
    opt.folds = ev.folds;
    opt.seed = in.seed;
    opt.feature_selection = with_fs;
    opt.fs_whole_dataset = ev.fs_scope == "dataset";
    opt.ga = ev.ga;
    FoldPlan plan = make_fold_plan(ds, opt);

    fs::create_directories(in.out);
    std::ofstream csv(fs::path(in.out) / ("oot_" + in.scheme + ".csv"), std::ios::binary);
    static const std::vector<std::string> header = {"model", "split_auc", "cv_auc",
                                                    "split_acc", "cv_acc"};
    write_csv_row(csv, header);

    for (const auto& spec : specs) {
        BundleOptions bopt;
        bopt.feature_selection = with_fs;
        bopt.ga = ev.ga;
        bopt.seed = in.seed;
        auto bundle = train_bundle(train, spec, bopt);

        std::vector<SongClass> labels;
        std::vector<SongClass> predictions;
        std::vector<double> scores;
        for (std::size_t i = 0; i < test.n_rows(); ++i) {
            auto row = bundle.prepare_row(test.rows[i]);
            labels.push_back(test.labels[i]);
            scores.push_back(bundle.model->score_hit(row));
            predictions.push_back(bundle.model->classify(row));
        }
        double split_auc = roc_auc(labels, scores).auc;
        double split_acc = confusion_and_accuracy(labels, predictions).second;

        auto cv = repeated_cv(ds, spec, opt, &plan);
        std::vector<std::string> fields = {spec.name, format_double(split_auc),
                                           format_double(cv.mean_auc),
                                           format_double(split_acc),
                                           format_double(cv.mean_acc)};
        write_csv_row(csv, fields);
    }

    std::ofstream(fs::path(in.out) / ("oot_split_" + in.scheme + ".txt"), std::ios::binary)
        << "train_rows: " << train.n_rows() << '\n'
        << "test_rows: " << test.n_rows() << '\n'
        << "train_hits: " << train.count(SongClass::Hit) << '\n'
        << "train_non_hits: " << train.count(SongClass::NonHit) << '\n'
        << "test_hits: " << test.count(SongClass::Hit) << '\n'
        << "test_non_hits: " << test.count(SongClass::NonHit) << '\n';
    std::cout << "wrote out-of-time report (" << train.n_rows() << "/" << test.n_rows()
              << " split) to " << in.out << '\n';
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& analysis_path) {
    auto bundle = load_bundle(model_path);
    auto analysis = load_analysis(analysis_path);
    double score = bundle.score_analysis(analysis);
    SongClass cls = bundle.classify_analysis(analysis);
    std::cout << "score=" << format_double(score) << '\n'
              << "class=" << to_string(cls) << '\n';
    return 0;
}

int cmd_trends(const CommonInputs& in, const std::vector<std::string>& features) {
    auto parsed = parse_chart_csv(in.charts);
    auto peaks = compute_peaks(parsed.listings);
    auto analyses = load_analysis_dir(in.analyses);
    const auto& schema = feature_schema();

    std::vector<std::size_t> feature_idx;
    for (const auto& name : features) {
        auto it = std::find(schema.begin(), schema.end(), name);
        if (it == schema.end()) {
            std::string valid;
            for (const auto& n : schema) valid += (valid.empty() ? "" : ", ") + n;
            throw std::runtime_error("unknown feature '" + name + "'; valid names: " + valid);
        }
        feature_idx.push_back(static_cast<std::size_t>(it - schema.begin()));
    }

    std::vector<std::pair<Date, std::vector<double>>> usable;
    for (const auto& peak : peaks) {
        auto it = analyses.find(peak.key);
        if (it == analyses.end()) continue;
        try {
            usable.emplace_back(peak.first_date, feature_vector(it->second));
        } catch (const std::exception&) {
            continue;  // unusable analysis, same drop rule as dataset assembly
        }
    }

    fs::create_directories(in.out);
    std::ofstream summary(fs::path(in.out) / "trends.csv", std::ios::binary);
    summary << "feature,slope,intercept,n_years\n";
    for (std::size_t f = 0; f < features.size(); ++f) {
        std::vector<std::pair<Date, double>> series;
        for (const auto& [date, row] : usable) series.emplace_back(date, row[feature_idx[f]]);
        auto trend = yearly_trend(series);

        std::ofstream per(fs::path(in.out) / ("trend_" + features[f] + ".csv"),
                          std::ios::binary);
        per << "year,mean\n";
        for (const auto& [year, mean] : trend.yearly_means)
            per << year << ',' << format_double(mean) << '\n';
        per << "slope,intercept\n"
            << format_double(trend.line.slope) << ',' << format_double(trend.line.intercept)
            << '\n';

        summary << features[f] << ',' << format_double(trend.line.slope) << ','
                << format_double(trend.line.intercept) << ',' << trend.line.n_years << '\n';
    }
    std::cout << "wrote trend reports for " << features.size() << " features to " << in.out
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dance hit prediction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a flat key-value config file");

    // gen-synthetic
    SyntheticConfig syn_config;
    std::string syn_scenario = "noise";
    std::string syn_out = "out";
    auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic charts+analyses corpus");
    gen->add_option("--seed", syn_config.seed, "generator seed")->envname("DANCEHIT_SEED");
    gen->add_option("--songs", syn_config.n_songs, "number of songs");
    gen->add_option("--scenario", syn_scenario, "separable, noise or trend")
        ->check(CLI::IsMember({"separable", "noise", "trend"}));
    gen->add_option("--out", syn_out, "output directory")->envname("DANCEHIT_OUT");

    // build-dataset
    CommonInputs build_in;
    auto* build = app.add_subcommand("build-dataset",
                                     "ingest charts + analyses and write the labeled dataset");
    add_common_inputs(build, build_in);

    // evaluate
    CommonInputs eval_in;
    EvalSettings eval_ev;
    auto* eval = app.add_subcommand("evaluate",
                                    "repeated stratified CV comparison of the model families");
    add_common_inputs(eval, eval_in);
    add_eval_settings(eval, eval_ev);

    // oot
    CommonInputs oot_in;
    EvalSettings oot_ev;
    double oot_fraction = 0.9;
    auto* oot = app.add_subcommand("oot", "chronological split experiment next to CV numbers");
    add_common_inputs(oot, oot_in);
    add_eval_settings(oot, oot_ev);
    oot->add_option("--fraction", oot_fraction, "train fraction of the date-ordered data");

    // predict
    std::string predict_model, predict_analysis;
    auto* predict = app.add_subcommand("predict", "score one song analysis with a saved model");
    predict->add_option("--model", predict_model, "model bundle JSON")->required();
    predict->add_option("--analysis", predict_analysis, "song analysis JSON")->required();

    // trends
    CommonInputs trends_in;
    std::vector<std::string> trend_features;
    auto* trends = app.add_subcommand("trends", "per-year feature means with fitted trend lines");
    add_common_inputs(trends, trends_in, /*needs_scheme=*/false);
    trends->add_option("--features", trend_features, "feature names (comma separated)")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            syn_config.scenario = scenario_from_string(syn_scenario);
            return cmd_gen_synthetic(syn_config, syn_out);
        }
        if (build->parsed()) return cmd_build_dataset(build_in);
        if (eval->parsed()) return cmd_evaluate(eval_in, eval_ev);
        if (oot->parsed()) return cmd_oot(oot_in, oot_ev, oot_fraction);
        if (predict->parsed()) return cmd_predict(predict_model, predict_analysis);
        if (trends->parsed()) return cmd_trends(trends_in, trend_features);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
