#include "gwlion/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gwlion/dataio.hpp"
#include "gwlion/forecaster.hpp"
#include "gwlion/model_io.hpp"
#include "gwlion/synth.hpp"

namespace gwlion {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

RunConfig load_config_with_overrides(const std::string& config_path,
                                     const std::optional<std::uint64_t>& seed,
                                     const std::string& out_dir) {
    RunConfig cfg = load_run_config(config_path);
    if (seed) cfg.pipeline.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (cfg.input.empty()) throw ConfigError("config: 'input' (CSV path) is required");
    return cfg;
}

void write_manifest(const std::string& dir, const std::string& name, json manifest,
                    std::vector<std::string> outputs) {
    manifest["outputs"] = std::move(outputs);
    write_json_file(manifest, out_path(dir, name));
}

int cmd_synth(int months, std::uint64_t seed, const std::string& out) {
    const TimeSeriesDataset ds = generate_synthetic(months, seed);
    if (const fs::path parent = fs::path(out).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    save_csv(ds, out);
    std::cout << "wrote " << ds.size() << " months to " << out << "\n";
    return 0;
}

int cmd_train(const std::string& model_name, const std::string& config_path,
              const std::optional<std::uint64_t>& seed, const std::string& out_dir) {
    const ModelKind kind = parse_model_kind(model_name);
    const RunConfig cfg = load_config_with_overrides(config_path, seed, out_dir);
    const TimeSeriesDataset dataset = load_csv(cfg.input);

    std::vector<Progress> progress;
    const ProgressSink sink = [&progress](const Progress& p) {
        progress.push_back(p);
        std::cout << "epoch " << p.epoch << " best_rmse=" << fmt("%.10g", p.best_fitness)
                  << " evals=" << p.evaluations << "\n";
    };

    std::uint64_t evaluations = 0;
    const TrainedModel model = train_model(kind, dataset, cfg.pipeline, sink, &evaluations);

    const std::string tag = to_string(kind);
    const std::string model_file = "model_" + tag + ".json";
    const std::string trace_file = "trace_" + tag + ".csv";
    save_model(model, out_path(cfg.out_dir, model_file));

    std::string trace_csv;
    std::vector<std::string> outputs{model_file, trace_file};
    if (kind == ModelKind::lstm_la) {
        trace_csv = "epoch,best_rmse\n";
        for (std::size_t e = 0; e < model.training_trace.size(); ++e) {
            trace_csv += std::to_string(e + 1) + "," + fmt("%.17g", model.training_trace[e]) + "\n";
        }
        json la_trace = json::array();
        for (const Progress& p : progress) {
            la_trace.push_back({{"epoch", p.epoch},
                                {"best_rmse", p.best_fitness},
                                {"evaluations", p.evaluations}});
        }
        write_json_file(json{{"epochs", la_trace}}, out_path(cfg.out_dir, "la_trace_" + tag + ".json"));
        outputs.push_back("la_trace_" + tag + ".json");
    } else {
        trace_csv = "epoch,mse\n";
        for (std::size_t e = 0; e < model.training_trace.size(); ++e) {
            trace_csv += std::to_string(e) + "," + fmt("%.17g", model.training_trace[e]) + "\n";
        }
    }
    write_text_file(out_path(cfg.out_dir, trace_file), trace_csv);

    json manifest{{"command", "train"},
                  {"model", tag},
                  {"config", run_config_to_json(cfg)},
                  {"input_checksum", file_checksum(cfg.input)}};
    if (kind == ModelKind::lstm_la) manifest["fitness_evaluations"] = evaluations;
    write_manifest(cfg.out_dir, "manifest_train_" + tag + ".json", std::move(manifest),
                   std::move(outputs));

    std::cout << "trained " << tag << ": final objective "
              << fmt("%.10g", model.training_trace.back()) << "\n";
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& out_dir) {
    const TrainedModel model = load_model(model_path);
    const TimeSeriesDataset dataset = load_csv(data_path);
    const MetricSet metrics = evaluate_model(model, dataset);

    const std::string tag = to_string(model.kind);
    const std::string metrics_file = "metrics_" + tag + ".json";
    write_json_file(metrics_to_json(metrics), out_path(out_dir, metrics_file));
    write_manifest(out_dir, "manifest_evaluate_" + tag + ".json",
                   json{{"command", "evaluate"},
                        {"model_file", model_path},
                        {"model_checksum", file_checksum(model_path)},
                        {"data_file", data_path},
                        {"input_checksum", file_checksum(data_path)}},
                   {metrics_file});

    std::cout << tag << " test metrics: rmse=" << fmt("%.6g", metrics.rmse)
              << " mae=" << fmt("%.6g", metrics.mae)
              << " accuracy=" << fmt("%.4g", metrics.accuracy_pct) << "%\n";
    return 0;
}

int cmd_compare(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                const std::string& out_dir) {
    const RunConfig cfg = load_config_with_overrides(config_path, seed, out_dir);
    const TimeSeriesDataset dataset = load_csv(cfg.input);
    const ComparisonReport report = compare_models(dataset, cfg.pipeline);

    const json report_json{
        {"models",
         {{"ffnn", metrics_to_json(report.ffnn.metrics)},
          {"lstm", metrics_to_json(report.lstm.metrics)},
          {"lstm_la", metrics_to_json(report.lstm_la.metrics)}}}};
    write_json_file(report_json, out_path(cfg.out_dir, "report.json"));

    std::string csv = "date,observed,ffnn,lstm,lstm_la\n";
    for (std::size_t i = 0; i < report.test_dates.size(); ++i) {
        csv += report.test_dates[i].str() + "," + fmt("%.6f", report.observed[i]) + "," +
               fmt("%.6f", report.ffnn.test_predictions[i]) + "," +
               fmt("%.6f", report.lstm.test_predictions[i]) + "," +
               fmt("%.6f", report.lstm_la.test_predictions[i]) + "\n";
    }
    write_text_file(out_path(cfg.out_dir, "compare_predictions.csv"), csv);

    write_manifest(cfg.out_dir, "manifest_compare.json",
                   json{{"command", "compare"},
                        {"config", run_config_to_json(cfg)},
                        {"input_checksum", file_checksum(cfg.input)},
                        {"fitness_evaluations", report.hybrid_evaluations}},
                   {"report.json", "compare_predictions.csv"});

    for (const auto& [name, ev] :
         {std::pair<std::string, const ModelEvaluation&>{"ffnn", report.ffnn},
          {"lstm", report.lstm},
          {"lstm_la", report.lstm_la}}) {
        std::cout << name << ": rmse=" << fmt("%.6g", ev.metrics.rmse)
                  << " mae=" << fmt("%.6g", ev.metrics.mae)
                  << " accuracy=" << fmt("%.4g", ev.metrics.accuracy_pct) << "%\n";
    }
    return 0;
}

int cmd_crossval(const std::string& config_path, const std::optional<std::uint64_t>& seed,
                 const std::string& out_dir) {
    const RunConfig cfg = load_config_with_overrides(config_path, seed, out_dir);
    const TimeSeriesDataset dataset = load_csv(cfg.input);
    const CrossValReport report = crossval_models(dataset, cfg.pipeline);

    const json cv_json{{"models",
                        {{"ffnn", {{"cv", cv_to_json(report.ffnn)}}},
                         {"lstm", {{"cv", cv_to_json(report.lstm)}}},
                         {"lstm_la", {{"cv", cv_to_json(report.lstm_la)}}}}}};
    write_json_file(cv_json, out_path(cfg.out_dir, "crossval.json"));

    std::string csv = "model,fold,accuracy_pct\n";
    for (const auto& [name, summary] :
         {std::pair<std::string, const CvSummary&>{"ffnn", report.ffnn},
          {"lstm", report.lstm},
          {"lstm_la", report.lstm_la}}) {
        for (std::size_t f = 0; f < summary.fold_accuracies.size(); ++f) {
            csv += name + "," + std::to_string(f) + "," +
                   fmt("%.6f", summary.fold_accuracies[f]) + "\n";
        }
        std::cout << name << ": median accuracy " << fmt("%.4g", summary.median) << "% (q1 "
                  << fmt("%.4g", summary.q1) << ", q3 " << fmt("%.4g", summary.q3) << ")\n";
    }
    write_text_file(out_path(cfg.out_dir, "crossval_folds.csv"), csv);

    write_manifest(cfg.out_dir, "manifest_crossval.json",
                   json{{"command", "crossval"},
                        {"config", run_config_to_json(cfg)},
                        {"input_checksum", file_checksum(cfg.input)}},
                   {"crossval.json", "crossval_folds.csv"});
    return 0;
}

int cmd_forecast(const std::string& model_path, int horizon, const std::string& out_dir) {
    const TrainedModel model = load_model(model_path);
    const ForecastResult result =
        forecast_recursive(model, model.forecast.window, model.forecast.start, horizon);
    if (result.beyond_lead_time) {
        std::cerr << "warning: horizon " << horizon << " exceeds the " << kLeadTimeLimitMonths
                  << "-month lead time the model is considered accurate for\n";
    }

    const std::string tag = to_string(model.kind);
    std::string csv = "date,observed,ffnn,lstm,lstm_la\n";
    YearMonth ym = result.start;
    for (double value : result.predictions) {
        const std::string cell = fmt("%.6f", value);
        csv += ym.str() + ",";  // observed stays blank for future months
        csv += ",";
        csv += (model.kind == ModelKind::ffnn ? cell : "") + ",";
        csv += (model.kind == ModelKind::lstm ? cell : "") + ",";
        csv += (model.kind == ModelKind::lstm_la ? cell : "") + "\n";
        ym = ym.next();
    }
    write_text_file(out_path(out_dir, "forecast.csv"), csv);

    write_manifest(out_dir, "manifest_forecast.json",
                   json{{"command", "forecast"},
                        {"model_file", model_path},
                        {"model_checksum", file_checksum(model_path)},
                        {"horizon", horizon},
                        {"start", result.start.str()},
                        {"rainfall_assumption", result.rainfall_assumption}},
                   {"forecast.csv"});

    std::cout << "forecast " << tag << ": " << result.predictions.size() << " months from "
              << result.start.str() << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"LSTM groundwater-level forecasting with Lion Algorithm weight optimization"};
    app.require_subcommand(1);

    int synth_months = 0;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic monthly CSV series");
    synth->add_option("--months", synth_months, "number of months (>= 24)")->required();
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output CSV path")->required();

    std::string train_model_name, train_config, train_out;
    std::optional<std::uint64_t> train_seed;
    auto* train = app.add_subcommand("train", "train one model family");
    train->add_option("--model", train_model_name, "ffnn, lstm or lstm-la")->required();
    train->add_option("--config", train_config, "run config JSON")->required();
    train->add_option("--seed", train_seed, "override the config seed");
    train->add_option("--out", train_out, "override the output directory");

    std::string eval_model, eval_data, eval_out = ".";
    auto* evaluate = app.add_subcommand("evaluate", "test-split metrics of a saved model");
    evaluate->add_option("--model", eval_model, "model JSON path")->required();
    evaluate->add_option("--data", eval_data, "input CSV path")->required();
    evaluate->add_option("--out", eval_out, "output directory");

    std::string compare_config, compare_out;
    std::optional<std::uint64_t> compare_seed;
    auto* compare = app.add_subcommand("compare", "train and evaluate all three models");
    compare->add_option("--config", compare_config, "run config JSON")->required();
    compare->add_option("--seed", compare_seed, "override the config seed");
    compare->add_option("--out", compare_out, "override the output directory");

    std::string crossval_config, crossval_out;
    std::optional<std::uint64_t> crossval_seed;
    auto* crossval = app.add_subcommand("crossval", "k-fold cross-validation of all models");
    crossval->add_option("--config", crossval_config, "run config JSON")->required();
    crossval->add_option("--seed", crossval_seed, "override the config seed");
    crossval->add_option("--out", crossval_out, "override the output directory");

    std::string fc_model, fc_out = ".";
    int fc_horizon = 12;
    auto* forecast = app.add_subcommand("forecast", "recursive multi-month forecast");
    forecast->add_option("--model", fc_model, "model JSON path")->required();
    forecast->add_option("--horizon", fc_horizon, "months ahead (warns beyond 12)")
        ->check(CLI::NonNegativeNumber);
    forecast->add_option("--out", fc_out, "output directory");

    try {
        app.parse(argc, argv);
        if (synth->parsed()) return cmd_synth(synth_months, synth_seed, synth_out);
        if (train->parsed()) return cmd_train(train_model_name, train_config, train_seed, train_out);
        if (evaluate->parsed()) return cmd_evaluate(eval_model, eval_data, eval_out);
        if (compare->parsed()) return cmd_compare(compare_config, compare_seed, compare_out);
        if (crossval->parsed()) return cmd_crossval(crossval_config, crossval_seed, crossval_out);
        if (forecast->parsed()) return cmd_forecast(fc_model, fc_horizon, fc_out);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace gwlion
