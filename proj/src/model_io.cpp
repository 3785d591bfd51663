#include "gwlion/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace gwlion {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

template <typename T>
void read_if_present(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

json scale_to_json(const FeatureScale& s) {
    return {{"min", s.min}, {"max", s.max}};
}

FeatureScale scale_from_json(const json& j, const std::string& where) {
    check_keys(j, where, {"min", "max"});
    FeatureScale s;
    s.min = j.at("min").get<double>();
    s.max = j.at("max").get<double>();
    s.constant = (s.min == s.max);
    return s;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
    check_keys(j, "config",
               {"input", "out_dir", "seed", "lag", "hidden", "train_fraction", "folds", "la",
                "ffnn", "lstm"});
    RunConfig cfg;
    read_if_present(j, "input", cfg.input);
    read_if_present(j, "out_dir", cfg.out_dir);
    read_if_present(j, "seed", cfg.pipeline.seed);
    read_if_present(j, "lag", cfg.pipeline.lag);
    read_if_present(j, "hidden", cfg.pipeline.hidden);
    read_if_present(j, "train_fraction", cfg.pipeline.train_fraction);
    read_if_present(j, "folds", cfg.pipeline.folds);
    if (auto it = j.find("la"); it != j.end()) {
        check_keys(*it, "config.la",
                   {"n", "nrm", "mutation_rate", "epochs", "bound_low", "bound_high", "threads"});
        read_if_present(*it, "n", cfg.pipeline.la.n);
        read_if_present(*it, "nrm", cfg.pipeline.la.nrm);
        read_if_present(*it, "mutation_rate", cfg.pipeline.la.mutation_rate);
        read_if_present(*it, "epochs", cfg.pipeline.la.epochs);
        read_if_present(*it, "bound_low", cfg.pipeline.la.bound_low);
        read_if_present(*it, "bound_high", cfg.pipeline.la.bound_high);
        read_if_present(*it, "threads", cfg.pipeline.la.threads);
    }
    for (const char* model : {"ffnn", "lstm"}) {
        if (auto it = j.find(model); it != j.end()) {
            check_keys(*it, std::string("config.") + model, {"learning_rate", "epochs"});
            GdSettings& gd = model == std::string("ffnn") ? cfg.pipeline.ffnn : cfg.pipeline.lstm;
            read_if_present(*it, "learning_rate", gd.learning_rate);
            read_if_present(*it, "epochs", gd.epochs);
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    try {
        return run_config_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

json run_config_to_json(const RunConfig& cfg) {
    return {{"input", cfg.input},
            {"out_dir", cfg.out_dir},
            {"seed", cfg.pipeline.seed},
            {"lag", cfg.pipeline.lag},
            {"hidden", cfg.pipeline.hidden},
            {"train_fraction", cfg.pipeline.train_fraction},
            {"folds", cfg.pipeline.folds},
            {"la",
             {{"n", cfg.pipeline.la.n},
              {"nrm", cfg.pipeline.la.nrm},
              {"mutation_rate", cfg.pipeline.la.mutation_rate},
              {"epochs", cfg.pipeline.la.epochs},
              {"bound_low", cfg.pipeline.la.bound_low},
              {"bound_high", cfg.pipeline.la.bound_high},
              {"threads", cfg.pipeline.la.threads}}},
            {"ffnn",
             {{"learning_rate", cfg.pipeline.ffnn.learning_rate},
              {"epochs", cfg.pipeline.ffnn.epochs}}},
            {"lstm",
             {{"learning_rate", cfg.pipeline.lstm.learning_rate},
              {"epochs", cfg.pipeline.lstm.epochs}}}};
}

json model_to_json(const TrainedModel& model) {
    json params;
    if (model.kind == ModelKind::ffnn) {
        const auto& p = std::get<FfnnParams>(model.params);
        std::vector<double> w1;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 2; ++c) w1.push_back(p.w1(r, c));
        params = {{"w1", w1},
                  {"b1", std::vector<double>(p.b1.data(), p.b1.data() + 3)},
                  {"w2", std::vector<double>(p.w2.data(), p.w2.data() + 3)},
                  {"b2", p.b2}};
    } else {
        const auto& p = std::get<LstmParams>(model.params);
        const Eigen::VectorXd genome = params_to_genome(p);
        params = {{"h", p.hidden()},
                  {"d", p.input_dim()},
                  {"genome", std::vector<double>(genome.data(), genome.data() + genome.size())}};
    }

    std::vector<std::vector<double>> window;
    for (Eigen::Index t = 0; t < model.forecast.window.rows(); ++t) {
        window.push_back({model.forecast.window(t, 0), model.forecast.window(t, 1)});
    }

    return {{"kind", to_string(model.kind)},
            {"lag", model.lag},
            {"train_fraction", model.train_fraction},
            {"scaling",
             {{"gwl", scale_to_json(model.scaling.gwl)},
              {"rainfall", scale_to_json(model.scaling.rainfall)}}},
            {"params", params},
            {"training_trace", model.training_trace},
            {"forecast",
             {{"start", model.forecast.start.str()},
              {"window", window},
              {"climatology", model.forecast.climatology}}}};
}

TrainedModel model_from_json(const json& j) {
    check_keys(j, "model",
               {"kind", "lag", "train_fraction", "scaling", "params", "training_trace",
                "forecast"});
    TrainedModel model;
    model.kind = parse_model_kind(j.at("kind").get<std::string>());
    model.lag = j.at("lag").get<int>();
    model.train_fraction = j.at("train_fraction").get<double>();

    const json& scaling = j.at("scaling");
    check_keys(scaling, "model.scaling", {"gwl", "rainfall"});
    model.scaling.gwl = scale_from_json(scaling.at("gwl"), "model.scaling.gwl");
    model.scaling.rainfall = scale_from_json(scaling.at("rainfall"), "model.scaling.rainfall");

    const json& params = j.at("params");
    if (model.kind == ModelKind::ffnn) {
        check_keys(params, "model.params", {"w1", "b1", "w2", "b2"});
        FfnnParams p;
        const auto w1 = params.at("w1").get<std::vector<double>>();
        const auto b1 = params.at("b1").get<std::vector<double>>();
        const auto w2 = params.at("w2").get<std::vector<double>>();
        if (w1.size() != 6 || b1.size() != 3 || w2.size() != 3) {
            throw ConfigError("model.params: bad ffnn shapes");
        }
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 2; ++c) p.w1(r, c) = w1[r * 2 + c];
        for (int i = 0; i < 3; ++i) p.b1(i) = b1[i];
        for (int i = 0; i < 3; ++i) p.w2(i) = w2[i];
        p.b2 = params.at("b2").get<double>();
        model.params = p;
    } else {
        check_keys(params, "model.params", {"h", "d", "genome"});
        const int h = params.at("h").get<int>();
        const int d = params.at("d").get<int>();
        const auto flat = params.at("genome").get<std::vector<double>>();
        Eigen::VectorXd genome(flat.size());
        for (std::size_t i = 0; i < flat.size(); ++i) genome(i) = flat[i];
        model.params = genome_to_params(genome, h, d);
    }

    if (auto it = j.find("training_trace"); it != j.end()) {
        model.training_trace = it->get<std::vector<double>>();
    }

    const json& fc = j.at("forecast");
    check_keys(fc, "model.forecast", {"start", "window", "climatology"});
    model.forecast.start = parse_year_month(fc.at("start").get<std::string>());
    const auto window = fc.at("window").get<std::vector<std::vector<double>>>();
    model.forecast.window.resize(window.size(), 2);
    for (std::size_t t = 0; t < window.size(); ++t) {
        if (window[t].size() != 2) throw ConfigError("model.forecast.window: bad row width");
        model.forecast.window(t, 0) = window[t][0];
        model.forecast.window(t, 1) = window[t][1];
    }
    const auto clim = fc.at("climatology").get<std::vector<double>>();
    if (clim.size() != 12) throw ConfigError("model.forecast.climatology: expected 12 values");
    std::copy(clim.begin(), clim.end(), model.forecast.climatology.begin());
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    write_json_file(model_to_json(model), path);
}

TrainedModel load_model(const std::string& path) {
    try {
        return model_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("model '" + path + "': " + e.what());
    }
}

json metrics_to_json(const MetricSet& m) {
    return {{"rmse", m.rmse}, {"mse", m.mse}, {"mae", m.mae}, {"accuracy_pct", m.accuracy_pct}};
}

json cv_to_json(const CvSummary& s) {
    return {{"folds", s.fold_accuracies}, {"min", s.min}, {"q1", s.q1},
            {"median", s.median},         {"q3", s.q3},   {"max", s.max}};
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("'" + path + "': " + e.what());
    }
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::uint64_t hash = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

}  // namespace gwlion
