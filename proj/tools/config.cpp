// Copyright 2026 The latentqubo Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"

namespace lqcli {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ValidationError("config key '" + key + "': cannot parse '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)>;

template <class T>
Setter num(T ExperimentConfig::*field) {
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_number<T>(k, v); };
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"instance.cities", num(&ExperimentConfig::cities)},
        {"instance.seed", num(&ExperimentConfig::instance_seed)},
        {"instance.path", [](auto& c, auto&, auto& v) { c.instance_path = v; }},
        {"instance.count", num(&ExperimentConfig::n_instances)},

        {"bae.latent_bits", [](auto& c, auto& k, auto& v) { c.bae.latent_bits = parse_number<int>(k, v); }},
        {"bae.hidden", [](auto& c, auto& k, auto& v) { c.bae.hidden = parse_number<int>(k, v); }},
        {"bae.layers", [](auto& c, auto& k, auto& v) { c.bae.layers = parse_number<int>(k, v); }},
        {"bae.lr", [](auto& c, auto& k, auto& v) { c.bae.lr = parse_number<double>(k, v); }},
        {"bae.weight_decay", [](auto& c, auto& k, auto& v) { c.bae.weight_decay = parse_number<double>(k, v); }},
        {"bae.epochs", [](auto& c, auto& k, auto& v) { c.bae.epochs = parse_number<int>(k, v); }},
        {"bae.batch_size", [](auto& c, auto& k, auto& v) { c.bae.batch_size = parse_number<int>(k, v); }},
        {"bae.data_seed", [](auto& c, auto& k, auto& v) { c.bae.data_seed = parse_number<std::uint64_t>(k, v); }},
        {"bae.n_tours", [](auto& c, auto& k, auto& v) { c.bae.n_tours = parse_number<int>(k, v); }},
        {"bae.train_fraction", [](auto& c, auto& k, auto& v) { c.bae.train_fraction = parse_number<double>(k, v); }},
        {"bae.eval_every", [](auto& c, auto& k, auto& v) { c.bae.eval_every = parse_number<int>(k, v); }},
        {"bae.checkpoint", [](auto& c, auto&, auto& v) { c.checkpoint = v; }},

        {"fm.rank", [](auto& c, auto& k, auto& v) { c.fmqa.fm.rank = parse_number<int>(k, v); }},
        {"fm.lr", [](auto& c, auto& k, auto& v) { c.fmqa.fm.lr = parse_number<double>(k, v); }},
        {"fm.epochs", [](auto& c, auto& k, auto& v) { c.fmqa.fm.epochs = parse_number<int>(k, v); }},
        {"fm.weight_decay", [](auto& c, auto& k, auto& v) { c.fmqa.fm.weight_decay = parse_number<double>(k, v); }},
        {"fm.init_std", [](auto& c, auto& k, auto& v) { c.fmqa.fm.init_std = parse_number<double>(k, v); }},
        {"fm.scaling", [](auto& c, auto&, auto& v) { c.fmqa.fm.scaling = parse_scaling(v); }},

        {"anneal.sweeps", [](auto& c, auto& k, auto& v) { c.fmqa.anneal.n_sweeps = parse_number<int>(k, v); }},
        {"anneal.beta_start", [](auto& c, auto& k, auto& v) { c.fmqa.anneal.beta_start = parse_number<double>(k, v); }},
        {"anneal.beta_end", [](auto& c, auto& k, auto& v) { c.fmqa.anneal.beta_end = parse_number<double>(k, v); }},
        {"anneal.reads", [](auto& c, auto& k, auto& v) { c.fmqa.anneal.n_reads = parse_number<int>(k, v); }},

        {"fmqa.n_init", [](auto& c, auto& k, auto& v) { c.fmqa.n_init = parse_number<int>(k, v); }},
        {"fmqa.iters", [](auto& c, auto& k, auto& v) { c.fmqa.n_iters = parse_number<int>(k, v); }},
        {"fmqa.dedup_max_trials", [](auto& c, auto& k, auto& v) { c.fmqa.dedup_max_trials = parse_number<int>(k, v); }},
        {"fmqa.stop_at_optimum", [](auto& c, auto& k, auto& v) { c.fmqa.stop_at_optimum = parse_bool(k, v) ? 1 : 0; }},

        {"metrics.rho", [](auto& c, auto& k, auto& v) { c.metrics.rho = parse_bool(k, v) ? 1 : 0; }},
        {"metrics.neighborhood", [](auto& c, auto& k, auto& v) { c.metrics.neighborhood = parse_bool(k, v) ? 1 : 0; }},
        {"metrics.local_optimum", [](auto& c, auto& k, auto& v) { c.metrics.local_optimum = parse_bool(k, v) ? 1 : 0; }},
        {"metrics.local_neighborhood",
         [](auto& c, auto& k, auto& v) {
             if (v == "feasible") {
                 c.metrics.local_neighborhood = LQ_LOCAL_FEASIBLE;
             } else if (v == "repaired") {
                 c.metrics.local_neighborhood = LQ_LOCAL_REPAIRED;
             } else {
                 throw ValidationError("config key '" + k + "': expected feasible or repaired, got '" + v + "'");
             }
         }},
        {"metrics.pairs", [](auto& c, auto& k, auto& v) { c.metrics.n_pairs = parse_number<int>(k, v); }},
        {"metrics.m_max", [](auto& c, auto& k, auto& v) { c.metrics.m_max = parse_number<int>(k, v); }},
        {"metrics.tours", [](auto& c, auto& k, auto& v) { c.metrics.n_tours = parse_number<int>(k, v); }},
        {"metrics.flips", [](auto& c, auto& k, auto& v) { c.metrics.n_flips = parse_number<int>(k, v); }},

        {"run.schemes", [](auto& c, auto&, auto& v) { c.schemes = split_list(v); }},
        {"run.seeds", num(&ExperimentConfig::n_seeds)},
        {"run.seed", num(&ExperimentConfig::seed)},
        {"run.threads", num(&ExperimentConfig::threads)},
    };
    return table;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
    lq_bae_config_default(&bae);
    lq_fmqa_config_default(&fmqa);
    lq_metrics_options_default(&metrics);
}

std::vector<std::uint64_t> ExperimentConfig::run_seeds() const {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n_seeds; ++i) out.push_back(seed + static_cast<std::uint64_t>(i));
    return out;
}

std::string ExperimentConfig::to_toml() const {
    std::ostringstream o;
    auto b = [](bool v) { return v ? "true" : "false"; };
    o << "[instance]\n"
      << "cities = " << cities << "\nseed = " << instance_seed << "\npath = " << quote(instance_path)
      << "\ncount = " << n_instances << "\n\n";
    o << "[bae]\n"
      << "latent_bits = " << bae.latent_bits << "\nhidden = " << bae.hidden << "\nlayers = " << bae.layers
      << "\nlr = " << fmt_double(bae.lr) << "\nweight_decay = " << fmt_double(bae.weight_decay)
      << "\nepochs = " << bae.epochs << "\nbatch_size = " << bae.batch_size << "\ndata_seed = " << bae.data_seed
      << "\nn_tours = " << bae.n_tours << "\ntrain_fraction = " << fmt_double(bae.train_fraction)
      << "\neval_every = " << bae.eval_every << "\ncheckpoint = " << quote(checkpoint) << "\n\n";
    o << "[fm]\n"
      << "rank = " << fmqa.fm.rank << "\nlr = " << fmt_double(fmqa.fm.lr) << "\nepochs = " << fmqa.fm.epochs
      << "\nweight_decay = " << fmt_double(fmqa.fm.weight_decay) << "\ninit_std = " << fmt_double(fmqa.fm.init_std)
      << "\nscaling = " << quote(scaling_name(fmqa.fm.scaling)) << "\n\n";
    o << "[anneal]\n"
      << "sweeps = " << fmqa.anneal.n_sweeps << "\nbeta_start = " << fmt_double(fmqa.anneal.beta_start)
      << "\nbeta_end = " << fmt_double(fmqa.anneal.beta_end) << "\nreads = " << fmqa.anneal.n_reads << "\n\n";
    o << "[fmqa]\n"
      << "n_init = " << fmqa.n_init << "\niters = " << fmqa.n_iters << "\ndedup_max_trials = " << fmqa.dedup_max_trials
      << "\nstop_at_optimum = " << b(fmqa.stop_at_optimum != 0) << "\n\n";
    o << "[metrics]\n"
      << "rho = " << b(metrics.rho != 0) << "\nneighborhood = " << b(metrics.neighborhood != 0)
      << "\nlocal_optimum = " << b(metrics.local_optimum != 0) << "\nlocal_neighborhood = "
      << quote(metrics.local_neighborhood == LQ_LOCAL_REPAIRED ? "repaired" : "feasible") << "\npairs = " << metrics.n_pairs
      << "\nm_max = " << metrics.m_max << "\ntours = " << metrics.n_tours << "\nflips = " << metrics.n_flips << "\n\n";
    o << "[run]\nschemes = [";
    for (std::size_t i = 0; i < schemes.size(); ++i) o << (i ? ", " : "") << quote(schemes[i]);
    o << "]\nseeds = " << n_seeds << "\nseed = " << seed << "\nthreads = " << threads << "\n";
    return o.str();
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        std::string key;
        for (const auto& p : item.parents) key += p + ".";
        key += item.name;
        const auto it = setters().find(key);
        if (it == setters().end()) throw ValidationError("unknown config key '" + key + "'");
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
        it->second(cfg, key, value);
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg;
    apply_config_text(cfg, ss.str());
    return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t\"");
        const auto e = item.find_last_not_of(" \t\"");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string scaling_name(lq_target_scaling s) {
    switch (s) {
        case LQ_SCALING_NONE:
            return "none";
        case LQ_SCALING_CENTER:
            return "center";
        case LQ_SCALING_STANDARDIZE:
            return "standardize";
    }
    return "none";
}

lq_target_scaling parse_scaling(const std::string& s) {
    if (s == "none") return LQ_SCALING_NONE;
    if (s == "center") return LQ_SCALING_CENTER;
    if (s == "standardize") return LQ_SCALING_STANDARDIZE;
    throw ValidationError("unknown target scaling '" + s + "' (none, center, standardize)");
}

}  // namespace lqcli
