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

#include "latentqubo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latentqubo/annealer.hpp"
#include "latentqubo/bae.hpp"
#include "latentqubo/encodings.hpp"
#include "latentqubo/error.hpp"
#include "latentqubo/fm.hpp"
#include "latentqubo/nn.hpp"
#include "latentqubo/tsp.hpp"

namespace lq {

namespace {

constexpr int kCities = 8;
constexpr double kGradTol = 1e-4;

struct Outcome {
    bool passed;
    std::string detail;
};

using Check = std::function<Outcome()>;

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

nn::Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    nn::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

FmModel random_fm(Rng& rng, int d, int k) {
    FmModel m(d, k);
    std::normal_distribution<double> n(0.0, 1.0);
    m.w0 = n(rng);
    for (int i = 0; i < d; ++i) m.w(i) = n(rng);
    for (Eigen::Index i = 0; i < m.v.size(); ++i) m.v.data()[i] = n(rng);
    return m;
}

Outcome encodings_round_trip() {
    LogEncoding log(kCities);
    GrayEncoding gray(kCities);
    Rng rng = make_rng(0);
    std::size_t n = 0;
    std::uint64_t expected_rank = 0;
    bool ok = true;
    std::string why;
    for_each_tour(kCities, [&](const Tour& t) {
        ++n;
        if (!ok) return;
        if (lehmer_rank(t) != expected_rank || lehmer_unrank(expected_rank, kCities) != t) {
            ok = false;
            why = "rank mismatch at " + t.to_string();
        } else if (log.decode(log.encode(t), rng).tour != t || gray.decode(gray.encode(t), rng).tour != t) {
            ok = false;
            why = "decode(encode) differs at " + t.to_string();
        }
        ++expected_rank;
    });
    if (ok && n != factorial(kCities - 1)) return {false, "enumerated " + std::to_string(n) + " tours"};
    return {ok, ok ? std::to_string(n) + " tours round-trip under rank, log and gray" : why};
}

Outcome gray_adjacency() {
    GrayEncoding gray(kCities);
    const std::uint64_t total = factorial(kCities - 1);
    for (std::uint64_t r = 0; r + 1 < total; ++r) {
        const auto a = gray.encode(lehmer_unrank(r, kCities));
        const auto b = gray.encode(lehmer_unrank(r + 1, kCities));
        if (hamming_distance(a, b) != 1) return {false, "ranks " + std::to_string(r) + "," + std::to_string(r + 1)};
    }
    return {true, std::to_string(total - 1) + " consecutive pairs at Hamming distance 1"};
}

Outcome random_label_coverage() {
    const auto table = build_random_label_table(kCities, 7);
    std::set<std::uint64_t> labels(table.label_of_rank.begin(), table.label_of_rank.end());
    const bool ok = rank_bits(kCities) == 13 && table.width == 13 && labels.size() == factorial(kCities - 1) &&
                    *labels.rbegin() < (std::uint64_t{1} << 13);
    return {ok, std::to_string(labels.size()) + " distinct labels of width " + std::to_string(table.width)};
}

Outcome fm_fast_vs_naive() {
    Rng rng = make_rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = random_fm(rng, 10, 4);
        for (std::uint64_t v = 0; v < (1U << 10); ++v) {
            const auto z = BitVector::from_integer(v, 10);
            worst = std::max(worst, std::abs(fm_predict(m, z) - fm_predict_naive(m, z)));
        }
    }
    return {worst < 1e-10, "max deviation " + num(worst)};
}

Outcome fm_qubo_exactness() {
    Rng rng = make_rng(12);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = random_fm(rng, 10, 4);
        const auto q = to_qubo(m);
        for (std::uint64_t v = 0; v < (1U << 10); ++v) {
            const auto z = BitVector::from_integer(v, 10);
            worst = std::max(worst, std::abs(fm_predict(m, z) - (qubo_energy(q, z) + q.offset)));
        }
    }
    return {worst < 1e-9, "max deviation " + num(worst)};
}

Outcome qubo_text_round_trip() {
    Rng rng = make_rng(13);
    const auto q = to_qubo(random_fm(rng, 9, 3));
    const auto back = qubo_from_text(qubo_to_text(q));
    const bool ok = back.dim() == q.dim() && back.offset == q.offset && back.q == q.q;
    return {ok, ok ? "bit-exact" : "coefficients differ after round trip"};
}

Outcome annealer_vs_exhaustive() {
    Rng rng = make_rng(14);
    int matched = 0;
    constexpr int kTrials = 10;
    for (int trial = 0; trial < kTrials; ++trial) {
        const auto q = to_qubo(random_fm(rng, 12, 4));
        AnnealSchedule sched;
        sched.n_reads = 100;
        sched.seed = static_cast<std::uint64_t>(trial);
        const auto s = sample(q, sched);
        for (const auto& r : s.reads) {
            if (std::abs(r.energy - qubo_energy(q, r.bits)) > 1e-9) return {false, "reported energy differs"};
        }
        if (s.best().energy <= solve_exhaustive(q).energy + 1e-9) ++matched;
    }
    return {matched == kTrials, std::to_string(matched) + "/" + std::to_string(kTrials) + " minima found"};
}

Outcome greedy_local_optimality() {
    Rng rng = make_rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = to_qubo(random_fm(rng, 12, 3));
        BitVector z(12);
        for (std::size_t i = 0; i < 12; ++i) z.set(i, (rng() & 1U) != 0);
        const auto out = greedy_descent(q, z);
        if (qubo_energy(q, out) > qubo_energy(q, z) + 1e-12) return {false, "descent increased energy"};
        for (int i = 0; i < 12; ++i) {
            if (flip_delta(q, out, i) < -1e-12) return {false, "improving flip remains"};
        }
    }
    return {true, "20 descents end at Hamming-1 local optima"};
}

Outcome linear_gradients() {
    Rng rng = make_rng(21);
    nn::Linear layer("lin", 5, 4);
    layer.init(rng);
    const nn::Matrix x = random_matrix(rng, 5, 3);
    const nn::Matrix proj = random_matrix(rng, 4, 3);
    auto params = layer.params();
    const auto report = nn::grad_check([&] { return layer.forward(x).cwiseProduct(proj).sum(); },
                                       [&] {
                                           for (auto* p : params) p->zero_grad();
                                           layer.backward(x, proj);
                                       },
                                       params);
    return {report.max_rel_error < kGradTol, "max relative error " + num(report.max_rel_error)};
}

Outcome gru_gradients() {
    Rng rng = make_rng(22);
    nn::GruCell cell("gru", 4, 5);
    cell.init(rng);
    std::vector<nn::Matrix> xs;
    for (int t = 0; t < 3; ++t) xs.push_back(random_matrix(rng, 4, 2));
    const nn::Matrix h0 = random_matrix(rng, 5, 2);
    const nn::Matrix proj = random_matrix(rng, 5, 2);
    auto params = cell.params();
    auto loss = [&] {
        nn::Matrix h = h0;
        for (const auto& x : xs) h = cell.step(x, h);
        return h.cwiseProduct(proj).sum();
    };
    auto backward = [&] {
        for (auto* p : params) p->zero_grad();
        std::vector<nn::GruCell::Cache> caches(xs.size());
        nn::Matrix h = h0;
        for (std::size_t t = 0; t < xs.size(); ++t) h = cell.step(xs[t], h, &caches[t]);
        nn::Matrix dh = proj, dh_prev;
        for (std::size_t t = xs.size(); t-- > 0;) {
            cell.backward(caches[t], dh, dh_prev);
            dh = dh_prev;
        }
    };
    const auto report = nn::grad_check(loss, backward, params);
    return {report.max_rel_error < kGradTol, "3 steps, max relative error " + num(report.max_rel_error)};
}

Outcome fm_gradients() {
    Rng rng = make_rng(23);
    auto m = random_fm(rng, 6, 3);
    std::vector<LabeledSample> data;
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 12; ++i) {
        BitVector z(6);
        for (std::size_t b = 0; b < 6; ++b) z.set(b, (rng() & 1U) != 0);
        data.push_back({z, n(rng)});
    }
    const auto analytic = fm_mse_gradient(m, data);
    std::vector<double*> slots{&m.w0};
    for (Eigen::Index i = 0; i < m.w.size(); ++i) slots.push_back(&m.w(i));
    for (Eigen::Index i = 0; i < m.v.size(); ++i) slots.push_back(m.v.data() + i);
    double worst = 0.0;
    constexpr double h = 1e-5;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const double saved = *slots[k];
        *slots[k] = saved + h;
        const double up = fm_mse(m, data);
        *slots[k] = saved - h;
        const double down = fm_mse(m, data);
        *slots[k] = saved;
        const double numeric = (up - down) / (2 * h);
        const double a = analytic(static_cast<Eigen::Index>(k));
        worst = std::max(worst, std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6}));
    }
    return {worst < kGradTol, "max relative error " + num(worst)};
}

BaeConfig tiny_bae_config() {
    BaeConfig cfg;
    cfg.n_cities = 5;
    cfg.latent_bits = 4;
    cfg.hidden = 6;
    cfg.layers = 2;
    return cfg;
}

Outcome decoder_gradients() {
    const auto cfg = tiny_bae_config();
    BaeModel model(cfg);
    Rng rng = make_rng(24);
    model.init(rng);
    const auto tours = sample_distinct_tours(cfg.n_cities, 3, 1);
    nn::Matrix z = random_matrix(rng, cfg.latent_bits, 3).cwiseAbs();
    auto params = model.params();
    nn::Matrix grad_z;
    const auto report = nn::grad_check([&] { return model.decoder_loss(tours, z); },
                                       [&] {
                                           for (auto* p : params) p->zero_grad();
                                           model.decoder_loss_backward(tours, z, grad_z);
                                       },
                                       params);
    return {report.max_rel_error < kGradTol, "max relative error " + num(report.max_rel_error) + " (" +
                                                 report.worst_param + ")"};
}

Outcome straight_through() {
    const auto cfg = tiny_bae_config();
    BaeModel model(cfg);
    Rng rng = make_rng(25);
    model.init(rng);
    const auto tours = sample_distinct_tours(cfg.n_cities, 4, 2);
    for (auto* p : model.params()) p->zero_grad();
    BaeModel::SteTrace trace;
    Rng step_rng = make_rng(26);
    model.forward_backward(tours, step_rng, true, &trace);
    const double diff = (trace.grad_z - trace.grad_p).cwiseAbs().maxCoeff();
    const bool nonzero = trace.grad_z.cwiseAbs().maxCoeff() > 0.0;
    return {diff == 0.0 && nonzero, "dL/dp equals dL/dz exactly (max |diff| " + num(diff) + ")"};
}

Outcome repair_fuzz() {
    Rng rng = make_rng(31);
    std::vector<int> seq(kCities);
    for (int trial = 0; trial < 10000; ++trial) {
        for (auto& c : seq) c = uniform_int(rng, -2, kCities + 2);
        const Tour t = repair(seq, kCities);
        if (!t.is_canonical() || !is_permutation_of_cities(t.order())) return {false, "invalid output"};
        if (repair(t.order(), kCities) != t) return {false, "not idempotent on " + t.to_string()};
    }
    return {true, "10000 random sequences repaired to canonical tours"};
}

Outcome checkpoint_valid(const std::string& path) {
    try {
        const auto model = load_checkpoint(path);
        return {true, "checksum " + model_checksum(*model)};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

struct Entry {
    std::string suite;
    std::string name;
    Check check;
};

std::vector<Entry> registry() {
    return {
        {"encodings", "rank_log_gray_round_trip", encodings_round_trip},
        {"encodings", "gray_adjacency", gray_adjacency},
        {"encodings", "random_label_coverage", random_label_coverage},
        {"fm_qubo", "fast_equals_naive", fm_fast_vs_naive},
        {"fm_qubo", "qubo_exactness", fm_qubo_exactness},
        {"fm_qubo", "text_round_trip", qubo_text_round_trip},
        {"annealer", "matches_exhaustive", annealer_vs_exhaustive},
        {"annealer", "greedy_local_optimality", greedy_local_optimality},
        {"gradients", "linear", linear_gradients},
        {"gradients", "gru_three_steps", gru_gradients},
        {"gradients", "fm_loss", fm_gradients},
        {"gradients", "bae_decoder", decoder_gradients},
        {"gradients", "straight_through", straight_through},
        {"repair", "fuzz_and_idempotence", repair_fuzz},
    };
}

}  // namespace

std::vector<std::string> verify_suite_names() {
    std::vector<std::string> names;
    for (const auto& e : registry()) {
        if (std::find(names.begin(), names.end(), e.suite) == names.end()) names.push_back(e.suite);
    }
    names.push_back("checkpoint");
    return names;
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    const auto known = verify_suite_names();
    for (const auto& s : opts.suites) {
        require(std::find(known.begin(), known.end(), s) != known.end(), ErrorCode::kInvalidArgument,
                "unknown verification suite '" + s + "'");
    }
    auto selected = [&](const std::string& suite) {
        return opts.suites.empty() || std::find(opts.suites.begin(), opts.suites.end(), suite) != opts.suites.end();
    };
    auto timed = [](const std::string& suite, const std::string& name, const Check& check) {
        CheckResult r{suite, name, false, "", 0.0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto out = check();
            r.passed = out.passed;
            r.detail = out.detail;
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };

    std::vector<CheckResult> results;
    for (const auto& e : registry()) {
        if (selected(e.suite)) results.push_back(timed(e.suite, e.name, e.check));
    }
    if (!opts.checkpoint_path.empty() && selected("checkpoint")) {
        const std::string path = opts.checkpoint_path;
        results.push_back(timed("checkpoint", "load_and_checksum", [path] { return checkpoint_valid(path); }));
    }
    return results;
}

std::string verification_json(const std::vector<CheckResult>& results) {
    nlohmann::ordered_json doc;
    std::size_t failed = 0;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        checks.push_back({{"suite", r.suite},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"detail", r.detail},
                          {"seconds", r.seconds}});
    }
    doc["passed"] = failed == 0;
    doc["n_checks"] = results.size();
    doc["n_failed"] = failed;
    doc["checks"] = checks;
    return doc.dump(2) + "\n";
}

}  // namespace lq
