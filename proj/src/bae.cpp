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

#include "latentqubo/bae.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "latentqubo/error.hpp"
#include "latentqubo/sha256.hpp"

namespace lq {

using nn::Matrix;

namespace {

constexpr Eigen::Index kEvalChunk = 1024;

// Column b holds onehot(tours[b][pos]).
Matrix one_hot(std::span<const Tour> tours, int pos, int n_cities) {
    Matrix x = Matrix::Zero(n_cities, static_cast<Eigen::Index>(tours.size()));
    for (std::size_t b = 0; b < tours.size(); ++b) x(tours[b][pos] - 1, static_cast<Eigen::Index>(b)) = 1.0;
    return x;
}

Matrix codes_to_matrix(std::span<const BitVector> codes, std::size_t width) {
    Matrix z(static_cast<Eigen::Index>(width), static_cast<Eigen::Index>(codes.size()));
    for (std::size_t b = 0; b < codes.size(); ++b) {
        require(codes[b].width() == width, ErrorCode::kDimensionMismatch,
                "latent code has " + std::to_string(codes[b].width()) + " bits, model expects " + std::to_string(width));
        for (std::size_t i = 0; i < width; ++i) z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) = codes[b][i];
    }
    return z;
}

std::string fmt_double(double v) {
    if (v != v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void BaeConfig::validate() const {
    require(n_cities >= 3 && n_cities <= kMaxEnumerableCities, ErrorCode::kInvalidArgument,
            "bAE supports 3.." + std::to_string(kMaxEnumerableCities) + " cities");
    require(latent_bits >= 1 && latent_bits <= 64, ErrorCode::kInvalidArgument, "latent bits must be in [1, 64]");
    require(hidden >= 1 && layers >= 1, ErrorCode::kInvalidArgument, "hidden size and layer count must be positive");
    require(lr >= 0.0 && weight_decay >= 0.0, ErrorCode::kInvalidArgument, "learning rate and weight decay must be >= 0");
    require(epochs >= 0 && batch_size >= 1 && eval_every >= 1, ErrorCode::kInvalidArgument,
            "epochs >= 0, batch size >= 1 and eval interval >= 1 required");
    require(train_fraction > 0.0 && train_fraction < 1.0, ErrorCode::kInvalidArgument, "train fraction must be in (0, 1)");
    require(n_tours >= 2, ErrorCode::kInvalidArgument, "need at least two tours");
}

std::string epoch_csv_header() { return "epoch,train_loss,valid_loss,train_acc,valid_acc\n"; }

std::string epoch_csv_row(const EpochRecord& rec) {
    return std::to_string(rec.epoch) + "," + fmt_double(rec.train_loss) + "," + fmt_double(rec.valid_loss) + "," +
           fmt_double(rec.train_acc) + "," + fmt_double(rec.valid_acc) + "\n";
}

std::string train_report_csv(const TrainReport& report) {
    std::string s = epoch_csv_header();
    for (const auto& rec : report.epochs) s += epoch_csv_row(rec);
    return s;
}

struct BaeModel::DecoderTape {
    std::vector<std::vector<nn::GruCell::Cache>> caches;  // [layer][step]
    std::vector<Matrix> top;                              // top-layer state per step
    std::vector<Matrix> probs;                            // softmax outputs per step
    std::vector<Matrix> targets;
};

BaeModel::BaeModel(const BaeConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const int L = cfg_.n_cities, h = cfg_.hidden;
    for (int l = 0; l < cfg_.layers; ++l) {
        encoder_.emplace_back("encoder.gru" + std::to_string(l), l == 0 ? L : h, h);
    }
    latent_head_ = nn::Linear("latent_head", h, cfg_.latent_bits);
    init_map_ = nn::Linear("decoder_init", cfg_.latent_bits, cfg_.layers * h);
    for (int l = 0; l < cfg_.layers; ++l) {
        decoder_.emplace_back("decoder.gru" + std::to_string(l), l == 0 ? L : h, h);
    }
    output_head_ = nn::Linear("output_head", h, L);
}

void BaeModel::init(Rng& rng) {
    for (auto& cell : encoder_) cell.init(rng);
    latent_head_.init(rng);
    init_map_.init(rng);
    for (auto& cell : decoder_) cell.init(rng);
    output_head_.init(rng);
}

std::vector<nn::Param*> BaeModel::params() {
    std::vector<nn::Param*> out;
    auto append = [&](std::vector<nn::Param*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
    for (auto& cell : encoder_) append(cell.params());
    append(latent_head_.params());
    append(init_map_.params());
    for (auto& cell : decoder_) append(cell.params());
    append(output_head_.params());
    return out;
}

std::vector<const nn::Param*> BaeModel::params() const {
    auto ps = const_cast<BaeModel*>(this)->params();
    return {ps.begin(), ps.end()};
}

Matrix BaeModel::encoder_top_state(std::span<const Tour> tours,
                                   std::vector<std::vector<nn::GruCell::Cache>>* caches) const {
    const int L = cfg_.n_cities;
    const auto batch = static_cast<Eigen::Index>(tours.size());
    for (const auto& t : tours) {
        require(t.size() == L, ErrorCode::kDimensionMismatch, "tour size does not match the model");
    }
    std::vector<Matrix> h(encoder_.size(), Matrix::Zero(cfg_.hidden, batch));
    if (caches) caches->assign(encoder_.size(), std::vector<nn::GruCell::Cache>(static_cast<std::size_t>(L)));
    for (int t = 0; t < L; ++t) {
        const Matrix x = one_hot(tours, t, L);
        for (std::size_t l = 0; l < encoder_.size(); ++l) {
            auto* cache = caches ? &(*caches)[l][static_cast<std::size_t>(t)] : nullptr;
            h[l] = encoder_[l].step(l == 0 ? x : h[l - 1], h[l], cache);
        }
    }
    return h.back();
}

void BaeModel::encoder_backward(const std::vector<std::vector<nn::GruCell::Cache>>& caches, const Matrix& d_top) {
    const auto batch = d_top.cols();
    std::vector<Matrix> dh(encoder_.size(), Matrix::Zero(cfg_.hidden, batch));
    dh.back() = d_top;
    Matrix dprev;
    for (int t = cfg_.n_cities - 1; t >= 0; --t) {
        for (std::size_t l = encoder_.size(); l-- > 0;) {
            Matrix dx = encoder_[l].backward(caches[l][static_cast<std::size_t>(t)], dh[l], dprev);
            dh[l] = std::move(dprev);
            if (l > 0) dh[l - 1] += dx;
        }
    }
}

double BaeModel::decoder_forward(std::span<const Tour> tours, const Matrix& z, DecoderTape* tape) const {
    const int L = cfg_.n_cities;
    const Eigen::Index h = cfg_.hidden;
    const auto batch = static_cast<Eigen::Index>(tours.size());
    require(z.rows() == cfg_.latent_bits && z.cols() == batch, ErrorCode::kDimensionMismatch,
            "latent matrix shape does not match the batch");
    const Matrix h0 = init_map_.forward(z);
    std::vector<Matrix> state(decoder_.size());
    for (std::size_t l = 0; l < decoder_.size(); ++l) state[l] = h0.middleRows(static_cast<Eigen::Index>(l) * h, h);
    if (tape) {
        tape->caches.assign(decoder_.size(), std::vector<nn::GruCell::Cache>(static_cast<std::size_t>(L)));
        tape->top.resize(static_cast<std::size_t>(L));
        tape->probs.resize(static_cast<std::size_t>(L));
        tape->targets.resize(static_cast<std::size_t>(L));
    }
    double sq = 0.0;
    for (int t = 0; t < L; ++t) {
        // First decoder input is the all-zero start token; then teacher forcing.
        const Matrix x = t == 0 ? Matrix::Zero(L, batch) : one_hot(tours, t - 1, L);
        for (std::size_t l = 0; l < decoder_.size(); ++l) {
            auto* cache = tape ? &tape->caches[l][static_cast<std::size_t>(t)] : nullptr;
            state[l] = decoder_[l].step(l == 0 ? x : state[l - 1], state[l], cache);
        }
        Matrix p = nn::softmax(output_head_.forward(state.back()));
        Matrix target = one_hot(tours, t, L);
        sq += (p - target).squaredNorm();
        if (tape) {
            const auto k = static_cast<std::size_t>(t);
            tape->top[k] = state.back();
            tape->probs[k] = std::move(p);
            tape->targets[k] = std::move(target);
        }
    }
    return sq / (static_cast<double>(batch) * L);
}

Matrix BaeModel::decoder_backward(const DecoderTape& tape, const Matrix& z) {
    const int L = cfg_.n_cities;
    const Eigen::Index h = cfg_.hidden;
    const auto batch = z.cols();
    const double scale = 2.0 / (static_cast<double>(batch) * L);
    std::vector<Matrix> dh(decoder_.size(), Matrix::Zero(h, batch));
    Matrix dprev;
    for (int t = L - 1; t >= 0; --t) {
        const auto k = static_cast<std::size_t>(t);
        const Matrix& p = tape.probs[k];
        const Matrix dp = scale * (p - tape.targets[k]);
        const Eigen::RowVectorXd inner = p.cwiseProduct(dp).colwise().sum();
        const Matrix du = (p.array() * (dp.rowwise() - inner).array()).matrix();
        dh.back() += output_head_.backward(tape.top[k], du);
        for (std::size_t l = decoder_.size(); l-- > 0;) {
            Matrix dx = decoder_[l].backward(tape.caches[l][k], dh[l], dprev);
            dh[l] = std::move(dprev);
            if (l > 0) dh[l - 1] += dx;
        }
    }
    Matrix dh0(static_cast<Eigen::Index>(decoder_.size()) * h, batch);
    for (std::size_t l = 0; l < decoder_.size(); ++l) dh0.middleRows(static_cast<Eigen::Index>(l) * h, h) = dh[l];
    return init_map_.backward(z, dh0);
}

double BaeModel::decoder_loss(std::span<const Tour> tours, const Matrix& z) const {
    return decoder_forward(tours, z, nullptr);
}

double BaeModel::decoder_loss_backward(std::span<const Tour> tours, const Matrix& z, Matrix& grad_z) {
    DecoderTape tape;
    const double loss = decoder_forward(tours, z, &tape);
    grad_z = decoder_backward(tape, z);
    return loss;
}

double BaeModel::forward_backward(std::span<const Tour> tours, Rng& rng, bool stochastic, SteTrace* trace) {
    require(!tours.empty(), ErrorCode::kEmptyInput, "empty training batch");
    std::vector<std::vector<nn::GruCell::Cache>> enc_caches;
    const Matrix top = encoder_top_state(tours, &enc_caches);
    const Matrix p = nn::sigmoid(latent_head_.forward(top));
    Matrix z(p.rows(), p.cols());
    for (Eigen::Index b = 0; b < p.cols(); ++b) {
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            const double xi = stochastic ? uniform01(rng) : 0.5;
            z(i, b) = p(i, b) > xi ? 1.0 : 0.0;
        }
    }
    DecoderTape tape;
    const double loss = decoder_forward(tours, z, &tape);
    const Matrix grad_z = decoder_backward(tape, z);
    // Straight-through: the threshold passes dL/dz to p unchanged.
    const Matrix& grad_p = grad_z;
    if (trace) {
        trace->grad_z = grad_z;
        trace->grad_p = grad_p;
    }
    const Matrix da = (grad_p.array() * p.array() * (1.0 - p.array())).matrix();
    encoder_backward(enc_caches, latent_head_.backward(top, da));
    return loss;
}

Matrix BaeModel::latent_probabilities(std::span<const Tour> tours) const {
    return nn::sigmoid(latent_head_.forward(encoder_top_state(tours, nullptr)));
}

BitVector BaeModel::encode(const Tour& tour, Rng& rng) const {
    const Matrix p = latent_probabilities(std::span<const Tour>(&tour, 1));
    BitVector z(static_cast<std::size_t>(cfg_.latent_bits));
    for (Eigen::Index i = 0; i < p.rows(); ++i) z.set(static_cast<std::size_t>(i), p(i, 0) > uniform01(rng));
    return z;
}

BitVector BaeModel::encode_deterministic(const Tour& tour) const {
    return encode_batch_deterministic(std::span<const Tour>(&tour, 1)).front();
}

std::vector<BitVector> BaeModel::encode_batch_deterministic(std::span<const Tour> tours) const {
    std::vector<BitVector> out;
    out.reserve(tours.size());
    for (std::size_t start = 0; start < tours.size(); start += kEvalChunk) {
        const auto chunk = tours.subspan(start, std::min<std::size_t>(kEvalChunk, tours.size() - start));
        const Matrix p = latent_probabilities(chunk);
        for (Eigen::Index b = 0; b < p.cols(); ++b) {
            BitVector z(static_cast<std::size_t>(cfg_.latent_bits));
            for (Eigen::Index i = 0; i < p.rows(); ++i) z.set(static_cast<std::size_t>(i), p(i, b) > 0.5);
            out.push_back(std::move(z));
        }
    }
    return out;
}

std::vector<int> BaeModel::decode_raw(const BitVector& z) const {
    return decode_raw_batch(std::span<const BitVector>(&z, 1)).front();
}

std::vector<std::vector<int>> BaeModel::decode_raw_batch(std::span<const BitVector> codes) const {
    const int L = cfg_.n_cities;
    const Eigen::Index h = cfg_.hidden;
    std::vector<std::vector<int>> out;
    out.reserve(codes.size());
    for (std::size_t start = 0; start < codes.size(); start += kEvalChunk) {
        const auto chunk = codes.subspan(start, std::min<std::size_t>(kEvalChunk, codes.size() - start));
        const auto batch = static_cast<Eigen::Index>(chunk.size());
        const Matrix h0 = init_map_.forward(codes_to_matrix(chunk, static_cast<std::size_t>(cfg_.latent_bits)));
        std::vector<Matrix> state(decoder_.size());
        for (std::size_t l = 0; l < decoder_.size(); ++l) state[l] = h0.middleRows(static_cast<Eigen::Index>(l) * h, h);
        std::vector<std::vector<int>> seqs(chunk.size(), std::vector<int>(static_cast<std::size_t>(L)));
        Matrix x = Matrix::Zero(L, batch);
        for (int t = 0; t < L; ++t) {
            for (std::size_t l = 0; l < decoder_.size(); ++l) state[l] = decoder_[l].step(l == 0 ? x : state[l - 1], state[l]);
            const Matrix u = output_head_.forward(state.back());
            x.setZero();
            for (Eigen::Index b = 0; b < batch; ++b) {
                Eigen::Index best = 0;
                u.col(b).maxCoeff(&best);
                seqs[static_cast<std::size_t>(b)][static_cast<std::size_t>(t)] = static_cast<int>(best) + 1;
                x(best, b) = 1.0;
            }
        }
        for (auto& s : seqs) out.push_back(std::move(s));
    }
    return out;
}

BaeModel::Evaluation BaeModel::evaluate(std::span<const Tour> tours) const {
    require(!tours.empty(), ErrorCode::kEmptyInput, "evaluation set is empty");
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < tours.size(); start += kEvalChunk) {
        const auto chunk = tours.subspan(start, std::min<std::size_t>(kEvalChunk, tours.size() - start));
        const auto codes = encode_batch_deterministic(chunk);
        loss_sum += decoder_loss(chunk, codes_to_matrix(codes, static_cast<std::size_t>(cfg_.latent_bits))) *
                    static_cast<double>(chunk.size());
        const auto decoded = decode_raw_batch(codes);
        for (std::size_t b = 0; b < chunk.size(); ++b) {
            correct += std::equal(decoded[b].begin(), decoded[b].end(), chunk[b].order().begin(), chunk[b].order().end());
        }
    }
    const auto n = static_cast<double>(tours.size());
    return {loss_sum / n, static_cast<double>(correct) / n};
}

Tour repair(std::span<const int> seq, int n_cities) {
    require(n_cities >= 1, ErrorCode::kInvalidArgument, "repair needs a positive city count");
    std::vector<char> seen(static_cast<std::size_t>(n_cities) + 1, 0);
    std::vector<int> kept;
    kept.reserve(static_cast<std::size_t>(n_cities));
    for (int c : seq) {
        if (c < 1 || c > n_cities || seen[static_cast<std::size_t>(c)]) continue;
        seen[static_cast<std::size_t>(c)] = 1;
        kept.push_back(c);
    }
    for (int c = 1; c <= n_cities; ++c) {
        if (!seen[static_cast<std::size_t>(c)]) kept.push_back(c);
    }
    return canonicalize(kept);
}

namespace {

DecodeResult finish_decode(const std::vector<int>& raw, int n_cities) {
    DecodeResult res;
    res.raw_feasible = static_cast<int>(raw.size()) == n_cities && is_permutation_of_cities(raw);
    res.repaired = !res.raw_feasible;
    res.tour = res.raw_feasible ? canonicalize(raw) : repair(raw, n_cities);
    return res;
}

}  // namespace

DecodeResult decode(const BaeModel& model, const BitVector& z) {
    return finish_decode(model.decode_raw(z), model.n_cities());
}

double reconstruction_accuracy(const BaeModel& model, std::span<const Tour> tours) {
    for (const auto& t : tours) {
        require(t.is_canonical(), ErrorCode::kInvalidTour, "reconstruction accuracy needs canonical tours");
    }
    return model.evaluate(tours).accuracy;
}

DatasetSplit make_training_split(const BaeConfig& cfg) {
    cfg.validate();
    auto tours = sample_distinct_tours(cfg.n_cities, static_cast<std::size_t>(cfg.n_tours), cfg.data_seed);
    const auto n = tours.size();
    auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    DatasetSplit split;
    split.train.assign(tours.begin(), tours.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.valid.assign(tours.begin() + static_cast<std::ptrdiff_t>(n_train), tours.end());
    return split;
}

TrainResult train(const BaeConfig& cfg, std::span<const Tour> train_tours, std::span<const Tour> valid_tours,
                  const EpochCallback& on_epoch) {
    cfg.validate();
    require(!train_tours.empty(), ErrorCode::kEmptyInput, "training set is empty");
    const auto t0 = std::chrono::steady_clock::now();

    TrainResult result;
    result.model = std::make_unique<BaeModel>(cfg);
    BaeModel& model = *result.model;
    Rng init_rng = make_rng(cfg.seed, 1);
    model.init(init_rng);
    nn::AdamW opt(model.params(), {cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});

    Rng shuffle_rng = make_rng(cfg.seed, 2);
    Rng threshold_rng = make_rng(cfg.seed, 3);
    std::vector<std::size_t> idx(train_tours.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<Tour> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch_size));

    result.report.n_train = train_tours.size();
    result.report.n_valid = valid_tours.size();
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(idx.begin(), idx.end(), shuffle_rng);
        double total = 0.0;
        for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            batch.clear();
            const auto stop = std::min(idx.size(), start + static_cast<std::size_t>(cfg.batch_size));
            for (std::size_t k = start; k < stop; ++k) batch.push_back(train_tours[idx[k]]);
            opt.zero_grad();
            const double loss = model.forward_backward(batch, threshold_rng, true);
            require(std::isfinite(loss), ErrorCode::kNumeric,
                    "non-finite training loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                        std::to_string(start));
            total += loss * static_cast<double>(batch.size());
            opt.step();
        }
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = total / static_cast<double>(train_tours.size());
        if (epoch == 1 || epoch == cfg.epochs || epoch % cfg.eval_every == 0) {
            rec.evaluated = true;
            rec.train_acc = model.evaluate(train_tours).accuracy;
            if (!valid_tours.empty()) {
                const auto ev = model.evaluate(valid_tours);
                rec.valid_loss = ev.loss;
                rec.valid_acc = ev.accuracy;
            }
        }
        result.report.epochs.push_back(rec);
        if (on_epoch) on_epoch(rec);
    }
    result.report.checksum = model_checksum(model);
    result.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

TrainResult train(const BaeConfig& cfg, const EpochCallback& on_epoch) {
    const auto split = make_training_split(cfg);
    return train(cfg, split.train, split.valid, on_epoch);
}

std::string model_checksum(const BaeModel& model) {
    Sha256 hash;
    for (const nn::Param* p : model.params()) {
        hash.update(p->value.data(), static_cast<std::size_t>(p->value.size()) * sizeof(double));
    }
    return hash.hex_digest();
}

void save_checkpoint(const BaeModel& model, const std::string& path) {
    const BaeConfig& c = model.config();
    nlohmann::ordered_json j;
    j["format_version"] = kCheckpointFormatVersion;
    j["n_cities"] = c.n_cities;
    j["latent_bits"] = c.latent_bits;
    j["hidden"] = c.hidden;
    j["layers"] = c.layers;
    j["seed"] = c.seed;
    j["training"] = {{"lr", c.lr},
                     {"weight_decay", c.weight_decay},
                     {"epochs", c.epochs},
                     {"batch_size", c.batch_size},
                     {"data_seed", c.data_seed},
                     {"n_tours", c.n_tours},
                     {"train_fraction", c.train_fraction},
                     {"eval_every", c.eval_every}};
    j["checksum"] = model_checksum(model);
    j["params"] = nlohmann::ordered_json::array();
    for (const nn::Param* p : model.params()) {
        nlohmann::ordered_json e;
        e["name"] = p->name;
        e["rows"] = p->value.rows();
        e["cols"] = p->value.cols();
        e["data"] = std::vector<double>(p->value.data(), p->value.data() + p->value.size());
        j["params"].push_back(std::move(e));
    }
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path + " for writing");
    out << j.dump() << "\n";
    require(static_cast<bool>(out), ErrorCode::kIo, "failed writing checkpoint " + path);
}

std::unique_ptr<BaeModel> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open checkpoint " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        const auto j = nlohmann::json::parse(ss.str());
        const int version = j.at("format_version").get<int>();
        require(version == kCheckpointFormatVersion, ErrorCode::kFormat,
                "unsupported checkpoint format_version " + std::to_string(version));
        BaeConfig c;
        c.n_cities = j.at("n_cities").get<int>();
        c.latent_bits = j.at("latent_bits").get<int>();
        c.hidden = j.at("hidden").get<int>();
        c.layers = j.at("layers").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        const auto& tr = j.at("training");
        c.lr = tr.at("lr").get<double>();
        c.weight_decay = tr.at("weight_decay").get<double>();
        c.epochs = tr.at("epochs").get<int>();
        c.batch_size = tr.at("batch_size").get<int>();
        c.data_seed = tr.at("data_seed").get<std::uint64_t>();
        c.n_tours = tr.at("n_tours").get<int>();
        c.train_fraction = tr.at("train_fraction").get<double>();
        c.eval_every = tr.at("eval_every").get<int>();
        auto model = std::make_unique<BaeModel>(c);
        const auto params = model->params();
        const auto& stored = j.at("params");
        require(stored.size() == params.size(), ErrorCode::kFormat, "checkpoint parameter count does not match header");
        for (std::size_t k = 0; k < params.size(); ++k) {
            nn::Param& p = *params[k];
            const auto& e = stored[k];
            const auto name = e.at("name").get<std::string>();
            const auto rows = e.at("rows").get<Eigen::Index>();
            const auto cols = e.at("cols").get<Eigen::Index>();
            require(name == p.name && rows == p.value.rows() && cols == p.value.cols(), ErrorCode::kFormat,
                    "checkpoint parameter " + name + " has shape " + std::to_string(rows) + "x" + std::to_string(cols) +
                        ", header implies " + p.name + " " + std::to_string(p.value.rows()) + "x" +
                        std::to_string(p.value.cols()));
            const auto data = e.at("data").get<std::vector<double>>();
            require(static_cast<Eigen::Index>(data.size()) == p.value.size(), ErrorCode::kFormat,
                    "checkpoint parameter " + name + " has the wrong element count");
            std::copy(data.begin(), data.end(), p.value.data());
            p.grad.setZero(rows, cols);
        }
        if (j.contains("checksum")) {
            require(j.at("checksum").get<std::string>() == model_checksum(*model), ErrorCode::kFormat,
                    "checkpoint checksum mismatch (corrupt file?)");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::kFormat, "malformed checkpoint " + path + ": " + e.what());
    }
}

BaeEncoding::BaeEncoding(std::shared_ptr<const BaeModel> model) : model_(std::move(model)) {
    require(model_ != nullptr, ErrorCode::kInvalidArgument, "null bAE model");
}

std::vector<BitVector> BaeEncoding::encode_batch(std::span<const Tour> tours) const {
    return model_->encode_batch_deterministic(tours);
}

std::vector<DecodeResult> BaeEncoding::decode_batch(std::span<const BitVector> codes, Rng&) const {
    const auto raw = model_->decode_raw_batch(codes);
    std::vector<DecodeResult> out;
    out.reserve(raw.size());
    for (const auto& seq : raw) out.push_back(finish_decode(seq, model_->n_cities()));
    return out;
}

}  // namespace lq
