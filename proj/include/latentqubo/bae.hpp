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

#pragma once

// Binary autoencoder over tours: GRU encoder -> sigmoid head -> threshold
// binarization (straight-through gradients) -> latent-initialized GRU decoder.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "latentqubo/encodings.hpp"
#include "latentqubo/nn.hpp"

namespace lq {

struct BaeConfig {
    int n_cities = 8;
    int latent_bits = 14;
    int hidden = 64;
    int layers = 2;
    double lr = 1e-3;
    double weight_decay = 0.01;
    int epochs = 2000;
    int batch_size = 64;
    std::uint64_t seed = 0;       // parameter init, shuffling, stochastic thresholds
    std::uint64_t data_seed = 0;  // which tours are drawn for the dataset
    int n_tours = 5000;
    double train_fraction = 0.8;
    // Deterministic train/valid evaluation runs every `eval_every` epochs and
    // always on the first and last epoch.
    int eval_every = 1;

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;  // mean loss of the epoch's optimization pass
    double valid_loss = std::numeric_limits<double>::quiet_NaN();
    double train_acc = std::numeric_limits<double>::quiet_NaN();
    double valid_acc = std::numeric_limits<double>::quiet_NaN();
    bool evaluated = false;  // the three deterministic columns are set
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    std::string checksum;
    double wall_seconds = 0.0;
    std::size_t n_train = 0;
    std::size_t n_valid = 0;
};

std::string train_report_csv(const TrainReport& report);
std::string epoch_csv_header();
std::string epoch_csv_row(const EpochRecord& rec);

class BaeModel {
 public:
    // Gradients captured at the binarization step during one backward pass.
    struct SteTrace {
        nn::Matrix grad_z;  // dL/dz reaching the threshold from the decoder
        nn::Matrix grad_p;  // dL/dp handed to the sigmoid head
    };

    explicit BaeModel(const BaeConfig& cfg);

    const BaeConfig& config() const noexcept { return cfg_; }
    int n_cities() const noexcept { return cfg_.n_cities; }
    int latent_bits() const noexcept { return cfg_.latent_bits; }

    void init(Rng& rng);

    // Parameters in checkpoint order.
    std::vector<nn::Param*> params();
    std::vector<const nn::Param*> params() const;

    // Sigmoid-head probabilities, one column per tour.
    nn::Matrix latent_probabilities(std::span<const Tour> tours) const;

    BitVector encode(const Tour& tour, Rng& rng) const;  // stochastic threshold
    BitVector encode_deterministic(const Tour& tour) const;  // threshold at 0.5
    std::vector<BitVector> encode_batch_deterministic(std::span<const Tour> tours) const;

    // Greedy autoregressive decoding; entries are city labels in 1..L but may repeat.
    std::vector<int> decode_raw(const BitVector& z) const;
    std::vector<std::vector<int>> decode_raw_batch(std::span<const BitVector> codes) const;

    // Teacher-forced loss of the decoder for given latent codes (columns of `z`,
    // real-valued so the decoder can be probed continuously).
    double decoder_loss(std::span<const Tour> tours, const nn::Matrix& z) const;
    // Same loss with decoder gradients accumulated into Param::grad; returns loss
    // and writes dL/dz.
    double decoder_loss_backward(std::span<const Tour> tours, const nn::Matrix& z, nn::Matrix& grad_z);

    // One training step's forward + backward over a batch. Gradients are
    // accumulated (callers zero them). `stochastic` selects the threshold.
    double forward_backward(std::span<const Tour> tours, Rng& rng, bool stochastic, SteTrace* trace = nullptr);

    // Teacher-forced loss and exact-reconstruction count with deterministic codes.
    struct Evaluation {
        double loss = 0.0;
        double accuracy = 0.0;
    };
    Evaluation evaluate(std::span<const Tour> tours) const;

 private:
    BaeConfig cfg_;
    std::vector<nn::GruCell> encoder_;
    nn::Linear latent_head_;
    nn::Linear init_map_;
    std::vector<nn::GruCell> decoder_;
    nn::Linear output_head_;

    nn::Matrix encoder_top_state(std::span<const Tour> tours, std::vector<std::vector<nn::GruCell::Cache>>* caches) const;
    void encoder_backward(const std::vector<std::vector<nn::GruCell::Cache>>& caches, const nn::Matrix& d_top);
    struct DecoderTape;
    double decoder_forward(std::span<const Tour> tours, const nn::Matrix& z, DecoderTape* tape) const;
    nn::Matrix decoder_backward(const DecoderTape& tape, const nn::Matrix& z);
};

// Removes duplicates and out-of-range entries (keeping first occurrences in
// order), appends missing cities ascending, then rotates city 1 to the front.
Tour repair(std::span<const int> seq, int n_cities);

DecodeResult decode(const BaeModel& model, const BitVector& z);

double reconstruction_accuracy(const BaeModel& model, std::span<const Tour> tours);

struct TrainResult {
    std::unique_ptr<BaeModel> model;
    TrainReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train(const BaeConfig& cfg, std::span<const Tour> train_tours, std::span<const Tour> valid_tours,
                  const EpochCallback& on_epoch = {});
// Samples cfg.n_tours distinct tours and splits them by cfg.train_fraction.
TrainResult train(const BaeConfig& cfg, const EpochCallback& on_epoch = {});

struct DatasetSplit {
    std::vector<Tour> train;
    std::vector<Tour> valid;
};
DatasetSplit make_training_split(const BaeConfig& cfg);

std::string model_checksum(const BaeModel& model);

inline constexpr int kCheckpointFormatVersion = 1;
void save_checkpoint(const BaeModel& model, const std::string& path);
std::unique_ptr<BaeModel> load_checkpoint(const std::string& path);

class BaeEncoding final : public EncodingScheme {
 public:
    explicit BaeEncoding(std::shared_ptr<const BaeModel> model);

    std::string name() const override { return "bae"; }
    int n_cities() const override { return model_->n_cities(); }
    std::size_t width() const override { return static_cast<std::size_t>(model_->latent_bits()); }
    BitVector encode(const Tour& tour) const override { return model_->encode_deterministic(tour); }
    DecodeResult decode(const BitVector& bits, Rng&) const override { return lq::decode(*model_, bits); }
    std::vector<BitVector> encode_batch(std::span<const Tour> tours) const override;
    std::vector<DecodeResult> decode_batch(std::span<const BitVector> codes, Rng& rng) const override;

    const BaeModel& model() const noexcept { return *model_; }

 private:
    std::shared_ptr<const BaeModel> model_;
};

}  // namespace lq
