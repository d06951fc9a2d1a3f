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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentqubo/bitvector.hpp"

namespace lq {

// Second-order factorization machine over binary inputs:
//   f(z) = w0 + sum_i w_i z_i + sum_{i<j} <v_i, v_j> z_i z_j
struct FmModel {
    double w0 = 0.0;
    Eigen::VectorXd w;  // d
    Eigen::MatrixXd v;  // d x k, row i is v_i

    FmModel() = default;
    FmModel(int width, int rank);

    int width() const { return static_cast<int>(w.size()); }
    int rank() const { return static_cast<int>(v.cols()); }
};

// O(k d) evaluation through sum_{i<j} <v_i,v_j> z_i z_j = 1/2 sum_f [(sum_i v_if z_i)^2 - sum_i v_if^2 z_i].
double fm_predict(const FmModel& m, const BitVector& z);
// Literal double loop over pairs; kept as an independent check of fm_predict.
double fm_predict_naive(const FmModel& m, const BitVector& z);

struct LabeledSample {
    BitVector z;
    double y = 0.0;
};

// How targets are transformed before fitting; predictions are mapped back, so
// the returned model always predicts raw objective values.
enum class TargetScaling { kNone, kCenter, kStandardize };
std::string to_string(TargetScaling s);
TargetScaling target_scaling_from_string(const std::string& s);

struct FmTrainOptions {
    int rank = 8;
    double lr = 0.01;
    int epochs = 1000;
    double weight_decay = 0.01;
    double init_std = 0.01;
    std::uint64_t seed = 0;
    TargetScaling scaling = TargetScaling::kCenter;
};

// Full-batch AdamW on the mean squared error; w0 and w start at zero, V ~ N(0, init_std^2).
// `loss_history`, when given, receives the pre-update training MSE of every epoch.
FmModel fm_train(std::span<const LabeledSample> samples, const FmTrainOptions& opts,
                 std::vector<double>* loss_history = nullptr);

double fm_mse(const FmModel& m, std::span<const LabeledSample> samples);

// Analytic gradient of fm_mse, flattened as [w0, w..., v (column-major)...].
Eigen::VectorXd fm_mse_gradient(const FmModel& m, std::span<const LabeledSample> samples);

// Upper-triangular QUBO, diagonal = linear terms; energy excludes the offset.
struct Qubo {
    Eigen::MatrixXd q;
    double offset = 0.0;

    Qubo() = default;
    explicit Qubo(int dim) : q(Eigen::MatrixXd::Zero(dim, dim)) {}

    int dim() const { return static_cast<int>(q.rows()); }
};

Qubo to_qubo(const FmModel& m);
double qubo_energy(const Qubo& q, const BitVector& z);

// Text form: "dim d", "offset value", then "i j value" (0-indexed, i <= j) for
// every nonzero coefficient. '#' starts a comment line.
std::string qubo_to_text(const Qubo& q);
Qubo qubo_from_text(const std::string& text);
void save_qubo(const Qubo& q, const std::string& path);
Qubo load_qubo(const std::string& path);

}  // namespace lq
