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

// Small dense network substrate used by the binary autoencoder. Activations
// are stored column-major with one sample per column, so a batch is a
// (features x batch) matrix and every layer is a GEMM.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentqubo/rng.hpp"

namespace lq::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Param {
    std::string name;
    Matrix value;
    Matrix grad;

    Param() = default;
    Param(std::string n, Eigen::Index rows, Eigen::Index cols)
        : name(std::move(n)), value(Matrix::Zero(rows, cols)), grad(Matrix::Zero(rows, cols)) {}

    void zero_grad() { grad.setZero(); }
    void init_uniform(Rng& rng, double bound);
};

Matrix sigmoid(const Matrix& a);
Matrix tanh(const Matrix& a);
// Column-wise softmax; throws on an empty input.
Matrix softmax(const Matrix& u);
// Mean over columns of the per-column sum of squares, divided by `steps`
// (the number of sequence steps folded into each column's sum).
double mse(const Matrix& pred, const Matrix& target, double steps = 1.0);

// y = W x + b.
class Linear {
 public:
    Linear() = default;
    Linear(const std::string& name, int in_dim, int out_dim);

    int in_dim() const { return static_cast<int>(weight.value.cols()); }
    int out_dim() const { return static_cast<int>(weight.value.rows()); }

    Matrix forward(const Matrix& x) const;
    // Accumulates parameter gradients and returns dL/dx.
    Matrix backward(const Matrix& x, const Matrix& dy);

    void init(Rng& rng);
    std::vector<Param*> params() { return {&weight, &bias}; }
    std::vector<const Param*> params() const { return {&weight, &bias}; }

    Param weight;
    Param bias;
};

// GRU with the reset gate applied to the hidden state inside the candidate:
//   z = sig(Wz x + Uz h + bz), r = sig(Wr x + Ur h + br)
//   n = tanh(Wn x + Un (r * h) + bn),  h' = (1 - z) * n + z * h
class GruCell {
 public:
    struct Cache {
        Matrix x, h_prev, z, r, n, rh;
    };

    GruCell() = default;
    GruCell(const std::string& name, int input_dim, int hidden_dim);

    int input_dim() const { return static_cast<int>(w_x.value.cols()); }
    int hidden_dim() const { return static_cast<int>(u_n.value.rows()); }

    // One step for a batch; fills `cache` when non-null.
    Matrix step(const Matrix& x, const Matrix& h_prev, Cache* cache = nullptr) const;
    // Accumulates parameter gradients. Returns dL/dx, writes dL/dh_prev.
    Matrix backward(const Cache& c, const Matrix& dh, Matrix& dh_prev);

    void init(Rng& rng);
    std::vector<Param*> params() { return {&w_x, &u_zr, &u_n, &bias}; }
    std::vector<const Param*> params() const { return {&w_x, &u_zr, &u_n, &bias}; }

    Param w_x;   // [Wz; Wr; Wn], 3h x in
    Param u_zr;  // [Uz; Ur], 2h x h
    Param u_n;   // h x h
    Param bias;  // [bz; br; bn], 3h x 1
};

Vector gru_step(const GruCell& cell, const Vector& x, const Vector& h_prev);

// Decoupled-weight-decay Adam.
class AdamW {
 public:
    struct Options {
        double lr = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
        double weight_decay = 0.01;
    };

    AdamW(std::vector<Param*> params, Options opts);

    void step();
    void zero_grad();
    long long steps_taken() const { return t_; }
    const Options& options() const { return opts_; }

 private:
    std::vector<Param*> params_;
    std::vector<Matrix> m_, v_;
    Options opts_;
    long long t_ = 0;
};

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_param;
    Eigen::Index worst_index = -1;
    std::size_t n_checked = 0;
};

// Compares analytic gradients (produced by `backward`, which must zero and
// fill Param::grad) against central differences of `loss`.
// Relative error per entry is |a - n| / max(|a|, |n|, floor).
GradCheckReport grad_check(const std::function<double()>& loss, const std::function<void()>& backward,
                           std::span<Param* const> params, double step = 1e-5, double floor = 1e-6);

}  // namespace lq::nn
