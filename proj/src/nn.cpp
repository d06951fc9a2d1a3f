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

#include "latentqubo/nn.hpp"

#include <cmath>

#include "latentqubo/error.hpp"

namespace lq::nn {

void Param::init_uniform(Rng& rng, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index j = 0; j < value.cols(); ++j) {
        for (Eigen::Index i = 0; i < value.rows(); ++i) value(i, j) = dist(rng);
    }
    grad.setZero(value.rows(), value.cols());
}

Matrix sigmoid(const Matrix& a) { return ((-a.array()).exp() + 1.0).inverse().matrix(); }

// Eigen only vectorizes exp for doubles, so tanh goes through it.
Matrix tanh(const Matrix& a) { return (1.0 - 2.0 / ((2.0 * a.array()).exp() + 1.0)).matrix(); }

Matrix softmax(const Matrix& u) {
    require(u.size() > 0, ErrorCode::kEmptyInput, "softmax of an empty vector");
    const Eigen::RowVectorXd max = u.colwise().maxCoeff();
    Matrix e = (u.rowwise() - max).array().exp().matrix();
    const Eigen::RowVectorXd sum = e.colwise().sum();
    return e.array().rowwise() / sum.array();
}

double mse(const Matrix& pred, const Matrix& target, double steps) {
    require(pred.rows() == target.rows() && pred.cols() == target.cols(), ErrorCode::kDimensionMismatch,
            "mse operands differ in shape");
    require(pred.cols() > 0, ErrorCode::kEmptyInput, "mse of an empty batch");
    return (pred - target).squaredNorm() / (static_cast<double>(pred.cols()) * steps);
}

Linear::Linear(const std::string& name, int in_dim, int out_dim)
    : weight(name + ".weight", out_dim, in_dim), bias(name + ".bias", out_dim, 1) {}

Matrix Linear::forward(const Matrix& x) const {
    require(x.rows() == in_dim(), ErrorCode::kDimensionMismatch, "linear layer input dimension mismatch");
    Matrix y = weight.value * x;
    y.colwise() += bias.value.col(0);
    return y;
}

Matrix Linear::backward(const Matrix& x, const Matrix& dy) {
    weight.grad.noalias() += dy * x.transpose();
    bias.grad.col(0) += dy.rowwise().sum();
    return weight.value.transpose() * dy;
}

void Linear::init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim()));
    weight.init_uniform(rng, bound);
    bias.init_uniform(rng, bound);
}

GruCell::GruCell(const std::string& name, int input_dim, int hidden_dim)
    : w_x(name + ".w_x", 3 * hidden_dim, input_dim),
      u_zr(name + ".u_zr", 2 * hidden_dim, hidden_dim),
      u_n(name + ".u_n", hidden_dim, hidden_dim),
      bias(name + ".bias", 3 * hidden_dim, 1) {}

Matrix GruCell::step(const Matrix& x, const Matrix& h_prev, Cache* cache) const {
    const Eigen::Index h = hidden_dim();
    require(x.rows() == input_dim() && h_prev.rows() == h && x.cols() == h_prev.cols(), ErrorCode::kDimensionMismatch,
            "GRU step dimension mismatch");
    Matrix gx = w_x.value * x;
    gx.colwise() += bias.value.col(0);
    Matrix gh = u_zr.value * h_prev;
    Matrix z = sigmoid(gx.topRows(h) + gh.topRows(h));
    Matrix r = sigmoid(gx.middleRows(h, h) + gh.bottomRows(h));
    Matrix rh = r.cwiseProduct(h_prev);
    Matrix an = gx.bottomRows(h);
    an.noalias() += u_n.value * rh;
    Matrix n = tanh(an);
    Matrix out = n + z.cwiseProduct(h_prev - n);
    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->z = std::move(z);
        cache->r = std::move(r);
        cache->n = std::move(n);
        cache->rh = std::move(rh);
    }
    return out;
}

Matrix GruCell::backward(const Cache& c, const Matrix& dh, Matrix& dh_prev) {
    const Eigen::Index h = hidden_dim();
    const Eigen::Index batch = dh.cols();
    const auto one = Matrix::Ones(h, batch).array();

    Matrix dg(3 * h, batch);  // gradients w.r.t. pre-activations [az; ar; an]
    // dn and dz through h' = (1 - z) n + z h_prev
    dg.bottomRows(h) = (dh.array() * (one - c.z.array()) * (one - c.n.array().square())).matrix();
    dg.topRows(h) = (dh.array() * (c.h_prev - c.n).array() * c.z.array() * (one - c.z.array())).matrix();
    dh_prev = dh.cwiseProduct(c.z);

    u_n.grad.noalias() += dg.bottomRows(h) * c.rh.transpose();
    const Matrix drh = u_n.value.transpose() * dg.bottomRows(h);
    dh_prev += drh.cwiseProduct(c.r);
    dg.middleRows(h, h) = (drh.array() * c.h_prev.array() * c.r.array() * (one - c.r.array())).matrix();

    w_x.grad.noalias() += dg * c.x.transpose();
    bias.grad.col(0) += dg.rowwise().sum();
    u_zr.grad.noalias() += dg.topRows(2 * h) * c.h_prev.transpose();
    dh_prev.noalias() += u_zr.value.transpose() * dg.topRows(2 * h);
    return w_x.value.transpose() * dg;
}

void GruCell::init(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim()));
    for (Param* p : params()) p->init_uniform(rng, bound);
}

Vector gru_step(const GruCell& cell, const Vector& x, const Vector& h_prev) { return cell.step(x, h_prev); }

AdamW::AdamW(std::vector<Param*> params, Options opts) : params_(std::move(params)), opts_(opts) {
    for (const Param* p : params_) {
        m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
}

void AdamW::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        Param& p = *params_[k];
        if (opts_.lr == 0.0) continue;
        p.value *= 1.0 - opts_.lr * opts_.weight_decay;
        m_[k] = opts_.beta1 * m_[k] + (1.0 - opts_.beta1) * p.grad;
        v_[k] = opts_.beta2 * v_[k] + (1.0 - opts_.beta2) * p.grad.cwiseProduct(p.grad);
        const auto denom = (v_[k].array() / bc2).sqrt() + opts_.eps;
        p.value.array() -= opts_.lr * (m_[k].array() / bc1) / denom;
    }
}

void AdamW::zero_grad() {
    for (Param* p : params_) p->zero_grad();
}

GradCheckReport grad_check(const std::function<double()>& loss, const std::function<void()>& backward,
                           std::span<Param* const> params, double step, double floor) {
    backward();
    GradCheckReport report;
    for (Param* p : params) {
        const Matrix analytic = p->grad;
        for (Eigen::Index i = 0; i < p->value.size(); ++i) {
            double& w = p->value.data()[i];
            const double saved = w;
            w = saved + step;
            const double up = loss();
            w = saved - step;
            const double down = loss();
            w = saved;
            require(std::isfinite(up) && std::isfinite(down), ErrorCode::kNumeric, "non-finite loss in grad check");
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic.data()[i];
            const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
            ++report.n_checked;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_param = p->name;
                report.worst_index = i;
            }
        }
    }
    return report;
}

}  // namespace lq::nn
