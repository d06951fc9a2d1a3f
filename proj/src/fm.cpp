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

#include "latentqubo/fm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "latentqubo/error.hpp"
#include "latentqubo/rng.hpp"

namespace lq {

namespace {

void check_width(int expected, const BitVector& z) {
    require(static_cast<int>(z.width()) == expected, ErrorCode::kDimensionMismatch,
            "expected " + std::to_string(expected) + " bits, got " + std::to_string(z.width()));
}

Eigen::MatrixXd design_matrix(std::span<const LabeledSample> samples, int width) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(samples.size()), width);
    for (std::size_t n = 0; n < samples.size(); ++n) {
        check_width(width, samples[n].z);
        for (int i = 0; i < width; ++i) x(static_cast<Eigen::Index>(n), i) = samples[n].z[static_cast<std::size_t>(i)];
    }
    return x;
}

Eigen::VectorXd targets(std::span<const LabeledSample> samples) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t n = 0; n < samples.size(); ++n) y(static_cast<Eigen::Index>(n)) = samples[n].y;
    return y;
}

// Predictions for binary rows of x, with s = x v cached for the gradient.
Eigen::VectorXd batch_predict(const FmModel& m, const Eigen::MatrixXd& x, Eigen::MatrixXd& s) {
    s.noalias() = x * m.v;
    const Eigen::VectorXd sq_norms = m.v.rowwise().squaredNorm();
    Eigen::VectorXd pred = (x * m.w).array() + m.w0;
    pred += 0.5 * (s.rowwise().squaredNorm() - x * sq_norms);
    return pred;
}

struct FmGradient {
    double w0;
    Eigen::VectorXd w;
    Eigen::MatrixXd v;
};

FmGradient gradient(const FmModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& s, const Eigen::VectorXd& resid) {
    const double n = static_cast<double>(x.rows());
    const Eigen::VectorXd g = (2.0 / n) * resid;
    FmGradient grad;
    grad.w0 = g.sum();
    grad.w = x.transpose() * g;
    // d/dv_if = sum_n g_n z_ni (s_nf - v_if z_ni), using z^2 = z
    grad.v = x.transpose() * (s.array().colwise() * g.array()).matrix();
    grad.v -= (m.v.array().colwise() * grad.w.array()).matrix();
    return grad;
}

}  // namespace

std::string to_string(TargetScaling s) {
    switch (s) {
        case TargetScaling::kNone:
            return "none";
        case TargetScaling::kCenter:
            return "center";
        case TargetScaling::kStandardize:
            return "standardize";
    }
    return "unknown";
}

TargetScaling target_scaling_from_string(const std::string& s) {
    if (s == "none") return TargetScaling::kNone;
    if (s == "center") return TargetScaling::kCenter;
    if (s == "standardize") return TargetScaling::kStandardize;
    fail(ErrorCode::kInvalidArgument, "unknown target scaling '" + s + "' (none, center, standardize)");
}

FmModel::FmModel(int width, int rank) : w(Eigen::VectorXd::Zero(width)), v(Eigen::MatrixXd::Zero(width, rank)) {
    require(width >= 1 && rank >= 1, ErrorCode::kInvalidArgument, "FM width and rank must be positive");
}

double fm_predict(const FmModel& m, const BitVector& z) {
    check_width(m.width(), z);
    double out = m.w0;
    Eigen::VectorXd s = Eigen::VectorXd::Zero(m.rank());
    double sq = 0.0;
    for (int i = 0; i < m.width(); ++i) {
        if (!z[static_cast<std::size_t>(i)]) continue;
        out += m.w(i);
        s += m.v.row(i).transpose();
        sq += m.v.row(i).squaredNorm();
    }
    return out + 0.5 * (s.squaredNorm() - sq);
}

double fm_predict_naive(const FmModel& m, const BitVector& z) {
    check_width(m.width(), z);
    double out = m.w0;
    for (int i = 0; i < m.width(); ++i) {
        if (!z[static_cast<std::size_t>(i)]) continue;
        out += m.w(i);
        for (int j = i + 1; j < m.width(); ++j) {
            if (z[static_cast<std::size_t>(j)]) out += m.v.row(i).dot(m.v.row(j));
        }
    }
    return out;
}

double fm_mse(const FmModel& m, std::span<const LabeledSample> samples) {
    require(!samples.empty(), ErrorCode::kEmptyInput, "FM loss of an empty dataset");
    const auto x = design_matrix(samples, m.width());
    Eigen::MatrixXd s;
    return (batch_predict(m, x, s) - targets(samples)).squaredNorm() / static_cast<double>(samples.size());
}

Eigen::VectorXd fm_mse_gradient(const FmModel& m, std::span<const LabeledSample> samples) {
    require(!samples.empty(), ErrorCode::kEmptyInput, "FM gradient of an empty dataset");
    const auto x = design_matrix(samples, m.width());
    Eigen::MatrixXd s;
    const Eigen::VectorXd resid = batch_predict(m, x, s) - targets(samples);
    const auto g = gradient(m, x, s, resid);
    Eigen::VectorXd flat(1 + g.w.size() + g.v.size());
    flat(0) = g.w0;
    flat.segment(1, g.w.size()) = g.w;
    flat.tail(g.v.size()) = Eigen::Map<const Eigen::VectorXd>(g.v.data(), g.v.size());
    return flat;
}

FmModel fm_train(std::span<const LabeledSample> samples, const FmTrainOptions& opts, std::vector<double>* loss_history) {
    require(!samples.empty(), ErrorCode::kEmptyInput, "cannot train an FM on an empty dataset");
    require(opts.epochs >= 0 && opts.lr >= 0.0, ErrorCode::kInvalidArgument, "FM epochs and lr must be non-negative");
    const int d = static_cast<int>(samples.front().z.width());
    FmModel m(d, opts.rank);
    Rng rng = make_rng(opts.seed, 0xf3);
    std::normal_distribution<double> normal(0.0, opts.init_std);
    for (Eigen::Index f = 0; f < m.v.cols(); ++f) {
        for (Eigen::Index i = 0; i < m.v.rows(); ++i) m.v(i, f) = normal(rng);
    }

    const auto x = design_matrix(samples, d);
    Eigen::VectorXd y = targets(samples);
    double shift = 0.0, scale = 1.0;
    if (opts.scaling != TargetScaling::kNone) shift = y.mean();
    if (opts.scaling == TargetScaling::kStandardize) {
        const double sd = std::sqrt((y.array() - shift).square().mean());
        if (sd > 0.0) scale = sd;
    }
    y = (y.array() - shift) / scale;
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    double m_w0 = 0.0, v_w0 = 0.0;
    Eigen::VectorXd m_w = Eigen::VectorXd::Zero(d), v_w = Eigen::VectorXd::Zero(d);
    Eigen::MatrixXd m_v = Eigen::MatrixXd::Zero(d, opts.rank), v_v = Eigen::MatrixXd::Zero(d, opts.rank);
    Eigen::MatrixXd s;
    if (loss_history) loss_history->clear();

    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        const Eigen::VectorXd resid = batch_predict(m, x, s) - y;
        const double loss = resid.squaredNorm() / static_cast<double>(samples.size());
        require(std::isfinite(loss), ErrorCode::kNumeric, "non-finite FM loss at epoch " + std::to_string(epoch));
        if (loss_history) loss_history->push_back(loss * scale * scale);
        const auto g = gradient(m, x, s, resid);

        const double bc1 = 1.0 - std::pow(kBeta1, epoch);
        const double bc2 = 1.0 - std::pow(kBeta2, epoch);
        const double decay = 1.0 - opts.lr * opts.weight_decay;

        m.w0 *= decay;
        m_w0 = kBeta1 * m_w0 + (1.0 - kBeta1) * g.w0;
        v_w0 = kBeta2 * v_w0 + (1.0 - kBeta2) * g.w0 * g.w0;
        m.w0 -= opts.lr * (m_w0 / bc1) / (std::sqrt(v_w0 / bc2) + kEps);

        m.w *= decay;
        m_w = kBeta1 * m_w + (1.0 - kBeta1) * g.w;
        v_w = kBeta2 * v_w + (1.0 - kBeta2) * g.w.cwiseProduct(g.w);
        m.w.array() -= opts.lr * (m_w.array() / bc1) / ((v_w.array() / bc2).sqrt() + kEps);

        m.v *= decay;
        m_v = kBeta1 * m_v + (1.0 - kBeta1) * g.v;
        v_v = kBeta2 * v_v + (1.0 - kBeta2) * g.v.cwiseProduct(g.v);
        m.v.array() -= opts.lr * (m_v.array() / bc1) / ((v_v.array() / bc2).sqrt() + kEps);
    }
    // Undo the target transform: pairwise terms scale with the product of two factor rows.
    m.w0 = m.w0 * scale + shift;
    m.w *= scale;
    m.v *= std::sqrt(scale);
    return m;
}

Qubo to_qubo(const FmModel& m) {
    const int d = m.width();
    Qubo q(d);
    for (int i = 0; i < d; ++i) {
        q.q(i, i) = m.w(i);
        for (int j = i + 1; j < d; ++j) q.q(i, j) = m.v.row(i).dot(m.v.row(j));
    }
    q.offset = m.w0;
    return q;
}

double qubo_energy(const Qubo& q, const BitVector& z) {
    check_width(q.dim(), z);
    double e = 0.0;
    for (int i = 0; i < q.dim(); ++i) {
        if (!z[static_cast<std::size_t>(i)]) continue;
        for (int j = i; j < q.dim(); ++j) {
            if (z[static_cast<std::size_t>(j)]) e += q.q(i, j);
        }
    }
    return e;
}

std::string qubo_to_text(const Qubo& q) {
    std::string out = "# latentqubo QUBO: i j value, 0-indexed, upper triangle\n";
    char buf[96];
    std::snprintf(buf, sizeof buf, "dim %d\noffset %.17g\n", q.dim(), q.offset);
    out += buf;
    for (int i = 0; i < q.dim(); ++i) {
        for (int j = i; j < q.dim(); ++j) {
            if (q.q(i, j) == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, q.q(i, j));
            out += buf;
        }
    }
    return out;
}

Qubo qubo_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int dim = -1;
    double offset = 0.0;
    struct Triplet {
        int i, j;
        double v;
    };
    std::vector<Triplet> entries;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head.empty()) continue;
        const std::string where = " on QUBO line " + std::to_string(line_no);
        if (head == "dim") {
            require(static_cast<bool>(ls >> dim) && dim >= 1, ErrorCode::kFormat, "bad dim" + where);
        } else if (head == "offset") {
            require(static_cast<bool>(ls >> offset), ErrorCode::kFormat, "bad offset" + where);
        } else {
            Triplet t{};
            std::istringstream hs(head);
            require(static_cast<bool>(hs >> t.i) && static_cast<bool>(ls >> t.j >> t.v), ErrorCode::kFormat,
                    "expected 'i j value'" + where);
            require(t.i >= 0 && t.i <= t.j, ErrorCode::kFormat, "indices must satisfy 0 <= i <= j" + where);
            entries.push_back(t);
        }
    }
    if (dim < 0) {
        dim = 0;
        for (const auto& t : entries) dim = std::max(dim, t.j + 1);
    }
    require(dim >= 1, ErrorCode::kFormat, "QUBO has no dimension");
    Qubo q(dim);
    q.offset = offset;
    for (const auto& t : entries) {
        require(t.j < dim, ErrorCode::kFormat, "QUBO index exceeds dim");
        q.q(t.i, t.j) += t.v;
    }
    return q;
}

void save_qubo(const Qubo& q, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path + " for writing");
    out << qubo_to_text(q);
}

Qubo load_qubo(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return qubo_from_text(ss.str());
}

}  // namespace lq
