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

#include <cmath>

#include "doctest.h"
#include "latentqubo/nn.hpp"
#include "latentqubo/rng.hpp"

using namespace lq;
using namespace lq::nn;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = 2.0 * uniform01(rng) - 1.0;
    return m;
}

}  // namespace

TEST_CASE("activation and loss basics") {
    CHECK(sigmoid(Matrix::Zero(1, 1))(0, 0) == 0.5);
    const Matrix s = softmax(Matrix::Constant(4, 1, 3.0));
    for (int i = 0; i < 4; ++i) CHECK(s(i, 0) == doctest::Approx(0.25));
    Rng rng = make_rng(1);
    const Matrix u = random_matrix(6, 5, rng) * 20.0;
    const Matrix p = softmax(u);
    for (Eigen::Index c = 0; c < p.cols(); ++c) {
        CHECK(std::abs(p.col(c).sum() - 1.0) < 1e-12);
        CHECK(p.col(c).minCoeff() > 0.0);
    }
    CHECK(mse(u, u) == 0.0);
    CHECK_THROWS(softmax(Matrix(0, 0)));
}

TEST_CASE("GRU step with zero parameters") {
    GruCell cell("g", 3, 4);  // parameters start at zero
    const Vector h = (Vector(4) << 1.0, -2.0, 0.5, 3.0).finished();
    const Vector x = (Vector(3) << 0.3, 0.1, -0.7).finished();
    const Vector out = gru_step(cell, x, h);
    for (int i = 0; i < 4; ++i) CHECK(out(i) == doctest::Approx(0.5 * h(i)));
    CHECK(gru_step(cell, Vector::Zero(3), Vector::Zero(4)).isZero());
}

TEST_CASE("forward passes are deterministic") {
    Rng rng = make_rng(2);
    GruCell cell("g", 3, 5);
    cell.init(rng);
    const Matrix x = random_matrix(3, 4, rng), h = random_matrix(5, 4, rng);
    CHECK(cell.step(x, h) == cell.step(x, h));
}

TEST_CASE("linear layer gradient check") {
    Rng rng = make_rng(3);
    Linear lin("lin", 4, 3);
    lin.init(rng);
    const Matrix x = random_matrix(4, 6, rng), target = random_matrix(3, 6, rng);
    auto loss = [&] { return mse(lin.forward(x), target); };
    auto backward = [&] {
        for (auto* p : lin.params()) p->zero_grad();
        const Matrix y = lin.forward(x);
        lin.backward(x, 2.0 * (y - target) / static_cast<double>(x.cols()));
    };
    const auto params = lin.params();
    const auto rep = grad_check(loss, backward, params);
    CHECK(rep.n_checked == 4 * 3 + 3);
    CHECK(rep.max_rel_error < 1e-6);
}

TEST_CASE("GRU over three steps gradient check") {
    Rng rng = make_rng(4);
    GruCell cell("g", 3, 4);
    cell.init(rng);
    std::vector<Matrix> xs;
    for (int t = 0; t < 3; ++t) xs.push_back(random_matrix(3, 2, rng));
    const Matrix h0 = random_matrix(4, 2, rng) * 0.5, target = random_matrix(4, 2, rng);
    auto run = [&](std::vector<GruCell::Cache>* caches) {
        Matrix h = h0;
        for (const auto& x : xs) {
            GruCell::Cache c;
            h = cell.step(x, h, caches ? &c : nullptr);
            if (caches) caches->push_back(c);
        }
        return h;
    };
    auto loss = [&] { return mse(run(nullptr), target); };
    auto backward = [&] {
        for (auto* p : cell.params()) p->zero_grad();
        std::vector<GruCell::Cache> caches;
        const Matrix h = run(&caches);
        Matrix dh = 2.0 * (h - target) / static_cast<double>(h.cols());
        for (int t = 2; t >= 0; --t) {
            Matrix dh_prev;
            cell.backward(caches[static_cast<std::size_t>(t)], dh, dh_prev);
            dh = dh_prev;
        }
    };
    const auto params = cell.params();
    const auto rep = grad_check(loss, backward, params);
    CHECK(rep.max_rel_error < 1e-4);
}

TEST_CASE("identity fragment has zero gradient error") {
    Param p("p", 3, 1);
    p.value << 1.0, -2.0, 0.5;
    auto loss = [&] { return p.value.sum(); };
    auto backward = [&] { p.grad.setOnes(); };
    std::vector<Param*> params{&p};
    const auto rep = grad_check(loss, backward, params);
    CHECK(rep.max_rel_error < 1e-9);
}

TEST_CASE("AdamW updates") {
    SUBCASE("zero gradient and no decay leave parameters unchanged") {
        Param p("p", 2, 2);
        p.value << 1, 2, 3, 4;
        const Matrix before = p.value;
        AdamW opt({&p}, {1e-3, 0.9, 0.999, 1e-8, 0.0});
        opt.step();
        CHECK(p.value == before);
    }
    SUBCASE("zero learning rate is bit-identical") {
        Param p("p", 2, 1);
        p.value << 0.3, -0.2;
        p.grad << 1.0, -5.0;
        const Matrix before = p.value;
        AdamW opt({&p}, {0.0, 0.9, 0.999, 1e-8, 0.01});
        opt.step();
        CHECK(p.value == before);
    }
    SUBCASE("first step moves by about lr against the gradient") {
        Param p("p", 1, 1);
        p.value(0, 0) = 1.0;
        p.grad(0, 0) = 3.0;
        AdamW opt({&p}, {1e-2, 0.9, 0.999, 1e-8, 0.0});
        opt.step();
        CHECK(p.value(0, 0) == doctest::Approx(1.0 - 1e-2).epsilon(1e-6));
    }
    SUBCASE("quadratic loss decreases monotonically") {
        Param p("p", 2, 1);
        p.value << 2.0, -1.5;
        AdamW opt({&p}, {0.05, 0.9, 0.999, 1e-8, 0.0});
        auto f = [&] { return p.value(0) * p.value(0) + 3.0 * p.value(1) * p.value(1); };
        double prev = f();
        for (int i = 0; i < 100; ++i) {
            p.grad << 2.0 * p.value(0), 6.0 * p.value(1);
            opt.step();
            const double cur = f();
            CHECK(cur < prev);
            prev = cur;
        }
    }
}
