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

#include "latentqubo/annealer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "latentqubo/error.hpp"
#include "latentqubo/rng.hpp"

namespace lq {

namespace {

// Full symmetric coupling matrix (zero diagonal) plus the linear terms.
struct Couplings {
    int dim;
    std::vector<double> j;  // dim x dim row-major
    std::vector<double> h;

    explicit Couplings(const Qubo& q) : dim(q.dim()), j(static_cast<std::size_t>(dim * dim), 0.0), h(static_cast<std::size_t>(dim)) {
        for (int a = 0; a < dim; ++a) {
            h[static_cast<std::size_t>(a)] = q.q(a, a);
            for (int b = a + 1; b < dim; ++b) {
                j[static_cast<std::size_t>(a * dim + b)] = q.q(a, b);
                j[static_cast<std::size_t>(b * dim + a)] = q.q(a, b);
            }
        }
    }
    const double* row(int a) const { return j.data() + static_cast<std::ptrdiff_t>(a) * dim; }
};

}  // namespace

void AnnealSchedule::validate() const {
    require(n_sweeps >= 1, ErrorCode::kInvalidArgument, "n_sweeps must be >= 1");
    require(n_reads >= 1, ErrorCode::kInvalidArgument, "n_reads must be >= 1");
    require(beta_start > 0.0 && beta_end >= beta_start && std::isfinite(beta_end), ErrorCode::kInvalidArgument,
            "beta schedule must satisfy beta_end >= beta_start > 0");
}

const Read& SampleSet::best() const {
    require(!reads.empty(), ErrorCode::kEmptyInput, "sample set has no reads");
    return reads.front();
}

ExhaustiveResult solve_exhaustive(const Qubo& q) {
    const int d = q.dim();
    require(d >= 1, ErrorCode::kInvalidArgument, "QUBO dimension must be positive");
    require(d <= kMaxExhaustiveDim, ErrorCode::kSizeLimit,
            "exhaustive search limited to " + std::to_string(kMaxExhaustiveDim) + " bits, got " + std::to_string(d));
    // Integer value v maps bit i to position (d-1-i), so increasing v is lexicographic order.
    const std::uint64_t n_states = std::uint64_t{1} << d;
    std::vector<int> active;
    active.reserve(static_cast<std::size_t>(d));
    double best = 0.0;
    std::uint64_t best_v = 0;
    for (std::uint64_t v = 0; v < n_states; ++v) {
        active.clear();
        for (int i = 0; i < d; ++i) {
            if ((v >> (d - 1 - i)) & 1U) active.push_back(i);
        }
        double e = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a; b < active.size(); ++b) e += q.q(active[a], active[b]);
        }
        if (v == 0 || e < best) {
            best = e;
            best_v = v;
        }
    }
    return {BitVector::from_integer(best_v, static_cast<std::size_t>(d)), best};
}

double flip_delta(const Qubo& q, const BitVector& z, int i) {
    require(static_cast<int>(z.width()) == q.dim(), ErrorCode::kDimensionMismatch, "bit width differs from QUBO dim");
    double field = q.q(i, i);
    for (int j = 0; j < q.dim(); ++j) {
        if (j == i || !z[static_cast<std::size_t>(j)]) continue;
        field += i < j ? q.q(i, j) : q.q(j, i);
    }
    return z[static_cast<std::size_t>(i)] ? -field : field;
}

SampleSet sample(const Qubo& q, const AnnealSchedule& sched) {
    sched.validate();
    const int d = q.dim();
    require(d >= 1, ErrorCode::kInvalidArgument, "QUBO dimension must be positive");
    const auto t0 = std::chrono::steady_clock::now();
    const Couplings c(q);

    std::vector<double> betas(static_cast<std::size_t>(sched.n_sweeps));
    const double ratio = sched.beta_end / sched.beta_start;
    for (int s = 0; s < sched.n_sweeps; ++s) {
        const double t = sched.n_sweeps == 1 ? 1.0 : static_cast<double>(s) / (sched.n_sweeps - 1);
        betas[static_cast<std::size_t>(s)] = sched.beta_start * std::pow(ratio, t);
    }

    SampleSet out;
    out.schedule = sched;
    std::vector<std::uint8_t> z(static_cast<std::size_t>(d));
    std::vector<double> field(static_cast<std::size_t>(d));  // h_i + sum_{j != i} J_ij z_j
    for (int r = 0; r < sched.n_reads; ++r) {
        Rng rng = make_rng(sched.seed, static_cast<std::uint64_t>(r));
        for (auto& b : z) b = static_cast<std::uint8_t>(rng() & 1U);
        for (int i = 0; i < d; ++i) {
            double f = c.h[static_cast<std::size_t>(i)];
            const double* row = c.row(i);
            for (int j = 0; j < d; ++j) f += row[j] * z[static_cast<std::size_t>(j)];
            field[static_cast<std::size_t>(i)] = f;
        }
        for (const double beta : betas) {
            for (int i = 0; i < d; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                const double delta = z[ui] ? -field[ui] : field[ui];
                if (delta > 0.0 && uniform01(rng) >= std::exp(-beta * delta)) continue;
                const double sign = z[ui] ? -1.0 : 1.0;
                z[ui] ^= 1U;
                const double* row = c.row(i);
                for (int j = 0; j < d; ++j) field[static_cast<std::size_t>(j)] += sign * row[j];
            }
        }
        Read read;
        read.bits = BitVector(std::vector<std::uint8_t>(z));
        read.energy = qubo_energy(q, read.bits);
        read.read_index = r;
        out.reads.push_back(std::move(read));
    }
    std::stable_sort(out.reads.begin(), out.reads.end(), [](const Read& a, const Read& b) { return a.energy < b.energy; });
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

BitVector greedy_descent(const Qubo& q, BitVector z) {
    require(static_cast<int>(z.width()) == q.dim(), ErrorCode::kDimensionMismatch, "bit width differs from QUBO dim");
    for (;;) {
        int best_i = -1;
        double best_delta = 0.0;
        for (int i = 0; i < q.dim(); ++i) {
            const double delta = flip_delta(q, z, i);
            if (delta < best_delta) {
                best_delta = delta;
                best_i = i;
            }
        }
        if (best_i < 0) return z;
        z.flip(static_cast<std::size_t>(best_i));
    }
}

std::string sample_set_csv(const SampleSet& s) {
    std::string out = "read_index,energy,bitstring\n";
    char buf[64];
    for (const auto& r : s.reads) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,", r.read_index, r.energy);
        out += buf;
        out += r.bits.to_string();
        out += '\n';
    }
    return out;
}

}  // namespace lq
