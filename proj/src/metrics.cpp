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

#include "latentqubo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "latentqubo/error.hpp"

namespace lq {

double normalized_hamming(const BitVector& a, const BitVector& b) {
    require(a.width() == b.width(), ErrorCode::kDimensionMismatch, "bit vectors differ in width");
    require(a.width() > 0, ErrorCode::kEmptyInput, "Hamming distance of empty vectors");
    return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.width());
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorCode::kDimensionMismatch, "spearman inputs differ in length");
    require(a.size() >= 2, ErrorCode::kEmptyInput, "spearman needs at least two observations");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(ra.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    require(saa > 0.0 && sbb > 0.0, ErrorCode::kNumeric, "rank correlation undefined for a constant list");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

DistancePairSample sample_distance_pairs(const EncodingScheme& scheme, std::span<const Tour> tours, int n_pairs,
                                         std::uint64_t seed) {
    require(n_pairs >= 2, ErrorCode::kInvalidArgument, "n_pairs must be >= 2");
    require(tours.size() >= 2, ErrorCode::kEmptyInput, "need at least two tours");
    const auto codes = scheme.encode_batch(tours);
    Rng rng = make_rng(seed, 0x9a1);
    const int last = static_cast<int>(tours.size()) - 1;
    DistancePairSample out;
    out.d_hamming.reserve(static_cast<std::size_t>(n_pairs));
    out.d_edge.reserve(static_cast<std::size_t>(n_pairs));
    for (int p = 0; p < n_pairs; ++p) {
        const int i = uniform_int(rng, 0, last);
        int j = uniform_int(rng, 0, last - 1);
        if (j >= i) ++j;
        const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
        out.d_hamming.push_back(normalized_hamming(codes[ui], codes[uj]));
        out.d_edge.push_back(edge_distance(tours[ui], tours[uj]));
    }
    return out;
}

std::vector<NeighborhoodPoint> neighborhood_characteristic(const EncodingScheme& scheme, std::span<const int> m_values,
                                                           int n_tours, int n_flips_per_tour, std::uint64_t seed) {
    const int width = static_cast<int>(scheme.width());
    require(n_tours >= 1 && n_flips_per_tour >= 1, ErrorCode::kInvalidArgument, "n_tours and n_flips must be >= 1");
    for (int m : m_values) {
        require(m >= 0 && m <= width, ErrorCode::kOutOfRange, "flip count m must lie in [0, width]");
    }
    const auto tours = sample_distinct_tours(scheme.n_cities(), static_cast<std::size_t>(n_tours), derive_seed(seed, 0x1e));
    const auto codes = scheme.encode_batch(tours);

    std::vector<NeighborhoodPoint> out;
    std::vector<int> positions(static_cast<std::size_t>(width));
    for (int m : m_values) {
        std::vector<BitVector> flipped;
        std::vector<std::size_t> owner;
        flipped.reserve(tours.size() * static_cast<std::size_t>(n_flips_per_tour));
        for (std::size_t t = 0; t < tours.size(); ++t) {
            // Flip sets depend only on (seed, m, tour), never on sampling order.
            Rng rng(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(m)), lehmer_rank(tours[t])));
            for (int f = 0; f < n_flips_per_tour; ++f) {
                std::iota(positions.begin(), positions.end(), 0);
                BitVector z = codes[t];
                for (int k = 0; k < m; ++k) {
                    const int pick = uniform_int(rng, k, width - 1);
                    std::swap(positions[static_cast<std::size_t>(k)], positions[static_cast<std::size_t>(pick)]);
                    z.flip(static_cast<std::size_t>(positions[static_cast<std::size_t>(k)]));
                }
                flipped.push_back(std::move(z));
                owner.push_back(t);
            }
        }
        Rng decode_rng = make_rng(seed, 0xdec0 + static_cast<std::uint64_t>(m));
        const auto decoded = scheme.decode_batch(flipped, decode_rng);
        NeighborhoodPoint pt;
        pt.m = m;
        pt.n_total = decoded.size();
        double sum = 0.0;
        for (std::size_t k = 0; k < decoded.size(); ++k) {
            if (!decoded[k].raw_feasible) continue;
            sum += edge_distance(tours[owner[k]], decoded[k].tour);
            ++pt.n_feasible;
        }
        pt.mean_edge_distance =
            pt.n_feasible ? sum / static_cast<double>(pt.n_feasible) : std::numeric_limits<double>::quiet_NaN();
        out.push_back(pt);
    }
    return out;
}

double neighborhood_slope(std::span<const NeighborhoodPoint> points) {
    std::vector<double> xs, ys;
    for (const auto& p : points) {
        if (std::isnan(p.mean_edge_distance)) continue;
        xs.push_back(p.m);
        ys.push_back(p.mean_edge_distance);
    }
    require(xs.size() >= 2, ErrorCode::kEmptyInput, "slope needs at least two defined points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    require(sxx > 0.0, ErrorCode::kNumeric, "slope needs at least two distinct m values");
    return sxy / sxx;
}

std::string to_string(LocalNeighborhood n) { return n == LocalNeighborhood::kFeasible ? "feasible" : "repaired"; }

LocalNeighborhood local_neighborhood_from_string(const std::string& s) {
    if (s == "feasible") return LocalNeighborhood::kFeasible;
    if (s == "repaired") return LocalNeighborhood::kRepaired;
    fail(ErrorCode::kInvalidArgument, "unknown local neighborhood '" + s + "' (feasible, repaired)");
}

LocalOptimumResult local_optimum_ratio(const EncodingScheme& scheme, const TspInstance& inst, std::uint64_t seed,
                                       LocalNeighborhood neighborhood) {
    require(scheme.n_cities() == inst.n_cities(), ErrorCode::kDimensionMismatch, "scheme and instance differ in size");
    require(inst.n_cities() <= kMaxEnumerableCities, ErrorCode::kSizeLimit, "local optimum ratio needs enumeration");
    const auto tours = enumerate_tours(inst.n_cities());
    const auto codes = scheme.encode_batch(tours);
    const std::size_t width = scheme.width();

    // Every code followed by its Hamming-1 neighbors, decoded in one batch.
    std::vector<BitVector> probes;
    probes.reserve(tours.size() * (width + 1));
    for (const auto& z : codes) {
        probes.push_back(z);
        for (std::size_t i = 0; i < width; ++i) {
            BitVector nb = z;
            nb.flip(i);
            probes.push_back(std::move(nb));
        }
    }
    Rng rng = make_rng(seed, 0x10ca1);
    const auto decoded = scheme.decode_batch(probes, rng);

    LocalOptimumResult res;
    res.n_all = tours.size();
    for (std::size_t t = 0; t < tours.size(); ++t) {
        const std::size_t base = t * (width + 1);
        const double e = tour_length(inst, decoded[base].tour);
        bool local = true;
        for (std::size_t i = 1; i <= width && local; ++i) {
            const auto& d = decoded[base + i];
            if (neighborhood == LocalNeighborhood::kFeasible && !d.raw_feasible) continue;
            local = tour_length(inst, d.tour) >= e;
        }
        if (local) ++res.n_local;
    }
    res.ratio = static_cast<double>(res.n_local) / static_cast<double>(res.n_all);
    return res;
}

double approximation_ratio(double f_best, double f_star) {
    require(f_star > 0.0, ErrorCode::kInvalidArgument, "optimum length must be positive");
    require(f_best >= f_star - 1e-9, ErrorCode::kInvalidArgument, "best length below the optimum");
    return std::max(1.0, f_best / f_star);
}

double feasible_probability(std::span<const IterationRecord> records) {
    require(!records.empty(), ErrorCode::kEmptyInput, "no samples to compute a feasible fraction");
    std::size_t feasible = 0;
    for (const auto& r : records) feasible += r.raw_feasible ? 1 : 0;
    return static_cast<double>(feasible) / static_cast<double>(records.size());
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::string metric_reports_csv(std::span<const MetricReport> reports) {
    bool any_rho = false, any_local = false;
    std::vector<int> ms;
    for (const auto& r : reports) {
        any_rho = any_rho || r.rho.has_value();
        any_local = any_local || r.local.has_value();
        for (const auto& p : r.neighborhood) {
            if (std::find(ms.begin(), ms.end(), p.m) == ms.end()) ms.push_back(p.m);
        }
    }
    std::sort(ms.begin(), ms.end());

    std::string out = "scheme,seed";
    if (any_rho) out += ",rho,n_pairs";
    for (int m : ms) out += ",L" + std::to_string(m) + ",n_feasible_" + std::to_string(m);
    if (any_local) out += ",r_local,n_local,n_all";
    out += '\n';
    for (const auto& r : reports) {
        out += r.scheme + "," + std::to_string(r.seed);
        if (any_rho) out += "," + (r.rho ? fmt(*r.rho) : "") + "," + (r.rho ? std::to_string(r.n_pairs) : "");
        for (int m : ms) {
            auto it = std::find_if(r.neighborhood.begin(), r.neighborhood.end(), [m](const auto& p) { return p.m == m; });
            if (it == r.neighborhood.end()) {
                out += ",,";
            } else {
                out += "," + fmt(it->mean_edge_distance) + "," + std::to_string(it->n_feasible);
            }
        }
        if (any_local) {
            if (r.local) {
                out += "," + fmt(r.local->ratio) + "," + std::to_string(r.local->n_local) + "," +
                       std::to_string(r.local->n_all);
            } else {
                out += ",,,";
            }
        }
        out += '\n';
    }
    return out;
}

std::string metric_reports_json(std::span<const MetricReport> reports) {
    using nlohmann::ordered_json;
    // Per-scheme mean and population standard deviation across seeds.
    struct Acc {
        std::vector<double> rho, r_local;
        std::map<int, std::vector<double>> lm;
        std::vector<std::uint64_t> seeds;
    };
    std::map<std::string, Acc> by_scheme;
    ordered_json rows = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json row;
        row["scheme"] = r.scheme;
        row["seed"] = r.seed;
        Acc& acc = by_scheme[r.scheme];
        acc.seeds.push_back(r.seed);
        if (r.rho) {
            row["rho"] = *r.rho;
            row["n_pairs"] = r.n_pairs;
            acc.rho.push_back(*r.rho);
        }
        if (!r.neighborhood.empty()) {
            ordered_json lm = ordered_json::array();
            for (const auto& p : r.neighborhood) {
                ordered_json e{{"m", p.m}, {"n_feasible", p.n_feasible}, {"n_total", p.n_total}};
                e["mean"] = std::isnan(p.mean_edge_distance) ? ordered_json(nullptr) : ordered_json(p.mean_edge_distance);
                lm.push_back(e);
                if (!std::isnan(p.mean_edge_distance)) acc.lm[p.m].push_back(p.mean_edge_distance);
            }
            row["neighborhood"] = lm;
        }
        if (r.local) {
            row["r_local"] = r.local->ratio;
            row["n_local"] = r.local->n_local;
            row["n_all"] = r.local->n_all;
            acc.r_local.push_back(r.local->ratio);
        }
        rows.push_back(row);
    }
    auto stats = [](const std::vector<double>& v) {
        const double n = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        return ordered_json{{"mean", mean}, {"std", std::sqrt(var / n)}, {"n", v.size()}};
    };
    ordered_json summary = ordered_json::object();
    for (const auto& [name, acc] : by_scheme) {
        ordered_json s;
        if (!acc.rho.empty()) s["rho"] = stats(acc.rho);
        if (!acc.lm.empty()) {
            ordered_json lm = ordered_json::object();
            for (const auto& [m, v] : acc.lm) lm[std::to_string(m)] = stats(v);
            s["neighborhood"] = lm;
        }
        if (!acc.r_local.empty()) s["r_local"] = stats(acc.r_local);
        summary[name] = s;
    }
    ordered_json doc;
    doc["reports"] = rows;
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

}  // namespace lq
