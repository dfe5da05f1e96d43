/*
 * Copyright 2026 The randtest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "randtest/model.hpp"

#include "randtest/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace randtest {

bool SampleSpace::contains(double x) const {
    if (kind == Kind::unit_interval)
        return x >= 0.0 && x <= 1.0;
    return x == std::floor(x) && x >= 0.0 && x < double(alphabet_size);
}

NullModel NullModel::finite(std::vector<double> pmf) {
    if (pmf.size() < 2)
        throw Error(Errc::bad_params, "finite pmf needs at least 2 entries");
    double total = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0))
            throw Error(Errc::bad_params, "pmf entries must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(Errc::bad_params, "pmf must sum to 1 within 1e-12");
    NullModel m;
    m.space_ = SampleSpace::finite(int(pmf.size()));
    m.pmf_ = std::move(pmf);
    m.cdf_.resize(m.pmf_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < m.pmf_.size(); ++i) {
        acc += m.pmf_[i];
        m.cdf_[i] = acc;
    }
    m.cdf_.back() = 1.0;
    return m;
}

NullModel NullModel::uniform01() {
    NullModel m;
    m.space_ = SampleSpace::unit_interval();
    return m;
}

double NullModel::sample(Rng &rng) const {
    if (space_.kind == SampleSpace::Kind::unit_interval)
        return rng.uniform01();
    return double(rng.categorical(cdf_));
}

void for_each_word(const NullModel &null, int len, std::int64_t cap,
                   const std::function<void(std::span<const double>, double)> &fn) {
    if (!null.space().is_finite())
        throw Error(Errc::bad_params, "enumeration requires a finite alphabet");
    const int R = null.space().alphabet_size;
    double count = std::pow(double(R), double(len));
    if (count > double(cap))
        throw Error(Errc::enumeration_too_large,
                    "alphabet^" + std::to_string(len) + " exceeds cap " + std::to_string(cap));
    std::vector<int> word(len, 0);
    std::vector<double> values(len, 0.0);
    const auto &pmf = null.pmf();
    for (;;) {
        double weight = 1.0;
        for (int i = 0; i < len; ++i) {
            values[i] = double(word[i]);
            weight *= pmf[word[i]];
        }
        if (weight > 0.0)
            fn(values, weight);
        int pos = len - 1;
        while (pos >= 0 && ++word[pos] == R) {
            word[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
    }
}

namespace {

double checked(double v, const char *what) {
    if (!std::isfinite(v))
        throw Error(Errc::non_finite_moment, what);
    return v;
}

MomentEstimate moments_closed_form(const WindowFn &fn, int window, const NullModel &null) {
    if (window != 1)
        throw Error(Errc::bad_params, "closed-form moments require a window of 1");
    if (!null.space().is_finite())
        throw Error(Errc::bad_params,
                    "closed-form moments on the unit interval come from catalog entries");
    double mean = 0.0, second = 0.0;
    const auto &pmf = null.pmf();
    for (std::size_t sym = 0; sym < pmf.size(); ++sym) {
        double x = double(sym);
        double v = checked(fn(std::span<const double>(&x, 1)), "f value");
        mean += pmf[sym] * v;
        second += pmf[sym] * v * v;
    }
    double var = std::max(0.0, second - mean * mean);
    return {mean, std::sqrt(var), 0.0, 0.0, "closed_form"};
}

MomentEstimate moments_enumeration(const WindowFn &fn, int window, const NullModel &null,
                                   std::int64_t cap) {
    const int m = window;
    double mean = 0.0, second = 0.0;
    for_each_word(null, m, cap, [&](std::span<const double> w, double p) {
        double v = checked(fn(w), "f value");
        mean += p * v;
        second += p * v * v;
    });
    double var = second - mean * mean;
    // cov(f(e_i..e_{i+m-1}), f(e_1..e_m)) over the joint window of m+i-1 symbols
    double cov_total = 0.0;
    for (int i = 2; i <= m; ++i) {
        double cross = 0.0;
        for_each_word(null, m + i - 1, cap, [&](std::span<const double> w, double p) {
            double v1 = fn(w.subspan(0, m));
            double vi = fn(w.subspan(i - 1, m));
            cross += p * v1 * vi;
        });
        cov_total += cross - mean * mean;
    }
    double sigma2 = var + 2.0 * cov_total;
    if (sigma2 < 0.0 && sigma2 > -1e-12 * std::max(1.0, std::abs(var)))
        sigma2 = 0.0;
    checked(sigma2, "sigma^2");
    if (sigma2 < 0.0)
        throw Error(Errc::negative_variance_estimate, "enumerated sigma^2 is negative");
    return {checked(mean, "mean"), std::sqrt(sigma2), 0.0, 0.0, "exact_enumeration"};
}

MomentEstimate moments_monte_carlo(const WindowFn &fn, int window, const NullModel &null,
                                   std::int64_t reps, std::uint64_t seed) {
    const int m = window;
    const int span = 2 * m - 1;
    const int num_chunks = int(std::min<std::int64_t>(256, std::max<std::int64_t>(1, reps / 64)));
    struct Chunk {
        double mean = 0.0;
        double sigma2 = 0.0;
    };
    std::vector<Chunk> chunks(num_chunks);
    parallel_for(num_chunks, 0, [&](std::int64_t c) {
        std::int64_t begin = reps * c / num_chunks;
        std::int64_t end = reps * (c + 1) / num_chunks;
        Rng rng(derive_seed(seed, std::uint64_t(c)));
        CompensatedSum s1, s2;
        std::vector<CompensatedSum> cross(std::size_t(m > 1 ? m - 1 : 0));
        std::vector<double> window_buf(span);
        for (std::int64_t r = begin; r < end; ++r) {
            for (int i = 0; i < span; ++i)
                window_buf[i] = null.sample(rng);
            std::span<const double> w(window_buf);
            double v1 = fn(w.subspan(0, m));
            if (!std::isfinite(v1))
                throw Error(Errc::non_finite_moment, "f produced a non-finite value");
            s1.add(v1);
            s2.add(v1 * v1);
            for (int i = 2; i <= m; ++i)
                cross[i - 2].add(v1 * fn(w.subspan(i - 1, m)));
        }
        double count = double(end - begin);
        double mean = s1.value() / count;
        double var = s2.value() / count - mean * mean;
        double cov_total = 0.0;
        for (auto &cs : cross)
            cov_total += cs.value() / count - mean * mean;
        chunks[c] = {mean, var + 2.0 * cov_total};
    });
    double mean = 0.0, sigma2 = 0.0;
    for (const auto &c : chunks) {
        mean += c.mean;
        sigma2 += c.sigma2;
    }
    mean /= num_chunks;
    sigma2 /= num_chunks;
    double mean_var = 0.0, sig_var = 0.0;
    for (const auto &c : chunks) {
        mean_var += (c.mean - mean) * (c.mean - mean);
        sig_var += (c.sigma2 - sigma2) * (c.sigma2 - sigma2);
    }
    double denom = double(num_chunks) * std::max(1.0, double(num_chunks - 1));
    double mean_se = std::sqrt(mean_var / denom);
    double var_se = std::sqrt(sig_var / denom);
    if (sigma2 < 0.0) {
        if (sigma2 < -5.0 * var_se)
            throw Error(Errc::negative_variance_estimate,
                        "sigma^2 estimate negative beyond 5 SE; increase mc_reps");
        sigma2 = 0.0;
    }
    checked(mean, "mean");
    checked(sigma2, "sigma^2");
    MomentEstimate est;
    est.mean = mean;
    est.sigma = std::sqrt(sigma2);
    est.mean_se = mean_se;
    est.var_se = var_se;
    est.method = "monte_carlo(reps=" + std::to_string(reps) + ",seed=" + std::to_string(seed) + ")";
    return est;
}

} // namespace

MomentEstimate compute_sum_moments(const WindowFn &fn, int window, const NullModel &null,
                                   const MomentMethod &method) {
    if (window < 1)
        throw Error(Errc::bad_params, "window must be positive");
    switch (method.kind) {
    case MomentMethod::Kind::closed_form:
        return moments_closed_form(fn, window, null);
    case MomentMethod::Kind::exact_enumeration:
        return moments_enumeration(fn, window, null, method.enum_cap);
    case MomentMethod::Kind::monte_carlo:
        return moments_monte_carlo(fn, window, null, method.mc_reps, method.seed);
    }
    throw Error(Errc::bad_params, "unknown moment method");
}

MomentEstimate compute_lb_moments(const WindowFn &fn, int window, const NullModel &null,
                                  const MomentMethod &method) {
    return compute_sum_moments(fn, window, null, method);
}

CellEstimate compute_sb_cells(const Classifier &classify, int block_len, int num_classes,
                              const NullModel &null, const MomentMethod &method) {
    if (block_len < 1 || num_classes < 1)
        throw Error(Errc::bad_params, "block length and class count must be positive");
    auto classify_checked = [&](std::span<const double> w) {
        int c = classify(w);
        if (c < 0 || c >= num_classes)
            throw Error(Errc::bad_params, "classifier output outside 0..K_sb");
        return c;
    };
    CellEstimate est;
    est.probs.assign(num_classes, 0.0);
    est.se.assign(num_classes, 0.0);
    if (method.kind == MomentMethod::Kind::exact_enumeration) {
        for_each_word(null, block_len, method.enum_cap,
                      [&](std::span<const double> w, double p) { est.probs[classify_checked(w)] += p; });
        est.method = "exact_enumeration";
    } else if (method.kind == MomentMethod::Kind::monte_carlo) {
        Rng rng(method.seed);
        std::vector<double> window_buf(block_len);
        std::vector<std::int64_t> counts(num_classes, 0);
        for (std::int64_t r = 0; r < method.mc_reps; ++r) {
            for (int i = 0; i < block_len; ++i)
                window_buf[i] = null.sample(rng);
            ++counts[classify_checked(window_buf)];
        }
        for (int j = 0; j < num_classes; ++j) {
            est.probs[j] = double(counts[j]) / double(method.mc_reps);
            est.se[j] = std::sqrt(est.probs[j] * (1.0 - est.probs[j]) / double(method.mc_reps));
        }
        est.method = "monte_carlo(reps=" + std::to_string(method.mc_reps) +
                     ",seed=" + std::to_string(method.seed) + ")";
    } else {
        throw Error(Errc::bad_params, "cell probabilities: use enumeration, monte_carlo, or a catalog entry");
    }
    for (int j = 0; j < num_classes; ++j)
        if (est.probs[j] <= 0.0)
            throw Error(Errc::empty_cell, "class " + std::to_string(j) + " has probability 0 under H0");
    return est;
}

int Battery::stat_count() const {
    return 3 * int(config_.triples.size()) + int(config_.quads.size());
}

std::vector<std::string> Battery::stat_labels() const {
    std::vector<std::string> labels;
    for (std::size_t q = 0; q < config_.triples.size(); ++q) {
        labels.push_back("sum[" + std::to_string(q) + "]");
        labels.push_back("lb[" + std::to_string(q) + "]");
        labels.push_back("sb[" + std::to_string(q) + "]");
    }
    for (std::size_t j = 0; j < config_.quads.size(); ++j)
        labels.push_back("quad[" + std::to_string(j) + "]");
    return labels;
}

Battery validate_battery(BatteryConfig config) {
    if (config.triples.empty())
        throw Error(Errc::bad_params, "battery needs at least one triple");
    if (config.num_blocks < 1 || config.stride < 1 || config.span < 1)
        throw Error(Errc::bad_params, "N, h, s must be positive");

    Battery battery;
    int max_window = 1;
    for (std::size_t q = 0; q < config.triples.size(); ++q) {
        const auto &t = config.triples[q];
        const std::string at = " (triple " + std::to_string(q) + ")";
        if (t.sum.window < 1 || t.lb.window < 1)
            throw Error(Errc::bad_params, "window lengths must be positive" + at);
        if (!(t.sum.sigma > 0.0) || !std::isfinite(t.sum.sigma))
            throw Error(Errc::degenerate_sigma, "sigma_sum must be in (0,inf)" + at);
        if (!(t.lb.sigma > 0.0) || !std::isfinite(t.lb.sigma))
            throw Error(Errc::degenerate_sigma, "sigma_lb must be in (0,inf)" + at);
        if (!std::isfinite(t.sum.mean) || !std::isfinite(t.lb.mean))
            throw Error(Errc::non_finite_moment, "mean is not finite" + at);
        if (t.lb.num_blocks < 1)
            throw Error(Errc::bad_params, "N_lb must be positive" + at);
        if (config.num_blocks % t.lb.num_blocks != 0)
            throw Error(Errc::divisibility_violation,
                        "N_lb=" + std::to_string(t.lb.num_blocks) + " does not divide N=" +
                            std::to_string(config.num_blocks) + at);
        if (config.stride % t.sb.block_len != 0)
            throw Error(Errc::divisibility_violation,
                        "L_sb=" + std::to_string(t.sb.block_len) + " does not divide h=" +
                            std::to_string(config.stride) + at);
        if (int(t.sb.cell_probs.size()) != t.sb.num_classes)
            throw Error(Errc::bad_params, "cell vector size mismatch" + at);
        double cell_total = 0.0;
        for (int j = 0; j < t.sb.num_classes; ++j) {
            double p = t.sb.cell_probs[j];
            if (!(p > 0.0))
                throw Error(Errc::empty_cell,
                            "E_sb(" + std::to_string(j) + ") must be positive" + at);
            cell_total += p;
        }
        if (std::abs(cell_total - 1.0) > 1e-12)
            throw Error(Errc::bad_params, "cell probabilities must sum to 1 within 1e-12" + at);
        max_window = std::max(max_window, std::max(t.sum.window, t.lb.window));
        if (!config.null_model.space().is_finite()) {
            if (!t.sum.bound_hint)
                battery.warnings_.push_back("f_sum" + at +
                                            " has no bound hint; fine under H0 (boundedness "
                                            "only matters for general alternatives)");
            if (!t.lb.bound_hint)
                battery.warnings_.push_back("f_lb" + at + " has no bound hint; fine under H0");
        }
    }

    for (std::size_t j = 0; j < config.quads.size(); ++j) {
        const auto &quad = config.quads[j];
        const std::string at = " (quad " + std::to_string(j) + ")";
        if (quad.coeff.empty() || quad.sum_refs.empty())
            throw Error(Errc::bad_params, "quadratic form needs rows and sum refs" + at);
        for (const auto &row : quad.coeff)
            if (row.size() != quad.sum_refs.size())
                throw Error(Errc::dimension_mismatch, "coefficient row width mismatch" + at);
        for (int ref : quad.sum_refs)
            if (ref < 0 || ref >= int(config.triples.size()))
                throw Error(Errc::bad_params, "sum ref out of range" + at);
    }

    int span_lower = config.stride + max_window - 1;
    if (config.span < span_lower)
        throw Error(Errc::window_too_short, "s=" + std::to_string(config.span) +
                                                " is below s_lower=" + std::to_string(span_lower));
    std::int64_t min_n = std::int64_t(config.num_blocks) * (2 * config.stride - 1);
    if (config.sample_length < min_n)
        throw Error(Errc::sequence_too_short,
                    "n=" + std::to_string(config.sample_length) + " is below N*(2h-1)=" +
                        std::to_string(min_n));

    battery.config_ = std::move(config);
    battery.span_lower_ = span_lower;
    return battery;
}

} // namespace randtest
