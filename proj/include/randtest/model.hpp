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

#ifndef RANDTEST_MODEL_HPP
#define RANDTEST_MODEL_HPP

#include "randtest/common.hpp"
#include "randtest/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace randtest {

// Sample space of the tested sequence: a finite alphabet {0,..,R-1}
// (elements stored as exact small integers in double) or the unit interval.
struct SampleSpace {
    enum class Kind { finite, unit_interval };

    Kind kind = Kind::finite;
    int alphabet_size = 2;

    static SampleSpace finite(int R) {
        if (R < 2)
            throw Error(Errc::bad_params, "finite alphabet needs R >= 2");
        return {Kind::finite, R};
    }
    static SampleSpace unit_interval() { return {Kind::unit_interval, 0}; }

    bool is_finite() const { return kind == Kind::finite; }
    bool contains(double x) const;
    bool operator==(const SampleSpace &other) const = default;
};

// The H0 law: iid elements with a fixed distribution on the space.
class NullModel {
  public:
    static NullModel finite(std::vector<double> pmf);
    static NullModel bernoulli_half() { return finite({0.5, 0.5}); }
    static NullModel uniform01();

    const SampleSpace &space() const { return space_; }
    const std::vector<double> &pmf() const { return pmf_; }

    double sample(Rng &rng) const;

    bool operator==(const NullModel &other) const {
        return space_ == other.space_ && pmf_ == other.pmf_;
    }

  private:
    SampleSpace space_;
    std::vector<double> pmf_;    // empty for the unit interval
    std::vector<double> cdf_;
};

// Pure window functionals; identical input must give identical output.
using WindowFn = std::function<double(std::span<const double>)>;
using Classifier = std::function<int(std::span<const double>)>;

struct MomentMethod {
    enum class Kind { closed_form, exact_enumeration, monte_carlo };

    Kind kind = Kind::exact_enumeration;
    std::int64_t mc_reps = 1'000'000;
    std::uint64_t seed = 0;
    std::int64_t enum_cap = std::int64_t(1) << 24;

    static MomentMethod closed_form() { return {Kind::closed_form, 0, 0, 0}; }
    static MomentMethod exact_enumeration(std::int64_t cap = std::int64_t(1) << 24) {
        MomentMethod m;
        m.kind = Kind::exact_enumeration;
        m.enum_cap = cap;
        return m;
    }
    static MomentMethod monte_carlo(std::int64_t reps, std::uint64_t seed) {
        MomentMethod m;
        m.kind = Kind::monte_carlo;
        m.mc_reps = reps;
        m.seed = seed;
        return m;
    }
};

struct MomentEstimate {
    double mean = 0.0;
    double sigma = 0.0;          // nonnegative root of the limit variance
    double mean_se = 0.0;        // zero for exact methods
    double var_se = 0.0;
    std::string method;
};

struct CellEstimate {
    std::vector<double> probs;
    std::vector<double> se;
    std::string method;
};

struct SumSpec {
    std::string id;
    int window = 1;              // m_sum
    WindowFn fn;
    double mean = 0.0;           // E_sum
    double sigma = 0.0;          // sigma_sum
    std::optional<double> bound_hint;
    std::string moment_method;
};

struct LongBlockSpec {
    std::string id;
    int window = 1;              // m_lb
    int num_blocks = 1;          // N_lb
    WindowFn fn;
    double mean = 0.0;           // E_lb
    double sigma = 0.0;          // sigma_lb
    std::optional<double> bound_hint;
    std::string moment_method;
};

struct ShortBlockSpec {
    std::string id;
    int block_len = 1;           // L_sb
    int num_classes = 1;         // K_sb + 1
    Classifier classify;
    std::vector<double> cell_probs;  // E_sb(0..K_sb)
    std::string moment_method;

    int k_sb() const { return num_classes - 1; }
};

// Nonnegative-definite quadratic form sum_i (sum_q d(i,q) T_sum^[q])^2.
struct QuadSpec {
    std::string id;
    std::vector<std::vector<double>> coeff;  // tau rows, one entry per sum_ref
    std::vector<int> sum_refs;               // triple indices supplying T_sum
};

struct Triple {
    SumSpec sum;
    LongBlockSpec lb;
    ShortBlockSpec sb;
};

struct BatteryConfig {
    NullModel null_model = NullModel::bernoulli_half();
    std::vector<Triple> triples;
    std::vector<QuadSpec> quads;
    int num_blocks = 1;          // N
    int stride = 1;              // h
    int span = 1;                // s
    std::int64_t sample_length = 0;  // n
};

// A BatteryConfig that passed validate_battery; immutable afterwards.
class Battery {
  public:
    const BatteryConfig &config() const { return config_; }
    const NullModel &null_model() const { return config_.null_model; }
    const std::vector<Triple> &triples() const { return config_.triples; }
    const std::vector<QuadSpec> &quads() const { return config_.quads; }
    int num_blocks() const { return config_.num_blocks; }
    int stride() const { return config_.stride; }
    int span() const { return config_.span; }
    std::int64_t sample_length() const { return config_.sample_length; }

    int span_lower() const { return span_lower_; }   // s_star lower bound
    int stat_count() const;                          // 3Q + J
    std::vector<std::string> stat_labels() const;
    const std::vector<std::string> &warnings() const { return warnings_; }

    friend Battery validate_battery(BatteryConfig config);

  private:
    BatteryConfig config_;
    int span_lower_ = 1;
    std::vector<std::string> warnings_;
};

Battery validate_battery(BatteryConfig config);

// E_sum and sigma_sum per the m-dependent CLT variance
//   sigma^2 = Var f + 2 sum_{i=2..m} cov(f(e_i..e_{i+m-1}), f(e_1..e_m)).
MomentEstimate compute_sum_moments(const WindowFn &fn, int window, const NullModel &null,
                                   const MomentMethod &method);
MomentEstimate compute_lb_moments(const WindowFn &fn, int window, const NullModel &null,
                                  const MomentMethod &method);
CellEstimate compute_sb_cells(const Classifier &classify, int block_len, int num_classes,
                              const NullModel &null, const MomentMethod &method);

// Iterates every word of length `len` over the finite alphabet, passing the
// symbols (as doubles) and the H0 probability of the word.
void for_each_word(const NullModel &null, int len, std::int64_t cap,
                   const std::function<void(std::span<const double>, double)> &fn);

} // namespace randtest

#endif
