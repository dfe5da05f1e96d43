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

#ifndef RANDTEST_COMMON_HPP
#define RANDTEST_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace randtest {

enum class Errc {
    divisibility_violation,
    window_too_short,
    degenerate_sigma,
    empty_cell,
    enumeration_too_large,
    cap_exceeded,
    indefinite_estimate,
    negative_variance_estimate,
    non_finite_moment,
    sequence_too_short,
    dimension_mismatch,
    unknown_statistic,
    unknown_test,
    bad_params,
    malformed_input,
    out_of_range,
    io_error,
    too_few_replicas,
    not_psd,
};

const char *errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

// Neumaier variant of Kahan summation. The sliding-window statistics
// accumulate up to 1e8 terms; plain summation loses the 1e-9 identities.
class CompensatedSum {
  public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline bool nearly_equal(double a, double b, double rel, double abs_floor = 0.0) {
    double diff = std::abs(a - b);
    double scale = std::max(std::abs(a), std::abs(b));
    return diff <= std::max(abs_floor, rel * scale);
}

} // namespace randtest

#endif
