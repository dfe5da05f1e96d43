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

#include "randtest/special.hpp"

#include "randtest/common.hpp"

#include <algorithm>
#include <cmath>

namespace randtest {

namespace {

double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz for the continued fraction of Q(a,x).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
        throw Error(Errc::bad_params, "gamma_p domain");
    if (x == 0.0)
        return 0.0;
    if (x < a + 1.0)
        return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0 || !std::isfinite(a) || !std::isfinite(x))
        throw Error(Errc::bad_params, "gamma_q domain");
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0)
        return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi2_cdf(double x, double df) {
    if (df == 0.0)
        return x >= 0.0 ? 1.0 : 0.0;
    if (x <= 0.0)
        return 0.0;
    return gamma_p(df / 2.0, x / 2.0);
}

double ks_q(double lambda) {
    if (lambda <= 0.0)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        double term = std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
        sum += sign * term;
        if (term < 1e-18)
            break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_p_from_distance(double d, double n_eff) {
    double sn = std::sqrt(n_eff);
    return ks_q((sn + 0.12 + 0.11 / sn) * d);
}

} // namespace

KsResult ks_test(std::span<const double> sample, double (*cdf)(double, double), double param) {
    if (sample.empty())
        throw Error(Errc::too_few_replicas, "KS test on empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    double n = double(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double f = cdf(sorted[i], param);
        d = std::max(d, std::max((double(i) + 1.0) / n - f, f - double(i) / n));
    }
    return {d, ks_p_from_distance(d, n)};
}

KsResult ks_test_normal(std::span<const double> sample) {
    return ks_test(sample, [](double x, double) { return normal_cdf(x); }, 0.0);
}

KsResult ks_test_chi2(std::span<const double> sample, double df) {
    return ks_test(sample, [](double x, double v) { return chi2_cdf(x, v); }, df);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw Error(Errc::too_few_replicas, "two-sample KS on empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double na = double(sa.size()), nb = double(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x)
            ++i;
        while (j < sb.size() && sb[j] <= x)
            ++j;
        d = std::max(d, std::abs(double(i) / na - double(j) / nb));
    }
    double n_eff = na * nb / (na + nb);
    return {d, ks_p_from_distance(d, n_eff)};
}

double median(std::vector<double> values) {
    if (values.empty())
        throw Error(Errc::too_few_replicas, "median of empty sample");
    std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1)
        return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

double binom_coeff(int n, int k) {
    if (k < 0 || k > n)
        return 0.0;
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

const char *errc_name(Errc code) {
    switch (code) {
    case Errc::divisibility_violation: return "DivisibilityViolation";
    case Errc::window_too_short: return "WindowTooShort";
    case Errc::degenerate_sigma: return "DegenerateSigma";
    case Errc::empty_cell: return "EmptyCell";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::indefinite_estimate: return "IndefiniteEstimate";
    case Errc::negative_variance_estimate: return "NegativeVarianceEstimate";
    case Errc::non_finite_moment: return "NonFiniteMoment";
    case Errc::sequence_too_short: return "SequenceTooShort";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::unknown_statistic: return "UnknownStatistic";
    case Errc::unknown_test: return "UnknownTest";
    case Errc::bad_params: return "BadParams";
    case Errc::malformed_input: return "MalformedInput";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::io_error: return "IoError";
    case Errc::too_few_replicas: return "TooFewReplicas";
    case Errc::not_psd: return "NotPSD";
    }
    return "UnknownError";
}

} // namespace randtest
