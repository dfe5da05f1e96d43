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

#ifndef RANDTEST_SPECIAL_HPP
#define RANDTEST_SPECIAL_HPP

#include <span>
#include <vector>

namespace randtest {

// Regularized lower incomplete gamma P(a,x); series for x < a+1,
// Lentz continued fraction otherwise. Relative accuracy ~1e-14.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double normal_cdf(double x);

// Chi-square with real df > 0. df == 0 degenerates to a point mass at 0.
double chi2_cdf(double x, double df);

// Kolmogorov limit distribution Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double ks_q(double lambda);

// One-sample KS against a callable CDF; returns {D, p} with the usual
// finite-sample correction (sqrt(n)+0.12+0.11/sqrt(n)) * D.
struct KsResult {
    double distance;
    double p_value;
};

KsResult ks_test(std::span<const double> sample, double (*cdf)(double, double), double param);
KsResult ks_test_normal(std::span<const double> sample);
KsResult ks_test_chi2(std::span<const double> sample, double df);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

double median(std::vector<double> values);

double binom_coeff(int n, int k);

} // namespace randtest

#endif
