#include "bucb/env.hpp"

#include <algorithm>
#include <cmath>

namespace bucb {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile needs p in (0,1), got " +
                      std::to_string(p));
  }
  // Acklam's rational approximation, then one Halley refinement.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step: e = Phi(x) - p, correct by e/phi(x) with curvature term.
  double e = normal_cdf(x) - p;
  double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

TruncatedGaussian::TruncatedGaussian(double mu, double sigma, double lower,
                                     double upper)
    : mu_(mu), sigma_(sigma), lower_(lower), upper_(upper) {
  if (!(sigma > 0.0)) {
    throw DomainError("truncated gaussian sigma must be > 0");
  }
  if (!(lower < upper)) {
    throw DomainError("truncated gaussian needs lower < upper");
  }
  const double alpha = (lower_ - mu_) / sigma_;
  const double beta = (upper_ - mu_) / sigma_;
  cdf_lower_ = normal_cdf(alpha);
  cdf_upper_ = normal_cdf(beta);
  const double z = cdf_upper_ - cdf_lower_;
  if (!(z > 0.0)) {
    throw DegenerateInput("truncation interval has no probability mass");
  }
  mean_ = mu_ + sigma_ * (normal_pdf(alpha) - normal_pdf(beta)) / z;
}

double TruncatedGaussian::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("truncated quantile needs u in [0,1], got " +
                      std::to_string(u));
  }
  if (u <= 0.0) return lower_;
  if (u >= 1.0) return upper_;
  const double p = cdf_lower_ + u * (cdf_upper_ - cdf_lower_);
  const double x = mu_ + sigma_ * normal_quantile(p);
  return std::clamp(x, lower_, upper_);
}

TruncatedGaussian make_arm_distribution(const ArmSpec& arm) {
  return TruncatedGaussian(arm.expected_qoe, arm.noise_sigma, kQoeMin, kQoeMax);
}

double true_expected_qoe(const TruncatedGaussian& dist) { return dist.mean(); }

std::vector<double> sample_feedback(const FeedbackStream& stream,
                                    const TruncatedGaussian& dist, int arm_id,
                                    std::int64_t pull_index, int num_users) {
  if (num_users < 1) throw DegenerateInput("num_users must be >= 1");
  std::vector<double> qoe(static_cast<std::size_t>(num_users));
  for (int j = 0; j < num_users; ++j) {
    qoe[static_cast<std::size_t>(j)] =
        dist.quantile(stream.qoe_uniform(arm_id, pull_index, j));
  }
  return qoe;
}

}  // namespace bucb
