#pragma once

#include <vector>

#include "bucb/core.hpp"
#include "bucb/rng.hpp"

namespace bucb {

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse standard normal CDF for p in (0, 1). Rational approximation
// polished with one Halley step against erfc; accurate to ~1e-15.
// Throws DomainError outside (0, 1).
double normal_quantile(double p);

// Gaussian conditioned on [lower, upper]. Sampling is by inverse CDF so a
// single uniform maps monotonically to one sample — the property that makes
// common random numbers across policies meaningful.
class TruncatedGaussian {
 public:
  TruncatedGaussian(double mu, double sigma, double lower, double upper);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  // Post-truncation expectation (this, not mu, is an arm's true mean).
  double mean() const { return mean_; }

  // Inverse CDF at u in [0, 1]; u=0 / u=1 hit the support edges exactly.
  double quantile(double u) const;

 private:
  double mu_, sigma_, lower_, upper_;
  double cdf_lower_, cdf_upper_;  // of (bound - mu)/sigma
  double mean_;
};

TruncatedGaussian make_arm_distribution(const ArmSpec& arm);

// The ground-truth expected QoE of an arm: the post-truncation mean.
double true_expected_qoe(const TruncatedGaussian& dist);

// QoE vector for one pull: num_users independent draws from the arm's
// distribution, u_ij in [kQoeMin, kQoeMax]. pull_index is 1-based.
std::vector<double> sample_feedback(const FeedbackStream& stream,
                                    const TruncatedGaussian& dist, int arm_id,
                                    std::int64_t pull_index, int num_users);

}  // namespace bucb
