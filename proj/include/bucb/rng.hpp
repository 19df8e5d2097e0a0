#pragma once

#include <cstdint>
#include <initializer_list>

namespace bucb {

// Counter-based keyed RNG. Every random draw in the library is a pure
// function of an explicit key tuple, so identical keys give identical draws
// across policies, replications, threads and runs (common random numbers),
// and no stateful generator is ever shared or advanced.
//
// mix64 is the splitmix64 output finalizer; hash_key folds the key words
// through it with an odd multiplier between words.

constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;  // fractional bits of sqrt(2)
  for (std::uint64_t w : words) {
    h = mix64(h ^ w);
    h *= 0x9e3779b97f4a7c15ULL;
  }
  return mix64(h);
}

// Uniform in [0, 1) from the top 53 bits.
constexpr double uniform_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream purposes, kept distinct so draws never collide across uses.
enum class StreamTag : std::uint64_t {
  Feedback = 0xfeedbac0,
  PolicyExploration = 0x99107e,
  ArmRealization = 0xa7a5,
};

// Per-replication source of every stochastic draw an episode needs.
// Feedback depends only on (seed, replication, arm, pull index, user), never
// on the policy, so two policies pulling the same arm for the same k-th time
// observe the same users (paired comparisons). Exploration draws are keyed
// by policy so baselines don't share coin flips with each other.
struct FeedbackStream {
  std::uint64_t base_seed = 0;
  std::uint64_t replication = 0;

  // u_{ij}(t) source uniform; pull_index is 1-based (T_i after the pull).
  double qoe_uniform(int arm_id, std::int64_t pull_index, int user) const {
    return uniform_from_bits(hash_key(
        {base_seed, replication,
         static_cast<std::uint64_t>(StreamTag::Feedback),
         static_cast<std::uint64_t>(arm_id),
         static_cast<std::uint64_t>(pull_index),
         static_cast<std::uint64_t>(user)}));
  }

  // Policy-private uniform (epsilon coin, uniform arm pick), keyed by the
  // policy's tag, the 1-based round and a draw counter within the round.
  double exploration_uniform(std::uint64_t policy_tag, std::int64_t round,
                             int draw) const {
    return uniform_from_bits(hash_key(
        {base_seed, replication,
         static_cast<std::uint64_t>(StreamTag::PolicyExploration), policy_tag,
         static_cast<std::uint64_t>(round),
         static_cast<std::uint64_t>(draw)}));
  }
};

// Uniform used when realizing arm instances from a plan (costs, QoE means).
inline double arm_realization_uniform(std::uint64_t seed,
                                      std::uint64_t replication, int arm_id,
                                      std::uint64_t purpose) {
  return uniform_from_bits(
      hash_key({seed, replication,
                static_cast<std::uint64_t>(StreamTag::ArmRealization),
                static_cast<std::uint64_t>(arm_id), purpose}));
}

}  // namespace bucb
