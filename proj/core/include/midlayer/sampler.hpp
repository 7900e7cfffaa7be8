#pragma once

#include <cstdint>
#include <vector>

#include "midlayer/oracle.hpp"
#include "midlayer/polymer.hpp"
#include "midlayer/rng.hpp"

namespace midlayer {

/// An element Λ of Ω_P: pairwise-compatible polymers on one side. Stored by
/// the union mask of its polymers (the decomposition into 2-linked components
/// recovers Λ uniquely).
struct PolymerConfig {
  Side side = Side::upper;
  uint64_t union_mask = 0;  // over the side's ids, N <= 20 here
  int num_polymers = 0;
  int total_size = 0;     // ‖Λ‖
  int boundary_size = 0;  // |N(Λ)|
};

struct NuRow {
  PolymerConfig config;
  Rat weight;  // Π w(S) = λ^‖Λ‖ / (1+λ)^|N(Λ)|
  Rat prob;    // weight / Ξ
};

/// The measure ν on polymer configurations, tabulated exactly. Rows are in
/// ascending union-mask order; probabilities sum to 1 exactly.
struct NuTable {
  Side side = Side::upper;
  Rat lambda;
  Rat xi;  // Ξ(P, w)
  std::vector<NuRow> rows;
  std::vector<mpz_class> cumulative;  // integer CDF for exact inverse sampling
  mpz_class cumulative_total;
};

/// Full ν table; needs the side enumerable (N <= 20, i.e. d <= 3).
NuTable exact_nu_table(const LayerGraph& g, const Rat& lambda, Side side);

struct SampleRecord {
  uint64_t index = 0;
  Side defect = Side::upper;
  uint64_t config_mask = 0;  // I ∩ defect side
  int config_size = 0;       // ‖Λ‖
  int num_polymers = 0;
  uint64_t upper_mask = 0;  // I ∩ upper
  uint64_t lower_mask = 0;  // I ∩ lower
  Side minority = Side::lower;
};

struct SampleRun {
  uint64_t seed = 0;
  std::vector<SampleRecord> records;
};

/// Exact three-step μ̂ sampler: uniform defect side, Λ ~ ν by integer inverse
/// CDF, then an exact λ/(1+λ) coin for every admissible non-defect vertex.
/// All randomness comes from per-index split streams of `seed`.
class MuHatSampler {
public:
  MuHatSampler(const LayerGraph& g, const Rat& lambda);

  SampleRecord sample(uint64_t seed, uint64_t index) const;
  SampleRun run(uint64_t seed, uint64_t count) const;

  const NuTable& table(Side s) const { return s == Side::upper ? up_ : lo_; }
  const LayerGraph& graph() const { return g_; }

private:
  const LayerGraph& g_;
  Rat lambda_;
  mpz_class coin_num_, coin_den_;  // P(include) = coin_num_/coin_den_
  NuTable up_, lo_;
};

struct HardcoreRow {
  uint64_t upper_mask = 0;
  uint64_t lower_mask = 0;
  Rat prob;  // λ^|I| / Z
};

/// Exact hard-core table over all independent sets (d <= 3); probabilities
/// sum to 1 exactly.
std::vector<HardcoreRow> exact_hardcore_table(const LayerGraph& g, const Rat& lambda);

/// μ̂ mass of a single independent set: λ^|I|·(good_U + good_L)/(2(1+λ)^N·Ξ),
/// where good_D says every 2-linked component of I∩D keeps closure below
/// half the layer. This is the convolution of the three sampling steps.
Rat mu_hat_mass(const LayerGraph& g, const Rat& lambda, const Rat& xi, uint64_t upper_mask,
                uint64_t lower_mask);

struct TvReport {
  Rat tv;      // ½ Σ_I |μ̂(I) − μ(I)|
  Rat b_mass;  // P(I ∈ B ∧ M != D) = Σ_B λ^|I| / (2(1+λ)^N Ξ)
  Rat z;       // Z(λ)
  Rat xi;      // Ξ(P, w)
  Rat b_sum;   // Σ_B λ^|I|
};

/// Exact total-variation distance between μ̂ and the hard-core measure.
TvReport tv_distance(const LayerGraph& g, const Rat& lambda);

struct MinorityStats {
  uint64_t samples = 0;
  double rate_minority_ne_defect = 0.0;
  double mean_config_size = 0.0;        // mean ‖Λ‖
  double mean_config_fraction = 0.0;    // mean ‖Λ‖/N
  double bound_rate = 0.0;              // 2·exp(−N/d⁵), reference only
  double bound_fraction = 0.0;          // 1/d², reference only
};

MinorityStats minority_defect_stats(const LayerGraph& g, const SampleRun& run);

enum class CensusMode { exact, sampled };

struct CensusProfile {
  int max_comp_upper = 0;
  int max_comp_lower = 0;
  Rat mass;          // hard-core probability mass (exact mode)
  uint64_t count = 0;  // raw occurrences (sampled mode)
};

struct CensusReport {
  CensusMode mode = CensusMode::exact;
  std::vector<CensusProfile> profiles;
  Rat property_fraction;        // exact mode: mass of sets satisfying the property
  double property_rate = 0.0;   // sampled mode estimate
  uint64_t samples = 0;
  bool proxy_measure = false;  // sampled mode draws from μ̂, not the hard-core law
};

/// Distribution of the largest 2-linked component per side, plus the fraction
/// of independent sets where some side has all components of size <= 2.
CensusReport structure_census(const LayerGraph& g, const Rat& lambda, CensusMode mode,
                              uint64_t samples = 0, uint64_t seed = 1);

/// Minority side convention: the upper layer is minority only when its
/// intersection is strictly smaller; ties go to the lower layer.
inline Side minority_side(int upper_count, int lower_count) {
  return upper_count < lower_count ? Side::upper : Side::lower;
}

}  // namespace midlayer
