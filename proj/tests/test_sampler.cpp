#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>

#include "midlayer/sampler.hpp"

using namespace midlayer;

TEST_CASE("nu table on B(3,2) matches the hand computation") {
  LayerGraph g(3, 2);
  auto t = exact_nu_table(g, Rat(1), Side::upper);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.xi == Rat(7, 4));
  CHECK(t.rows[0].config.total_size == 0);
  CHECK(t.rows[0].prob == Rat(4, 7));
  for (size_t i = 1; i < 4; i++) {
    CHECK(t.rows[i].prob == Rat(1, 7));
    CHECK(t.rows[i].config.num_polymers == 1);
    CHECK(t.rows[i].config.boundary_size == 2);
  }
  Rat sum(0);
  for (auto& r : t.rows) sum += r.prob;
  CHECK(sum == Rat(1));

  // weight-to-probability relation: row weight / Ξ
  CHECK(t.rows[1].weight == Rat(1, 4));
  CHECK(t.rows[1].weight / t.xi == t.rows[1].prob);
}

TEST_CASE("nu concentrates on the empty config as λ -> 0") {
  LayerGraph g(3, 2);
  auto t = exact_nu_table(g, Rat(1, 1000), Side::upper);
  CHECK(t.rows[0].config.total_size == 0);
  CHECK(t.rows[0].prob > Rat(99, 100));
  CHECK_THROWS_AS(exact_nu_table(g, Rat(0), Side::upper), parse_error);
}

TEST_CASE("exact_nu_table rejects non-enumerable sides") {
  LayerGraph g(9, 5);
  CHECK_THROWS_AS(exact_nu_table(g, Rat(1), Side::upper), scale_error);
}

TEST_CASE("hard-core table on B(3,2)") {
  LayerGraph g(3, 2);
  auto rows = exact_hardcore_table(g, Rat(1));
  CHECK(rows.size() == 18);
  Rat sum(0);
  for (auto& r : rows) {
    CHECK(r.prob == Rat(1, 18));  // uniform at λ=1
    sum += r.prob;
  }
  CHECK(sum == Rat(1));
  auto rows2 = exact_hardcore_table(g, Rat(2));
  Rat sum2(0), empty_prob;
  for (auto& r : rows2) {
    sum2 += r.prob;
    if (r.upper_mask == 0 && r.lower_mask == 0) empty_prob = r.prob;
  }
  CHECK(sum2 == Rat(1));
  CHECK(empty_prob == Rat(1, 65));  // Z(2) = 65
}

TEST_CASE("analytic mu-hat masses reproduce the hand table at d=2") {
  LayerGraph g(3, 2);
  Rat xi(7, 4);
  // ∅, singleton, cross pair, same-side pair, full side
  CHECK(mu_hat_mass(g, Rat(1), xi, 0, 0) == Rat(1, 14));
  CHECK(mu_hat_mass(g, Rat(1), xi, 1, 0) == Rat(1, 14));
  CHECK(mu_hat_mass(g, Rat(1), xi, 0b011, 0) == Rat(1, 28));
  CHECK(mu_hat_mass(g, Rat(1), xi, 0b111, 0) == Rat(1, 28));
  // {1,2} upper with lower {3}: independent cross pair
  int u = g.vertex_id(Side::upper, parse_vertex_label("{1,2}", 3));
  int l = g.vertex_id(Side::lower, parse_vertex_label("{3}", 3));
  CHECK(mu_hat_mass(g, Rat(1), xi, 1ull << u, 1ull << l) == Rat(1, 14));
}

TEST_CASE("tv distance between mu-hat and hard-core at d=2") {
  LayerGraph g(3, 2);
  auto rep = tv_distance(g, Rat(1));
  CHECK(rep.tv == Rat(10, 63));
  CHECK(rep.b_sum == Rat(10));
  CHECK(rep.b_mass == Rat(10, 28));
  CHECK(rep.z == Rat(18));
  CHECK(rep.xi == Rat(7, 4));
  // b_mass · 2(1+λ)^N·Ξ recovers Σ_B λ^|I| exactly
  CHECK(rep.b_mass * Rat(2) * Rat::pow2(3) * rep.xi == rep.b_sum);
  // bounds: 0 <= tv <= 1
  CHECK(rep.tv >= Rat(0));
  CHECK(rep.tv <= Rat(1));
  // both measures collapse onto ∅ as λ -> 0
  auto rep0 = tv_distance(g, Rat(1, 1000));
  CHECK(rep0.tv < Rat(1, 100));
}

TEST_CASE("sampler determinism and validity") {
  LayerGraph g(3, 2);
  MuHatSampler sampler(g, Rat(1));
  auto run1 = sampler.run(42, 500);
  auto run2 = sampler.run(42, 500);
  REQUIRE(run1.records.size() == run2.records.size());
  for (size_t i = 0; i < run1.records.size(); i++) {
    CHECK(run1.records[i].upper_mask == run2.records[i].upper_mask);
    CHECK(run1.records[i].lower_mask == run2.records[i].lower_mask);
    CHECK(run1.records[i].defect == run2.records[i].defect);
  }
  // a different seed must diverge somewhere
  auto run3 = sampler.run(43, 500);
  bool differs = false;
  for (size_t i = 0; i < run1.records.size(); i++)
    if (run1.records[i].upper_mask != run3.records[i].upper_mask ||
        run1.records[i].lower_mask != run3.records[i].lower_mask)
      differs = true;
  CHECK(differs);
  // every sample is an independent set
  for (const auto& rec : run1.records)
    for (int u = 0; u < 3; u++)
      if (rec.upper_mask >> u & 1)
        CHECK((g.neighbor_mask(Side::upper, u).words()[0] & rec.lower_mask) == 0);
}

TEST_CASE("empirical frequencies track the analytic masses") {
  LayerGraph g(3, 2);
  MuHatSampler sampler(g, Rat(1));
  const uint64_t n = 20'000;
  std::map<std::pair<uint64_t, uint64_t>, uint64_t> freq;
  for (uint64_t i = 0; i < n; i++) {
    auto rec = sampler.sample(7, i);
    freq[{rec.upper_mask, rec.lower_mask}]++;
  }
  auto rows = exact_hardcore_table(g, Rat(1));
  Rat xi(7, 4);
  for (const auto& row : rows) {
    double p = mu_hat_mass(g, Rat(1), xi, row.upper_mask, row.lower_mask).to_double();
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    double fr = static_cast<double>(freq[{row.upper_mask, row.lower_mask}]) /
                static_cast<double>(n);
    CHECK(std::abs(fr - p) <= 4 * sigma);
  }
}

TEST_CASE("minority side convention: ties go to the lower layer") {
  CHECK(minority_side(0, 0) == Side::lower);
  CHECK(minority_side(2, 2) == Side::lower);
  CHECK(minority_side(1, 3) == Side::upper);
  CHECK(minority_side(3, 1) == Side::lower);
}

TEST_CASE("minority/defect statistics") {
  LayerGraph g(3, 2);
  MuHatSampler sampler(g, Rat(1));
  auto run = sampler.run(11, 5000);
  auto stats = minority_defect_stats(g, run);
  CHECK(stats.samples == 5000);
  CHECK(stats.mean_config_fraction <= 1.0);
  CHECK(stats.rate_minority_ne_defect >= 0.0);
  CHECK(stats.rate_minority_ne_defect <= 1.0);
  CHECK(stats.bound_fraction == doctest::Approx(0.25));
  SampleRun empty;
  CHECK_THROWS_AS(minority_defect_stats(g, empty), parse_error);
}

TEST_CASE("structure census, exact and sampled") {
  LayerGraph g(3, 2);
  auto rep = structure_census(g, Rat(1), CensusMode::exact);
  CHECK(rep.property_fraction == Rat(1));
  Rat mass(0);
  uint64_t count = 0;
  for (auto& p : rep.profiles) {
    mass += p.mass;
    count += p.count;
  }
  CHECK(mass == Rat(1));
  CHECK(count == 18);
  // the all-empty profile is present and satisfies the property vacuously
  CHECK(rep.profiles[0].max_comp_upper == 0);
  CHECK(rep.profiles[0].max_comp_lower == 0);

  auto srep = structure_census(g, Rat(1), CensusMode::sampled, 3000, 3);
  CHECK(srep.proxy_measure);
  CHECK(srep.samples == 3000);
  CHECK(srep.property_rate == 1.0);  // every B(3,2) set satisfies it
  CHECK_THROWS_AS(structure_census(g, Rat(1), CensusMode::sampled, 0, 3), parse_error);
}

TEST_CASE("census on B(5,3) pins the regression fraction") {
  LayerGraph g(5, 3);
  auto rep = structure_census(g, Rat(1), CensusMode::exact);
  CHECK(rep.property_fraction == Rat(6017, 6212));
}
