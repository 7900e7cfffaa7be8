#include "midlayer/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace midlayer {

namespace {

// single-word helpers over one side (N <= 20 throughout this module)
struct SideOps {
  int N = 0;
  int bad_threshold = 0;
  std::vector<uint64_t> nbr, sq;

  SideOps(const LayerGraph& g, Side side) {
    N = g.side_size(side);
    if (N > 20) throw scale_error("sampler machinery needs an enumerable side (d <= 3)");
    bad_threshold = N / 2 + 1;
    nbr.resize(N);
    sq.resize(N);
    for (int v = 0; v < N; v++) {
      nbr[v] = g.neighbor_mask(side, v).words()[0];
      sq[v] = g.square_mask(side, v).words()[0];
    }
  }

  uint64_t nb_union(uint64_t m) const {
    uint64_t u = 0;
    while (m) {
      u |= nbr[std::countr_zero(m)];
      m &= m - 1;
    }
    return u;
  }

  // components of A in the square graph, as masks
  template <typename F>
  void components(uint64_t A, F&& f) const {
    uint64_t rem = A;
    while (rem) {
      uint64_t comp = rem & (~rem + 1);
      for (;;) {
        uint64_t grow = comp;
        uint64_t m = comp;
        while (m) {
          grow |= sq[std::countr_zero(m)];
          m &= m - 1;
        }
        grow &= A;
        grow |= comp;
        if (grow == comp) break;
        comp = grow;
      }
      f(comp);
      rem &= ~comp;
    }
  }

  int closure_size(uint64_t A) const {
    uint64_t nb = nb_union(A);
    int cl = 0;
    for (int v = 0; v < N; v++) cl += ((nbr[v] & ~nb) == 0);
    return cl;
  }

  // every component's closure below half the layer
  bool good(uint64_t A) const {
    bool ok = true;
    components(A, [&](uint64_t comp) {
      if (ok && closure_size(comp) >= bad_threshold) ok = false;
    });
    return ok;
  }

  int max_component_size(uint64_t A) const {
    int mx = 0;
    components(A, [&](uint64_t comp) { mx = std::max(mx, std::popcount(comp)); });
    return mx;
  }

  int count_components(uint64_t A) const {
    int c = 0;
    components(A, [&](uint64_t) { c++; });
    return c;
  }
};

mpz_class uniform_below(SplitMix64& rng, const mpz_class& bound) {
  if (bound <= 1) return 0;
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  for (;;) {
    mpz_class x = 0;
    for (size_t i = 0; i < words; i++) {
      mpz_mul_2exp(x.get_mpz_t(), x.get_mpz_t(), 64);
      mpz_class limb;
      uint64_t r = rng.next();
      mpz_import(limb.get_mpz_t(), 1, 1, sizeof r, 0, 0, &r);
      x += limb;
    }
    mpz_class masked;
    mpz_fdiv_r_2exp(masked.get_mpz_t(), x.get_mpz_t(), bits);  // rejection rate < 1/2
    if (masked < bound) return masked;
  }
}

}  // namespace

NuTable exact_nu_table(const LayerGraph& g, const Rat& lambda, Side side) {
  g.require_middle_layers("exact_nu_table");
  if (lambda.sign() <= 0) throw parse_error("lambda must be positive");
  SideOps ops(g, side);
  int N = ops.N;

  NuTable t;
  t.side = side;
  t.lambda = lambda;

  // integer CDF weights: λ^s (1+λ)^{N−b} · q^N = p^s q^{b−s} (p+q)^{N−b}
  mpz_class p = lambda.mpq().get_num(), q = lambda.mpq().get_den();
  mpz_class pq = p + q;
  auto powz = [](const mpz_class& base, int e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
  };

  Rat xi(0);
  Rat lp1 = Rat(1) + lambda;
  mpz_class running = 0;
  for (uint64_t mask = 0; mask < (1ull << N); mask++) {
    if (!ops.good(mask)) continue;
    NuRow row;
    row.config.side = side;
    row.config.union_mask = mask;
    row.config.total_size = std::popcount(mask);
    row.config.boundary_size = std::popcount(ops.nb_union(mask));
    row.config.num_polymers = ops.count_components(mask);
    row.weight = lambda.pow(row.config.total_size) / lp1.pow(row.config.boundary_size);
    xi += row.weight;
    running += powz(p, row.config.total_size) *
               powz(q, row.config.boundary_size - row.config.total_size) *
               powz(pq, N - row.config.boundary_size);
    t.rows.push_back(std::move(row));
    t.cumulative.push_back(running);
  }
  t.cumulative_total = running;
  t.xi = xi;
  for (auto& row : t.rows) row.prob = row.weight / xi;
  return t;
}

MuHatSampler::MuHatSampler(const LayerGraph& g, const Rat& lambda)
    : g_(g),
      lambda_(lambda),
      up_(exact_nu_table(g, lambda, Side::upper)),
      lo_(exact_nu_table(g, lambda, Side::lower)) {
  coin_num_ = lambda.mpq().get_num();
  coin_den_ = lambda.mpq().get_num() + lambda.mpq().get_den();
}

SampleRecord MuHatSampler::sample(uint64_t seed, uint64_t index) const {
  SplitMix64 rng = SplitMix64::stream(seed, index);
  SampleRecord rec;
  rec.index = index;
  // step 1: defect side, uniform
  rec.defect = (rng.next() & 1) ? Side::lower : Side::upper;
  const NuTable& table = rec.defect == Side::upper ? up_ : lo_;
  // step 2: Λ ~ ν via integer inverse CDF (first prefix sum exceeding x)
  mpz_class x = uniform_below(rng, table.cumulative_total);
  size_t lo = std::upper_bound(table.cumulative.begin(), table.cumulative.end(), x) -
              table.cumulative.begin();
  const NuRow& row = table.rows[lo];
  rec.config_mask = row.config.union_mask;
  rec.config_size = row.config.total_size;
  rec.num_polymers = row.config.num_polymers;
  // step 3: fill the non-defect side off the boundary with exact coins
  Side nd = opposite(rec.defect);
  SideOps dops(g_, rec.defect);
  uint64_t blocked = dops.nb_union(rec.config_mask);
  uint64_t fill = 0;
  int M = g_.side_size(nd);
  for (int v = 0; v < M; v++) {
    if ((blocked >> v) & 1) continue;
    mpz_class c = uniform_below(rng, coin_den_);
    if (c < coin_num_) fill |= 1ull << v;
  }
  if (rec.defect == Side::upper) {
    rec.upper_mask = rec.config_mask;
    rec.lower_mask = fill;
  } else {
    rec.lower_mask = rec.config_mask;
    rec.upper_mask = fill;
  }
  rec.minority = minority_side(std::popcount(rec.upper_mask), std::popcount(rec.lower_mask));
  return rec;
}

SampleRun MuHatSampler::run(uint64_t seed, uint64_t count) const {
  SampleRun r;
  r.seed = seed;
  r.records.reserve(count);
  for (uint64_t i = 0; i < count; i++) r.records.push_back(sample(seed, i));
  return r;
}

static std::vector<HardcoreRow> exact_hardcore_table_impl(const LayerGraph& g, const Rat& lambda,
                                                          Rat* z_out) {
  g.require_middle_layers("exact_hardcore_table");
  SideOps up(g, Side::upper);
  int N = up.N;
  std::vector<HardcoreRow> rows;
  Rat z(0);
  std::vector<Rat> lpow(2 * N + 1);
  lpow[0] = Rat(1);
  for (int i = 1; i <= 2 * N; i++) lpow[i] = lpow[i - 1] * lambda;
  for (uint64_t a = 0; a < (1ull << N); a++) {
    uint64_t avail = ~up.nb_union(a) & ((1ull << N) - 1);
    uint64_t b = avail;
    for (;;) {
      HardcoreRow row;
      row.upper_mask = a;
      row.lower_mask = b;
      row.prob = lpow[std::popcount(a) + std::popcount(b)];  // normalized below
      z += row.prob;
      rows.push_back(std::move(row));
      if (b == 0) break;
      b = (b - 1) & avail;
    }
  }
  for (auto& row : rows) row.prob = row.prob / z;
  if (z_out) *z_out = z;
  return rows;
}

std::vector<HardcoreRow> exact_hardcore_table(const LayerGraph& g, const Rat& lambda) {
  return exact_hardcore_table_impl(g, lambda, nullptr);
}

Rat mu_hat_mass(const LayerGraph& g, const Rat& lambda, const Rat& xi, uint64_t upper_mask,
                uint64_t lower_mask) {
  SideOps up(g, Side::upper), lo(g, Side::lower);
  int good = (up.good(upper_mask) ? 1 : 0) + (lo.good(lower_mask) ? 1 : 0);
  int len = std::popcount(upper_mask) + std::popcount(lower_mask);
  Rat lp1 = Rat(1) + lambda;
  return lambda.pow(len) * Rat(good) / (Rat(2) * lp1.pow(up.N) * xi);
}

TvReport tv_distance(const LayerGraph& g, const Rat& lambda) {
  g.require_middle_layers("tv_distance");
  SideOps up(g, Side::upper), lo(g, Side::lower);
  int N = up.N;

  TvReport rep;
  SweepHistogram rh = sweep_restricted(g, Side::upper, 1);
  rep.xi = eval_xi_from_histogram(rh, lambda);

  // aggregate independent sets by (|I|, good_U + good_L): μ̂ and μ depend
  // only on the class
  std::map<std::pair<int, int>, uint64_t> classes;
  Rat z(0);
  std::vector<Rat> lpow(2 * N + 1);
  lpow[0] = Rat(1);
  for (int i = 1; i <= 2 * N; i++) lpow[i] = lpow[i - 1] * lambda;
  std::vector<bool> lower_good(1ull << N);
  for (uint64_t m = 0; m < (1ull << N); m++) lower_good[m] = lo.good(m);
  for (uint64_t a = 0; a < (1ull << N); a++) {
    bool ga = up.good(a);
    uint64_t avail = ~up.nb_union(a) & ((1ull << N) - 1);
    uint64_t b = avail;
    for (;;) {
      int good = (ga ? 1 : 0) + (lower_good[b] ? 1 : 0);
      if (good == 0)
        throw invariant_error("independent set outside M_d ∪ M_{d-1}; impossible");
      classes[{std::popcount(a) + std::popcount(b), good}]++;
      z += lpow[std::popcount(a) + std::popcount(b)];
      if (b == 0) break;
      b = (b - 1) & avail;
    }
  }
  rep.z = z;

  Rat lp1 = Rat(1) + lambda;
  Rat denom = Rat(2) * lp1.pow(N) * rep.xi;  // 2(1+λ)^N Ξ
  Rat tv(0), bsum(0);
  for (const auto& [key, count] : classes) {
    auto [len, good] = key;
    Rat mu_hat = lpow[len] * Rat(good) / denom;
    Rat mu = lpow[len] / z;
    Rat diff = mu_hat - mu;
    tv += Rat(mpz_class(static_cast<unsigned long>(count))) * diff.abs();
    if (good == 2) bsum += Rat(mpz_class(static_cast<unsigned long>(count))) * lpow[len];
  }
  rep.tv = tv / Rat(2);
  rep.b_sum = bsum;
  rep.b_mass = bsum / denom;
  return rep;
}

MinorityStats minority_defect_stats(const LayerGraph& g, const SampleRun& run) {
  if (run.records.empty()) throw parse_error("minority/defect statistics need at least one sample");
  g.require_middle_layers("minority_defect_stats");
  MinorityStats s;
  s.samples = run.records.size();
  uint64_t ne = 0;
  double size_acc = 0;
  for (const auto& rec : run.records) {
    if (rec.minority != rec.defect) ne++;
    size_acc += rec.config_size;
  }
  double N = static_cast<double>(g.upper_size());
  double d = static_cast<double>(g.d());
  s.rate_minority_ne_defect = static_cast<double>(ne) / static_cast<double>(s.samples);
  s.mean_config_size = size_acc / static_cast<double>(s.samples);
  s.mean_config_fraction = s.mean_config_size / N;
  s.bound_rate = 2.0 * std::exp(-N / std::pow(d, 5));
  s.bound_fraction = 1.0 / (d * d);
  return s;
}

CensusReport structure_census(const LayerGraph& g, const Rat& lambda, CensusMode mode,
                              uint64_t samples, uint64_t seed) {
  g.require_middle_layers("structure_census");
  CensusReport rep;
  rep.mode = mode;
  std::map<std::pair<int, int>, CensusProfile> profiles;

  if (mode == CensusMode::exact) {
    SideOps up(g, Side::upper), lo(g, Side::lower);
    int N = up.N;
    Rat z(0), good_mass(0);
    std::vector<Rat> lpow(2 * N + 1);
    lpow[0] = Rat(1);
    for (int i = 1; i <= 2 * N; i++) lpow[i] = lpow[i - 1] * lambda;
    std::vector<int> lower_max(1ull << N);
    for (uint64_t m = 0; m < (1ull << N); m++) lower_max[m] = lo.max_component_size(m);
    for (uint64_t a = 0; a < (1ull << N); a++) {
      int mu = up.max_component_size(a);
      uint64_t avail = ~up.nb_union(a) & ((1ull << N) - 1);
      uint64_t b = avail;
      for (;;) {
        int ml = lower_max[b];
        Rat w = lpow[std::popcount(a) + std::popcount(b)];
        auto& p = profiles[{mu, ml}];
        p.max_comp_upper = mu;
        p.max_comp_lower = ml;
        p.mass += w;
        p.count++;
        z += w;
        if (mu <= 2 || ml <= 2) good_mass += w;
        if (b == 0) break;
        b = (b - 1) & avail;
      }
    }
    for (auto& [k, p] : profiles) p.mass = p.mass / z;
    rep.property_fraction = good_mass / z;
    rep.property_rate = rep.property_fraction.to_double();
  } else {
    if (samples == 0) throw parse_error("sampled census needs a positive sample count");
    rep.proxy_measure = true;  // μ̂ is only asymptotically close to hard-core
    rep.samples = samples;
    MuHatSampler sampler(g, lambda);
    SideOps up(g, Side::upper), lo(g, Side::lower);
    uint64_t good = 0;
    for (uint64_t i = 0; i < samples; i++) {
      SampleRecord rec = sampler.sample(seed, i);
      int mu = up.max_component_size(rec.upper_mask);
      int ml = lo.max_component_size(rec.lower_mask);
      auto& p = profiles[{mu, ml}];
      p.max_comp_upper = mu;
      p.max_comp_lower = ml;
      p.count++;
      if (mu <= 2 || ml <= 2) good++;
    }
    rep.property_rate = static_cast<double>(good) / static_cast<double>(samples);
  }

  rep.profiles.reserve(profiles.size());
  for (auto& [k, p] : profiles) rep.profiles.push_back(std::move(p));
  return rep;
}

}  // namespace midlayer
