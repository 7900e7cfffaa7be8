#include "midlayer/ursell.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "midlayer/errors.hpp"

namespace midlayer {

IncompatGraph IncompatGraph::complete(int m) {
  IncompatGraph h{m, 0};
  for (int j = 1; j < m; j++)
    for (int i = 0; i < j; i++) h.set_edge(i, j);
  return h;
}

IncompatGraph IncompatGraph::path(int m) {
  IncompatGraph h{m, 0};
  for (int i = 0; i + 1 < m; i++) h.set_edge(i, i + 1);
  return h;
}

namespace {

constexpr int kMaxVerts = 9;

void check_size(const IncompatGraph& h) {
  if (h.m < 1) throw parse_error("Ursell graph needs at least one vertex");
  if (h.m > kMaxVerts)
    throw scale_error("Ursell evaluation limited to 9 vertices, got " + std::to_string(h.m));
}

// adjacency masks per vertex
std::array<uint16_t, kMaxVerts> adjacency(const IncompatGraph& h) {
  std::array<uint16_t, kMaxVerts> adj{};
  for (int j = 1; j < h.m; j++)
    for (int i = 0; i < j; i++)
      if (h.edge(i, j)) {
        adj[i] |= uint16_t(1) << j;
        adj[j] |= uint16_t(1) << i;
      }
  return adj;
}

int64_t signed_count(const IncompatGraph& h) {
  auto adj = adjacency(h);
  int m = h.m;
  std::vector<int64_t> memo(size_t(1) << m, 0);
  std::vector<bool> done(size_t(1) << m, false);

  // W over induced subsets, anchored at the subset's lowest vertex
  auto rec = [&](auto&& self, uint16_t U) -> int64_t {
    if (done[U]) return memo[U];
    done[U] = true;
    int64_t& out = memo[U];
    if (std::popcount(U) == 1) return out = 1;
    int r = std::countr_zero(static_cast<unsigned>(U));
    bool edgeless = true;
    for (uint16_t rest = U; rest && edgeless; rest &= rest - 1)
      if (adj[std::countr_zero(static_cast<unsigned>(rest))] & U) edgeless = false;
    int64_t acc = edgeless ? 1 : 0;
    // subtract W(U \ I) over non-empty independent I avoiding the anchor
    uint16_t pool = U & ~(uint16_t(1) << r);
    for (uint16_t I = pool; I; I = (I - 1) & pool) {
      bool indep = true;
      for (uint16_t rest = I; rest && indep; rest &= rest - 1)
        if (adj[std::countr_zero(static_cast<unsigned>(rest))] & I) indep = false;
      if (indep) acc -= self(self, static_cast<uint16_t>(U & ~I));
    }
    return out = acc;
  };
  return rec(rec, static_cast<uint16_t>((1u << m) - 1));
}

}  // namespace

int64_t ursell_signed_count(const IncompatGraph& h) {
  check_size(h);
  return signed_count(h);
}

Rat ursell(const IncompatGraph& h) {
  check_size(h);
  return Rat(mpz_class(signed_count(h))) / Rat::factorial(static_cast<unsigned long>(h.m));
}

uint64_t UrsellCache::canonical_key(const IncompatGraph& h) {
  check_size(h);
  // relabel by (degree, original id); isomorphism-invariant values make the
  // residual label dependence harmless for a cache
  auto adj = adjacency(h);
  std::array<int, kMaxVerts> order{};
  std::iota(order.begin(), order.begin() + h.m, 0);
  std::stable_sort(order.begin(), order.begin() + h.m, [&](int a, int b) {
    return std::popcount(adj[a]) < std::popcount(adj[b]);
  });
  std::array<int, kMaxVerts> pos{};
  for (int i = 0; i < h.m; i++) pos[order[i]] = i;
  uint64_t mask = 0;
  for (int j = 1; j < h.m; j++)
    for (int i = 0; i < j; i++)
      if (h.edge(i, j)) mask |= 1ull << IncompatGraph::pair_index(pos[i], pos[j]);
  return (static_cast<uint64_t>(h.m) << 40) | mask;
}

UrsellCache& UrsellCache::instance() {
  static UrsellCache cache;
  static std::once_flag once;
  std::call_once(once, [] {
    if (const char* dir = std::getenv("MIDLAYER_CACHE_DIR")) {
      cache.file_ = std::string(dir) + "/ursell.cache";
      if (std::filesystem::exists(cache.file_)) cache.load_file(cache.file_);
    }
  });
  return cache;
}

Rat UrsellCache::get(const IncompatGraph& h) {
  uint64_t key = canonical_key(h);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  Rat value = ursell(h);
  std::lock_guard<std::mutex> lock(mu_);
  map_.emplace(key, value);  // idempotent: any thread computes the same value
  return value;
}

size_t UrsellCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void UrsellCache::save_file(const std::string& path) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::pair<uint64_t, Rat>> rows(map_.begin(), map_.end());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string body;
  for (const auto& [k, v] : rows)
    body += std::to_string(k) + " " + v.num_str() + " " + v.den_str() + "\n";
  std::ofstream out(path + ".tmp", std::ios::trunc);
  if (!out) throw cache_error("cannot write ursell cache at " + path);
  out << "midlayer-ursell-cache 1\n" << body << "checksum " << fnv1a(body) << "\n";
  out.close();
  std::filesystem::rename(path + ".tmp", path);
}

void UrsellCache::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cache_error("cannot open ursell cache at " + path);
  std::string header;
  std::getline(in, header);
  if (header != "midlayer-ursell-cache 1")
    throw cache_error("ursell cache has unknown header: " + path);
  std::string body, line;
  std::vector<std::pair<uint64_t, Rat>> rows;
  bool saw_checksum = false;
  while (std::getline(in, line)) {
    if (line.rfind("checksum ", 0) == 0) {
      uint64_t want = 0;
      try {
        want = std::stoull(line.substr(9));
      } catch (...) {
        throw cache_error("ursell cache checksum line malformed: " + path);
      }
      if (want != fnv1a(body)) throw cache_error("ursell cache checksum mismatch: " + path);
      saw_checksum = true;
      break;
    }
    body += line + "\n";
    std::istringstream ls(line);
    uint64_t key;
    std::string num, den;
    if (!(ls >> key >> num >> den)) throw cache_error("ursell cache row malformed: " + path);
    rows.emplace_back(key, Rat::parse(num + "/" + den));
  }
  if (!saw_checksum) throw cache_error("ursell cache missing checksum: " + path);
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [k, v] : rows) map_.emplace(k, std::move(v));
}

void UrsellCache::persist() const {
  if (!file_.empty()) save_file(file_);
}

}  // namespace midlayer
