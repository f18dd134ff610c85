#include "matchsim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <random>

#include "matchsim/errors.hpp"

namespace matchsim {

CompatibilityGraph::CompatibilityGraph(int n, std::vector<std::pair<int, int>> edges)
    : n_(n) {
  if (n < 1) throw ConfigError("graph needs at least one class, got n=" + std::to_string(n));
  for (auto& [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n)
      throw ConfigError("edge endpoint out of range 1.." + std::to_string(n));
    if (i == j) throw ConfigError("self-loop " + std::to_string(i) + " not allowed");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  adjacency_.assign(static_cast<std::size_t>(n_ + 1) * (n_ + 1), 0);
  for (const auto& [i, j] : edges_) {
    adjacency_[static_cast<std::size_t>(i) * (n_ + 1) + j] = 1;
    adjacency_[static_cast<std::size_t>(j) * (n_ + 1) + i] = 1;
  }
}

void CompatibilityGraph::check_class(int i) const {
  if (i < 1 || i > n_)
    throw ConfigError("class " + std::to_string(i) + " out of range 1.." + std::to_string(n_));
}

std::vector<int> CompatibilityGraph::neighborhood(std::span<const int> u) const {
  std::vector<char> seen(static_cast<std::size_t>(n_) + 1, 0);
  for (int i : u) {
    check_class(i);
    for (const auto& [a, b] : edges_) {
      if (a == i) seen[b] = 1;
      if (b == i) seen[a] = 1;
    }
  }
  std::vector<int> out;
  for (int j = 1; j <= n_; ++j)
    if (seen[j]) out.push_back(j);
  return out;
}

bool CompatibilityGraph::connected() const {
  std::vector<char> visited(static_cast<std::size_t>(n_) + 1, 0);
  std::vector<int> stack{1};
  visited[1] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : edges_) {
      const int other = (a == v) ? b : (b == v) ? a : 0;
      if (other != 0 && !visited[other]) {
        visited[other] = 1;
        ++count;
        stack.push_back(other);
      }
    }
  }
  return count == n_;
}

CompatibilityGraph random_connected_er(int n, double q, std::uint64_t seed,
                                       int max_attempts) {
  if (n < 2) throw ConfigError("random graph needs n >= 2");
  if (!(q > 0.0) || q > 1.0) throw ConfigError("edge probability must be in (0, 1]");
  // Raw 53-bit uniforms from the (fully specified) mt19937_64 stream; the
  // std:: distributions are not bit-stable across standard libraries.
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < q) edges.emplace_back(i, j);
      }
    CompatibilityGraph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw ConfigError("no connected graph after " + std::to_string(max_attempts) +
                    " attempts; q=" + std::to_string(q) + " is too small for n=" +
                    std::to_string(n));
}

namespace {

int parse_count(const std::string& name, std::size_t colon) {
  int n = 0;
  const char* first = name.data() + colon + 1;
  const char* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last || n < 1)
    throw ConfigError("bad class count in graph name '" + name + "'");
  return n;
}

}  // namespace

CompatibilityGraph named_graph(const std::string& name) {
  if (name == "paw") return CompatibilityGraph(4, {{1, 2}, {2, 3}, {2, 4}, {3, 4}});
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    const std::string kind = name.substr(0, colon);
    const int n = parse_count(name, colon);
    std::vector<std::pair<int, int>> edges;
    if (kind == "path") {
      for (int i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
      return CompatibilityGraph(n, std::move(edges));
    }
    if (kind == "complete") {
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
      return CompatibilityGraph(n, std::move(edges));
    }
  }
  throw ConfigError("unknown graph name '" + name +
                    "' (expected paw, path:<n> or complete:<n>)");
}

}  // namespace matchsim
