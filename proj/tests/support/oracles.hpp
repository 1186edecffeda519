#pragma once

// Brute-force reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library's graph, moment or p-value code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix euclidean(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) {
        const long double t = static_cast<long double>(pts[i][k]) - pts[j][k];
        s += t * t;
      }
      d[i][j] = static_cast<double>(std::sqrt(s));
    }
  }
  return d;
}

// Nearest neighbour of every node; a distance tie keeps the lowest index.
inline std::vector<int> nearest(const Matrix& d) {
  const std::size_t n = d.size();
  std::vector<int> nn(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (nn[i] < 0 || d[i][j] < d[i][static_cast<std::size_t>(nn[i])]) nn[i] = static_cast<int>(j);
    }
  }
  return nn;
}

struct NnSummary {
  std::uint64_t c1 = 0, c2 = 0;
};

inline NnSummary nn_summary(const std::vector<int>& nn) {
  NnSummary s;
  const std::size_t n = nn.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (nn[i] == static_cast<int>(j) && nn[j] == static_cast<int>(i)) ++s.c1;
      if (nn[i] == nn[j]) ++s.c2;
    }
  }
  return s;
}

struct Edge {
  int u, v;
  double w;
};

// Prim's algorithm on the dense matrix. With distinct edge weights the MST
// is unique, so this is an independent check on any other construction.
inline std::vector<Edge> prim(const Matrix& d) {
  const std::size_t n = d.size();
  std::vector<bool> in(n, false);
  std::vector<double> best(n, INFINITY);
  std::vector<int> parent(n, -1);
  std::vector<Edge> edges;
  best[0] = 0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in[j] && (u == n || best[j] < best[u])) u = j;
    }
    in[u] = true;
    if (parent[u] >= 0) {
      const int a = std::min(parent[u], static_cast<int>(u));
      const int b = std::max(parent[u], static_cast<int>(u));
      edges.push_back({a, b, d[u][static_cast<std::size_t>(parent[u])]});
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!in[j] && d[u][j] < best[j]) {
        best[j] = d[u][j];
        parent[j] = static_cast<int>(u);
      }
    }
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  return edges;
}

inline std::uint64_t adjacent_pairs(const std::vector<Edge>& tree, std::size_t n) {
  std::vector<std::uint64_t> deg(n, 0);
  for (const auto& e : tree) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  std::uint64_t c = 0;
  for (auto k : deg) c += k * (k > 0 ? k - 1 : 0) / 2;
  return c;
}

// Calls f(labels) for every labeling of n nodes with n / 2 treated (1).
inline void for_each_balanced_labeling(std::size_t n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> labels(n, 0);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n / 2), labels.end(), 1);
  do {
    f(labels);
  } while (std::next_permutation(labels.begin(), labels.end()));
}

struct PairMoments {
  long double mean1 = 0, mean2 = 0, var1 = 0, var2 = 0, cov = 0;
  std::size_t count = 0;
};

// Exact means, variances and covariance of (a, b) over all balanced labelings.
inline PairMoments enumerate_moments(std::size_t n,
                                     const std::function<std::pair<long, long>(const std::vector<int>&)>& stat) {
  std::vector<std::pair<long, long>> values;
  for_each_balanced_labeling(n, [&](const std::vector<int>& l) { values.push_back(stat(l)); });
  PairMoments m;
  m.count = values.size();
  const long double k = static_cast<long double>(values.size());
  for (auto [a, b] : values) {
    m.mean1 += a;
    m.mean2 += b;
  }
  m.mean1 /= k;
  m.mean2 /= k;
  for (auto [a, b] : values) {
    m.var1 += (a - m.mean1) * (a - m.mean1);
    m.var2 += (b - m.mean2) * (b - m.mean2);
    m.cov += (a - m.mean1) * (b - m.mean2);
  }
  m.var1 /= k;
  m.var2 /= k;
  m.cov /= k;
  return m;
}

inline std::pair<long, long> d12_d21(const std::vector<int>& nn, const std::vector<int>& labels) {
  long d12 = 0, d21 = 0;
  for (std::size_t i = 0; i < nn.size(); ++i) {
    const int li = labels[i], lj = labels[static_cast<std::size_t>(nn[i])];
    if (li == 1 && lj == 0) ++d12;
    if (li == 0 && lj == 1) ++d21;
  }
  return {d12, d21};
}

inline std::pair<long, long> r1_r2(const std::vector<Edge>& tree, const std::vector<int>& labels) {
  long r1 = 0, r2 = 0;
  for (const auto& e : tree) {
    const int a = labels[static_cast<std::size_t>(e.u)], b = labels[static_cast<std::size_t>(e.v)];
    if (a == 1 && b == 1) ++r1;
    if (a == 0 && b == 0) ++r2;
  }
  return {r1, r2};
}

inline double phi_bar(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// P(Z1 > h, Z2 > h) for correlation rho by
//   Phi_bar(h)^2 + (1 / 2 pi) int_0^{asin rho} exp(-h^2 / (1 + sin t)) dt,
// integrated with composite Simpson on `panels` panels.
inline double bvn_equal_upper(double h, double rho, int panels = 20000) {
  const double top = std::asin(rho);
  const auto f = [h](double t) { return std::exp(-h * h / (1.0 + std::sin(t))); };
  const double step = top / panels;
  long double acc = f(0) + f(top);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * step);
  const double integral = static_cast<double>(acc) * step / 3.0;
  return phi_bar(h) * phi_bar(h) + integral / (2.0 * std::numbers::pi);
}

// Minimum-cost perfect assignment (rows <= cols) by exhaustive search.
inline double brute_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  const std::size_t cols = rows ? cost[0].size() : 0;
  std::vector<bool> used(cols, false);
  double best = INFINITY;
  std::function<void(std::size_t, double)> rec = [&](std::size_t r, double acc) {
    if (acc >= best) return;
    if (r == rows) {
      best = acc;
      return;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[c]) continue;
      used[c] = true;
      rec(r + 1, acc + cost[r][c]);
      used[c] = false;
    }
  };
  rec(0, 0.0);
  return best;
}

inline double greedy_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t cols = cost.empty() ? 0 : cost[0].size();
  std::vector<bool> used(cols, false);
  double total = 0;
  for (const auto& row : cost) {
    std::size_t pick = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!used[c] && (pick == cols || row[c] < row[pick])) pick = c;
    }
    used[pick] = true;
    total += row[pick];
  }
  return total;
}

inline std::vector<std::vector<double>> gaussian_points(std::size_t n, std::size_t d, std::mt19937_64& g) {
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> p(n, std::vector<double>(d));
  for (auto& row : p)
    for (auto& v : row) v = z(g);
  return p;
}

}  // namespace oracle
