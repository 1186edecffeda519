#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "covbal/dataset.hpp"
#include "covbal/graphs.hpp"

namespace fixture {

inline covbal::Dataset make_dataset(const std::vector<std::vector<double>>& pts,
                                    const std::vector<int>& labels) {
  const std::size_t d = pts.empty() ? 0 : pts[0].size();
  std::vector<double> values;
  for (const auto& p : pts) values.insert(values.end(), p.begin(), p.end());
  std::vector<covbal::Group> g;
  for (int l : labels) g.push_back(l ? covbal::Group::Treated : covbal::Group::Control);
  return covbal::Dataset(std::move(values), d, std::move(g));
}

// First half treated.
inline std::vector<int> halves(std::size_t n) {
  std::vector<int> l(n, 0);
  for (std::size_t i = 0; i < n / 2; ++i) l[i] = 1;
  return l;
}

inline covbal::DistanceMatrix matrix_from(const std::vector<std::vector<double>>& m) {
  std::vector<double> flat;
  for (const auto& r : m) flat.insert(flat.end(), r.begin(), r.end());
  return covbal::DistanceMatrix(m.size(), std::move(flat), covbal::Metric::Precomputed);
}

}  // namespace fixture
