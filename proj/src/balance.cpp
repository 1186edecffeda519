#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "covbal/baselines.hpp"
#include "covbal/error.hpp"

namespace covbal {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  std::size_t n = 0;
};

Moments group_moments(const Dataset& d, std::size_t col, Group g) {
  Moments m;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.labels()[i] == g) {
      m.mean += d(i, col);
      ++m.n;
    }
  }
  m.mean /= static_cast<double>(m.n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.labels()[i] == g) m.var += (d(i, col) - m.mean) * (d(i, col) - m.mean);
  }
  m.var = m.n > 1 ? m.var / static_cast<double>(m.n - 1) : 0.0;
  return m;
}

}  // namespace

BalanceTable standardized_differences(const Dataset& d) {
  BalanceTable table;
  for (std::size_t j = 0; j < d.dim(); ++j) {
    const Moments t = group_moments(d, j, Group::Treated);
    const Moments c = group_moments(d, j, Group::Control);
    CovariateBalance row;
    row.name = d.column_names()[j];
    row.treated_mean = t.mean;
    row.control_mean = c.mean;
    const double diff = t.mean - c.mean;
    const double pooled = std::sqrt((t.var + c.var) / 2.0);
    if (pooled == 0.0) {
      if (diff != 0.0) {
        throw DataError("standardized difference undefined for '" + row.name +
                        "': both groups constant with different means");
      }
      table.rows.push_back(row);
      continue;
    }
    row.standardized_difference = diff / pooled;

    const double vt = t.var / static_cast<double>(t.n);
    const double vc = c.var / static_cast<double>(c.n);
    row.t_statistic = diff / std::sqrt(vt + vc);
    row.df = (vt + vc) * (vt + vc) /
             (vt * vt / static_cast<double>(t.n - 1) + vc * vc / static_cast<double>(c.n - 1));
    if (diff == 0.0) {
      row.p_value = 1.0;
    } else {
      const boost::math::students_t dist(row.df);
      row.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(row.t_statistic)));
    }
    table.rows.push_back(row);
  }
  return table;
}

void write_balance_text(const BalanceTable& table, std::ostream& out) {
  std::size_t width = 9;
  for (const auto& r : table.rows) width = std::max(width, r.name.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width)) << "covariate" << std::right
      << std::setw(13) << "treated" << std::setw(13) << "control" << std::setw(10) << "SD"
      << std::setw(10) << "t" << std::setw(12) << "p(Welch)" << '\n';
  for (const auto& r : table.rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.name << std::right << std::fixed
        << std::setprecision(4) << std::setw(13) << r.treated_mean << std::setw(13)
        << r.control_mean << std::setprecision(3) << std::setw(10) << r.standardized_difference
        << std::setw(10) << r.t_statistic << std::setprecision(4) << std::setw(12) << r.p_value
        << '\n';
  }
  out.flags(flags);
}

}  // namespace covbal
