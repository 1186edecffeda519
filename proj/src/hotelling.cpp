#include <string>

#include <boost/math/distributions/fisher_f.hpp>

#include "covbal/baselines.hpp"
#include "covbal/error.hpp"
#include "linalg.hpp"

namespace covbal {


HotellingResult hotelling_t2(const Dataset& d) {
  const std::size_t n = d.size();
  const std::size_t p = d.dim();
  if (p + 2 >= n) {
    throw DataError("Hotelling T^2 needs d < N - 2 (d = " + std::to_string(p) +
                    ", N = " + std::to_string(n) + ")");
  }
  const double n1 = static_cast<double>(d.n_treated());
  const double n2 = static_cast<double>(d.n_control());

  Eigen::VectorXd mean_t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  Eigen::VectorXd mean_c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Map<const Eigen::VectorXd> x(d.row(i).data(), static_cast<Eigen::Index>(p));
    (d.labels()[i] == Group::Treated ? mean_t : mean_c) += x;
  }
  mean_t /= n1;
  mean_c /= n2;

  Eigen::MatrixXd centred(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Map<const Eigen::VectorXd> x(d.row(i).data(), static_cast<Eigen::Index>(p));
    centred.row(static_cast<Eigen::Index>(i)) =
        (x - (d.labels()[i] == Group::Treated ? mean_t : mean_c)).transpose();
  }
  const Eigen::MatrixXd pooled = centred.transpose() * centred / (n1 + n2 - 2.0);

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(pooled);
  const double max_diag = pooled.diagonal().cwiseAbs().maxCoeff();
  const double min_pivot = ldlt.vectorD().minCoeff();
  if (ldlt.info() != Eigen::Success || !(min_pivot > 1e-12 * std::max(1.0, max_diag))) {
    std::string names;
    for (std::size_t j : detail::aliased_columns(centred)) {
      names += (names.empty() ? "" : ", ") + d.column_names()[j];
    }
    throw DataError("Hotelling T^2: pooled covariance is singular; collinear column(s): " +
                    (names.empty() ? std::string("(numerically rank deficient)") : names));
  }

  const Eigen::VectorXd diff = mean_t - mean_c;
  HotellingResult r;
  r.t2 = n1 * n2 / (n1 + n2) * diff.dot(ldlt.solve(diff));
  const double P = static_cast<double>(p);
  r.df1 = P;
  r.df2 = n1 + n2 - P - 1.0;
  r.f = r.df2 / (P * (n1 + n2 - 2.0)) * r.t2;
  if (r.t2 <= 0.0) {
    r.t2 = 0.0;
    r.f = 0.0;
    r.p_value = 1.0;
  } else {
    const boost::math::fisher_f dist(r.df1, r.df2);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.f));
  }
  return r;
}

}  // namespace covbal
