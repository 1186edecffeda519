#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "covbal/baselines.hpp"
#include "covbal/error.hpp"
#include "covbal/normal.hpp"
#include "linalg.hpp"

namespace covbal {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kRelativeTolerance = 1e-10;
constexpr double kSeparationBound = 30.0;

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double deviance(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double dev = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) dev += softplus(eta[i]) - y[i] * eta[i];
  return 2.0 * dev;
}

Eigen::VectorXd fitted(const Eigen::VectorXd& eta) {
  return eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
}

}  // namespace

LogitFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                      const std::vector<std::string>& names) {
  if (design.rows() != response.size() || static_cast<std::size_t>(design.cols()) != names.size()) {
    throw std::invalid_argument("fit_logistic: design, response and names disagree in size");
  }
  LogitFit fit;
  const auto aliased = detail::aliased_columns(design);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (std::find(aliased.begin(), aliased.end(), static_cast<std::size_t>(j)) == aliased.end()) {
      keep.push_back(j);
    } else {
      fit.dropped.push_back(names[static_cast<std::size_t>(j)]);
    }
  }
  if (keep.empty()) throw DataError("fit_logistic: design has no estimable columns");
  const Eigen::Index p = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd x(design.rows(), p);
  for (Eigen::Index c = 0; c < p; ++c) x.col(c) = design.col(keep[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd& y = response;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(x.rows());
  double dev = deviance(eta, y);
  fit.deviance_trace.push_back(dev);

  for (int it = 1; it <= kMaxIterations; ++it) {
    fit.iterations = it;
    const Eigen::VectorXd mu = fitted(eta);
    const Eigen::VectorXd w = mu.cwiseProduct(Eigen::VectorXd::Ones(mu.size()) - mu);
    const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
    const Eigen::VectorXd score = x.transpose() * (y - mu);
    const Eigen::VectorXd step = info.ldlt().solve(score);

    double t = 1.0;
    Eigen::VectorXd beta_new = beta + step;
    Eigen::VectorXd eta_new = x * beta_new;
    double dev_new = deviance(eta_new, y);
    for (int halving = 0; halving < 40 && !(dev_new <= dev); ++halving) {
      t /= 2.0;
      beta_new = beta + t * step;
      eta_new = x * beta_new;
      dev_new = deviance(eta_new, y);
    }
    if (!(dev_new <= dev)) {
      // At the optimum a full Newton step can lose a few ulps of deviance.
      fit.converged = (dev_new - dev) / (std::abs(dev) + 0.1) < kRelativeTolerance;
      break;
    }
    const double change = std::abs(dev - dev_new) / (std::abs(dev_new) + 0.1);
    beta = beta_new;
    eta = eta_new;
    dev = dev_new;
    fit.deviance_trace.push_back(dev);
    if (beta.cwiseAbs().maxCoeff() > kSeparationBound) {
      fit.separation = true;
      break;
    }
    if (change < kRelativeTolerance) {
      fit.converged = true;
      break;
    }
  }
  if (fit.separation) fit.converged = false;
  fit.deviance = dev;

  const Eigen::VectorXd mu = fitted(eta);
  const Eigen::VectorXd w = mu.cwiseProduct(Eigen::VectorXd::Ones(mu.size()) - mu);
  const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.gradient_max_norm = (x.transpose() * (y - mu)).cwiseAbs().maxCoeff();
  for (Eigen::Index c = 0; c < p; ++c) {
    LogitTerm term;
    term.name = names[static_cast<std::size_t>(keep[static_cast<std::size_t>(c)])];
    term.estimate = beta[c];
    term.std_error = std::sqrt(std::max(0.0, cov(c, c)));
    term.z = term.std_error > 0 ? term.estimate / term.std_error : 0.0;
    term.p_value = clamp_probability(2.0 * normal_sf(std::abs(term.z)));
    fit.terms.push_back(term);
  }
  return fit;
}

LogitFit logistic_fit(const Dataset& d, Interactions interactions) {
  const auto n = static_cast<Eigen::Index>(d.size());
  const std::size_t p = d.dim();
  std::vector<std::string> names{"(Intercept)"};
  for (const auto& c : d.column_names()) names.push_back(c);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (interactions == Interactions::Pairwise) {
    for (std::size_t a = 0; a < p; ++a) {
      for (std::size_t b = a + 1; b < p; ++b) {
        pairs.emplace_back(a, b);
        names.push_back(d.column_names()[a] + ":" + d.column_names()[b]);
      }
    }
  }
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(names.size()));
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = d.row(static_cast<std::size_t>(i));
    x(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) x(i, static_cast<Eigen::Index>(j + 1)) = row[j];
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      x(i, static_cast<Eigen::Index>(1 + p + q)) = row[pairs[q].first] * row[pairs[q].second];
    }
    y[i] = d.labels()[static_cast<std::size_t>(i)] == Group::Treated ? 1.0 : 0.0;
  }
  return fit_logistic(x, y, names);
}

void write_logit_text(const LogitFit& fit, std::ostream& out) {
  std::size_t width = 4;
  for (const auto& t : fit.terms) width = std::max(width, t.name.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(width)) << "term" << std::right << std::setw(12)
      << "estimate" << std::setw(12) << "std.error" << std::setw(10) << "z" << std::setw(13)
      << "p" << '\n';
  for (const auto& t : fit.terms) {
    out << std::left << std::setw(static_cast<int>(width)) << t.name << std::right << std::fixed
        << std::setprecision(4) << std::setw(12) << t.estimate << std::setw(12) << t.std_error
        << std::setprecision(3) << std::setw(10) << t.z << std::scientific << std::setprecision(3)
        << std::setw(13) << t.p_value << '\n';
    out.flags(flags);
  }
  out << "converged: " << (fit.converged ? "yes" : "no") << " after " << fit.iterations
      << " iterations; deviance " << std::setprecision(6) << fit.deviance << '\n';
  if (fit.separation) out << "warning: |coefficient| > 30, likely separation; estimates unreliable\n";
  for (const auto& name : fit.dropped) out << "dropped (aliased): " << name << '\n';
  out.flags(flags);
}

}  // namespace covbal
