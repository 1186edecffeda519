#include "covbal/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

namespace covbal {

namespace {

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

void write_value(const nlohmann::ordered_json& v, std::ostream& out) {
  if (v.is_null()) {
    out << "NA";
  } else if (v.is_number_float()) {
    out << format_double(v.get<double>());
  } else if (v.is_string()) {
    out << v.get<std::string>();
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      write_value(v[i], out);
    }
  } else {
    out << v.dump();
  }
}

}  // namespace

const char* library_version() { return COVBAL_VERSION; }

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::ordered_json to_json(const TestResult& r) {
  const bool nn = r.test == "crossnn";
  nlohmann::ordered_json j;
  j["test"] = r.test;
  j["k"] = r.k;
  j["N"] = r.n;
  j["d"] = r.dim;
  j[nn ? "D12" : "R1"] = r.raw_counts[0];
  j[nn ? "D21" : "R2"] = r.raw_counts[1];
  j["statistic"] = number(r.statistic);
  if (r.component_z) {
    j["z1"] = number((*r.component_z)[0]);
    j["z2"] = number((*r.component_z)[1]);
  } else {
    j["z1"] = nullptr;
    j["z2"] = nullptr;
  }
  j["null_mean"] = opt(r.mean);
  j["null_variance"] = opt(r.variance);
  j["rho"] = opt(r.rho);
  j["p_asymptotic"] = opt(r.p_asymptotic);
  if (r.permutation) {
    j["p_permutation"] = r.permutation->p;
    j["n_perm"] = r.permutation->n_perm;
    j["perm_extreme"] = r.permutation->extreme;
    j["seed"] = r.permutation->seed;
  } else {
    j["p_permutation"] = nullptr;
    j["n_perm"] = nullptr;
    j["perm_extreme"] = nullptr;
    j["seed"] = nullptr;
  }
  if (nn) {
    j["c1"] = opt(r.c1);
    j["c2"] = opt(r.c2);
  } else {
    j["c3"] = opt(r.c3);
    j["max_degree"] = opt(r.max_degree);
  }
  j["edge_count"] = r.edge_count;
  return j;
}

nlohmann::ordered_json to_json(const HotellingResult& r) {
  nlohmann::ordered_json j;
  j["test"] = "hotelling";
  j["T2"] = number(r.t2);
  j["F"] = number(r.f);
  j["df1"] = r.df1;
  j["df2"] = r.df2;
  j["p_value"] = number(r.p_value);
  return j;
}

nlohmann::ordered_json to_json(const LogitFit& fit) {
  nlohmann::ordered_json j;
  j["test"] = "logit";
  j["converged"] = fit.converged;
  j["separation"] = fit.separation;
  j["iterations"] = fit.iterations;
  j["deviance"] = number(fit.deviance);
  j["dropped"] = fit.dropped;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : fit.terms) {
    terms.push_back({{"term", t.name},
                     {"estimate", number(t.estimate)},
                     {"std_error", number(t.std_error)},
                     {"z", number(t.z)},
                     {"p_value", number(t.p_value)}});
  }
  j["terms"] = std::move(terms);
  return j;
}

nlohmann::ordered_json to_json(const BalanceTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"covariate", r.name},
                    {"treated_mean", number(r.treated_mean)},
                    {"control_mean", number(r.control_mean)},
                    {"standardized_difference", number(r.standardized_difference)},
                    {"t", number(r.t_statistic)},
                    {"df", number(r.df)},
                    {"p_value", number(r.p_value)}});
  }
  nlohmann::ordered_json j;
  j["test"] = "balance";
  j["covariates"] = std::move(rows);
  return j;
}

void write_text_block(const nlohmann::ordered_json& block, std::ostream& out) {
  for (const auto& [key, value] : block.items()) {
    if (value.is_array() && !value.empty() && value.front().is_object()) {
      for (const auto& row : value) {
        out << key << ':';
        for (const auto& [k, v] : row.items()) {
          out << ' ' << k << '=';
          write_value(v, out);
        }
        out << '\n';
      }
      continue;
    }
    out << key << " = ";
    write_value(value, out);
    out << '\n';
  }
}

}  // namespace covbal
