#include "netcov/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "netcov/error.hpp"

namespace netcov {

namespace {

void require_joint(const DistributionTable& p) {
  if (!p.is_joint()) throw Error(ErrorCode::InvalidDistribution, "baseline tests need a joint distribution");
  p.validate(1e-9);
}

void require_binary(const DistributionTable& p) {
  for (int o : p.outcomes()) {
    if (o != 2) throw Error(ErrorCode::NonBinaryInput, "test needs binary outcomes for every child");
  }
}

std::vector<Vector> marginals(const DistributionTable& p) {
  std::vector<Vector> out;
  for (int m = 0; m < p.num_children(); ++m) out.push_back(p.marginal(m, 0));
  return out;
}

}  // namespace

FinnerQuadraticForm FinnerQuadraticForm::build(const DistributionTable& p) {
  require_joint(p);
  const auto marg = marginals(p);
  const int n = p.num_outcome_tuples();
  FinnerQuadraticForm form{Matrix(n, n)};
  std::vector<std::vector<int>> tuples;
  for (int x = 0; x < n; ++x) tuples.push_back(p.decode_outcomes(x));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double prod = 1.0;
      for (int j = 0; j < p.num_children() && prod != 0.0; ++j) {
        prod = tuples[a][j] == tuples[b][j] ? prod * marg[j](tuples[a][j]) : 0.0;
      }
      form.M(a, b) = p.at(0, a) * p.at(0, b) - prod;
    }
  }
  return form;
}

FinnerIndicatorResult finner_indicator(const DistributionTable& p) {
  require_joint(p);
  const auto marg = marginals(p);
  FinnerIndicatorResult result;
  result.max_margin = -std::numeric_limits<double>::infinity();
  for (int x = 0; x < p.num_outcome_tuples(); ++x) {
    const auto xs = p.decode_outcomes(x);
    double prod = 1.0;
    for (int j = 0; j < p.num_children(); ++j) prod *= marg[j](xs[j]);
    const double margin = p.at(0, x) - std::sqrt(prod);
    if (margin > result.max_margin) {
      result.max_margin = margin;
      result.argmax = xs;
    }
  }
  result.violated = result.max_margin > 1e-12;
  return result;
}

Vector finner_product_vector(const std::vector<double>& deltas) {
  Vector f = Vector::Ones(1);
  for (double d : deltas) {
    Vector next(2 * f.size());
    const double f0 = 0.5 * (1.0 + d), f1 = 0.5 * (1.0 - d);
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      next(2 * k) = f(k) * f0;
      next(2 * k + 1) = f(k) * f1;
    }
    f = std::move(next);
  }
  return f;
}

namespace {

double dichotomic_value(const DistributionTable& p, const std::vector<Vector>& marg,
                        const std::vector<double>& deltas) {
  const Vector f = finner_product_vector(deltas);
  double mean = 0.0;
  for (int x = 0; x < p.num_outcome_tuples(); ++x) mean += p.at(0, x) * f(x);
  double prod = 1.0;
  for (int j = 0; j < p.num_children(); ++j) {
    const double d = deltas[j];
    prod *= marg[j](0) * 0.25 * (1.0 + d) * (1.0 + d) + marg[j](1) * 0.25 * (1.0 - d) * (1.0 - d);
  }
  return mean * mean - prod;
}

}  // namespace

double finner_dichotomic_value(const DistributionTable& p, const std::vector<double>& deltas) {
  require_joint(p);
  require_binary(p);
  if (static_cast<int>(deltas.size()) != p.num_children()) {
    throw Error(ErrorCode::DimensionMismatch, "need one delta per child");
  }
  return dichotomic_value(p, marginals(p), deltas);
}

FinnerOptResult finner_dichotomic_opt(const DistributionTable& p, const FinnerOptOptions& options) {
  require_joint(p);
  require_binary(p);
  const int n = p.num_children();
  const auto marg = marginals(p);
  if (n > 20) throw Error(ErrorCode::ParameterRange, "too many children for the dichotomic heuristic");
  FinnerOptResult result;
  result.best_value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& d) {
    const double v = dichotomic_value(p, marg, d);
    if (v > result.best_value) {
      result.best_value = v;
      result.best_deltas = d;
    }
  };
  // Corner points reproduce the indicator form.
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> d(n);
    for (int j = 0; j < n; ++j) d[j] = (mask >> j) & 1 ? -1.0 : 1.0;
    consider(d);
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> start(0, n - 1);
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::vector<double> d(n);
    for (auto& x : d) x = unif(rng);
    int j = start(rng);
    for (int step = 0; step < options.sweeps * n; ++step) {
      // The objective is quadratic in delta_j; recover it from three samples.
      auto at = [&](double x) {
        const double keep = d[j];
        d[j] = x;
        const double v = dichotomic_value(p, marg, d);
        d[j] = keep;
        return v;
      };
      const double g0 = at(0.0), gp = at(1.0), gm = at(-1.0);
      const double a = 0.5 * (gp + gm) - g0;
      const double b = 0.5 * (gp - gm);
      double best_x = gp >= gm ? 1.0 : -1.0;
      double best_v = std::max(gp, gm);
      if (a < 0.0) {
        const double vertex = -b / (2.0 * a);
        if (vertex > -1.0 && vertex < 1.0) {
          const double v = a * vertex * vertex + b * vertex + g0;
          if (v > best_v) {
            best_v = v;
            best_x = vertex;
          }
        }
      }
      d[j] = best_x;
      j = (j + 1) % n;
    }
    consider(d);
  }
  result.violated = result.best_value > 1e-10;
  return result;
}

double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double mutual_information_bits(const Matrix& joint) {
  std::vector<double> a, b, ab;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) a.push_back(joint.row(i).sum());
  for (Eigen::Index j = 0; j < joint.cols(); ++j) b.push_back(joint.col(j).sum());
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint.cols(); ++j) ab.push_back(joint(i, j));
  }
  return std::max(0.0, entropy_bits(a) + entropy_bits(b) - entropy_bits(ab));
}

std::vector<EntropicCheck> entropic_test(const DistributionTable& p) {
  if (p.num_children() != 3) throw Error(ErrorCode::WrongArity, "entropic test needs exactly three children");
  require_joint(p);
  static const char* kNames[] = {"A", "B", "C"};
  std::vector<EntropicCheck> out;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    EntropicCheck check;
    check.center = kNames[a];
    check.i_first = mutual_information_bits(p.pair_marginal(a, 0, b, 0));
    check.i_second = mutual_information_bits(p.pair_marginal(a, 0, c, 0));
    const Vector m = p.marginal(a, 0);
    check.rhs = entropy_bits(std::vector<double>(m.data(), m.data() + m.size()));
    check.lhs = check.i_first + check.i_second;
    check.violated = check.lhs > check.rhs + 1e-12;
    out.push_back(check);
  }
  return out;
}

InflationResult inflation_test(const DistributionTable& p) {
  if (p.num_children() != 3) throw Error(ErrorCode::WrongArity, "inflation test needs exactly three children");
  require_joint(p);
  require_binary(p);
  double e[3], e2[3];
  for (int m = 0; m < 3; ++m) {
    const Vector v = p.marginal(m, 0);
    e[m] = v(0) - v(1);
    const Matrix j = p.pair_marginal(m, 0, (m + 1) % 3, 0);
    e2[m] = j(0, 0) + j(1, 1) - j(0, 1) - j(1, 0);
  }
  const double spread1 = std::max({e[0], e[1], e[2]}) - std::min({e[0], e[1], e[2]});
  const double spread2 = std::max({e2[0], e2[1], e2[2]}) - std::min({e2[0], e2[1], e2[2]});
  if (spread1 > 1e-9 || spread2 > 1e-9) {
    throw Error(ErrorCode::AsymmetricDistribution,
                "inflation test needs equal single-party and pairwise correlators");
  }
  InflationResult r;
  r.e1 = (e[0] + e[1] + e[2]) / 3.0;
  r.e2 = (e2[0] + e2[1] + e2[2]) / 3.0;
  r.lhs = (1.0 + 2.0 * r.e1 + r.e2) * (1.0 + 2.0 * r.e1 + r.e2);
  r.rhs = 2.0 * std::pow(1.0 + r.e1, 3);
  r.violated = r.lhs > r.rhs + 1e-12;
  return r;
}

}  // namespace netcov
