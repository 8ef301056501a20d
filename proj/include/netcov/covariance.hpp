#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "netcov/topology.hpp"

namespace netcov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense table of P(x_1..x_M | s_1..s_M). Settings tuples are the major index,
/// outcome tuples the minor one; in both, child 0 is the most significant
/// digit. All settings equal to 1 means an ordinary joint distribution.
/// Outcome alphabets are shared by every setting of a child (shorter POVMs
/// are padded with zero-probability outcomes).
class DistributionTable {
 public:
  DistributionTable() = default;
  DistributionTable(std::vector<int> settings, std::vector<int> outcomes);

  static DistributionTable joint(std::vector<int> outcomes, std::vector<double> probabilities);

  int num_children() const { return static_cast<int>(outcomes_.size()); }
  const std::vector<int>& settings() const { return settings_; }
  const std::vector<int>& outcomes() const { return outcomes_; }
  bool is_joint() const;
  int num_setting_tuples() const { return num_setting_tuples_; }
  int num_outcome_tuples() const { return num_outcome_tuples_; }

  double operator()(const std::vector<int>& s, const std::vector<int>& x) const;
  double& at(int setting_tuple, int outcome_tuple);
  double at(int setting_tuple, int outcome_tuple) const;
  void set(const std::vector<int>& s, const std::vector<int>& x, double p);

  std::vector<int> decode_settings(int index) const;
  std::vector<int> decode_outcomes(int index) const;
  int encode_settings(const std::vector<int>& s) const;
  int encode_outcomes(const std::vector<int>& x) const;

  /// Throws Error{InvalidDistribution} on negative entries or per-setting
  /// normalisation off by more than tol.
  void validate(double tol = 1e-12) const;

  /// Joint distribution obtained by fixing every child's setting.
  DistributionTable restrict_to(const std::vector<int>& s) const;

  /// Joint distribution of the setting-mixed POVMs: sum_s prod_m q_m(s_m) P(x|s).
  DistributionTable mix_settings(const std::vector<std::vector<double>>& q) const;

  /// Single-party marginal of child m at setting s, averaged uniformly over
  /// the other parties' settings.
  Vector marginal(int child, int setting) const;
  /// Two-party marginal P(x_a, x_b | s_a, s_b), other settings averaged.
  Matrix pair_marginal(int a, int sa, int b, int sb) const;
  /// Largest change of any single-party marginal under a change of the
  /// other parties' settings; zero for no-signalling tables.
  double signalling_deviation() const;

  const std::vector<double>& data() const { return data_; }

 private:
  std::vector<int> settings_;
  std::vector<int> outcomes_;
  int num_setting_tuples_ = 1;
  int num_outcome_tuples_ = 1;
  std::vector<double> data_;
};

/// Feature vectors Y^{(m,s)}_x stored as the columns of one matrix per
/// (child, setting) block, in block-local coordinates.
class FeatureMapSet {
 public:
  FeatureMapSet() = default;
  FeatureMapSet(BlockLayout layout, std::vector<Matrix> maps);

  /// Orthonormal canonical basis vector per outcome.
  static FeatureMapSet canonical(const std::vector<int>& settings,
                                 const std::vector<int>& outcomes);
  static FeatureMapSet canonical(const DistributionTable& dist) {
    return canonical(dist.settings(), dist.outcomes());
  }

  const BlockLayout& layout() const { return layout_; }
  const Matrix& map(int block) const { return maps_.at(block); }
  const Matrix& map(int child, int setting) const {
    return maps_.at(layout_.block_index(child, setting));
  }

 private:
  BlockLayout layout_;
  std::vector<Matrix> maps_;
};

/// Block-addressed symmetric matrix. unobservable_mask lists block pairs
/// (b1 < b2) that belong to the same child under different settings.
struct BlockMatrix {
  BlockLayout layout;
  Matrix data;
  std::vector<std::pair<int, int>> unobservable_mask;

  bool masked(int i, int j) const;
  Matrix block(int b1, int b2) const;
};

/// Every same-child different-setting block pair of a layout.
std::vector<std::pair<int, int>> same_child_mask(const BlockLayout& layout);

BlockMatrix covariance_from_distribution(const DistributionTable& dist,
                                         const FeatureMapSet& maps);
BlockMatrix observable_covariance(const DistributionTable& dist, const FeatureMapSet& maps);

DistributionTable pq_distribution(int parties, double p, double q);
/// Closed form for the covariance of pq_distribution, in the reflected
/// convention with (1 + sigma_x) blocks.
BlockMatrix pq_covariance_closed_form(int parties, double p, double q);
double pq_delta(int parties, double p, double q);
double pq_chi(int parties, double p, double q);

/// Congruence by diag(1,-1,1,-1,...) restricted to each block; maps the
/// direct orthonormal-feature convention to the reflected one and back.
Matrix reflect_blocks(const Matrix& m, const BlockLayout& layout);

double min_eigenvalue(const Matrix& m);
double max_eigenvalue(const Matrix& m);

}  // namespace netcov
