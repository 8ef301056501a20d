#include "netcov/covariance.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "netcov/error.hpp"

namespace netcov {

namespace {

int product(const std::vector<int>& values) {
  return std::accumulate(values.begin(), values.end(), 1, std::multiplies<>());
}

std::vector<int> decode(int index, const std::vector<int>& radix) {
  std::vector<int> digits(radix.size());
  for (int m = static_cast<int>(radix.size()) - 1; m >= 0; --m) {
    digits[m] = index % radix[m];
    index /= radix[m];
  }
  return digits;
}

int encode(const std::vector<int>& digits, const std::vector<int>& radix) {
  if (digits.size() != radix.size()) {
    throw Error(ErrorCode::DimensionMismatch, "tuple length does not match number of children");
  }
  int index = 0;
  for (std::size_t m = 0; m < radix.size(); ++m) {
    if (digits[m] < 0 || digits[m] >= radix[m]) {
      throw Error(ErrorCode::IndexOutOfRange, "tuple entry out of range");
    }
    index = index * radix[m] + digits[m];
  }
  return index;
}

}  // namespace

DistributionTable::DistributionTable(std::vector<int> settings, std::vector<int> outcomes)
    : settings_(std::move(settings)), outcomes_(std::move(outcomes)) {
  if (settings_.size() != outcomes_.size() || outcomes_.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "settings and outcomes need one entry per child");
  }
  for (std::size_t m = 0; m < outcomes_.size(); ++m) {
    if (settings_[m] < 1 || outcomes_[m] < 1) {
      throw Error(ErrorCode::ParameterRange, "cardinalities must be positive");
    }
  }
  num_setting_tuples_ = product(settings_);
  num_outcome_tuples_ = product(outcomes_);
  data_.assign(static_cast<std::size_t>(num_setting_tuples_) * num_outcome_tuples_, 0.0);
}

DistributionTable DistributionTable::joint(std::vector<int> outcomes,
                                           std::vector<double> probabilities) {
  std::vector<int> settings(outcomes.size(), 1);
  DistributionTable table(std::move(settings), std::move(outcomes));
  if (probabilities.size() != table.data_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "probability vector has wrong length");
  }
  table.data_ = std::move(probabilities);
  return table;
}

bool DistributionTable::is_joint() const {
  for (int s : settings_) {
    if (s != 1) return false;
  }
  return true;
}

double DistributionTable::operator()(const std::vector<int>& s, const std::vector<int>& x) const {
  return at(encode_settings(s), encode_outcomes(x));
}

double& DistributionTable::at(int setting_tuple, int outcome_tuple) {
  return data_[static_cast<std::size_t>(setting_tuple) * num_outcome_tuples_ + outcome_tuple];
}

double DistributionTable::at(int setting_tuple, int outcome_tuple) const {
  return data_[static_cast<std::size_t>(setting_tuple) * num_outcome_tuples_ + outcome_tuple];
}

void DistributionTable::set(const std::vector<int>& s, const std::vector<int>& x, double p) {
  at(encode_settings(s), encode_outcomes(x)) = p;
}

std::vector<int> DistributionTable::decode_settings(int index) const {
  return decode(index, settings_);
}
std::vector<int> DistributionTable::decode_outcomes(int index) const {
  return decode(index, outcomes_);
}
int DistributionTable::encode_settings(const std::vector<int>& s) const {
  return encode(s, settings_);
}
int DistributionTable::encode_outcomes(const std::vector<int>& x) const {
  return encode(x, outcomes_);
}

void DistributionTable::validate(double tol) const {
  for (int s = 0; s < num_setting_tuples_; ++s) {
    double total = 0.0;
    for (int x = 0; x < num_outcome_tuples_; ++x) {
      const double p = at(s, x);
      if (!(p >= 0.0) || p > 1.0 + tol) {
        throw Error(ErrorCode::InvalidDistribution,
                    "probability " + std::to_string(p) + " outside [0,1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > tol) {
      throw Error(ErrorCode::InvalidDistribution,
                  "probabilities for setting tuple " + std::to_string(s) + " sum to " +
                      std::to_string(total));
    }
  }
}

DistributionTable DistributionTable::restrict_to(const std::vector<int>& s) const {
  const int row = encode_settings(s);
  DistributionTable result(std::vector<int>(outcomes_.size(), 1), outcomes_);
  for (int x = 0; x < num_outcome_tuples_; ++x) result.at(0, x) = at(row, x);
  return result;
}

DistributionTable DistributionTable::mix_settings(const std::vector<std::vector<double>>& q) const {
  if (static_cast<int>(q.size()) != num_children()) {
    throw Error(ErrorCode::DimensionMismatch, "need one setting distribution per child");
  }
  for (int m = 0; m < num_children(); ++m) {
    if (static_cast<int>(q[m].size()) != settings_[m]) {
      throw Error(ErrorCode::DimensionMismatch,
                  "setting distribution of child " + std::to_string(m) + " has wrong length");
    }
    double total = 0.0;
    for (double w : q[m]) {
      if (!(w >= 0.0)) throw Error(ErrorCode::ParameterRange, "negative setting weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorCode::ParameterRange, "setting weights must sum to 1");
    }
  }
  DistributionTable result(std::vector<int>(outcomes_.size(), 1), outcomes_);
  for (int s = 0; s < num_setting_tuples_; ++s) {
    const auto digits = decode_settings(s);
    double weight = 1.0;
    for (int m = 0; m < num_children(); ++m) weight *= q[m][digits[m]];
    if (weight == 0.0) continue;
    for (int x = 0; x < num_outcome_tuples_; ++x) result.at(0, x) += weight * at(s, x);
  }
  return result;
}

Vector DistributionTable::marginal(int child, int setting) const {
  Vector result = Vector::Zero(outcomes_[child]);
  int rows = 0;
  for (int s = 0; s < num_setting_tuples_; ++s) {
    if (decode_settings(s)[child] != setting) continue;
    ++rows;
    for (int x = 0; x < num_outcome_tuples_; ++x) {
      result(decode_outcomes(x)[child]) += at(s, x);
    }
  }
  return result / static_cast<double>(rows);
}

Matrix DistributionTable::pair_marginal(int a, int sa, int b, int sb) const {
  Matrix result = Matrix::Zero(outcomes_[a], outcomes_[b]);
  int rows = 0;
  for (int s = 0; s < num_setting_tuples_; ++s) {
    const auto digits = decode_settings(s);
    if (digits[a] != sa || digits[b] != sb) continue;
    ++rows;
    for (int x = 0; x < num_outcome_tuples_; ++x) {
      const auto xs = decode_outcomes(x);
      result(xs[a], xs[b]) += at(s, x);
    }
  }
  return result / static_cast<double>(rows);
}

double DistributionTable::signalling_deviation() const {
  double worst = 0.0;
  for (int s = 0; s < num_setting_tuples_; ++s) {
    const auto digits = decode_settings(s);
    for (int m = 0; m < num_children(); ++m) {
      Vector local = Vector::Zero(outcomes_[m]);
      for (int x = 0; x < num_outcome_tuples_; ++x) local(decode_outcomes(x)[m]) += at(s, x);
      worst = std::max(worst, (local - marginal(m, digits[m])).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

FeatureMapSet::FeatureMapSet(BlockLayout layout, std::vector<Matrix> maps)
    : layout_(std::move(layout)), maps_(std::move(maps)) {
  if (static_cast<int>(maps_.size()) != layout_.num_blocks()) {
    throw Error(ErrorCode::DimensionMismatch, "need one feature map per layout block");
  }
  for (int b = 0; b < layout_.num_blocks(); ++b) {
    if (maps_[b].rows() != layout_.blocks()[b].dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "feature vectors of block " + std::to_string(b) + " have wrong dimension");
    }
  }
}

FeatureMapSet FeatureMapSet::canonical(const std::vector<int>& settings,
                                       const std::vector<int>& outcomes) {
  auto layout = BlockLayout::uniform(settings, outcomes);
  std::vector<Matrix> maps;
  for (const auto& block : layout.blocks()) maps.push_back(Matrix::Identity(block.dim, block.dim));
  return FeatureMapSet(std::move(layout), std::move(maps));
}

bool BlockMatrix::masked(int i, int j) const {
  const int bi = layout.owner()[i];
  const int bj = layout.owner()[j];
  for (const auto& [a, b] : unobservable_mask) {
    if ((a == bi && b == bj) || (a == bj && b == bi)) return true;
  }
  return false;
}

Matrix BlockMatrix::block(int b1, int b2) const {
  const auto& blocks = layout.blocks();
  return data.block(layout.offsets()[b1], layout.offsets()[b2], blocks[b1].dim, blocks[b2].dim);
}

std::vector<std::pair<int, int>> same_child_mask(const BlockLayout& layout) {
  std::vector<std::pair<int, int>> mask;
  const auto& blocks = layout.blocks();
  for (int a = 0; a < layout.num_blocks(); ++a) {
    for (int b = a + 1; b < layout.num_blocks(); ++b) {
      if (blocks[a].child == blocks[b].child) mask.emplace_back(a, b);
    }
  }
  return mask;
}

namespace {

void check_maps(const DistributionTable& dist, const FeatureMapSet& maps) {
  const auto& layout = maps.layout();
  if (layout.num_children() != dist.num_children()) {
    throw Error(ErrorCode::DimensionMismatch, "feature maps do not cover every child");
  }
  for (int m = 0; m < dist.num_children(); ++m) {
    if (layout.num_settings(m) != dist.settings()[m]) {
      throw Error(ErrorCode::DimensionMismatch,
                  "feature maps and distribution disagree on settings of child " +
                      std::to_string(m));
    }
    for (int s = 0; s < dist.settings()[m]; ++s) {
      if (maps.map(m, s).cols() != dist.outcomes()[m]) {
        throw Error(ErrorCode::DimensionMismatch,
                    "feature map of child " + std::to_string(m) + " has wrong outcome count");
      }
    }
  }
}

}  // namespace

BlockMatrix covariance_from_distribution(const DistributionTable& dist,
                                         const FeatureMapSet& maps) {
  if (!dist.is_joint()) {
    throw Error(ErrorCode::DimensionMismatch,
                "covariance_from_distribution needs a single setting per child");
  }
  check_maps(dist, maps);
  const auto& layout = maps.layout();
  const int dim = layout.total_dim();
  Vector mean = Vector::Zero(dim);
  Matrix second = Matrix::Zero(dim, dim);
  Vector y(dim);
  for (int x = 0; x < dist.num_outcome_tuples(); ++x) {
    const double p = dist.at(0, x);
    if (p == 0.0) continue;
    const auto xs = dist.decode_outcomes(x);
    y.setZero();
    for (int m = 0; m < dist.num_children(); ++m) {
      const int b = layout.block_index(m, 0);
      y.segment(layout.offsets()[b], layout.blocks()[b].dim) += maps.map(b).col(xs[m]);
    }
    mean += p * y;
    second.noalias() += p * y * y.transpose();
  }
  Matrix cov = second - mean * mean.transpose();
  return {layout, 0.5 * (cov + cov.transpose()), {}};
}

BlockMatrix observable_covariance(const DistributionTable& dist, const FeatureMapSet& maps) {
  check_maps(dist, maps);
  const auto& layout = maps.layout();
  const auto& blocks = layout.blocks();
  BlockMatrix result{layout, Matrix::Zero(layout.total_dim(), layout.total_dim()),
                     same_child_mask(layout)};
  for (int a = 0; a < layout.num_blocks(); ++a) {
    const Matrix& ya = maps.map(a);
    const int ma = blocks[a].child;
    const int sa = blocks[a].setting;
    // Diagonal block from the single-party marginal.
    const Vector pa = dist.marginal(ma, sa);
    const Matrix local = Matrix(pa.asDiagonal()) - pa * pa.transpose();
    result.data.block(layout.offsets()[a], layout.offsets()[a], blocks[a].dim, blocks[a].dim) =
        ya * local * ya.transpose();
    for (int b = a + 1; b < layout.num_blocks(); ++b) {
      const int mb = blocks[b].child;
      if (mb == ma) continue;  // unobservable, stays zero
      const Matrix joint = dist.pair_marginal(ma, sa, mb, blocks[b].setting);
      const Vector ra = joint.rowwise().sum();
      const Vector rb = joint.colwise().sum().transpose();
      const Matrix cross = maps.map(a) * (joint - ra * rb.transpose()) * maps.map(b).transpose();
      result.data.block(layout.offsets()[a], layout.offsets()[b], blocks[a].dim, blocks[b].dim) =
          cross;
      result.data.block(layout.offsets()[b], layout.offsets()[a], blocks[b].dim, blocks[a].dim) =
          cross.transpose();
    }
  }
  return result;
}

namespace {

void check_pq(int parties, double p, double q) {
  if (parties < 2) throw Error(ErrorCode::ParameterRange, "pq family needs >= 2 parties");
  if (parties > 20) throw Error(ErrorCode::ParameterRange, "pq family limited to 20 parties");
  if (!(p >= 0.0) || !(q >= 0.0) || p + q > 1.0 + 1e-12) {
    throw Error(ErrorCode::ParameterRange, "pq family needs p, q >= 0 and p + q <= 1");
  }
}

}  // namespace

DistributionTable pq_distribution(int parties, double p, double q) {
  check_pq(parties, p, q);
  const int count = 1 << parties;
  const double other = std::max(0.0, 1.0 - p - q) / static_cast<double>(count - 2);
  std::vector<double> probs(count, other);
  probs.front() = p;
  probs.back() = q;
  return DistributionTable::joint(std::vector<int>(parties, 2), std::move(probs));
}

double pq_delta(int parties, double p, double q) {
  check_pq(parties, p, q);
  const double pow_nm2 = std::ldexp(1.0, parties - 2);
  const double pow_n = std::ldexp(1.0, parties);
  return pow_nm2 * std::max(0.0, 1.0 - p - q) / (pow_n - 2.0);
}

double pq_chi(int parties, double p, double q) {
  return 0.25 * (1.0 - (p - q) * (p - q)) - pq_delta(parties, p, q);
}

BlockMatrix pq_covariance_closed_form(int parties, double p, double q) {
  const double delta = pq_delta(parties, p, q);
  const double chi = pq_chi(parties, p, q);
  const Matrix outer = delta * Matrix::Identity(parties, parties) +
                       chi * Matrix::Ones(parties, parties);
  const Matrix pattern = Matrix::Ones(2, 2);  // identity + sigma_x
  Matrix data(2 * parties, 2 * parties);
  for (int i = 0; i < parties; ++i) {
    for (int j = 0; j < parties; ++j) data.block(2 * i, 2 * j, 2, 2) = outer(i, j) * pattern;
  }
  return {BlockLayout::single_setting(std::vector<int>(parties, 2)), data, {}};
}

Matrix reflect_blocks(const Matrix& m, const BlockLayout& layout) {
  if (m.rows() != layout.total_dim() || m.cols() != layout.total_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix does not match layout");
  }
  Vector signs(layout.total_dim());
  for (int b = 0; b < layout.num_blocks(); ++b) {
    for (int i = 0; i < layout.blocks()[b].dim; ++i) {
      signs(layout.offsets()[b] + i) = (i % 2 == 0) ? 1.0 : -1.0;
    }
  }
  return signs.asDiagonal() * m * signs.asDiagonal();
}

double min_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double max_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace netcov
