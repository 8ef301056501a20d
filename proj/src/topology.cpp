#include "netcov/topology.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "netcov/error.hpp"

namespace netcov {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::DanglingChildReference: return "DanglingChildReference";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParameterRange: return "ParameterRange";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::NonBinaryInput: return "NonBinaryInput";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::AsymmetricDistribution: return "AsymmetricDistribution";
    case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorCode::InvalidRealization: return "InvalidRealization";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::vector<std::vector<int>> NetworkTopology::parents_of() const {
  std::vector<std::vector<int>> result(children.size());
  for (int n = 0; n < num_parents(); ++n) {
    for (int m : children_of[n]) {
      if (m >= 0 && m < num_children()) result[m].push_back(n);
    }
  }
  return result;
}

void validate(const NetworkTopology& topology) {
  if (topology.children_of.size() != topology.parents.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "children_of must have one entry per parent");
  }
  std::set<std::string> names;
  for (const auto& name : topology.parents) {
    if (!names.insert(name).second) {
      throw Error(ErrorCode::DuplicateVertex, "duplicate vertex '" + name + "'");
    }
  }
  for (const auto& name : topology.children) {
    if (!names.insert(name).second) {
      throw Error(ErrorCode::DuplicateVertex, "duplicate vertex '" + name + "'");
    }
  }
  for (int n = 0; n < topology.num_parents(); ++n) {
    std::set<int> seen;
    for (int m : topology.children_of[n]) {
      if (m < 0 || m >= topology.num_children()) {
        throw Error(ErrorCode::DanglingChildReference,
                    "parent '" + topology.parents[n] + "' references child index " +
                        std::to_string(m) + " outside 0.." +
                        std::to_string(topology.num_children() - 1));
      }
      if (!seen.insert(m).second) {
        throw Error(ErrorCode::DuplicateVertex,
                    "parent '" + topology.parents[n] + "' lists child '" +
                        topology.children[m] + "' twice");
      }
    }
  }
}

std::vector<int> orphan_children(const NetworkTopology& topology) {
  const auto parents = topology.parents_of();
  std::vector<int> orphans;
  for (int m = 0; m < topology.num_children(); ++m) {
    if (parents[m].empty()) orphans.push_back(m);
  }
  return orphans;
}

namespace {

std::vector<std::string> default_child_names(int count) {
  std::vector<std::string> names;
  for (int m = 0; m < count; ++m) {
    if (count <= 26) {
      names.emplace_back(1, static_cast<char>('A' + m));
    } else {
      names.push_back("c" + std::to_string(m + 1));
    }
  }
  return names;
}

void k_subsets(int n, int k, int start, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (int i = start; i < n; ++i) {
    current.push_back(i);
    k_subsets(n, k, i + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

NetworkTopology triangle() {
  NetworkTopology t;
  t.children = default_child_names(3);
  t.parents = {"p1", "p2", "p3"};
  // Supports {c1,c2}, {c1,c3}, {c2,c3}.
  t.children_of = {{0, 1}, {0, 2}, {1, 2}};
  return t;
}

NetworkTopology star(int num_children) {
  if (num_children < 1) throw Error(ErrorCode::ParameterRange, "star needs >= 1 child");
  NetworkTopology t;
  t.children = default_child_names(num_children);
  t.parents = {"p1"};
  t.children_of.resize(1);
  for (int m = 0; m < num_children; ++m) t.children_of[0].push_back(m);
  return t;
}

NetworkTopology ring(int num_children) {
  if (num_children < 3) throw Error(ErrorCode::ParameterRange, "ring needs >= 3 children");
  NetworkTopology t;
  t.children = default_child_names(num_children);
  for (int m = 0; m < num_children; ++m) {
    t.parents.push_back("p" + std::to_string(m + 1));
    const int a = m;
    const int b = (m + 1) % num_children;
    t.children_of.push_back({std::min(a, b), std::max(a, b)});
  }
  return t;
}

NetworkTopology all_k_partite(int num_children, int k) {
  if (num_children < 1 || k < 1 || k > num_children) {
    throw Error(ErrorCode::ParameterRange, "all_k_partite needs 1 <= k <= M");
  }
  NetworkTopology t;
  t.children = default_child_names(num_children);
  std::vector<int> current;
  k_subsets(num_children, k, 0, current, t.children_of);
  for (std::size_t n = 0; n < t.children_of.size(); ++n) {
    t.parents.push_back("p" + std::to_string(n + 1));
  }
  return t;
}

NetworkTopology topology_by_name(const std::string& name) {
  std::smatch match;
  if (name == "triangle") return triangle();
  if (std::regex_match(name, match, std::regex(R"(star-(\d+))"))) {
    return star(std::stoi(match[1]));
  }
  if (std::regex_match(name, match, std::regex(R"(ring-(\d+))"))) {
    return ring(std::stoi(match[1]));
  }
  if (std::regex_match(name, match, std::regex(R"(all-bipartite-(\d+))"))) {
    return all_bipartite(std::stoi(match[1]));
  }
  if (std::regex_match(name, match, std::regex(R"(all-(\d+)-partite-(\d+))"))) {
    return all_k_partite(std::stoi(match[2]), std::stoi(match[1]));
  }
  throw Error(ErrorCode::ParameterRange, "unknown topology name '" + name + "'");
}

BlockLayout::BlockLayout(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  int offset = 0;
  int last_child = -1;
  int last_setting = -1;
  for (int b = 0; b < num_blocks(); ++b) {
    const Block& block = blocks_[b];
    if (block.dim < 0) throw Error(ErrorCode::DimensionMismatch, "negative block dimension");
    const bool ordered = block.child > last_child ||
                         (block.child == last_child && block.setting == last_setting + 1);
    if (!ordered || (block.child > last_child && block.setting != 0)) {
      throw Error(ErrorCode::DimensionMismatch,
                  "blocks must be ordered child-major with consecutive settings");
    }
    last_child = block.child;
    last_setting = block.setting;
    offsets_.push_back(offset);
    for (int i = 0; i < block.dim; ++i) owner_.push_back(b);
    offset += block.dim;
  }
  total_dim_ = offset;
  num_children_ = last_child + 1;
}

BlockLayout BlockLayout::uniform(const std::vector<int>& settings,
                                 const std::vector<int>& dims) {
  if (settings.size() != dims.size()) {
    throw Error(ErrorCode::DimensionMismatch, "settings/dims length mismatch");
  }
  std::vector<Block> blocks;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    if (settings[m] < 1) throw Error(ErrorCode::ParameterRange, "each child needs >= 1 setting");
    for (int s = 0; s < settings[m]; ++s) {
      blocks.push_back({static_cast<int>(m), s, dims[m]});
    }
  }
  return BlockLayout(std::move(blocks));
}

BlockLayout BlockLayout::single_setting(const std::vector<int>& dims) {
  return uniform(std::vector<int>(dims.size(), 1), dims);
}

int BlockLayout::num_settings(int child) const {
  int count = 0;
  for (const auto& b : blocks_) count += (b.child == child);
  return count;
}

bool BlockLayout::has_inputs() const {
  for (const auto& b : blocks_) {
    if (b.setting > 0) return true;
  }
  return false;
}

int BlockLayout::block_index(int child, int setting) const {
  for (int b = 0; b < num_blocks(); ++b) {
    if (blocks_[b].child == child && blocks_[b].setting == setting) return b;
  }
  throw Error(ErrorCode::IndexOutOfRange,
              "no block for child " + std::to_string(child) + ", setting " +
                  std::to_string(setting));
}

int BlockLayout::offset(int child, int setting) const {
  return offsets_[block_index(child, setting)];
}

int BlockLayout::dim(int child, int setting) const {
  return blocks_[block_index(child, setting)].dim;
}

std::vector<int> BlockLayout::block_indices(int block) const {
  if (block < 0 || block >= num_blocks()) {
    throw Error(ErrorCode::IndexOutOfRange, "block index out of range");
  }
  std::vector<int> indices(blocks_[block].dim);
  for (int i = 0; i < blocks_[block].dim; ++i) indices[i] = offsets_[block] + i;
  return indices;
}

std::vector<int> BlockLayout::child_indices(int child) const {
  std::vector<int> indices;
  for (int b = 0; b < num_blocks(); ++b) {
    if (blocks_[b].child != child) continue;
    for (int i = 0; i < blocks_[b].dim; ++i) indices.push_back(offsets_[b] + i);
  }
  return indices;
}

bool BlockLayout::operator==(const BlockLayout& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].child != other.blocks_[b].child ||
        blocks_[b].setting != other.blocks_[b].setting ||
        blocks_[b].dim != other.blocks_[b].dim) {
      return false;
    }
  }
  return true;
}

std::vector<int> parent_support(const NetworkTopology& topology,
                                const BlockLayout& layout, int parent) {
  if (parent < 0 || parent >= topology.num_parents()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "parent index " + std::to_string(parent) + " out of range");
  }
  if (layout.num_children() != topology.num_children()) {
    throw Error(ErrorCode::DimensionMismatch, "layout does not cover every child");
  }
  std::vector<int> support;
  for (int m : topology.children_of[parent]) {
    const auto idx = layout.child_indices(m);
    support.insert(support.end(), idx.begin(), idx.end());
  }
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace netcov
