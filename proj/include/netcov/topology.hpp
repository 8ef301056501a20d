#pragma once

#include <string>
#include <vector>

namespace netcov {

/// Bipartite DAG: latent parents (sources) pointing at observed children.
/// Children are addressed by dense 0-based indices; their order fixes the
/// block order of every covariance matrix built over the network.
struct NetworkTopology {
  std::vector<std::string> parents;
  std::vector<std::string> children;
  std::vector<std::vector<int>> children_of;  // one entry per parent

  int num_parents() const { return static_cast<int>(parents.size()); }
  int num_children() const { return static_cast<int>(children.size()); }

  /// Inverse relation of children_of, parents listed in ascending order.
  std::vector<std::vector<int>> parents_of() const;
};

/// Throws Error{DuplicateVertex} or Error{DanglingChildReference}.
void validate(const NetworkTopology& topology);

std::vector<int> orphan_children(const NetworkTopology& topology);

// Builders for the families used throughout the project.
NetworkTopology triangle();
NetworkTopology star(int num_children);
NetworkTopology ring(int num_children);
/// One parent per k-subset of the children (lexicographic order).
NetworkTopology all_k_partite(int num_children, int k);
inline NetworkTopology all_bipartite(int num_children) {
  return all_k_partite(num_children, 2);
}

/// Resolves names such as "triangle", "star-4", "ring-5", "all-bipartite-4",
/// "all-3-partite-4".
NetworkTopology topology_by_name(const std::string& name);

struct Block {
  int child = 0;
  int setting = 0;
  int dim = 0;
};

/// Direct-sum bookkeeping for V = ⊕_{m,s} V_{m,s}. Blocks are ordered
/// child-major, then by setting.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<Block> blocks);

  /// dims[m] is the dimension of every setting block of child m.
  static BlockLayout uniform(const std::vector<int>& settings,
                             const std::vector<int>& dims);
  static BlockLayout single_setting(const std::vector<int>& dims);

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<int>& offsets() const { return offsets_; }
  int total_dim() const { return total_dim_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int num_children() const { return num_children_; }
  int num_settings(int child) const;
  bool has_inputs() const;

  /// Index of block (child, setting); throws IndexOutOfRange.
  int block_index(int child, int setting) const;
  int offset(int child, int setting) const;
  int dim(int child, int setting) const;
  /// Ambient indices of block b.
  std::vector<int> block_indices(int block) const;
  /// Ambient indices of every setting block of a child.
  std::vector<int> child_indices(int child) const;
  /// Block index owning each ambient index.
  const std::vector<int>& owner() const { return owner_; }

  bool operator==(const BlockLayout& other) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  std::vector<int> owner_;
  int total_dim_ = 0;
  int num_children_ = 0;
};

/// Ambient indices in the support of P^{(n)}: every setting block of every
/// child of parent n, ascending.
std::vector<int> parent_support(const NetworkTopology& topology,
                                const BlockLayout& layout, int parent);

}  // namespace netcov
