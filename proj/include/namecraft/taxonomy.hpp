#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace namecraft {

// A named tree parsed from indented text (two spaces per level, '#' comments).
// Nodes without children are leaves; leaves may sit at any depth.
class Taxonomy {
 public:
  static Taxonomy parse(std::string_view text);
  static Taxonomy parse(std::istream& in);
  static Taxonomy load(const std::string& path);
  // The shipped 39-leaf, three-level nationality tree.
  static const Taxonomy& nationality();

  std::size_t node_count() const { return names_.size(); }
  const std::string& name(std::size_t node) const { return names_[node]; }
  // Parent node, or nullopt for top-level nodes.
  std::optional<std::size_t> parent(std::size_t node) const;
  int depth(std::size_t node) const { return depth_[node]; }
  int max_depth() const;
  bool is_leaf(std::size_t node) const { return children_[node].empty(); }
  std::optional<std::size_t> find(std::string_view name) const;

  std::vector<std::string> leaves() const;
  std::vector<std::size_t> internal_nodes() const;
  // Top-level-first path ending at the node itself.
  std::vector<std::size_t> path(std::size_t node) const;
  // Whether `node` lies in the subtree rooted at `ancestor` (inclusive).
  bool within(std::size_t node, std::size_t ancestor) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<std::vector<std::size_t>> children_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kNationalityLeafCount = 39;

}  // namespace namecraft
