#include "namecraft/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "namecraft/embedded_data.hpp"
#include "namecraft/error.hpp"

namespace namecraft {

Taxonomy Taxonomy::parse(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Taxonomy Taxonomy::parse(std::string_view text) {
  Taxonomy tax;
  std::vector<std::size_t> stack;  // open node per depth
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t indent = line.find_first_not_of(' ');
    if (indent == std::string_view::npos || line[indent] == '#') continue;
    if (indent % 2 != 0) {
      throw Error("taxonomy line " + std::to_string(line_no) +
                  ": indentation must be a multiple of two spaces");
    }
    const std::size_t level = indent / 2;
    if (level > stack.size()) {
      throw Error("taxonomy line " + std::to_string(line_no) +
                  ": indented more than one level below its parent");
    }
    std::string name(line.substr(indent));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
      name.pop_back();
    if (tax.index_.count(name) != 0) {
      throw Error("taxonomy line " + std::to_string(line_no) +
                  ": duplicate node " + name);
    }
    stack.resize(level);
    const std::size_t id = tax.names_.size();
    tax.names_.push_back(name);
    tax.depth_.push_back(static_cast<int>(level) + 1);
    tax.children_.emplace_back();
    if (level == 0) {
      tax.parent_.push_back(-1);
    } else {
      tax.parent_.push_back(static_cast<int>(stack.back()));
      tax.children_[stack.back()].push_back(id);
    }
    tax.index_.emplace(name, id);
    stack.push_back(id);
  }
  if (tax.names_.empty()) throw Error("taxonomy is empty");
  return tax;
}

Taxonomy Taxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open taxonomy file: " + path);
  return parse(in);
}

const Taxonomy& Taxonomy::nationality() {
  static const Taxonomy kTree = [] {
    Taxonomy t = parse(data::nationality_taxonomy());
    if (t.leaves().size() != kNationalityLeafCount || t.max_depth() != 3) {
      throw Error("shipped nationality taxonomy is not a 39-leaf, 3-level tree");
    }
    return t;
  }();
  return kTree;
}

std::optional<std::size_t> Taxonomy::parent(std::size_t node) const {
  if (parent_[node] < 0) return std::nullopt;
  return static_cast<std::size_t>(parent_[node]);
}

int Taxonomy::max_depth() const {
  int d = 0;
  for (int x : depth_) d = std::max(d, x);
  return d;
}

std::optional<std::size_t> Taxonomy::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Taxonomy::leaves() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (is_leaf(i)) out.push_back(names_[i]);
  }
  return out;
}

std::vector<std::size_t> Taxonomy::internal_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_leaf(i)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Taxonomy::path(std::size_t node) const {
  std::vector<std::size_t> out;
  for (int n = static_cast<int>(node); n >= 0; n = parent_[n]) {
    out.insert(out.begin(), static_cast<std::size_t>(n));
  }
  return out;
}

bool Taxonomy::within(std::size_t node, std::size_t ancestor) const {
  for (int n = static_cast<int>(node); n >= 0; n = parent_[n]) {
    if (static_cast<std::size_t>(n) == ancestor) return true;
  }
  return false;
}

}  // namespace namecraft
