#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "namecraft/ingest.hpp"

namespace namecraft {

enum class LabelKind {
  kGender,       // male, female (first names)
  kEthnicity,    // White, Black, API, Hispanic (last names)
  kNationality,  // taxonomy leaves
  kCustom,       // free-form labels, e.g. synthetic group ids
};

// Token key -> one label of a fixed kind.
class LabelSet {
 public:
  explicit LabelSet(LabelKind kind);

  LabelKind kind() const { return kind_; }
  const std::vector<std::string>& label_names() const { return names_; }
  std::size_t size() const { return token_label_.size(); }

  // Maps a label spelling to its index; custom and nationality sets grow on
  // demand, gender/ethnicity throw on unknown spellings.
  int label_index(const std::string& label);
  std::optional<int> find_label(const std::string& label) const;

  // Throws when the key is already mapped to a different label.
  void add(const std::string& key, const std::string& label);
  void add(const std::string& key, int label);
  std::optional<int> label_of(const std::string& key) const;

  // (key, label) pairs sorted by key.
  std::vector<std::pair<std::string, int>> entries() const;

 private:
  LabelKind kind_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> token_label_;
};

Role default_role(LabelKind kind);

// "token,label" rows. Tokens without an f:/l: prefix are normalized and given
// the role implied by the label kind (first names for gender, last names
// otherwise). Blank lines and lines starting with '#' are ignored; a
// "token,label" header is skipped.
LabelSet read_token_labels(std::istream& in, LabelKind kind);
LabelSet read_token_labels(const std::string& path, LabelKind kind);
void write_token_labels(std::ostream& out, const LabelSet& labels);

struct FullNameLabel {
  NameToken first;
  NameToken last;
  std::string label;
};

// "first,last,leaf" rows.
std::vector<FullNameLabel> read_full_name_labels(std::istream& in);
std::vector<FullNameLabel> read_full_name_labels(const std::string& path);

}  // namespace namecraft
