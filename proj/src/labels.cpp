#include "namecraft/labels.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "namecraft/error.hpp"

namespace namecraft {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string token_key(const std::string& raw, Role role) {
  if (auto token = NameToken::from_key(raw)) return token->key();
  const auto text = normalize_part(raw);
  if (!text) return {};
  return NameToken{*text, role}.key();
}

}  // namespace

LabelSet::LabelSet(LabelKind kind) : kind_(kind) {
  switch (kind) {
    case LabelKind::kGender:
      names_ = {"male", "female"};
      break;
    case LabelKind::kEthnicity:
      names_ = {"White", "Black", "API", "Hispanic"};
      break;
    default:
      break;
  }
}

std::optional<int> LabelSet::find_label(const std::string& label) const {
  const std::string want = lower(trim(label));
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (lower(names_[i]) == want) return static_cast<int>(i);
  }
  if (kind_ == LabelKind::kGender) {
    if (want == "m") return 0;
    if (want == "f") return 1;
  }
  return std::nullopt;
}

int LabelSet::label_index(const std::string& label) {
  if (auto found = find_label(label)) return *found;
  if (kind_ == LabelKind::kGender || kind_ == LabelKind::kEthnicity) {
    throw Error("unknown label '" + label + "'");
  }
  names_.push_back(trim(label));
  return static_cast<int>(names_.size() - 1);
}

void LabelSet::add(const std::string& key, const std::string& label) {
  add(key, label_index(label));
}

void LabelSet::add(const std::string& key, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= names_.size()) {
    throw Error("label index out of range for " + key);
  }
  auto [it, inserted] = token_label_.emplace(key, label);
  if (!inserted && it->second != label) {
    throw Error("token " + key + " has conflicting labels " +
                names_[it->second] + " and " + names_[label]);
  }
}

std::optional<int> LabelSet::label_of(const std::string& key) const {
  auto it = token_label_.find(key);
  if (it == token_label_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<std::string, int>> LabelSet::entries() const {
  std::vector<std::pair<std::string, int>> out(token_label_.begin(),
                                               token_label_.end());
  std::sort(out.begin(), out.end());
  return out;
}

Role default_role(LabelKind kind) {
  return kind == LabelKind::kGender ? Role::kFirst : Role::kLast;
}

LabelSet read_token_labels(std::istream& in, LabelKind kind) {
  LabelSet labels(kind);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_csv(t);
    if (fields.size() != 2) {
      throw Error("label line " + std::to_string(line_no) +
                  ": expected 'token,label'");
    }
    if (line_no == 1 && lower(fields[0]) == "token") continue;
    const std::string key = token_key(fields[0], default_role(kind));
    if (key.empty()) continue;
    try {
      labels.add(key, fields[1]);
    } catch (const Error& e) {
      throw Error("label line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return labels;
}

LabelSet read_token_labels(const std::string& path, LabelKind kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  return read_token_labels(in, kind);
}

void write_token_labels(std::ostream& out, const LabelSet& labels) {
  out << "token,label\n";
  for (const auto& [key, label] : labels.entries()) {
    out << key << ',' << labels.label_names()[label] << '\n';
  }
}

std::vector<FullNameLabel> read_full_name_labels(std::istream& in) {
  std::vector<FullNameLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split_csv(t);
    if (fields.size() != 3) {
      throw Error("label line " + std::to_string(line_no) +
                  ": expected 'first,last,leaf'");
    }
    if (line_no == 1 && lower(fields[0]) == "first") continue;
    const std::string first = token_key(fields[0], Role::kFirst);
    const std::string last = token_key(fields[1], Role::kLast);
    if (first.empty() || last.empty()) continue;
    out.push_back({*NameToken::from_key(first), *NameToken::from_key(last),
                   fields[2]});
  }
  return out;
}

std::vector<FullNameLabel> read_full_name_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file: " + path);
  return read_full_name_labels(in);
}

}  // namespace namecraft
