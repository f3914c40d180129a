#include "namecraft/ssa_areas.hpp"

#include <cstdio>
#include <sstream>

#include "namecraft/embedded_data.hpp"
#include "namecraft/error.hpp"

namespace namecraft {

SsaAreaTable SsaAreaTable::parse(std::string_view text) {
  SsaAreaTable table;
  table.area_slot_.fill(-1);
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    if (kind == "label") {
      std::string code;
      if (!(fields >> code) || table.slot_of_label(code)) {
        throw Error("SSA table line " + std::to_string(line_no) +
                    ": missing or duplicate label");
      }
      table.labels_.push_back(code);
    } else if (kind == "range") {
      int lo = -1, hi = -1;
      std::string code;
      if (!(fields >> lo >> hi >> code) || lo < 1 || hi > 999 || lo > hi) {
        throw Error("SSA table line " + std::to_string(line_no) +
                    ": malformed range");
      }
      auto slot = table.slot_of_label(code);
      if (!slot) {
        throw Error("SSA table line " + std::to_string(line_no) +
                    ": unknown label " + code);
      }
      for (int a = lo; a <= hi; ++a) {
        if (table.area_slot_[a] >= 0) {
          throw Error("SSA table line " + std::to_string(line_no) +
                      ": overlapping range");
        }
        table.area_slot_[a] = static_cast<int>(*slot);
      }
    } else {
      throw Error("SSA table line " + std::to_string(line_no) +
                  ": unknown directive " + kind);
    }
  }
  return table;
}

const SsaAreaTable& SsaAreaTable::builtin() {
  static const SsaAreaTable kTable = [] {
    SsaAreaTable t = parse(data::ssa_areas());
    if (t.slot_count() != kStateSlots) {
      throw Error("shipped SSA table must define 59 state/territory slots");
    }
    return t;
  }();
  return kTable;
}

std::optional<std::size_t> SsaAreaTable::slot_of_label(
    std::string_view code) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == code) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> SsaAreaTable::slot(std::string_view area) const {
  if (area.size() != 3) return std::nullopt;
  int value = 0;
  for (char c : area) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  if (area_slot_[value] < 0) return std::nullopt;
  return static_cast<std::size_t>(area_slot_[value]);
}

std::vector<std::string> SsaAreaTable::assigned_areas() const {
  std::vector<std::string> out;
  char buf[8];
  for (int a = 0; a < 1000; ++a) {
    if (area_slot_[a] < 0) continue;
    std::snprintf(buf, sizeof(buf), "%03d", a);
    out.emplace_back(buf);
  }
  return out;
}

}  // namespace namecraft
