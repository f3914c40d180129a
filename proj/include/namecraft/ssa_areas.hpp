#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace namecraft {

// SSN area number (first three digits) -> state/territory slot, from the
// shipped allocation table. Slots follow the table's label order.
class SsaAreaTable {
 public:
  static SsaAreaTable parse(std::string_view text);
  static const SsaAreaTable& builtin();

  std::size_t slot_count() const { return labels_.size(); }
  const std::string& label(std::size_t slot) const { return labels_[slot]; }
  std::optional<std::size_t> slot_of_label(std::string_view code) const;

  // nullopt for unassigned or malformed areas.
  std::optional<std::size_t> slot(std::string_view area) const;
  // Every assigned area number, ascending, as three-digit strings.
  std::vector<std::string> assigned_areas() const;

 private:
  std::vector<std::string> labels_;
  std::array<int, 1000> area_slot_{};
};

inline constexpr std::size_t kStateSlots = 59;

}  // namespace namecraft
