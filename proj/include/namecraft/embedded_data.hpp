#pragma once

#include <string_view>

// Text of the tables shipped under data/, compiled into the library.
namespace namecraft::data {

std::string_view ssa_areas();
std::string_view nationality_taxonomy();
std::string_view diminutive_pairs();

}  // namespace namecraft::data
