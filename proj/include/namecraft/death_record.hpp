#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "namecraft/ingest.hpp"

namespace namecraft {

using Date = std::chrono::year_month_day;

inline constexpr double kDaysPerYear = 365.2425;

// Parses YYYY-MM-DD; throws on malformed or invalid calendar dates.
Date parse_iso_date(const std::string& text);
std::string format_iso_date(const Date& date);

struct DeathRecord {
  NameToken first;  // role kFirst
  NameToken last;   // role kLast
  Date birth;
  Date death;
  std::string ssn_area;  // three digits

  int birth_year() const { return static_cast<int>(birth.year()); }
  // (death - birth) in fractional years.
  double lifespan() const;
};

struct RecordReadStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;  // unusable names or dates
};

// "first,last,birth_date,death_date,ssn_area" with ISO dates; an optional
// header row is skipped. Rows with unusable names, invalid dates or
// death < birth are skipped and counted; rows with the wrong field count throw.
std::vector<DeathRecord> read_death_records(std::istream& in,
                                            RecordReadStats* stats = nullptr);
std::vector<DeathRecord> read_death_records(const std::string& path,
                                            RecordReadStats* stats = nullptr);
void write_death_records(std::ostream& out,
                         const std::vector<DeathRecord>& records);

// Fixed-width SSDI death master file rows (1-based columns):
//   1      change indicator
//   2-10   SSN (area number = columns 2-4)
//   11-30  last name
//   31-34  name suffix
//   35-49  first name
//   50-64  middle name
//   65     verification code
//   66-73  date of death, MMDDCCYY
//   74-81  date of birth, MMDDCCYY
// Rows with zero-filled or invalid dates are skipped and counted.
std::vector<DeathRecord> read_ssdi_master(std::istream& in,
                                          RecordReadStats* stats = nullptr);
std::vector<DeathRecord> read_ssdi_master(const std::string& path,
                                          RecordReadStats* stats = nullptr);

}  // namespace namecraft
