#include "namecraft/death_record.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "namecraft/error.hpp"

namespace namecraft {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool make_date(int y, int m, int d, Date& out) {
  out = Date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
             std::chrono::day{static_cast<unsigned>(d)}};
  return m >= 1 && m <= 12 && d >= 1 && out.ok();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_area(const std::string& area) {
  return area.size() == 3 && std::isdigit(static_cast<unsigned char>(area[0])) &&
         std::isdigit(static_cast<unsigned char>(area[1])) &&
         std::isdigit(static_cast<unsigned char>(area[2]));
}

}  // namespace

Date parse_iso_date(const std::string& text) {
  int y = 0, m = 0, d = 0;
  Date date;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_int(std::string_view(text).substr(0, 4), y) ||
      !parse_int(std::string_view(text).substr(5, 2), m) ||
      !parse_int(std::string_view(text).substr(8, 2), d) ||
      !make_date(y, m, d, date)) {
    throw Error("invalid ISO date: '" + text + "'");
  }
  return date;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u",
                static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

double DeathRecord::lifespan() const {
  const auto days = (std::chrono::sys_days(death) - std::chrono::sys_days(birth)).count();
  return static_cast<double>(days) / kDaysPerYear;
}

std::vector<DeathRecord> read_death_records(std::istream& in,
                                            RecordReadStats* stats) {
  RecordReadStats local;
  std::vector<DeathRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (t.back() == ',') fields.emplace_back();
    if (fields.size() != 5) {
      throw Error("record line " + std::to_string(local.lines) +
                  ": expected 5 comma-separated fields");
    }
    if (local.lines == 1 && fields[0] == "first") continue;
    auto first = normalize_part(fields[0]);
    auto last = normalize_part(fields[1]);
    if (!first || !last || !valid_area(fields[4])) {
      ++local.skipped;
      continue;
    }
    DeathRecord r;
    r.first = {*first, Role::kFirst};
    r.last = {*last, Role::kLast};
    try {
      r.birth = parse_iso_date(fields[2]);
      r.death = parse_iso_date(fields[3]);
    } catch (const Error&) {
      ++local.skipped;
      continue;
    }
    if (std::chrono::sys_days(r.death) < std::chrono::sys_days(r.birth)) {
      ++local.skipped;
      continue;
    }
    r.ssn_area = fields[4];
    out.push_back(std::move(r));
    ++local.records;
  }
  if (stats != nullptr) *stats = local;
  return out;
}

std::vector<DeathRecord> read_death_records(const std::string& path,
                                            RecordReadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open records file: " + path);
  return read_death_records(in, stats);
}

void write_death_records(std::ostream& out,
                         const std::vector<DeathRecord>& records) {
  out << "first,last,birth_date,death_date,ssn_area\n";
  for (const auto& r : records) {
    out << r.first.text << ',' << r.last.text << ','
        << format_iso_date(r.birth) << ',' << format_iso_date(r.death) << ','
        << r.ssn_area << '\n';
  }
}

namespace {

bool ssdi_date(std::string_view mmddccyy, Date& out) {
  int m = 0, d = 0, y = 0;
  if (mmddccyy.size() != 8 || !parse_int(mmddccyy.substr(0, 2), m) ||
      !parse_int(mmddccyy.substr(2, 2), d) ||
      !parse_int(mmddccyy.substr(4, 4), y)) {
    return false;
  }
  return make_date(y, m, d, out);
}

}  // namespace

std::vector<DeathRecord> read_ssdi_master(std::istream& in,
                                          RecordReadStats* stats) {
  RecordReadStats local;
  std::vector<DeathRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line.size() < 81) {
      ++local.skipped;
      continue;
    }
    const std::string_view row(line);
    DeathRecord r;
    r.ssn_area = std::string(row.substr(1, 3));
    auto last = normalize_part(trim(row.substr(10, 20)));
    auto first = normalize_part(trim(row.substr(34, 15)));
    if (!first || !last || !valid_area(r.ssn_area) ||
        !ssdi_date(row.substr(65, 8), r.death) ||
        !ssdi_date(row.substr(73, 8), r.birth) ||
        std::chrono::sys_days(r.death) < std::chrono::sys_days(r.birth)) {
      ++local.skipped;
      continue;
    }
    r.first = {*first, Role::kFirst};
    r.last = {*last, Role::kLast};
    out.push_back(std::move(r));
    ++local.records;
  }
  if (stats != nullptr) *stats = local;
  return out;
}

std::vector<DeathRecord> read_ssdi_master(const std::string& path,
                                          RecordReadStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open SSDI master file: " + path);
  return read_ssdi_master(in, stats);
}

}  // namespace namecraft
