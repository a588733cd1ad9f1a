#include "gridstats/grid_ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <regex>
#include <sstream>
#include <utility>

#include "gridstats/error.hpp"
#include "text_util.hpp"

namespace gridstats {

using detail::format_double;
using detail::parse_double;
using detail::parse_int;
using detail::trim;

std::string_view to_string(BranchKind kind) noexcept {
  switch (kind) {
    case BranchKind::TransmissionLine: return "line";
    case BranchKind::Transformer: return "transformer";
    case BranchKind::AutotransformerSuspect: return "autotransformer_suspect";
  }
  return "unknown";
}

std::string_view to_string(RejectReason reason) noexcept {
  switch (reason) {
    case RejectReason::NonPositiveR: return "NonPositiveR";
    case RejectReason::NonPositiveX: return "NonPositiveX";
    case RejectReason::ZeroRating: return "ZeroRating";
    case RejectReason::ExtremeRating: return "ExtremeRating";
    case RejectReason::NonFinite: return "NonFinite";
  }
  return "unknown";
}

VoltageClassTable::VoltageClassTable(std::vector<VoltageClass> classes) : classes_(std::move(classes)) {
  for (const auto& c : classes_) {
    if (!(std::isfinite(c.nominal_kv) && c.nominal_kv > 0.0))
      throw Error("voltage class nominal kV must be positive");
    if (!(c.tolerance_frac >= 0.0 && c.tolerance_frac <= 0.1))
      throw Error("voltage class tolerance must lie in [0, 0.1]");
  }
  std::sort(classes_.begin(), classes_.end(),
            [](const VoltageClass& a, const VoltageClass& b) { return a.nominal_kv < b.nominal_kv; });
  for (std::size_t i = 1; i < classes_.size(); ++i) {
    if (classes_[i].lower_kv() <= classes_[i - 1].upper_kv())
      throw Error("voltage classes " + format_double(classes_[i - 1].nominal_kv) + " and " +
                  format_double(classes_[i].nominal_kv) + " kV overlap under tolerance");
  }
}

VoltageClassTable VoltageClassTable::from_nominals(std::span<const double> nominal_kv, double tolerance_frac) {
  std::vector<VoltageClass> classes;
  classes.reserve(nominal_kv.size());
  for (double kv : nominal_kv) classes.push_back({kv, tolerance_frac});
  return VoltageClassTable(std::move(classes));
}

std::optional<VoltageClass> VoltageClassTable::match(double kv) const noexcept {
  for (const auto& c : classes_)
    if (c.matches(kv)) return c;
  return std::nullopt;
}

VoltageClassTable default_voltage_classes() {
  constexpr std::array<double, 3> kNominal{115.0, 138.0, 230.0};
  return VoltageClassTable::from_nominals(kNominal);
}

// ---------------------------------------------------------------------------
// Canonical CSV

namespace {

constexpr std::array<std::string_view, 10> kColumns{
    "id", "from_bus", "to_bus", "from_kv", "to_kv", "r_pu", "x_pu", "mva_rating", "tap_ratio", "system_mva_base"};

double require_double(std::string_view cell, std::string_view column, std::size_t line) {
  auto value = parse_double(cell);
  if (!value) throw ParseError(line, "column '" + std::string(column) + "': cannot parse number '" +
                                         std::string(trim(cell)) + "'");
  return *value;
}

std::int64_t require_int(std::string_view cell, std::string_view column, std::size_t line) {
  auto value = parse_int(cell);
  if (!value) throw ParseError(line, "column '" + std::string(column) + "': cannot parse integer '" +
                                         std::string(trim(cell)) + "'");
  return *value;
}

void require_voltage(double kv, std::string_view column, std::size_t line) {
  if (!(std::isfinite(kv) && kv > 0.0))
    throw ParseError(line, "column '" + std::string(column) + "' must be a positive voltage");
}

}  // namespace

std::vector<BranchRecord> parse_branch_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  const auto rows = detail::lines(text);

  std::size_t header_index = 0;
  while (header_index < rows.size() && trim(rows[header_index]).empty()) ++header_index;
  if (header_index == rows.size()) throw Error("branch CSV is empty; expected a header row");

  const auto header = detail::split(rows[header_index], ',');
  std::array<std::size_t, kColumns.size()> position{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    auto it = std::find_if(header.begin(), header.end(),
                           [&](std::string_view h) { return trim(h) == kColumns[c]; });
    if (it == header.end()) throw Error("branch CSV is missing required column '" + std::string(kColumns[c]) + "'");
    position[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<BranchRecord> records;
  for (std::size_t i = header_index + 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (trim(rows[i]).empty()) continue;
    const auto cells = detail::split(rows[i], ',');
    if (cells.size() != header.size())
      throw ParseError(line, "expected " + std::to_string(header.size()) + " columns, found " +
                                 std::to_string(cells.size()));
    BranchRecord r;
    r.id = std::string(trim(cells[position[0]]));
    r.from_bus = require_int(cells[position[1]], kColumns[1], line);
    r.to_bus = require_int(cells[position[2]], kColumns[2], line);
    r.from_kv = require_double(cells[position[3]], kColumns[3], line);
    r.to_kv = require_double(cells[position[4]], kColumns[4], line);
    r.r_pu = require_double(cells[position[5]], kColumns[5], line);
    r.x_pu = require_double(cells[position[6]], kColumns[6], line);
    r.mva_rating = require_double(cells[position[7]], kColumns[7], line);
    r.tap_ratio = require_double(cells[position[8]], kColumns[8], line);
    r.system_mva_base = require_double(cells[position[9]], kColumns[9], line);
    require_voltage(r.from_kv, kColumns[3], line);
    require_voltage(r.to_kv, kColumns[4], line);
    if (!(std::isfinite(r.system_mva_base) && r.system_mva_base > 0.0))
      throw ParseError(line, "column 'system_mva_base' must be positive");
    if (!records.empty() && records.front().system_mva_base != r.system_mva_base)
      throw ParseError(line, "system_mva_base differs from earlier rows");
    records.push_back(std::move(r));
  }
  return records;
}

std::string serialize_branch_csv(std::span<const BranchRecord> records) {
  std::string out(kBranchCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    if (r.id.find_first_of(",\r\n") != std::string::npos)
      throw Error("branch id '" + r.id + "' cannot contain commas or line breaks");
    out += r.id;
    for (auto piece : {std::to_string(r.from_bus), std::to_string(r.to_bus), format_double(r.from_kv),
                       format_double(r.to_kv), format_double(r.r_pu), format_double(r.x_pu),
                       format_double(r.mva_rating), format_double(r.tap_ratio), format_double(r.system_mva_base)}) {
      out += ',';
      out += piece;
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// MATPOWER

namespace {

struct MatrixRow {
  std::size_t line;
  std::vector<double> values;
};

std::vector<double> parse_row(std::string_view segment, std::size_t line) {
  std::vector<double> values;
  std::size_t i = 0;
  while (i < segment.size()) {
    while (i < segment.size() && (segment[i] == ' ' || segment[i] == '\t' || segment[i] == ',')) ++i;
    if (i >= segment.size()) break;
    std::size_t j = i;
    while (j < segment.size() && segment[j] != ' ' && segment[j] != '\t' && segment[j] != ',') ++j;
    const auto token = segment.substr(i, j - i);
    auto value = parse_double(token);
    if (!value) throw ParseError(line, "cannot parse matrix entry '" + std::string(token) + "'");
    values.push_back(*value);
    i = j;
  }
  return values;
}

}  // namespace

MatpowerCase parse_matpower_case(std::string_view text) {
  static const std::regex kAssign(R"(^\s*(?:\w+\.)?(\w+)\s*=\s*(.*)$)");

  std::optional<double> base_mva;
  std::map<std::string, std::vector<MatrixRow>> matrices;
  std::string current;      // matrix being read, empty when outside
  bool in_cell = false;     // inside a { ... } cell array

  const auto rows = detail::lines(text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    std::string_view content = rows[i];
    if (auto pct = content.find('%'); pct != std::string_view::npos) content = content.substr(0, pct);

    if (in_cell) {
      if (content.find('}') != std::string_view::npos) in_cell = false;
      continue;
    }

    if (current.empty()) {
      std::cmatch m;
      const std::string owned(content);
      if (!std::regex_match(owned.c_str(), m, kAssign)) continue;
      const std::string name = m[1].str();
      std::string_view rhs = trim(std::string_view(owned).substr(static_cast<std::size_t>(m.position(2))));
      if (rhs.starts_with("{")) {
        in_cell = rhs.find('}') == std::string_view::npos;
        continue;
      }
      if (!rhs.starts_with("[")) {
        if (name == "baseMVA") {
          auto end = rhs.find(';');
          auto value = parse_double(rhs.substr(0, end));
          if (!value || !(*value > 0.0)) throw ParseError(line, "baseMVA must be a positive number");
          base_mva = *value;
        }
        continue;
      }
      current = name;
      matrices[current];  // present even when empty
      content = std::string_view(rows[i]);
      if (auto pct = content.find('%'); pct != std::string_view::npos) content = content.substr(0, pct);
      content = content.substr(content.find('[') + 1);
    }

    bool closes = false;
    if (auto close = content.find(']'); close != std::string_view::npos) {
      content = content.substr(0, close);
      closes = true;
    }
    for (auto segment : detail::split(content, ';')) {
      if (trim(segment).empty()) continue;
      matrices[current].push_back({line, parse_row(segment, line)});
    }
    if (closes) current.clear();
  }

  if (!current.empty()) throw Error("matrix '" + current + "' is not closed with ']'");
  if (!base_mva) throw Error("MATPOWER case is missing baseMVA");
  if (!matrices.contains("bus")) throw Error("MATPOWER case is missing the bus matrix");
  if (!matrices.contains("branch")) throw Error("MATPOWER case is missing the branch matrix");

  std::map<std::int64_t, double> bus_kv;
  for (const auto& row : matrices["bus"]) {
    if (row.values.size() < 10) throw ParseError(row.line, "bus row needs at least 10 columns");
    bus_kv[static_cast<std::int64_t>(row.values[0])] = row.values[9];
  }

  MatpowerCase mpc;
  mpc.base_mva = *base_mva;
  std::map<std::pair<std::int64_t, std::int64_t>, int> parallel;
  std::size_t branch_row = 0;
  for (const auto& row : matrices["branch"]) {
    ++branch_row;
    if (row.values.size() < 9) throw ParseError(row.line, "branch row needs at least 9 columns");
    const auto fbus = static_cast<std::int64_t>(row.values[0]);
    const auto tbus = static_cast<std::int64_t>(row.values[1]);
    for (auto bus : {fbus, tbus}) {
      if (!bus_kv.contains(bus))
        throw ParseError(row.line, "branch row " + std::to_string(branch_row) + " references unknown bus " +
                                       std::to_string(bus));
    }
    BranchRecord r;
    const int k = ++parallel[{fbus, tbus}];
    r.id = std::to_string(fbus) + "-" + std::to_string(tbus) + "-" + std::to_string(k);
    r.from_bus = fbus;
    r.to_bus = tbus;
    r.from_kv = bus_kv[fbus];
    r.to_kv = bus_kv[tbus];
    r.r_pu = row.values[2];
    r.x_pu = row.values[3];
    r.mva_rating = row.values[5];
    r.tap_ratio = row.values[8];
    r.system_mva_base = mpc.base_mva;
    mpc.branches.push_back(std::move(r));
  }
  return mpc;
}

std::string serialize_matpower_case(const MatpowerCase& mpc, std::string_view name) {
  std::map<std::int64_t, double> buses;
  for (const auto& r : mpc.branches) {
    buses.emplace(r.from_bus, r.from_kv);
    buses.emplace(r.to_bus, r.to_kv);
  }
  std::ostringstream out;
  out << "function mpc = " << name << "\n";
  out << "mpc.version = '2';\n";
  out << "mpc.baseMVA = " << format_double(mpc.base_mva) << ";\n\n";
  out << "%% bus data\n";
  out << "%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin\n";
  out << "mpc.bus = [\n";
  for (const auto& [bus, kv] : buses)
    out << '\t' << bus << "\t1\t0\t0\t0\t0\t1\t1\t0\t" << format_double(kv) << "\t1\t1.1\t0.9;\n";
  out << "];\n\n";
  out << "%% branch data\n";
  out << "%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\tangmin\tangmax\n";
  out << "mpc.branch = [\n";
  for (const auto& r : mpc.branches) {
    const auto rate = format_double(r.mva_rating);
    out << '\t' << r.from_bus << '\t' << r.to_bus << '\t' << format_double(r.r_pu) << '\t'
        << format_double(r.x_pu) << "\t0\t" << rate << '\t' << rate << '\t' << rate << '\t'
        << format_double(r.tap_ratio) << "\t0\t1\t-360\t360;\n";
  }
  out << "];\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Filtering and classification

FilterOutcome filter_valid(std::span<const BranchRecord> records, RatingBounds bounds) {
  if (!(bounds.min_mva > 0.0) || !(bounds.max_mva >= bounds.min_mva))
    throw Error("rating bounds must satisfy 0 < min <= max");
  FilterOutcome outcome;
  for (const auto& r : records) {
    std::optional<RejectReason> reason;
    const bool finite = std::isfinite(r.from_kv) && std::isfinite(r.to_kv) && std::isfinite(r.r_pu) &&
                        std::isfinite(r.x_pu) && std::isfinite(r.mva_rating) && std::isfinite(r.tap_ratio) &&
                        std::isfinite(r.system_mva_base);
    if (r.r_pu <= 0.0)
      reason = RejectReason::NonPositiveR;
    else if (r.x_pu <= 0.0)
      reason = RejectReason::NonPositiveX;
    else if (r.mva_rating == 0.0)
      reason = RejectReason::ZeroRating;
    else if (r.mva_rating < bounds.min_mva || r.mva_rating > bounds.max_mva)
      reason = RejectReason::ExtremeRating;
    else if (!finite)
      reason = RejectReason::NonFinite;

    if (reason)
      outcome.rejected.push_back({r, *reason});
    else
      outcome.kept.push_back(r);
  }
  return outcome;
}

BranchKind classify_branch(const BranchRecord& record, double autotransformer_xr_threshold, double kv_tolerance) {
  const double high = std::max(record.from_kv, record.to_kv);
  const bool kv_differs = std::abs(record.from_kv - record.to_kv) > kv_tolerance * high;
  if (record.tap_ratio == 0.0 && !kv_differs) return BranchKind::TransmissionLine;
  if (record.r_pu > 0.0 && record.x_pu / record.r_pu < autotransformer_xr_threshold)
    return BranchKind::AutotransformerSuspect;
  return BranchKind::Transformer;
}

std::optional<VoltageClass> assign_voltage_class(const BranchRecord& record, BranchKind kind,
                                                 const VoltageClassTable& classes) {
  const double kv = is_transformer(kind) ? std::max(record.from_kv, record.to_kv) : record.from_kv;
  return classes.match(kv);
}

}  // namespace gridstats
