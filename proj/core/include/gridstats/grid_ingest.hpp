#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridstats {

/// One branch (transformer or line) of a grid case. Impedances are per unit on
/// the case's common MVA base.
struct BranchRecord {
  std::string id;
  std::int64_t from_bus = 0;
  std::int64_t to_bus = 0;
  double from_kv = 0.0;
  double to_kv = 0.0;
  double r_pu = 0.0;
  double x_pu = 0.0;
  double mva_rating = 0.0;       // 0 = unreported
  double tap_ratio = 0.0;        // 0 = not a transformer (MATPOWER convention)
  double system_mva_base = 100.0;

  bool operator==(const BranchRecord&) const = default;
};

enum class BranchKind { TransmissionLine, Transformer, AutotransformerSuspect };

std::string_view to_string(BranchKind kind) noexcept;

inline bool is_transformer(BranchKind kind) noexcept {
  return kind != BranchKind::TransmissionLine;
}

struct VoltageClass {
  double nominal_kv;
  double tolerance_frac = 0.02;

  double lower_kv() const noexcept { return nominal_kv * (1.0 - tolerance_frac); }
  double upper_kv() const noexcept { return nominal_kv * (1.0 + tolerance_frac); }
  bool matches(double kv) const noexcept { return kv >= lower_kv() && kv <= upper_kv(); }

  bool operator==(const VoltageClass&) const = default;
};

/// Ordered, non-overlapping set of voltage classes. Construction rejects
/// overlapping tolerance windows, so any voltage matches at most one class.
class VoltageClassTable {
 public:
  explicit VoltageClassTable(std::vector<VoltageClass> classes);

  static VoltageClassTable from_nominals(std::span<const double> nominal_kv,
                                         double tolerance_frac = 0.02);

  const std::vector<VoltageClass>& classes() const noexcept { return classes_; }
  std::optional<VoltageClass> match(double kv) const noexcept;

 private:
  std::vector<VoltageClass> classes_;
};

/// 115, 138 and 230 kV with 2% tolerance.
VoltageClassTable default_voltage_classes();

enum class RejectReason { NonPositiveR, NonPositiveX, ZeroRating, ExtremeRating, NonFinite };

std::string_view to_string(RejectReason reason) noexcept;

struct Rejection {
  BranchRecord record;
  RejectReason reason;
};

struct FilterOutcome {
  std::vector<BranchRecord> kept;
  std::vector<Rejection> rejected;
};

/// Accepted closed interval of MVA ratings. Values outside are treated as
/// placeholder ratings.
struct RatingBounds {
  double min_mva = 1.0;
  double max_mva = 3000.0;
};

inline constexpr std::string_view kBranchCsvHeader =
    "id,from_bus,to_bus,from_kv,to_kv,r_pu,x_pu,mva_rating,tap_ratio,system_mva_base";

/// Parses the canonical branch CSV. Columns are matched by header name, extra
/// columns are ignored. Throws ParseError (with line number) on malformed rows
/// and Error naming the column when a required column is missing.
std::vector<BranchRecord> parse_branch_csv(std::string_view text);

/// Writes the canonical branch CSV with shortest round-trip number formatting.
std::string serialize_branch_csv(std::span<const BranchRecord> records);

struct MatpowerCase {
  double base_mva = 100.0;
  std::vector<BranchRecord> branches;
};

/// Reads the baseMVA, bus and branch blocks of a MATPOWER case file.
/// Branch ids are "fbus-tbus-k", k = 1, 2, ... over parallel branches.
MatpowerCase parse_matpower_case(std::string_view text);

/// Writes a minimal MATPOWER case (baseMVA, bus, branch) holding the given
/// branches. Bus voltages are taken from the records' terminal kV.
std::string serialize_matpower_case(const MatpowerCase& mpc, std::string_view name = "gridstats_case");

/// Applies the validity rules in order: NonPositiveR, NonPositiveX,
/// ZeroRating, ExtremeRating, NonFinite. The first failing rule is the reason.
FilterOutcome filter_valid(std::span<const BranchRecord> records, RatingBounds bounds = {});

/// A branch is a transformer when it has a tap ratio or its terminal voltages
/// differ by more than kv_tolerance (relative). Transformers with X/R below
/// autotransformer_xr_threshold are flagged AutotransformerSuspect.
BranchKind classify_branch(const BranchRecord& record, double autotransformer_xr_threshold = 4.0,
                           double kv_tolerance = 0.02);

/// Transformers are classed by their high-voltage terminal, lines by from_kv.
std::optional<VoltageClass> assign_voltage_class(const BranchRecord& record, BranchKind kind,
                                                 const VoltageClassTable& classes);

}  // namespace gridstats
