#pragma once

namespace gridstats {

/// Voltage (kV) and power (MVA) base pair. Both strictly positive and finite.
struct BaseSpec {
  double v_base_kv;
  double s_base_mva;

  /// Throws gridstats::Error on non-positive or non-finite bases.
  static BaseSpec make(double v_base_kv, double s_base_mva);
};

/// General base change of a per-unit impedance:
/// z * (V_given / V_new)^2 * (S_new / S_given).
double rebase_impedance(double z_pu_given, const BaseSpec& given, const BaseSpec& target);

/// Refers a common-base per-unit impedance to the equipment's own MVA rating,
/// assuming zone voltage bases equal the nominal terminal voltages.
double to_own_base(double x_pu_common, double system_mva_base, double mva_rating);

/// Inverse of to_own_base.
double to_common_base(double x_pu_own, double system_mva_base, double mva_rating);

/// X/R ratio. Invariant under any common rescaling of r and x.
double xr_ratio(double r_pu, double x_pu);

}  // namespace gridstats
