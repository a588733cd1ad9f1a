#include "gridstats/per_unit.hpp"

#include <cmath>

#include "gridstats/error.hpp"

namespace gridstats {

BaseSpec BaseSpec::make(double v_base_kv, double s_base_mva) {
  if (!(std::isfinite(v_base_kv) && v_base_kv > 0.0))
    throw Error("voltage base must be finite and positive");
  if (!(std::isfinite(s_base_mva) && s_base_mva > 0.0))
    throw Error("power base must be finite and positive");
  return BaseSpec{v_base_kv, s_base_mva};
}

double rebase_impedance(double z_pu_given, const BaseSpec& given, const BaseSpec& target) {
  if (!std::isfinite(z_pu_given)) throw Error("per-unit impedance must be finite");
  BaseSpec::make(given.v_base_kv, given.s_base_mva);
  BaseSpec::make(target.v_base_kv, target.s_base_mva);
  const double v_ratio = given.v_base_kv / target.v_base_kv;
  return z_pu_given * (v_ratio * v_ratio) * (target.s_base_mva / given.s_base_mva);
}

double to_own_base(double x_pu_common, double system_mva_base, double mva_rating) {
  if (!(system_mva_base > 0.0)) throw Error("system MVA base must be positive");
  if (!(mva_rating > 0.0)) throw Error("MVA rating must be positive; filter unrated branches first");
  return x_pu_common * (mva_rating / system_mva_base);
}

double to_common_base(double x_pu_own, double system_mva_base, double mva_rating) {
  if (!(system_mva_base > 0.0)) throw Error("system MVA base must be positive");
  if (!(mva_rating > 0.0)) throw Error("MVA rating must be positive");
  return x_pu_own * (system_mva_base / mva_rating);
}

double xr_ratio(double r_pu, double x_pu) {
  if (!(r_pu > 0.0)) throw Error("X/R needs a positive resistance");
  return x_pu / r_pu;
}

}  // namespace gridstats
