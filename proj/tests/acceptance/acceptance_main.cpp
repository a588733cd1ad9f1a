// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "gridstats/analysis.hpp"
#include "gridstats/distributions.hpp"
#include "gridstats/error.hpp"
#include "gridstats/fitting.hpp"
#include "gridstats/grid_ingest.hpp"
#include "gridstats/per_unit.hpp"
#include "gridstats/reference_profiles.hpp"
#include "gridstats/synth_sampler.hpp"
#include "published_tables.hpp"

using namespace gridstats;
namespace fs = std::filesystem;
namespace tables = gridstats::testing;

namespace {

// Collects individual failures so a criterion can report what went wrong.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::abs(got - want) <= tol, s.str());
  }
  void rel(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " within " << tol << " relative";
    expect(std::abs(got - want) <= tol * std::abs(want), s.str());
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) + " checks";
    for (const auto& f : failures_) s += "\n      " + f;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string kv_label(double kv) { return std::to_string(static_cast<int>(kv)) + " kV"; }

// 1. Every published number in the builtin profile, compared exactly.
void profile_transcription(Checker& c) {
  const auto profile = builtin_profile();
  for (const auto& row : tables::kReactance) {
    const auto& e = profile.at(ParameterKind::TransformerReactanceOwnBase, row.kv);
    const std::string at = "reactance " + kv_label(row.kv);
    c.expect(e.summary.median == row.median, at + " median");
    c.expect(e.summary.mean == row.mean, at + " mean");
    c.expect(e.summary.min == row.min, at + " min");
    c.expect(e.summary.max == row.max, at + " max");
    c.expect(e.band && e.band->lo == tables::kBandLo && e.band->hi == tables::kBandHi, at + " band limits");
    c.expect(e.band && e.band->fraction == row.band_fraction, at + " band fraction");
  }
  const auto ranges = [&](ParameterKind kind, const auto& rows, const auto& gev, const std::string& label) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& e = profile.at(kind, rows[i].kv);
      const std::string at = label + " " + kv_label(rows[i].kv);
      c.expect(e.summary.median == rows[i].median, at + " median");
      c.expect(e.summary.mean == rows[i].mean, at + " mean");
      c.expect(e.summary.min == rows[i].min, at + " min");
      c.expect(e.summary.max == rows[i].max, at + " max");
      c.expect(e.summary.q10 == rows[i].q10, at + " q10");
      c.expect(e.summary.q90 == rows[i].q90, at + " q90");
      const bool has_gev = e.fitted && e.fitted->family() == Family::Gev;
      c.expect(has_gev, at + " GEV fit present");
      if (has_gev) {
        const auto& p = e.fitted->template as<GevParams>();
        c.expect(p.mu == gev[i].mu && p.sigma == gev[i].sigma && p.zeta == gev[i].zeta, at + " GEV parameters");
      }
      c.expect(e.reference_d_kl == gev[i].d_kl, at + " D_KL");
    }
  };
  ranges(ParameterKind::TransformerMvaRating, tables::kMva, tables::kMvaGev, "MVA");
  ranges(ParameterKind::TransformerXr, tables::kXr, tables::kXrGev, "X/R");
}

// 2. Closed-form identities.
void analytic_identities(Checker& c) {
  for (double zeta : {-0.5, 0.1, 0.3732}) {
    c.near(cdf(DistSpec::gev(41.08, 27.38, zeta), 41.08), std::exp(-1.0), 1e-12,
           "GEV cdf(mu), zeta=" + std::to_string(zeta));
  }
  for (double mu : {0.00869, 0.5, 2.0, 117.0}) {
    c.near(pdf(DistSpec::exponential(mu), 0.0), 1.0 / mu, 1e-12 / mu, "Exponential pdf(0), mu=" + std::to_string(mu));
  }
  for (const auto& [mu, sigma] : {std::pair{0.0, 1.0}, std::pair{0.1291, 0.04}, std::pair{-3.0, 7.5}}) {
    const double want = 1.0 / (std::numbers::pi * sigma);
    c.near(pdf(DistSpec::tls(mu, sigma, 1.0), mu), want, 1e-12 * want,
           "TLS nu=1 pdf(mu), sigma=" + std::to_string(sigma));
  }
}

// 3. Maximum-likelihood recovery.
void mle_recovery(Checker& c) {
  std::uint64_t seed = 1000;
  for (const auto* rows : {&tables::kMvaGev, &tables::kXrGev}) {
    for (const auto& row : *rows) {
      const auto truth = DistSpec::gev(row.mu, row.sigma, row.zeta);
      const auto draws = sample(truth, seed++, 20000);
      const auto fit = fit_mle(Family::Gev, draws);
      const std::string at = "GEV(" + std::to_string(row.mu) + ") ";
      c.expect(fit.converged, at + "converged: " + fit.diagnostic);
      const auto& p = fit.dist.as<GevParams>();
      c.rel(p.mu, row.mu, 0.05, at + "mu");
      c.rel(p.sigma, row.sigma, 0.05, at + "sigma");
      c.rel(p.zeta, row.zeta, 0.05, at + "zeta");
    }
  }
  const auto e = fit_mle(Family::Exponential, std::vector<double>{1, 2, 3, 4});
  c.expect(e.dist.as<ExponentialParams>().mu == 2.5, "Exponential MLE of [1,2,3,4] is 2.5");
  const auto n = fit_mle(Family::Normal, std::vector<double>{0, 0, 10, 10});
  c.expect(n.dist.as<NormalParams>() == NormalParams{5.0, 5.0}, "Normal MLE of [0,0,10,10] is (5, 5)");
  const auto n2 = fit_mle(Family::Normal, std::vector<double>{1, 3});
  c.expect(n2.dist.as<NormalParams>() == NormalParams{2.0, 1.0}, "Normal MLE of [1,3] is (2, 1)");
}

// 4. KL divergence.
void kl_correctness(Checker& c) {
  const std::vector<double> p{0.5, 0.5}, q{0.9, 0.1};
  c.near(kl_divergence(p, q).d_kl, 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(5.0), 1e-6, "two-bin case");
  c.near(kl_divergence(p, q).d_kl, 0.5108, 1e-4, "two-bin case rounded value");
  for (const auto& d : {DistSpec::tls(0.1291, 0.04, 3), DistSpec::gev(41.08, 27.38, 0.3732),
                        DistSpec::exponential(0.00869), DistSpec::normal(180, 60)}) {
    const double lo = quantile(d, 1e-4), hi = quantile(d, 1 - 1e-4);
    std::vector<double> edges;
    for (int i = 0; i <= 50; ++i) edges.push_back(lo + (hi - lo) * i / 50.0);
    const auto masses = bin_masses(d, edges);
    c.near(kl_divergence(masses, masses).d_kl, 0.0, 1e-12, std::string("self-KL ") + std::string(family_name(d.family())));
  }
  const auto draws = sample(DistSpec::exponential(1.0), 4, 50000);
  const auto fit = fit_mle(Family::Exponential, draws);
  const double d = kl_divergence(histogram(draws), fit.dist).d_kl;
  c.expect(d < 0.05, "50000 Exponential draws vs fit: " + std::to_string(d) + " nats");
}

// 5. Own-base reactance is independent of rating; common-base is not.
void decorrelation(Checker& c) {
  const auto gen = generate_transformers(115, 5000, 7, builtin_profile(), 100.0);
  std::vector<double> own, common, mva;
  for (const auto& p : gen) {
    own.push_back(*p.x_pu_own);
    common.push_back(p.x_pu_common);
    mva.push_back(p.mva_rating);
  }
  const double rho_own = spearman(own, mva);
  const double rho_common = spearman(common, mva);
  c.expect(std::abs(rho_own) < 0.1, "|spearman(X own, MVA)| = " + std::to_string(std::abs(rho_own)));
  c.expect(rho_common < -0.3, "spearman(X common, MVA) = " + std::to_string(rho_common));
}

// 6. Synthetic population validates against the profile it came from.
void round_trip_validation(Checker& c) {
  const auto profile = builtin_profile();
  std::vector<SyntheticBranchParams> params;
  std::uint64_t seed = 2026;
  for (double kv : {115.0, 138.0, 230.0}) {
    const auto batch = generate_transformers(kv, 5000, seed++, profile, 100.0);
    params.insert(params.end(), batch.begin(), batch.end());
  }
  const auto records = to_branch_records(params, 100.0);
  const auto samples = collect_samples(records, default_voltage_classes());
  const auto report = validate(observe(samples), profile);
  std::size_t checked = 0;
  for (const auto& f : report.findings) {
    if (f.skipped) continue;
    ++checked;
    std::ostringstream s;
    s << to_string(f.kind) << " @ " << f.class_kv << " " << to_string(f.check) << " " << f.detail << ": observed "
      << f.observed << ", expected [" << f.expected_lo << ", " << f.expected_hi << "]";
    c.expect(f.pass, s.str());
  }
  c.expect(checked >= 3 * 3, "non-skipped findings: " + std::to_string(checked));
  c.expect(report.overall_pass, "overall_pass");
  const auto& x115 = samples.values.at({ParameterKind::TransformerReactanceOwnBase, 115.0});
  c.near(band_fraction(x115, 0.05, 0.2), 0.8188, 0.02, "115 kV band fraction");
}

// 7. Per-unit conversions.
void per_unit(Checker& c) {
  c.near(rebase_impedance(0.08, {115, 50}, {115, 100}), 0.16, 0.16e-12, "power-only rebase");
  c.near(rebase_impedance(0.1, {115, 100}, {230, 100}), 0.025, 0.025e-12, "voltage rebase");
  c.expect(rebase_impedance(0.1234, {138, 100}, {138, 100}) == 0.1234, "identity rebase");
  c.near(to_own_base(1.0, 100, 50), 0.5, 0.5e-12, "own base 1.0 @ 50 MVA");
  c.near(to_own_base(0.25, 100, 100), 0.25, 0.25e-12, "own base at equal bases");
  c.near(xr_ratio(0.01, 0.25), 25.0, 25e-12, "X/R 0.25/0.01");
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> kv(0.4, 800.0), mva(1.0, 2000.0), z(1e-5, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const BaseSpec a{kv(rng), mva(rng)}, b{kv(rng), mva(rng)};
    const double zi = z(rng);
    c.rel(rebase_impedance(rebase_impedance(zi, a, b), b, a), zi, 1e-12, "rebase round trip #" + std::to_string(i));
    const double own = to_own_base(zi, a.s_base_mva, b.s_base_mva);
    c.rel(rebase_impedance(own, {a.v_base_kv, b.s_base_mva}, {a.v_base_kv, a.s_base_mva}), zi, 1e-12,
          "own base round trip #" + std::to_string(i));
  }
}

// 8. Parsers.
void parser_conformance(Checker& c, const fs::path& tmp) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1e-6, 2.0);
  std::vector<BranchRecord> records;
  for (int i = 0; i < 500; ++i)
    records.push_back({"b" + std::to_string(i), i + 1, i + 2, 115 * u(rng), 13.8 * u(rng), u(rng) / 10, u(rng),
                       1000 * u(rng), i % 2 ? 1.0 : 0.0, 100});
  const auto csv = serialize_branch_csv(records);
  c.expect(parse_branch_csv(csv) == records, "CSV parse(serialize(r)) == r");
  c.expect(serialize_branch_csv(parse_branch_csv(csv)) == csv, "CSV serialize(parse(text)) == text");

  std::ifstream in(GRIDSTATS_TEST_DATA "/case3.m");
  std::stringstream text;
  text << in.rdbuf();
  const auto mpc = parse_matpower_case(text.str());
  c.expect(mpc.base_mva == 100.0, "case3 baseMVA");
  c.expect(mpc.branches.size() == 2, "case3 branch count");
  if (mpc.branches.size() == 2) {
    c.expect(mpc.branches[0] == BranchRecord{"1-2-1", 1, 2, 115, 13.8, 0.004, 0.2, 60, 1.0, 100}, "case3 branch 1");
    c.expect(mpc.branches[1] == BranchRecord{"1-3-1", 1, 3, 115, 115, 0.01, 0.035, 250, 0, 100}, "case3 branch 2");
  }

  const std::string bad_csv = std::string(kBranchCsvHeader) + "\nt1,1,2,115,13.8,0.002,0.05,60,1.0,100\nt2,1,2,115\n";
  const std::string bad_case =
      "mpc.baseMVA = 100;\nmpc.bus = [\n1 3 0 0 0 0 1 1 0 115 1 1.1 0.9;\n];\nmpc.branch = [\n99 1 0.01 0.1 0 100 0 0 0 "
      "0 1 -360 360;\n];\n";
  const auto expect_line = [&](const std::function<void()>& parse, std::size_t line, const std::string& what) {
    try {
      parse();
      c.expect(false, what + ": no error");
    } catch (const ParseError& e) {
      c.expect(e.line() == line, what + ": reported " + e.what());
    }
  };
  expect_line([&] { parse_branch_csv(bad_csv); }, 3, "short CSV row");
  expect_line([&] { parse_matpower_case(bad_case); }, 6, "unknown bus");

  std::ofstream(tmp / "bad.csv") << bad_csv;
  std::ofstream(tmp / "bad.m") << bad_case;
  const auto r1 = cli({"analyze", "--branches", (tmp / "bad.csv").string()});
  c.expect(r1.code == 1 && r1.err.find("line 3") != std::string::npos, "CLI bad CSV: " + r1.err);
  const auto r2 = cli({"validate", "--case", (tmp / "bad.m").string()});
  c.expect(r2.code == 1 && r2.err.find("line 6") != std::string::npos, "CLI bad case: " + r2.err);
}

// 9. Byte-identical outputs for repeated runs.
void determinism(Checker& c, const fs::path& tmp) {
  const auto twice = [&](std::vector<std::string> args, const std::string& name) {
    const auto a = cli(args);
    const auto b = cli(args);
    c.expect(a.code == 0 || a.code == 2, name + " exit " + std::to_string(a.code) + ": " + a.err);
    c.expect(!a.out.empty() && a.out == b.out, name + " stdout identical");
    return a.out;
  };
  for (const std::string format : {"params", "branches", "matpower"})
    twice({"generate", "--classes", "115,138,230", "--n", "1000", "--seed", "42", "--format", format},
          "generate --format " + format);
  twice({"generate", "--kind", "line", "--classes", "115", "--n", "100", "--seed", "42", "--profile",
         GRIDSTATS_TEST_DATA "/line_profile.json"},
        "generate --kind line");

  const auto mpc = tmp / "syn.m";
  std::ofstream(mpc, std::ios::binary)
      << cli({"generate", "--classes", "115,138,230", "--n", "1000", "--seed", "42", "--format", "matpower"}).out;
  for (const std::string cmd : {"analyze", "fit", "validate"}) twice({cmd, "--case", mpc.string()}, cmd);
  twice({"hist", "--case", mpc.string()}, "hist");

  const auto h1 = tmp / "h1", h2 = tmp / "h2";
  cli({"hist", "--case", mpc.string(), "--out", h1.string()});
  cli({"hist", "--case", mpc.string(), "--out", h2.string()});
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(h1)) {
    ++files;
    c.expect(slurp(entry.path()) == slurp(h2 / entry.path().filename()),
             "hist file " + entry.path().filename().string());
  }
  c.expect(files > 0, "hist wrote files");
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / "gridstats_acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
      {"1 profile transcription", profile_transcription},
      {"2 analytic identities", analytic_identities},
      {"3 MLE recovery", mle_recovery},
      {"4 KL correctness", kl_correctness},
      {"5 decorrelation", decorrelation},
      {"6 round-trip validation", round_trip_validation},
      {"7 per-unit conversion", per_unit},
      {"8 parser conformance", [&](Checker& c) { parser_conformance(c, tmp); }},
      {"9 determinism", [&](Checker& c) { determinism(c, tmp); }},
  };

  int failed = 0;
  for (const auto& [name, body] : criteria) {
    Checker c;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s  %-26s %s\n", c.ok() ? "PASS" : "FAIL", name.c_str(), c.summary().c_str());
    std::fflush(stdout);
    if (!c.ok()) ++failed;
  }
  fs::remove_all(tmp);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
