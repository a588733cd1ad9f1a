#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gridstats/analysis.hpp"
#include "gridstats/error.hpp"
#include "gridstats/fitting.hpp"
#include "gridstats/grid_ingest.hpp"
#include "gridstats/reference_profiles.hpp"
#include "gridstats/serialization.hpp"
#include "gridstats/synth_sampler.hpp"

namespace gridstats::cli {

using nlohmann::json;

namespace {

/// Error tied to an input file; printed as "<path>: <message>".
class InputError : public Error {
 public:
  InputError(const std::string& path, const std::string& message) : Error(path + ": " + message) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::optional<std::string>& out_path, std::ostream& out, const std::string& body) {
  if (!out_path) {
    out << body;
    return;
  }
  std::ofstream file(*out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(*out_path + ": cannot open output file");
  file << body;
}

std::string fmt_kv(double kv) {
  std::ostringstream s;
  s << kv;
  return s.str();
}

struct LoadedInput {
  std::vector<BranchRecord> records;
  json meta;
};

LoadedInput load_input(const RunConfig& config) {
  LoadedInput loaded;
  const bool is_case = config.case_path.has_value();
  const std::string& path = is_case ? *config.case_path : *config.branches_path;
  const std::string bytes = read_file(path);
  try {
    loaded.records = is_case ? parse_matpower_case(bytes).branches : parse_branch_csv(bytes);
  } catch (const Error& e) {
    throw InputError(path, e.what());
  }
  loaded.meta = json{{"format", is_case ? "matpower" : "branch_csv"}, {"sha256", sha256_hex(bytes)}};
  return loaded;
}

Profile load_profile(const RunConfig& config) {
  if (config.profile == "builtin") return builtin_profile();
  const std::string text = read_file(config.profile);
  try {
    return profile_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InputError(config.profile, e.what());
  } catch (const Error& e) {
    throw InputError(config.profile, e.what());
  }
}

ValidationThresholds load_thresholds(const RunConfig& config) {
  if (!config.thresholds_path) return {};
  const std::string text = read_file(*config.thresholds_path);
  try {
    return thresholds_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InputError(*config.thresholds_path, e.what());
  } catch (const Error& e) {
    throw InputError(*config.thresholds_path, e.what());
  }
}

json base_meta(const RunConfig& config) {
  json meta{{"tool", "gridstats"}, {"version", GRIDSTATS_VERSION}};
  meta["seed"] = config.seed ? json(*config.seed) : json(nullptr);
  if (const auto* fixed = std::get_if<FixedCount>(&config.binning))
    meta["binning"] = json{{"method", "fixed"}, {"bins", fixed->bins}};
  else
    meta["binning"] = json{{"method", "freedman_diaconis"}, {"min_bins", 10}, {"max_bins", 200}};
  meta["classes"] = config.classes;
  return meta;
}

FitOptions fit_options(const RunConfig& config) {
  FitOptions options;
  options.binning = config.binning;
  return options;
}

GridSamples samples_for(const RunConfig& config, LoadedInput& input) {
  const auto table = VoltageClassTable::from_nominals(config.classes, config.class_tolerance);
  return collect_samples(input.records, table);
}

json filter_summary(const GridSamples& samples) {
  json rejected = json::object();
  for (const auto& [reason, count] : samples.rejected) rejected[std::string(to_string(reason))] = count;
  return json{{"input", samples.input_count},
              {"kept", samples.kept_count},
              {"rejected", rejected},
              {"unclassed", samples.unclassed},
              {"autotransformer_suspects", samples.autotransformer_suspects}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- commands ---------------------------------------------------------------

int cmd_analyze(const RunConfig& config, std::ostream& out) {
  auto input = load_input(config);
  const auto samples = samples_for(config, input);
  using K = ParameterKind;

  json classes = json::array();
  for (double kv : config.classes) {
    json entry{{"class_kv", kv}};
    for (const auto& [group, kinds] :
         {std::pair{"transformers", std::vector{K::TransformerReactanceOwnBase, K::TransformerMvaRating, K::TransformerXr}},
          std::pair{"lines", std::vector{K::LineReactanceCommonBase, K::LineCapacity, K::LineXr}}}) {
      json params = json::object();
      for (auto kind : kinds) {
        auto it = samples.values.find({kind, kv});
        if (it == samples.values.end() || it->second.empty()) continue;
        json p = to_json(summarize(it->second));
        if (kind == K::TransformerReactanceOwnBase) p["band_0.05_0.2"] = band_fraction(it->second, 0.05, 0.2);
        params[std::string(to_string(kind))] = std::move(p);
      }
      entry[group] = params.empty() ? json("no data") : params;
    }
    if (auto t = samples.transformers.find(kv); t != samples.transformers.end() && t->second.mva.size() >= 2) {
      json corr = json::object();
      for (const auto& [name, xs] : {std::pair{"x_common_vs_mva", &t->second.x_common},
                                     std::pair{"x_own_vs_mva", &t->second.x_own}}) {
        try {
          corr[name] = json{{"pearson", pearson(*xs, t->second.mva)}, {"spearman", spearman(*xs, t->second.mva)}};
        } catch (const Error&) {
          corr[name] = "undefined";
        }
      }
      entry["correlation"] = std::move(corr);
    }
    classes.push_back(std::move(entry));
  }

  json meta = base_meta(config);
  meta["input"] = input.meta;
  const json report{{"command", "analyze"}, {"meta", meta}, {"filter", filter_summary(samples)}, {"classes", classes}};
  write_output(config.out_path, out, dump(report));
  return kExitOk;
}

int cmd_fit(const RunConfig& config, std::ostream& out) {
  auto input = load_input(config);
  const auto samples = samples_for(config, input);
  const auto options = fit_options(config);

  json results = json::array();
  for (const auto& [key, values] : samples.values) {
    const auto [kind, kv] = key;
    json item{{"kind", to_string(kind)}, {"class_kv", kv}, {"n", values.size()},
              {"reference_family", family_name(reference_family(kind))}};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (values.size() < 5 || *lo == *hi) {
      item["status"] = "insufficient data";
      results.push_back(std::move(item));
      continue;
    }
    std::vector<Family> families{Family::Tls, Family::Gev, Family::Exponential, Family::Normal};
    json ranked = json::array();
    for (const auto& r : select_best(values, families, options))
      ranked.push_back(json{{"family", family_name(r.fit.dist.family())}, {"fit", to_json(r.fit)}, {"kl", to_json(r.score)}});
    item["status"] = "ok";
    item["ranked"] = std::move(ranked);
    results.push_back(std::move(item));
  }

  json meta = base_meta(config);
  meta["input"] = input.meta;
  const json report{{"command", "fit"}, {"meta", meta}, {"filter", filter_summary(samples)}, {"results", results}};
  write_output(config.out_path, out, dump(report));
  return kExitOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  const auto profile = load_profile(config);
  const auto thresholds = load_thresholds(config);
  auto input = load_input(config);
  const auto samples = samples_for(config, input);
  const auto observed = observe(samples, config.binning);
  const auto report = validate(observed, profile, thresholds, fit_options(config));

  json body = to_json(report);
  json meta = base_meta(config);
  meta["input"] = input.meta;
  meta["profile"] = config.profile == "builtin" ? json("builtin") : json(sha256_hex(read_file(config.profile)));
  body["command"] = "validate";
  body["meta"] = meta;
  body["filter"] = filter_summary(samples);
  write_output(config.out_path, out, dump(body));
  return report.overall_pass ? kExitOk : kExitValidationFailed;
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  auto profile = load_profile(config);
  if (config.lines) profile = with_default_line_reactance(profile);

  std::vector<SyntheticBranchParams> params;
  for (std::size_t i = 0; i < config.classes.size(); ++i) {
    const std::uint64_t seed = *config.seed + i;
    auto batch = config.lines
                     ? generate_lines(config.classes[i], config.n, seed, profile)
                     : generate_transformers(config.classes[i], config.n, seed, profile, config.system_mva_base);
    params.insert(params.end(), batch.begin(), batch.end());
  }

  std::string body;
  switch (config.format) {
    case OutputFormat::Params: body = synthetic_params_to_csv(params); break;
    case OutputFormat::Branches:
      body = serialize_branch_csv(to_branch_records(params, config.system_mva_base));
      break;
    case OutputFormat::Matpower:
      body = serialize_matpower_case({config.system_mva_base, to_branch_records(params, config.system_mva_base)},
                                     "gridstats_synthetic");
      break;
  }
  write_output(config.out_path, out, body);
  return kExitOk;
}

int cmd_hist(const RunConfig& config, std::ostream& out) {
  auto input = load_input(config);
  const auto samples = samples_for(config, input);
  if (config.out_path) std::filesystem::create_directories(*config.out_path);
  std::ostringstream combined;
  for (const auto& [key, values] : samples.values) {
    const auto [kind, kv] = key;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (values.empty() || *lo == *hi) continue;
    const std::string csv = histogram_to_csv(histogram(values, config.binning));
    const std::string name = std::string(to_string(kind)) + "_" + fmt_kv(kv);
    if (config.out_path) {
      write_output(*config.out_path + "/" + name + ".csv", out, csv);
    } else {
      combined << "# " << name << "\n" << csv;
    }
  }
  if (!config.out_path) out << combined.str();
  return kExitOk;
}

// ---- argument parsing -------------------------------------------------------

Binning parse_binning(const std::string& text) {
  if (text == "fd") return FreedmanDiaconis{};
  std::size_t pos = 0;
  unsigned long bins = 0;
  try {
    bins = std::stoul(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || bins < 2) throw CLI::ValidationError("--bins", "expected an integer >= 2 or 'fd'");
  return FixedCount{bins};
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Analyze: return cmd_analyze(config, out);
      case Command::Fit: return cmd_fit(config, out);
      case Command::Validate: return cmd_validate(config, out);
      case Command::Generate: return cmd_generate(config, out);
      case Command::Hist: return cmd_hist(config, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics, fitting, validation and synthesis of transformer and line parameters", "gridstats"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GRIDSTATS_VERSION);

  RunConfig config;
  std::string bins = "fd";
  std::string format = "params";
  std::string kind = "transformer";

  auto add_input = [&](CLI::App* sub) {
    auto* c = sub->add_option("--case", config.case_path, "MATPOWER case file");
    auto* b = sub->add_option("--branches", config.branches_path, "canonical branch CSV");
    c->excludes(b);
    b->excludes(c);
    sub->add_option("--classes", config.classes, "voltage classes in kV")->delimiter(',');
    sub->add_option("--class-tolerance", config.class_tolerance, "relative voltage class tolerance")
        ->check(CLI::Range(0.0, 0.1));
    sub->add_option("--bins", bins, "histogram bins: an integer or 'fd'");
    sub->add_option("--out", config.out_path, "output path");
    sub->add_option("--seed", config.seed, "random seed");
  };

  auto* analyze = app.add_subcommand("analyze", "per-class summary statistics");
  add_input(analyze);
  auto* fit = app.add_subcommand("fit", "fit all families and rank them by KL divergence");
  add_input(fit);
  auto* validate_cmd = app.add_subcommand("validate", "check a grid against a reference profile");
  add_input(validate_cmd);
  validate_cmd->add_option("--profile", config.profile, "profile JSON path or 'builtin'");
  validate_cmd->add_option("--thresholds", config.thresholds_path, "thresholds JSON path");
  auto* hist = app.add_subcommand("hist", "histogram CSV per parameter and class");
  add_input(hist);

  auto* generate = app.add_subcommand("generate", "sample synthetic branch parameters");
  generate->add_option("--class,--classes", config.classes, "voltage classes in kV")->delimiter(',');
  generate->add_option("--n", config.n, "branches per class")->check(CLI::PositiveNumber);
  generate->add_option("--seed", config.seed, "random seed")->required();
  generate->add_option("--profile", config.profile, "profile JSON path or 'builtin'");
  generate->add_option("--kind", kind, "transformer or line")->check(CLI::IsMember({"transformer", "line"}));
  generate->add_option("--system-base", config.system_mva_base, "system MVA base")->check(CLI::PositiveNumber);
  generate->add_option("--format", format, "params, branches or matpower")
      ->check(CLI::IsMember({"params", "branches", "matpower"}));
  generate->add_option("--out", config.out_path, "output path");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    if (analyze->parsed()) config.command = Command::Analyze;
    if (fit->parsed()) config.command = Command::Fit;
    if (validate_cmd->parsed()) config.command = Command::Validate;
    if (hist->parsed()) config.command = Command::Hist;
    if (generate->parsed()) config.command = Command::Generate;
    if (config.command != Command::Generate && !config.case_path && !config.branches_path)
      throw CLI::RequiredError("--case or --branches");
    if (config.classes.empty()) throw CLI::ValidationError("--classes", "at least one class is required");
    config.binning = parse_binning(bins);
    config.lines = kind == "line";
    config.format = format == "branches"   ? OutputFormat::Branches
                    : format == "matpower" ? OutputFormat::Matpower
                                           : OutputFormat::Params;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  return execute(config, out, err);
}

}  // namespace gridstats::cli
