// ucentropy_cli: verification suite, scans, reductions and set-family tools.
//
// Exit codes: 0 pass, 1 a check failed, 2 usage or parse error, 3 the input
// data violates a precondition.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ucentropy/distribution_io.hpp"
#include "ucentropy/report_json.hpp"
#include "ucentropy/setfamily_io.hpp"
#include "ucentropy/suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ucentropy;

namespace {

enum Exit : int { pass = 0, failed = 1, usage = 2, precondition = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Write to a sibling temp file, then rename over the target.
void write_atomically(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw UsageError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_atomically(out_path, content);
  }
}

std::string real(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

// ---------------------------------------------------------------------------
// verify-all

struct VerifyArgs {
  std::uint64_t seed = defaults::seed;
  std::optional<double> tol;
  std::optional<std::uint64_t> samples;
  std::string only;
  std::string out = "reports";
  unsigned workers = 1;
};

int run_verify_all(const VerifyArgs& a) {
  if (a.tol && !(*a.tol > 0.0)) throw UsageError("--tol must be positive");
  if (a.samples && *a.samples == 0) throw UsageError("--samples must be positive");

  SuiteOptions opts;
  opts.seed = a.seed;
  opts.tolerance = a.tol;
  opts.samples = a.samples;
  opts.workers = a.workers;

  const fs::path dir = fs::path(a.out) / "verify-all";
  json manifest{{"subcommand", "verify-all"}, {"seed", a.seed}, {"started", utc_now()}, {"report_path", dir.string()}};
  json params = json::object();
  params["only"] = a.only.empty() ? "all" : a.only;
  params["workers"] = a.workers;
  if (a.tol) params["tol"] = *a.tol;
  if (a.samples) params["samples"] = *a.samples;
  manifest["parameters"] = params;

  bool all_passed = true;
  json summary = json::array();
  for (const auto& check : verification_suite()) {
    if (!a.only.empty() && a.only != module_name(check.module)) continue;
    const auto report = check.run(opts);
    all_passed = all_passed && report.passed;
    const auto file = dir / (report.name + "-" + std::to_string(a.seed) + ".json");
    write_atomically(file, dump(json(report)));
    summary.push_back({{"name", report.name}, {"passed", report.passed}, {"file", file.filename().string()}});
    std::cout << (report.passed ? "PASS " : "FAIL ") << std::left << std::setw(24) << report.name
              << " min_margin=" << real(report.min_margin) << " points=" << report.points_checked
              << " tol=" << report.config.tolerance << '\n'
              << std::flush;
  }
  manifest["reports"] = summary;
  manifest["passed"] = all_passed;
  manifest["finished"] = utc_now();
  write_atomically(dir / ("manifest-" + std::to_string(a.seed) + ".json"), dump(manifest));
  return all_passed ? pass : failed;
}

// ---------------------------------------------------------------------------
// reduce

int run_reduce(const std::string& in_path, const std::string& out_path) {
  const auto d = load_distribution(in_path);
  const auto trace = reduce_traced(d);
  const auto& r = trace.result();
  write_atomically(out_path, to_text(r));

  double q = 0.0, y = 0.0;
  for (const auto& a : r.atoms())
    if (a.value >= tol::zero_value) q = a.weight, y = a.value;
  const double t = mean(d), u = expected_entropy(d);
  json side{{"t", t},
            {"u", u},
            {"q", q},
            {"y", y},
            {"merges", trace.merges.size()},
            {"mean_residual", std::abs(mean(r) - t)},
            {"entropy_residual", std::abs(expected_entropy(r) - u)},
            {"joint_entropy_before", expected_joint_entropy(d)},
            {"joint_entropy_after", expected_joint_entropy(r)}};
  double worst_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.stages.size(); ++i)
    worst_step = std::min(worst_step, expected_joint_entropy(trace.stages[i]) - expected_joint_entropy(trace.stages[i + 1]));
  side["min_joint_entropy_decrease"] = detail::real_to_json(worst_step);
  if (t > 0.0 && t < 1.0 && u > 0.0) {
    const auto cert = optimum_certificate(t, u);
    side["v"] = cert.v;
    side["optimum"] = cert.optimum;
  } else {
    side["v"] = nullptr;
    side["optimum"] = nullptr;
  }
  write_atomically(out_path + ".json", dump(side));
  std::cout << dump(side);
  return pass;
}

// ---------------------------------------------------------------------------
// scan

struct ScanArgs {
  std::string name;
  std::optional<double> lo, hi, step, tol;
  std::uint64_t seed = defaults::seed;
  std::uint64_t samples = defaults::samples;
  double alpha = 0.5;
  std::string beta = "0.55:0.70:0.01";
  std::string format = "json";
  std::string out;
  unsigned workers = 1;
};

std::array<double, 3> parse_beta_range(const std::string& s) {
  std::array<double, 3> v{};
  std::istringstream in(s);
  char c1 = 0, c2 = 0;
  if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw UsageError("--beta expects lo:hi:step, got `" + s + "`");
  }
  return v;
}

std::string report_text(const ScanReport& r, const std::string& format) {
  if (format == "csv") return std::string(report_csv_header) + "\n" + to_csv_row(r) + "\n";
  return dump(json(r));
}

int run_scan(const ScanArgs& a) {
  ScanConfig cfg;
  cfg.seed = a.seed;
  cfg.random_samples = a.samples;
  cfg.grid_step = a.step.value_or(defaults::grid_step);
  cfg.workers = a.workers;
  const bool grid = a.name == "turlough" || a.name == "adric" || a.name == "mercy" || a.name == "peri";
  cfg.tolerance = a.tol.value_or(grid ? tol::finite_difference : tol::closed_form);

  auto range = [&](double lo, double hi) {
    cfg.range_lo = a.lo.value_or(lo);
    cfg.range_hi = a.hi.value_or(hi);
  };

  ScanReport r;
  try {
    if (a.name == "threshold") {
      const auto [lo, hi, step] = parse_beta_range(a.beta);
      if (a.step) cfg.grid_step = *a.step;
      else cfg.grid_step = 1e-3;
      const auto t = threshold_exploration(lo, hi, step, cfg);
      std::ostringstream out;
      out << std::setprecision(17);
      if (a.format == "json") {
        json rows = json::array();
        for (const auto& row : t.rows) {
          rows.push_back({{"beta", row.beta},
                          {"random_min", detail::real_to_json(row.random_min)},
                          {"random_points", row.random_points},
                          {"family_min", detail::real_to_json(row.family_min)},
                          {"family_argmin_v", row.family_argmin_v},
                          {"min_margin", detail::real_to_json(row.min_margin())}});
        }
        out << dump(json{{"rows", rows}, {"summary", t.summary}});
      } else {
        out << "beta,min_margin,random_min,family_min,family_argmin_v\n";
        for (const auto& row : t.rows) {
          out << row.beta << ',' << row.min_margin() << ',' << row.random_min << ',' << row.family_min << ','
              << row.family_argmin_v << '\n';
        }
      }
      emit(a.out, out.str());
      return pass;  // exploratory
    }
    if (a.name == "turlough") {
      range(1e-4, 1 - 1e-4);
      r = scan_ratio_monotone(cfg);
    } else if (a.name == "adric") {
      range(golden_threshold, 1 - 1e-6);
      r = scan_adric_monotone(cfg);
    } else if (a.name == "mercy") {
      range(1e-6, 1 - 1e-6);
      r = scan_mercy_decreasing(cfg);
    } else if (a.name == "peri") {
      range(0.05, 10.0);
      r = scan_peri_convexity(a.alpha, cfg);
    } else if (a.name == "main") {
      r = scan_lemma_main(cfg);
    } else if (a.name == "main2") {
      r = scan_lemma_main2(cfg);
    }
  } catch (const precondition_error& e) {
    throw UsageError(e.what());
  }
  emit(a.out, report_text(r, a.format));
  return r.passed ? pass : failed;
}

// ---------------------------------------------------------------------------
// family

json profile_json(const FrequencyProfile& p) {
  return {{"family_size", p.family_size},
          {"counts", p.counts},
          {"max_count", p.max_count},
          {"max_frequency", p.max_frequency},
          {"argmax_element", p.argmax_element}};
}

int run_family_check(const std::string& path) {
  const auto f = load_family(path);
  try {
    const double margin = check_theorem2(f);
    const auto p = frequency_profile(f);
    json j = profile_json(p);
    j["margin"] = margin;
    j["meets_bound"] = meets_frequency_bound(p.max_count, p.family_size);
    j["meets_half"] = meets_half_bound(p.max_count, p.family_size);
    std::cout << dump(j);
    return j["meets_bound"].get<bool>() ? pass : failed;
  } catch (const not_union_closed& e) {
    std::cerr << "not union-closed: {" << format_subset(e.first) << "} u {" << format_subset(e.second) << "} = {"
              << format_subset(e.first | e.second) << "} is missing\n";
    return precondition;
  }
}

int run_family_closure(const std::string& in_path, const std::string& out_path) {
  emit(out_path, to_text(union_closure(load_family(in_path))));
  return pass;
}

int run_family_enumerate(int n, const std::string& out_path, unsigned workers) {
  if (n < 0 || n > max_enumeration_ground_size) {
    throw UsageError("--n must lie in [0, " + std::to_string(max_enumeration_ground_size) + "]");
  }
  const auto c = theorem2_census(n, workers);
  std::ostringstream out;
  out << census_csv_header << '\n';
  for (const auto& row : c.rows) write_census_row(out, row);
  emit(out_path, out.str());
  std::cerr << "n=" << n << " families=" << c.families << " checked=" << c.rows.size() << " failures=" << c.failures
            << " half_failures=" << c.half_failures;
  if (c.weakest) {
    std::cerr << " min_max_frequency=" << c.weakest->max_count << '/' << c.weakest->size << " (family "
              << c.weakest->family_id << ')';
  }
  std::cerr << '\n';
  return c.failures == 0 ? pass : failed;
}

int run_family_entropy(const std::string& path, std::optional<double> alpha) {
  const auto f = load_family(path);
  if (f.empty()) throw precondition_error("family is empty");
  const auto d = uniform_on(f);
  const auto u = union_distribution(d);
  const auto m = marginals(d);
  const double top = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  json j{{"entropy_A", entropy_of(d)}, {"entropy_union", entropy_of(u)}, {"marginals", m}};
  json dist = json::array();
  for (const auto& a : u.atoms()) dist.push_back({{"set", format_subset(a.mask)}, {"probability", a.probability}});
  j["union_distribution"] = dist;

  int code = pass;
  const double a = alpha.value_or(top);
  if (a > 0.0 && a <= frequency_bound && top <= a) {
    const double margin = check_theorem1(d, a);
    j["alpha"] = a;
    j["theorem1_margin"] = margin;
    j["theorem1_margin_lemma_constant"] = check_theorem1(d, a, UnionBoundConstant::lemma);
    if (margin < -tol::closed_form) code = failed;
  } else if (alpha) {
    throw precondition_error("alpha must satisfy max marginal <= alpha <= (3 - sqrt 5)/2");
  } else {
    j["theorem1_margin"] = nullptr;
    j["theorem1_note"] = "max marginal exceeds (3 - sqrt 5)/2; the union-entropy bound does not apply";
  }
  std::cout << dump(j);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy inequalities behind the union-closed sets bound: checks, scans and tools"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-all", "Run every verification check and write JSON reports");
  verify->add_option("--seed", va.seed, "Random seed")->capture_default_str();
  verify->add_option("--tol", va.tol, "Override every check's tolerance");
  verify->add_option("--samples", va.samples, "Override every randomized sample count");
  verify->add_option("--only", va.only, "Run one module")->check(CLI::IsMember({"kernel", "distribution", "lab", "setfamily"}));
  verify->add_option("--out", va.out, "Report directory")->capture_default_str();
  verify->add_option("--workers", va.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string reduce_in, reduce_out;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a distribution to at most one non-zero atom");
  reduce_cmd->add_option("input", reduce_in, "Distribution file")->required();
  reduce_cmd->add_option("output", reduce_out, "Reduced distribution file; a .json sidecar is written next to it")->required();

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Run one inequality scan");
  scan->add_option("name", sa.name, "Scan name")
      ->required()
      ->check(CLI::IsMember({"turlough", "adric", "peri", "mercy", "main", "main2", "threshold"}));
  scan->add_option("--lo", sa.lo, "Range start");
  scan->add_option("--hi", sa.hi, "Range end");
  scan->add_option("--step", sa.step, "Grid step");
  scan->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  scan->add_option("--samples", sa.samples, "Random samples")->capture_default_str();
  scan->add_option("--tol", sa.tol, "Tolerance");
  scan->add_option("--alpha", sa.alpha, "alpha for the convexity scan")->capture_default_str();
  scan->add_option("--beta", sa.beta, "beta grid lo:hi:step for the threshold scan")->capture_default_str();
  scan->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  scan->add_option("--out", sa.out, "Write to this file instead of stdout");
  scan->add_option("--workers", sa.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* family = app.add_subcommand("family", "Union-closed family tools");
  family->require_subcommand(1);
  std::string fam_in, fam_out;
  std::optional<double> fam_alpha;
  int fam_n = 4;
  unsigned fam_workers = 1;
  auto* fcheck = family->add_subcommand("check", "Frequency profile and frequency-bound margin");
  fcheck->add_option("family", fam_in, "Family file")->required();
  auto* fclosure = family->add_subcommand("closure", "Union closure of a family");
  fclosure->add_option("family", fam_in, "Family file")->required();
  fclosure->add_option("output", fam_out, "Output file (stdout if omitted)");
  auto* fenum = family->add_subcommand("enumerate", "Census CSV of every union-closed family on [n]");
  fenum->add_option("--n", fam_n, "Ground set size (at most 4)")->capture_default_str();
  fenum->add_option("--out", fam_out, "CSV file (stdout if omitted)");
  fenum->add_option("--workers", fam_workers, "Worker threads")->check(CLI::PositiveNumber);
  auto* fentropy = family->add_subcommand("entropy", "H(A), H(A u B) and the union-entropy margin for A uniform");
  fentropy->add_option("family", fam_in, "Family file")->required();
  fentropy->add_option("--alpha", fam_alpha, "Marginal bound (defaults to the largest marginal)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*verify) return run_verify_all(va);
    if (*reduce_cmd) return run_reduce(reduce_in, reduce_out);
    if (*scan) return run_scan(sa);
    if (*fcheck) return run_family_check(fam_in);
    if (*fclosure) return run_family_closure(fam_in, fam_out);
    if (*fenum) return run_family_enumerate(fam_n, fam_out, fam_workers);
    if (*fentropy) return run_family_entropy(fam_in, fam_alpha);
  } catch (const parse_error& e) {
    std::cerr << "parse error";
    if (e.line > 0) std::cerr << " (line " << e.line << ')';
    std::cerr << ": " << e.what() << '\n';
    return usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return precondition;
  } catch (const domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return precondition;
  } catch (const feasibility_error& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return precondition;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
