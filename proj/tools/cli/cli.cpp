#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include <seqclt/asclt.hpp>
#include <seqclt/bitsource.hpp>
#include <seqclt/cdf.hpp>
#include <seqclt/moments.hpp>
#include <seqclt/sampling.hpp>
#include <seqclt/slln_bounds.hpp>

#include "document.hpp"

namespace seqclt::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moment checks allow 4 standard errors of the sample mean of X^m, computed
// from the target law. KS uses the asymptotic 0.1% critical value 1.95/sqrt(k)
// plus a little slack for the lattice effect of short blocks.
constexpr double kMomentSigmas = 4.0;
constexpr double kKsCritical = 1.95;
constexpr double kKsSlack = 0.005;
constexpr double kTolFloor = 1e-12;
// Tolerances need the 2m-th target moment, and exact moments stop at 16.
constexpr unsigned kMaxReportedMoment = kMaxExactMoment / 2;
constexpr std::uint64_t kMaxSeedRange = 1'000'000;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    items.push_back(trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

std::uint64_t parse_uint(std::string_view item, std::string_view flag) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
  if (item.empty() || ec != std::errc{} || p != item.data() + item.size())
    throw ConfigError("invalid integer '" + std::string(item) + "' in " + std::string(flag));
  return v;
}

std::vector<double> parse_reals(std::string_view text, std::string_view flag) {
  std::vector<double> out;
  for (std::string_view item : split_list(text)) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || p != item.data() + item.size() || !std::isfinite(v))
      throw ConfigError("invalid number '" + std::string(item) + "' in " + std::string(flag));
    out.push_back(v);
  }
  return out;
}

// "1,2,10-20": sorted, duplicates rejected.
std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (std::string_view item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(parse_uint(item, "--seeds"));
      continue;
    }
    const std::uint64_t lo = parse_uint(trim(item.substr(0, dash)), "--seeds");
    const std::uint64_t hi = parse_uint(trim(item.substr(dash + 1)), "--seeds");
    if (hi < lo || hi - lo >= kMaxSeedRange) throw ConfigError("invalid seed range '" + std::string(item) + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  std::sort(seeds.begin(), seeds.end());
  if (const auto dup = std::adjacent_find(seeds.begin(), seeds.end()); dup != seeds.end())
    throw ConfigError("seed " + std::to_string(*dup) + " listed twice");
  return seeds;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view text, std::string_view flag) {
  std::vector<std::uint64_t> out;
  for (std::string_view item : split_list(text)) out.push_back(parse_uint(item, flag));
  return out;
}

WeightSeq parse_weights(std::string_view name) {
  if (name == "harmonic") return WeightSeq::harmonic();
  if (name == "dk") return WeightSeq::log_increment();
  throw ConfigError("unknown weights '" + std::string(name) + "' (expected harmonic or dk)");
}

TestFunction parse_function(std::string_view text) {
  if (text == "clip") return clip_function();
  if (text.starts_with("step:")) {
    const auto v = parse_reals(text.substr(5), "--f");
    if (v.size() == 1) return smoothed_step(v[0]);
  }
  throw ConfigError("unknown test function '" + std::string(text) + "' (expected clip or step:x0)");
}

struct Run {
  Cell label;
  SourceSpec source;
};

Cell source_label(const SourceSpec& s) {
  if (s.kind == SourceKind::prng) return Cell{s.seed};
  return Cell{std::string("-")};
}

std::vector<Run> resolve_runs(const RunConfig& cfg) {
  const SourceSpec base = SourceSpec::parse(cfg.source);
  base.validate();
  if (cfg.seeds.empty()) return {{source_label(base), base}};
  if (base.kind != SourceKind::prng) throw ConfigError("--seeds needs a prng source, got '" + cfg.source + "'");
  std::vector<Run> runs;
  for (std::uint64_t seed : parse_seed_list(cfg.seeds)) runs.push_back({Cell{seed}, SourceSpec::prng(seed)});
  return runs;
}

void require_k(const RunConfig& cfg) {
  if (cfg.k == 0) throw ConfigError("--k must be >= 1 (an empty run has no samples)");
}

void require_m_max(unsigned m_max, unsigned limit) {
  if (m_max == 0 || m_max > limit)
    throw ConfigError("--m-max must be in 1.." + std::to_string(limit) + ", got " + std::to_string(m_max));
}

Document begin_document(const RunConfig& cfg) {
  Document doc;
  auto& m = doc.metadata;
  m.emplace_back("command", cfg.command);
  m.emplace_back("source", cfg.source);
  m.emplace_back("scheme", cfg.scheme);
  m.emplace_back("k", cfg.k);
  m.emplace_back("n", cfg.n);
  m.emplace_back("m_max", std::uint64_t{cfg.m_max});
  m.emplace_back("x", cfg.x);
  m.emplace_back("grid", cfg.grid);
  m.emplace_back("seeds", cfg.seeds);
  m.emplace_back("sigma2", cfg.sigma2);
  m.emplace_back("level", std::uint64_t{cfg.level});
  m.emplace_back("lmax", std::uint64_t{cfg.lmax});
  m.emplace_back("weights", cfg.weights);
  m.emplace_back("variance_study", cfg.variance_study);
  m.emplace_back("ns", cfg.ns);
  m.emplace_back("f", cfg.f);
  m.emplace_back("tol", cfg.tol);
  m.emplace_back("mean_tol", cfg.mean_tol);
  m.emplace_back("out", cfg.out);
  m.emplace_back("format", cfg.format);
  m.emplace_back("prng", std::string(kPrngRecurrence));
  return doc;
}

// ---------------------------------------------------------------------------
// Moments

// t[m] for m = 0..top: exact block moments for fixed N, normal moments otherwise.
std::vector<double> moment_targets(const BlockScheme& scheme, unsigned top) {
  std::vector<double> t(top + 1);
  for (unsigned m = 0; m <= top; ++m)
    t[m] = scheme.kind() == SchemeKind::fixed ? scaled_block_moment(scheme.fixed_size(), m) : normal_moment(m);
  return t;
}

double moment_tol(const std::vector<double>& t, unsigned m, double count) {
  const double var = std::max(0.0, t[2 * m] - t[m] * t[m]);
  return std::max(kMomentSigmas * std::sqrt(var / count), kTolFloor);
}

bool add_moment_row(Table& table, Cell label, unsigned m, double empirical, double target, double tol) {
  const double diff = empirical - target;
  const bool pass = std::fabs(diff) <= tol;
  std::vector<Cell> row;
  if (!std::holds_alternative<std::monostate>(label)) row.push_back(std::move(label));
  row.insert(row.end(), {Cell{std::uint64_t{m}}, empirical, target, diff, tol, pass});
  table.add(std::move(row));
  return pass;
}

int cmd_moments(const RunConfig& cfg, Document& doc) {
  require_k(cfg);
  require_m_max(cfg.m_max, kMaxReportedMoment);
  const BlockScheme scheme = BlockScheme::parse(cfg.scheme);
  const auto runs = resolve_runs(cfg);
  const auto targets = moment_targets(scheme, 2 * cfg.m_max);

  Table table{"moments", {"seed", "m", "empirical", "target", "diff", "tol", "pass"}};
  std::vector<double> sums(cfg.m_max + 1, 0.0);
  bool pass = true;
  const auto kd = static_cast<double>(cfg.k);
  for (const Run& run : runs) {
    BitStream stream(run.source);
    MomentTable moments(cfg.m_max);
    SampleSink* sinks[] = {&moments};
    sample_run(stream, scheme, cfg.k, sinks);
    for (unsigned m = 1; m <= cfg.m_max; ++m) {
      const double e = moments.empirical_moment(m);
      sums[m] += e;
      pass &= add_moment_row(table, run.label, m, e, targets[m], moment_tol(targets, m, kd));
    }
  }
  if (runs.size() > 1) {
    const auto r = static_cast<double>(runs.size());
    for (unsigned m = 1; m <= cfg.m_max; ++m)
      pass &= add_moment_row(table, std::string("mean"), m, sums[m] / r, targets[m], moment_tol(targets, m, kd * r));
  }
  doc.tables.push_back(std::move(table));
  return pass ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------------------
// CDF

double ks_tol(std::uint64_t k) { return kKsCritical / std::sqrt(static_cast<double>(k)) + kKsSlack; }

int cmd_cdf(const RunConfig& cfg, Document& doc) {
  require_k(cfg);
  const BlockScheme scheme = BlockScheme::parse(cfg.scheme);
  const auto runs = resolve_runs(cfg);
  const auto grid = parse_reals(cfg.grid, "--grid");
  // Fixed-N samples follow a scaled binomial law, so their distance to the
  // normal CDF does not shrink with k; it is reported without a verdict.
  const bool informational = scheme.kind() == SchemeKind::fixed;

  Table ks{"ks", {"seed", "k", "ks", "tol", "pass"}};
  Table points{"grid", {"seed", "t", "ecdf", "phi", "diff"}};
  bool pass = true;
  for (const Run& run : runs) {
    BitStream stream(run.source);
    EmpiricalCDF ecdf;
    SampleSink* sinks[] = {&ecdf};
    sample_run(stream, scheme, cfg.k, sinks);
    ecdf.freeze();
    const double d = ks_distance(ecdf);
    const double tol = ks_tol(cfg.k);
    Cell verdict;
    if (!informational) {
      verdict = d <= tol;
      pass &= d <= tol;
    }
    ks.add({run.label, cfg.k, d, tol, verdict});
    for (const CdfRow& r : pointwise_error(ecdf, grid)) points.add({run.label, r.t, r.ecdf, r.phi, r.diff});
  }
  doc.metadata.emplace_back("ks_informational", informational);
  doc.tables.push_back(std::move(ks));
  doc.tables.push_back(std::move(points));
  return pass ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------------------
// ASCLT

std::vector<double> path_estimates(const SourceSpec& source, std::uint64_t n, std::span<const double> xs,
                                   WeightSeq weights) {
  BitStream stream(source);
  try {
    return asclt_estimate(stream, n, xs, weights);
  } catch (const SourceExhausted& e) {
    // Path step k needs bit k.
    throw SourceExhausted(e.position(), e.requested(), e.position() + 1);
  }
}

int cmd_variance_study(const RunConfig& cfg, Document& doc) {
  if (SourceSpec::parse(cfg.source).kind != SourceKind::prng)
    throw ConfigError("the variance study runs PRNG paths; --source must be prng");
  const auto seeds = parse_seed_list(cfg.seeds);
  const auto ns = parse_uint_list(cfg.ns, "--ns");
  const TestFunction f = parse_function(cfg.f);
  const VarianceStudy study = variance_study(seeds, ns, f, parse_weights(cfg.weights));

  bool decreasing = true;
  bool flagged = false;
  Table table{"variance", {"n", "mean_tn2", "bound", "flag"}};
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const VarianceRow& r = study.rows[i];
    if (i > 0 && !(r.mean_tn2 < study.rows[i - 1].mean_tn2)) decreasing = false;
    flagged |= r.flag;
    table.add({r.n, r.mean_tn2, r.bound, r.flag});
  }
  doc.metadata.emplace_back("c_hat", study.c_hat);
  doc.metadata.emplace_back("decreasing", decreasing);
  doc.tables.push_back(std::move(table));
  return decreasing && !flagged ? kExitPass : kExitTolerance;
}

int cmd_asclt(const RunConfig& cfg, Document& doc) {
  if (cfg.variance_study) return cmd_variance_study(cfg, doc);
  if (cfg.n < 2) throw ConfigError("--n must be >= 2 for the logarithmic average");
  const auto xs = parse_reals(cfg.x, "--x");
  const WeightSeq weights = parse_weights(cfg.weights);
  const auto runs = resolve_runs(cfg);

  Table table{"asclt", {"seed", "x", "estimate", "phi", "diff", "tol", "pass"}};
  std::vector<double> sums(xs.size(), 0.0);
  bool pass = true;
  for (const Run& run : runs) {
    const auto est = path_estimates(run.source, cfg.n, xs, weights);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double p = phi(xs[i]);
      const bool ok = std::fabs(est[i] - p) <= cfg.tol;
      pass &= ok;
      sums[i] += est[i];
      table.add({run.label, xs[i], est[i], p, est[i] - p, cfg.tol, ok});
    }
  }
  if (runs.size() > 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double mean = sums[i] / static_cast<double>(runs.size());
      const double p = phi(xs[i]);
      const bool ok = std::fabs(mean - p) <= cfg.mean_tol;
      pass &= ok;
      table.add({std::string("mean"), xs[i], mean, p, mean - p, cfg.mean_tol, ok});
    }
  }
  doc.tables.push_back(std::move(table));
  return pass ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------------------
// Oracle

int cmd_oracle(const RunConfig& cfg, Document& doc, std::ostream& err) {
  if (cfg.n == 0 || cfg.n > kMaxBruteForceLength)
    throw ConfigError("--n must be in 1.." + std::to_string(kMaxBruteForceLength) + " for enumeration");
  require_m_max(cfg.m_max, kMaxExactMoment);

  Table table{"oracle", {"n", "m", "exact", "brute", "match"}};
  std::optional<std::pair<std::uint64_t, unsigned>> first_mismatch;
  for (std::uint64_t n = 1; n <= cfg.n; ++n) {
    for (unsigned m = 1; m <= cfg.m_max; ++m) {
      const BigInt exact = exact_rademacher_moment(n, m);
      const BigInt brute = brute_force_moment(static_cast<unsigned>(n), m);
      const bool match = exact == brute;
      if (!match && !first_mismatch) first_mismatch.emplace(n, m);
      table.add({n, std::uint64_t{m}, exact.str(), brute.str(), match});
    }
  }
  doc.tables.push_back(std::move(table));
  if (first_mismatch) {
    err << "oracle mismatch at n=" << first_mismatch->first << ", m=" << first_mismatch->second << '\n';
    return kExitMismatch;
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// Bounds

int cmd_bounds(const RunConfig& cfg, Document& doc) {
  if (cfg.level == 0 || cfg.lmax == 0) throw ConfigError("--level and --lmax must be >= 1");
  const TestPlan plan = build_test_plan(VarianceSpec::constant(cfg.sigma2), cfg.level, cfg.lmax);

  Table table{"bounds", {"l", "eps", "M", "bound", "threshold", "pass"}};
  bool pass = true;
  for (const TestPlanRow& r : plan.rows) {
    const bool ok = r.bound < r.threshold;
    pass &= ok;
    table.add({std::uint64_t{r.l}, r.eps, r.M, r.bound, r.threshold, ok});
  }
  doc.metadata.emplace_back("truncation", plan.truncation);
  doc.metadata.emplace_back("total_measure", plan.total_measure());
  doc.tables.push_back(std::move(table));
  return pass ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------------------
// Report

int cmd_report(const RunConfig& cfg, Document& doc) {
  if (!cfg.seeds.empty()) throw ConfigError("report checks a single source; pass it with --source");
  require_k(cfg);
  require_m_max(cfg.m_max, kMaxReportedMoment);
  if (cfg.n < 2) throw ConfigError("--n must be >= 2 for the logarithmic average");
  const BlockScheme scheme = BlockScheme::parse(cfg.scheme);
  const auto runs = resolve_runs(cfg);
  const SourceSpec& source = runs.front().source;
  const auto xs = parse_reals(cfg.x, "--x");

  std::vector<std::string> failed;
  const auto record = [&](bool ok, std::string name) {
    if (!ok) failed.push_back(std::move(name));
  };

  BitStream stream(source);
  MomentTable moments(cfg.m_max);
  EmpiricalCDF ecdf;
  SampleSink* sinks[] = {&moments, &ecdf};
  sample_run(stream, scheme, cfg.k, sinks);
  ecdf.freeze();

  const auto targets = moment_targets(scheme, 2 * cfg.m_max);
  Table mt{"moments", {"m", "empirical", "target", "diff", "tol", "pass"}};
  for (unsigned m = 1; m <= cfg.m_max; ++m) {
    const bool ok = add_moment_row(mt, Cell{}, m, moments.empirical_moment(m), targets[m],
                                   moment_tol(targets, m, static_cast<double>(cfg.k)));
    record(ok, "m" + std::to_string(m));
  }

  const bool informational = scheme.kind() == SchemeKind::fixed;
  const double d = ks_distance(ecdf);
  const double tol = ks_tol(cfg.k);
  Table ks{"ks", {"value", "k", "tol", "pass", "informational"}, true};
  Cell ks_pass;
  if (!informational) {
    ks_pass = d <= tol;
    record(d <= tol, "ks");
  }
  ks.add({d, cfg.k, tol, ks_pass, informational});

  Table at{"asclt", {"x", "estimate", "phi", "diff", "tol", "pass"}};
  const auto est = path_estimates(source, cfg.n, xs, parse_weights(cfg.weights));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double p = phi(xs[i]);
    const bool ok = std::fabs(est[i] - p) <= cfg.tol;
    record(ok, "asclt:x=" + format_double(xs[i]));
    at.add({xs[i], est[i], p, est[i] - p, cfg.tol, ok});
  }

  std::string failed_list;
  for (const auto& name : failed) failed_list += (failed_list.empty() ? "" : ";") + name;
  Table verdict{"verdict", {"pass", "checks", "failed"}, true};
  const std::uint64_t checks = cfg.m_max + (informational ? 0 : 1) + xs.size();
  verdict.add({failed.empty(), checks, failed_list});

  doc.tables.push_back(std::move(mt));
  doc.tables.push_back(std::move(ks));
  doc.tables.push_back(std::move(at));
  doc.tables.push_back(std::move(verdict));
  return failed.empty() ? kExitPass : kExitTolerance;
}

// ---------------------------------------------------------------------------

void resolve_defaults(RunConfig& cfg) {
  if (cfg.format.empty()) cfg.format = cfg.command == "report" ? "json" : "csv";
  if (cfg.command == "moments" && cfg.m_max == 0) cfg.m_max = 6;
  if (cfg.command == "oracle") {
    if (cfg.n == 0) cfg.n = 16;
    if (cfg.m_max == 0) cfg.m_max = 10;
  }
  if (cfg.command == "report") {
    if (cfg.k == 0) cfg.k = 10'000;
    if (cfg.n == 0) cfg.n = 1'000'000;
    if (cfg.m_max == 0) cfg.m_max = 4;
    if (cfg.weights.empty()) cfg.weights = "harmonic";
  }
  if (cfg.command == "asclt") {
    if (cfg.weights.empty()) cfg.weights = cfg.variance_study ? "dk" : "harmonic";
    if (cfg.variance_study && cfg.seeds.empty()) cfg.seeds = "1-200";
  }
}

int dispatch(const RunConfig& cfg, Document& doc, std::ostream& err) {
  if (cfg.command == "moments") return cmd_moments(cfg, doc);
  if (cfg.command == "cdf") return cmd_cdf(cfg, doc);
  if (cfg.command == "asclt") return cmd_asclt(cfg, doc);
  if (cfg.command == "oracle") return cmd_oracle(cfg, doc, err);
  if (cfg.command == "bounds") return cmd_bounds(cfg, doc);
  if (cfg.command == "report") return cmd_report(cfg, doc);
  throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Block-sampling normality and almost-sure CLT diagnostics for bit streams", "seqclt"};
  app.require_subcommand(1, 1);

  const auto output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write the result to this file instead of stdout");
    sub->add_option("--format", cfg.format, "csv or json (report defaults to json)")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  const auto source = [&](CLI::App* sub, bool seeds) {
    sub->add_option("--source", cfg.source,
                    "prng:seed=N, constant:0|1, periodic:<bits>, champernowne, file-ascii:<path>, file-raw:<path>")
        ->capture_default_str();
    if (seeds) sub->add_option("--seeds", cfg.seeds, "PRNG seeds, comma list with a-b ranges; one run per seed");
  };
  const auto scheme = [&](CLI::App* sub) {
    sub->add_option("--scheme", cfg.scheme, "tri, fixed:N or affine:a:b")->capture_default_str();
  };

  CLI::App* moments = app.add_subcommand("moments", "Empirical moments of the block samples against their limits");
  source(moments, true);
  scheme(moments);
  moments->add_option("--k", cfg.k, "Number of samples")->required();
  moments->add_option("--m-max", cfg.m_max, "Highest moment order (default 6, at most 8)");
  output(moments);

  CLI::App* cdf = app.add_subcommand("cdf", "Exact KS distance to the normal CDF plus pointwise errors");
  source(cdf, true);
  scheme(cdf);
  cdf->add_option("--k", cfg.k, "Number of samples")->required();
  cdf->add_option("--grid", cfg.grid, "Comma list of evaluation points")->capture_default_str();
  output(cdf);

  CLI::App* asclt = app.add_subcommand("asclt", "Logarithmic path averages along one random walk per source");
  source(asclt, true);
  asclt->add_option("--n", cfg.n, "Path length in bits");
  asclt->add_option("--x", cfg.x, "Comma list of thresholds")->capture_default_str();
  asclt->add_option("--weights", cfg.weights, "harmonic (1/k, log n) or dk (log(1+1/k), log(n+1))");
  asclt->add_option("--tol", cfg.tol, "Per-path tolerance")->capture_default_str();
  asclt->add_option("--mean-tol", cfg.mean_tol, "Tolerance for the mean over seeds")->capture_default_str();
  asclt->add_flag("--variance-study", cfg.variance_study, "Monte Carlo E[T_n^2] over PRNG seeds instead");
  asclt->add_option("--ns", cfg.ns, "Variance study path lengths")->capture_default_str();
  asclt->add_option("--f", cfg.f, "Variance study test function: clip or step:x0")->capture_default_str();
  output(asclt);

  CLI::App* oracle = app.add_subcommand("oracle", "Exact moment formula against brute-force enumeration");
  oracle->add_option("--n", cfg.n, "Largest block length (default 16, at most 20)");
  oracle->add_option("--m-max", cfg.m_max, "Highest moment order (default 10, at most 16)");
  output(oracle);

  CLI::App* bounds = app.add_subcommand("bounds", "Maximal-inequality test plan for a constant variance");
  bounds->add_option("--sigma2", cfg.sigma2, "Common variance")->capture_default_str();
  bounds->add_option("--level", cfg.level, "Test level n")->capture_default_str();
  bounds->add_option("--lmax", cfg.lmax, "Rows l = 1..lmax")->capture_default_str();
  output(bounds);

  CLI::App* report = app.add_subcommand("report", "Moments, KS and path averages for one source with a verdict");
  source(report, true);
  scheme(report);
  report->add_option("--k", cfg.k, "Number of samples (default 10000)");
  report->add_option("--n", cfg.n, "Path length in bits (default 1000000)");
  report->add_option("--m-max", cfg.m_max, "Highest moment order (default 4, at most 8)");
  report->add_option("--x", cfg.x, "Comma list of thresholds")->capture_default_str();
  report->add_option("--weights", cfg.weights, "harmonic or dk");
  report->add_option("--tol", cfg.tol, "Per-threshold path tolerance")->capture_default_str();
  output(report);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitConfig;
  }
  for (const CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();

  Document doc;
  int status = kExitPass;
  try {
    resolve_defaults(cfg);
    doc = begin_document(cfg);
    status = dispatch(cfg, doc, err);
  } catch (const SourceExhausted& e) {
    err << "error: " << e.what() << '\n';
    return kExitExhausted;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const Format format = cfg.format == "json" ? Format::json : Format::csv;
  if (cfg.out.empty()) {
    write(doc, format, out);
  } else {
    std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot open '" << cfg.out << "' for writing\n";
      return kExitConfig;
    }
    write(doc, format, file);
    if (!file) {
      err << "error: failed writing '" << cfg.out << "'\n";
      return kExitConfig;
    }
  }
  return status;
}

}  // namespace seqclt::cli
