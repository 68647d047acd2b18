#pragma once

// kmedian command line tool: median, eval, distortion, convergence and gen.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "kmedian/kmedian.hpp"

namespace kmedian::cli {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kComputation = 3 };

struct Options {
  std::string domain = "string";
  std::string kernel = "lin";
  std::string reconstruct = "lin-rec";
  bool search = false;
  std::string input;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  double beta = 2.0;
  double gamma = 1.0;
  int degree = 1;
  double lambda = 0.5;
  int ulen = 2;
  std::size_t origins = 3;
  int jmax = 200;
  double tol = 1e-6;
  std::size_t bins = 50;
  bool timing = false;

  // gen
  std::size_t sets = 1;
  std::size_t objects = 10;
  std::size_t min_length = 50;
  std::size_t max_length = 100;
  std::size_t size = 50;
  double perturb = 0.0;
  std::string mode = "random";
  int min_clusters = 3;
  int max_clusters = 10;
  double ties = 0.0;
  std::string alphabet = "abcdefghijklmnopqrstuvwxyz";

  KernelSpec kernel_spec() const {
    KernelSpec s;
    s.variant = parse_kernel_variant(kernel);
    s.beta = beta;
    s.gamma = gamma;
    s.degree = degree;
    s.lambda = lambda;
    s.subsequence_length = ulen;
    s.origin_count = origins;
    s.validate();
    return s;
  }

  WeiszfeldConfig weiszfeld() const {
    WeiszfeldConfig c;
    c.max_iterations = jmax;
    c.tolerance = tol;
    c.validate();
    return c;
  }
};

namespace detail {

using io::Json;

inline void check_kernel_domain(KernelVariant v, io::Domain d) {
  const bool ok = is_distance_substitution(v) || (v == KernelVariant::ssk && d == io::Domain::string) ||
                  (v == KernelVariant::partition && d == io::Domain::clustering) ||
                  (v == KernelVariant::kendall && d == io::Domain::ranking);
  if (!ok) {
    throw ConfigError("kernel '" + std::string(to_string(v)) + "' is not available for domain '" +
                      std::string(io::to_string(d)) + "'");
  }
}

template <class T>
void check_inputs(const Options& o, const std::vector<ObjectSet<T>>& sets) {
  if constexpr (std::is_same_v<T, Ranking>) {
    if (parse_kernel_variant(o.kernel) != KernelVariant::kendall) return;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      for (std::size_t i = 0; i < sets[s].size(); ++i) {
        if (sets[s][i].has_ties()) {
          throw ConfigError("kendall kernel requires rankings without ties (set " + std::to_string(s) +
                            ", ranking " + std::to_string(i) + ")");
        }
      }
    }
  }
}

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <class Adapter>
Json run_record(std::size_t index, const ObjectSet<typename Adapter::object_type>& set, const Options& o,
                const std::string& label, const typename Adapter::object_type& median, double sod, int iterations,
                std::size_t complex_count, double runtime_ms) {
  const Adapter adapter;
  const double lb = lower_bound_pairwise(set, [&](const auto& a, const auto& b) { return adapter.distance(a, b); });
  Json r;
  r["set"] = index;
  r["kernel"] = o.kernel;
  r["reconstruction"] = label;
  r["median"] = io::serialize(median);
  r["sod"] = sod;
  r["lower_bound"] = lb;
  if (lb > 0.0) r["normalized_sod"] = normalized_sod(sod, lb);
  r["sigma"] = sod / static_cast<double>(set.size());
  r["iterations"] = iterations;
  r["complex_weight_count"] = complex_count;
  r["runtime_ms"] = o.timing ? runtime_ms : 0.0;
  return r;
}

template <class Adapter>
Json median_run(std::size_t index, const ObjectSet<typename Adapter::object_type>& set, const Options& o,
                ReconstructionMethod method) {
  ReconstructionConfig rc;
  rc.method = method;
  rc.with_search = o.search;
  const auto start = Clock::now();
  const auto result = compute_median(set, o.kernel_spec(), o.weiszfeld(), rc, Adapter{}, Rng::derive(o.seed, index));
  const double ms = elapsed_ms(start);
  std::string label(to_string(method));
  if (o.search) label += "+search";
  return run_record<Adapter>(index, set, o, label, result.median, result.sod, result.iterations,
                             result.complex_count, ms);
}

template <class Adapter>
Json set_median_run(std::size_t index, const ObjectSet<typename Adapter::object_type>& set, const Options& o) {
  const auto start = Clock::now();
  const auto best = set_median(set, Adapter{});
  return run_record<Adapter>(index, set, o, "set-median", best.object, best.sod, 0, 0, elapsed_ms(start));
}

template <class Adapter>
Json distortion_run(std::size_t index, const ObjectSet<typename Adapter::object_type>& set, const Options& o) {
  const auto report = distortion_ratios(set, o.kernel_spec(), Adapter{}, o.bins, Rng::derive(o.seed, index));
  Json r;
  r["set"] = index;
  r["kernel"] = o.kernel;
  r["pairs"] = report.ratios.size();
  r["zero_distance_pairs"] = report.zero_distance_pairs;
  r["degenerate_pairs"] = report.degenerate_pairs;
  if (!report.ratios.empty()) {
    r["mean_c"] = report.mean();
    r["std_c"] = report.stddev();
    r["min_c"] = *std::min_element(report.ratios.begin(), report.ratios.end());
    r["max_c"] = *std::max_element(report.ratios.begin(), report.ratios.end());
  }
  if (report.ncc) r["ncc"] = *report.ncc;
  r["histogram_edges"] = report.histogram.edges;
  r["histogram_counts"] = report.histogram.counts;
  return r;
}

template <class Adapter>
WeightVector convergence_run(std::size_t index, const ObjectSet<typename Adapter::object_type>& set,
                             const Options& o) {
  KernelSpace<Adapter> space(set, Adapter{}, o.kernel_spec(), Rng::derive(o.seed, index));
  return kernel_weiszfeld(space.gram(), space.input_size(), o.weiszfeld());
}

const std::vector<std::string> kRunColumns{
    "set",   "kernel",     "reconstruction", "median", "sod", "lower_bound", "normalized_sod",
    "sigma", "iterations", "complex_weight_count", "runtime_ms"};
const std::vector<std::string> kDistortionColumns{
    "set",    "kernel", "pairs", "zero_distance_pairs", "degenerate_pairs", "mean_c",
    "std_c",  "min_c",  "max_c", "ncc",                 "histogram_counts"};
const std::vector<std::string> kConvergenceColumns{"set", "kernel", "iterations", "converged",
                                                   "complex_weight_count"};

inline std::string render(const Options& o, const Json& document, const std::vector<std::string>& columns) {
  if (o.format == "csv") {
    Json rows = Json::array();
    for (auto row : document["runs"]) {
      for (auto& [k, v] : row.items()) {
        if (v.is_array()) {
          std::string joined;
          for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? ";" : "") + io::csv_field(v[i]);
          v = joined;
        }
      }
      rows.push_back(row);
    }
    return io::to_csv(columns, io::rounded(rows));
  }
  return io::to_json_text(document);
}

inline void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty() || o.output == "-") out << text;
  else io::write_text(o.output, text);
}

template <class Adapter>
void analyze(const std::string& command, const Options& o, const std::vector<ObjectSet<typename Adapter::object_type>>& sets,
             std::ostream& out) {
  Json doc;
  doc["runs"] = Json::array();
  if (command == "median") {
    const auto method = parse_reconstruction(o.reconstruct);
    for (std::size_t s = 0; s < sets.size(); ++s) doc["runs"].push_back(median_run<Adapter>(s, sets[s], o, method));
    emit(o, render(o, doc, kRunColumns), out);
  } else if (command == "eval") {
    for (std::size_t s = 0; s < sets.size(); ++s) {
      doc["runs"].push_back(set_median_run<Adapter>(s, sets[s], o));
      for (auto m : {ReconstructionMethod::linear, ReconstructionMethod::triangular, ReconstructionMethod::lin_rec,
                     ReconstructionMethod::tri_rec}) {
        doc["runs"].push_back(median_run<Adapter>(s, sets[s], o, m));
      }
    }
    emit(o, render(o, doc, kRunColumns), out);
  } else if (command == "distortion") {
    for (std::size_t s = 0; s < sets.size(); ++s) doc["runs"].push_back(distortion_run<Adapter>(s, sets[s], o));
    emit(o, render(o, doc, kDistortionColumns), out);
  } else {
    std::vector<WeightVector> runs;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      runs.push_back(convergence_run<Adapter>(s, sets[s], o));
      Json r;
      r["set"] = s;
      r["kernel"] = o.kernel;
      r["iterations"] = runs.back().iteration;
      r["converged"] = runs.back().converged;
      r["complex_weight_count"] = runs.back().complex_count;
      doc["runs"].push_back(r);
    }
    const auto stats = convergence_stats(runs);
    doc["summary"] = {{"sets", runs.size()},
                      {"max_iter", stats.max_iter},
                      {"med_iter", stats.med_iter},
                      {"complex_weight_count", stats.complex_weight_count},
                      {"runs_with_complex", stats.runs_with_complex}};
    emit(o, render(o, doc, kConvergenceColumns), out);
  }
}

inline void run_analysis(const std::string& command, const Options& o, std::ostream& out) {
  const auto domain = io::parse_domain(o.domain);
  const auto spec = o.kernel_spec();
  check_kernel_domain(spec.variant, domain);
  if (command == "median") parse_reconstruction(o.reconstruct);
  o.weiszfeld();
  if (o.format != "json" && o.format != "csv") throw ConfigError("unknown format '" + o.format + "'");
  if (o.bins < 1) throw ConfigError("bins must be >= 1");
  if (o.input.empty()) throw ConfigError("--input is required");

  switch (domain) {
    case io::Domain::string: {
      const auto sets = io::parse_strings(o.input);
      analyze<StringAdapter>(command, o, sets, out);
      break;
    }
    case io::Domain::clustering: {
      const auto sets = io::parse_clusterings(o.input);
      analyze<ClusteringAdapter>(command, o, sets, out);
      break;
    }
    case io::Domain::ranking: {
      const auto sets = io::parse_rankings(o.input);
      check_inputs(o, sets);
      analyze<RankingAdapter>(command, o, sets, out);
      break;
    }
  }
}

inline GenMode parse_mode(const std::string& m) {
  if (m == "random") return GenMode::random;
  if (m == "perturbed") return GenMode::perturbed;
  throw ConfigError("unknown generation mode '" + m + "'");
}

inline void run_gen(const Options& o, std::ostream& out) {
  namespace fs = std::filesystem;
  const auto domain = io::parse_domain(o.domain);
  if (o.sets < 1) throw ConfigError("--sets must be >= 1");
  Json meta;
  meta["generator"] = std::string(Rng::kName);
  meta["seed"] = o.seed;
  meta["domain"] = std::string(io::to_string(domain));
  Json params;
  params["sets"] = o.sets;
  params["objects"] = o.objects;
  std::vector<std::uint64_t> seeds;
  for (std::size_t s = 0; s < o.sets; ++s) seeds.push_back(Rng::derive(o.seed, s));

  std::string text;
  switch (domain) {
    case io::Domain::string: {
      StringGenParams p;
      p.count = o.objects;
      p.min_length = o.min_length;
      p.max_length = o.max_length;
      p.alphabet = o.alphabet;
      p.perturb_rate = o.perturb;
      p.mode = parse_mode(o.mode);
      params["min_length"] = p.min_length;
      params["max_length"] = p.max_length;
      params["alphabet"] = p.alphabet;
      params["perturb_rate"] = p.perturb_rate;
      params["mode"] = o.mode;
      std::vector<std::vector<std::string>> sets;
      for (auto s : seeds) sets.push_back(gen_strings(s, p));
      if (o.output.empty() || o.output == "-") {
        if (sets.size() > 1) throw ConfigError("string datasets with several sets need --output DIR");
        out << io::format_sets(sets);
        return;
      }
      fs::create_directories(o.output);
      for (std::size_t s = 0; s < sets.size(); ++s) {
        char name[32];
        std::snprintf(name, sizeof name, "set_%03zu.txt", s);
        io::write_text(fs::path(o.output) / name, io::format_sets(std::vector<std::vector<std::string>>{sets[s]}));
      }
      meta["params"] = params;
      meta["set_seeds"] = seeds;
      io::write_text(fs::path(o.output) / "metadata.json", io::to_json_text(meta));
      return;
    }
    case io::Domain::clustering: {
      ClusteringGenParams p;
      p.count = o.objects;
      p.size = o.size;
      p.min_clusters = o.min_clusters;
      p.max_clusters = o.max_clusters;
      p.perturb_rate = o.perturb;
      p.mode = parse_mode(o.mode);
      params["size"] = p.size;
      params["min_clusters"] = p.min_clusters;
      params["max_clusters"] = p.max_clusters;
      params["perturb_rate"] = p.perturb_rate;
      params["mode"] = o.mode;
      std::vector<std::vector<Labels>> sets;
      for (auto s : seeds) sets.push_back(gen_clusterings(s, p));
      text = io::format_sets(sets);
      break;
    }
    case io::Domain::ranking: {
      RankingGenParams p;
      p.count = o.objects;
      p.items = o.size;
      p.tie_prob = o.ties;
      params["items"] = p.items;
      params["tie_prob"] = p.tie_prob;
      std::vector<std::vector<Ranking>> sets;
      for (auto s : seeds) sets.push_back(gen_rankings(s, p));
      text = io::format_sets(sets);
      break;
    }
  }
  meta["params"] = params;
  meta["set_seeds"] = seeds;
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  io::write_text(o.output, text);
  io::write_text(o.output + ".meta.json", io::to_json_text(meta));
}

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--domain", o.domain, "string | clustering | ranking")->capture_default_str();
  sub->add_option("--seed", o.seed, "seed for all randomness")->capture_default_str();
  sub->add_option("--output", o.output, "output path (default: stdout)");
}

inline void add_analysis(CLI::App* sub, Options& o) {
  add_common(sub, o);
  sub->add_option("--input", o.input, "dataset file, or directory of string sets")->required();
  sub->add_option("--kernel", o.kernel, "lin | nd | pol | rbf | comb | ssk | partition | kendall")
      ->capture_default_str();
  sub->add_option("--format", o.format, "json | csv")->capture_default_str();
  sub->add_option("--beta", o.beta, "nd exponent")->capture_default_str();
  sub->add_option("--gamma", o.gamma, "pol / rbf scale")->capture_default_str();
  sub->add_option("--p", o.degree, "pol degree")->capture_default_str();
  sub->add_option("--lambda", o.lambda, "ssk decay")->capture_default_str();
  sub->add_option("--ulen", o.ulen, "ssk subsequence length")->capture_default_str();
  sub->add_option("--origins", o.origins, "comb origin count")->capture_default_str();
  sub->add_option("--jmax", o.jmax, "Weiszfeld iteration cap")->capture_default_str();
  sub->add_option("--tol", o.tol, "Weiszfeld relative weight change tolerance")->capture_default_str();
}

}  // namespace detail

/// Runs the tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Generalized median computation through kernel Weiszfeld weights", "kmedian"};
  app.require_subcommand(1);
  Options o;

  auto* median = app.add_subcommand("median", "median per set");
  detail::add_analysis(median, o);
  median->add_option("--reconstruct", o.reconstruct, "linear | triangular | lin-rec | tri-rec")
      ->capture_default_str();
  median->add_flag("--search", o.search, "refine with linear search");
  median->add_flag("--timing", o.timing, "report runtime_ms");

  auto* eval = app.add_subcommand("eval", "set median and every reconstruction per set");
  detail::add_analysis(eval, o);
  eval->add_flag("--search", o.search, "refine with linear search");
  eval->add_flag("--timing", o.timing, "report runtime_ms");

  auto* distortion = app.add_subcommand("distortion", "distance distortion of the kernel embedding");
  detail::add_analysis(distortion, o);
  distortion->add_option("--bins", o.bins, "histogram bins")->capture_default_str();

  auto* convergence = app.add_subcommand("convergence", "Weiszfeld iteration statistics");
  detail::add_analysis(convergence, o);

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  detail::add_common(gen, o);
  gen->add_option("--sets", o.sets, "number of sets")->capture_default_str();
  gen->add_option("--objects", o.objects, "objects per set")->capture_default_str();
  gen->add_option("--min-length", o.min_length, "string length lower bound")->capture_default_str();
  gen->add_option("--max-length", o.max_length, "string length upper bound")->capture_default_str();
  gen->add_option("--size", o.size, "clustering elements / ranking items")->capture_default_str();
  gen->add_option("--perturb", o.perturb, "perturbation rate")->capture_default_str();
  gen->add_option("--mode", o.mode, "random | perturbed")->capture_default_str();
  gen->add_option("--min-clusters", o.min_clusters)->capture_default_str();
  gen->add_option("--max-clusters", o.max_clusters)->capture_default_str();
  gen->add_option("--ties", o.ties, "ranking tie probability")->capture_default_str();
  gen->add_option("--alphabet", o.alphabet)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) {
      detail::run_gen(o, out);
    } else {
      const auto* sub = app.get_subcommands().front();
      detail::run_analysis(sub->get_name(), o, out);
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << "\n";
    return kComputation;
  }
  return kOk;
}

}  // namespace kmedian::cli
