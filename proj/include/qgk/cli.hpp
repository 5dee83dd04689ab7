#pragma once

// qgrowth command line: report, growth, verify, quotient, weyl.

#include "qgk/growth.hpp"
#include "qgk/quotient.hpp"
#include "qgk/verify.hpp"
#include "qgk/weyl.hpp"

#include <CLI11.hpp>
#include <gmp.h>
#include <json.hpp>
#include <mpfr.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qgk::cli {

inline constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kUnstable = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string family;
  int rank = 0;
  std::string word = "longest";
  bool adjoints = true;
  std::string preset;
  int disc = 2;
  std::vector<std::string> q0;
  std::string backend = "multipoint";
  int m_max = 8;
  int laurent_radius = 0;
  int initial_cap = -1;
  int step = 2;
  int budget = -1;
  int digits = 30;
  double tolerance = 1e-9;
  std::string cache_dir;
  std::string out_dir;
  std::string format = "table";
  int threads = 1;
};

inline Rational parse_q0(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw UsageError("bad q0 '" + s + "'");
  q.canonicalize();
  if (q <= 0 || q >= 1) throw UsageError("q0 must lie in (0, 1)");
  return q;
}

inline Word parse_word(const std::string& s) {
  Word w;
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      w.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad word letter '" + tok + "'");
    }
  }
  return w;
}

inline std::set<int> parse_subset(const std::string& s) {
  const Word w = parse_word(s);
  return std::set<int>(w.begin(), w.end());
}

inline WeylFamily make_family(const std::string& f, int rank) {
  try {
    return WeylFamily(parse_family(f), rank);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

/// Everything that determines the computed series; threads and output
/// settings are left out.
inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  if (!c.preset.empty()) {
    j["preset"] = c.preset;
    if (c.preset == "alpha-d") j["disc"] = c.disc;
  } else {
    j["family"] = c.family;
    j["rank"] = c.rank;
    j["word"] = c.word;
    j["adjoints"] = c.adjoints;
  }
  j["backend"] = c.backend;
  j["q0"] = c.q0;
  j["m_max"] = c.m_max;
  j["window"] = {{"laurent_radius", c.laurent_radius},
                 {"initial_cap", c.initial_cap},
                 {"step", c.step},
                 {"budget", c.budget}};
  if (c.backend == "numeric") {
    j["digits"] = c.digits;
    j["tolerance"] = c.tolerance;
  }
  return j;
}

inline std::string cache_key(const nlohmann::json& config) {
  // FNV-1a over the canonical config text
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::string text = std::string(kVersion) + config.dump();
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline nlohmann::json versions_json() {
  return {{"qgrowth", kVersion}, {"gmp", gmp_version}, {"mpfr", mpfr_get_version()}, {"compiler", __VERSION__}};
}

inline GeneratorSet generators_for(const RunConfig& c, std::string& label) {
  if (!c.preset.empty()) {
    if (!c.family.empty()) throw UsageError("--preset and --family are exclusive");
    label = c.preset;
    if (c.preset == "laurent") return laurent_generators();
    if (c.preset == "pqt") return disc_generators(1);
    if (c.preset == "alpha-d") {
      if (c.disc < 1) throw UsageError("--disc must be at least 1");
      return disc_generators(c.disc);
    }
    throw UsageError("unknown preset '" + c.preset + "'");
  }
  if (c.family.empty()) throw UsageError("growth needs --family/--rank or --preset");
  const WeylFamily fam = make_family(c.family, c.rank);
  const WeylGroup g(fam);
  const Word w = c.word == "longest" ? longest_element(g) : parse_word(c.word);
  if (!g.is_reduced(w)) throw UsageError("word " + word_str(w) + " is not reduced");
  label = fam.name() + " " + word_str(w);
  return chi_generators(fam, w, c.adjoints);
}

inline RankOptions rank_options(const RunConfig& c) {
  RankOptions opt;
  try {
    opt.backend = parse_backend(c.backend);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!c.q0.empty()) {
    opt.points.clear();
    for (const std::string& s : c.q0) opt.points.push_back(parse_q0(s));
  }
  opt.digits = c.digits;
  opt.tolerance = c.tolerance;
  if (c.digits < 10 || c.tolerance <= 0) throw UsageError("numeric backend needs digits >= 10 and tolerance > 0");
  return opt;
}

inline nlohmann::json compute_growth(const RunConfig& c) {
  std::string label;
  const GeneratorSet gens = generators_for(c, label);
  const RankOptions opt = rank_options(c);
  if (c.m_max < 1) throw UsageError("--m-max must be at least 1");
  WindowPolicy pol;
  pol.laurent_radius = c.laurent_radius;
  pol.initial_cap = c.initial_cap;
  pol.step = c.step;
  pol.budget = c.budget;
  try {
    pol.validate(c.m_max);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const GrowthSeries s = span_growth(gens, c.m_max, pol, opt, c.threads);

  nlohmann::json j;
  j["config"] = config_json(c);
  j["series"] = nlohmann::json::array();
  for (const GrowthRow& r : s.rows)
    j["series"].push_back(
        {{"m", r.m}, {"d", r.d}, {"window_Rz", r.window_rz}, {"window_Rf", r.window_rf}, {"stable", r.stable}});
  try {
    const DegreeEstimate e = degree_detect(s);
    j["degree"] = {{"degree", e.degree},
                   {"from_differences", e.from_differences},
                   {"difference_tail", e.difference_tail},
                   {"loglog_slope", e.loglog_slope},
                   {"loglog_residual", e.loglog_residual}};
  } catch (const std::invalid_argument&) {
    j["degree"] = nullptr;
  }
  nlohmann::json diag;
  diag["generators"] = label;
  diag["generator_count"] = gens.gens.size();
  diag["generator_names"] = gens.names;
  diag["adjoint_closed"] = gens.adjoint_closed;
  diag["backend"] = backend_name(s.backend);
  std::vector<std::string> pts;
  for (const Rational& q : s.points) pts.push_back(q.get_str());
  diag["points"] = pts;
  if (s.backend == Backend::Numeric) {
    diag["digits"] = s.digits;
    diag["tolerance"] = s.tolerance;
  }
  diag["history"] = nlohmann::json::array();
  for (const auto& [cap, d] : s.history) {
    std::vector<int> tail(d.begin() + 1, d.end());
    diag["history"].push_back({{"fock_cap", cap}, {"d", tail}});
  }
  diag["all_stable"] = s.all_stable();
  diag["cache_key"] = cache_key(j["config"]);
  j["diagnostics"] = diag;
  j["versions"] = versions_json();
  return j;
}

inline std::string render_csv(const nlohmann::json& j) {
  std::ostringstream os;
  os << "m,d,window_Rz,window_Rf,stable\n";
  for (const auto& r : j["series"])
    os << r["m"].get<int>() << ',' << r["d"].get<int>() << ',' << r["window_Rz"].get<int>() << ','
       << r["window_Rf"].get<int>() << ',' << (r["stable"].get<bool>() ? "true" : "false") << '\n';
  return os.str();
}

inline std::string render_growth(const nlohmann::json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  if (format == "csv") return render_csv(j);
  std::ostringstream os;
  os << "generators: " << j["diagnostics"]["generators"].get<std::string>() << " ("
     << j["diagnostics"]["generator_count"].get<int>() << " incl. unit)\n";
  os << "backend: " << j["diagnostics"]["backend"].get<std::string>() << "\n";
  os << std::setw(4) << "m" << std::setw(10) << "d" << std::setw(6) << "Rz" << std::setw(6) << "Rf" << "  stable\n";
  for (const auto& r : j["series"])
    os << std::setw(4) << r["m"].get<int>() << std::setw(10) << r["d"].get<int>() << std::setw(6)
       << r["window_Rz"].get<int>() << std::setw(6) << r["window_Rf"].get<int>() << "  "
       << (r["stable"].get<bool>() ? "yes" : "no") << "\n";
  if (j["degree"].is_null()) {
    os << "degree: n/a (fewer than five stable rows)\n";
  } else {
    std::ostringstream slope;
    slope << std::fixed << std::setprecision(4) << j["degree"]["loglog_slope"].get<double>();
    os << "degree: " << j["degree"]["degree"].get<int>()
       << (j["degree"]["from_differences"].get<bool>() ? " (finite differences)" : " (log-log slope)")
       << ", slope " << slope.str() << "\n";
  }
  return os.str();
}

inline std::string cache_dir_for(const RunConfig& c) {
  if (const char* env = std::getenv("QGROWTH_CACHE"); env && *env) return env;
  return c.cache_dir;
}

inline int cmd_growth(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.format != "json" && c.format != "csv" && c.format != "table") throw UsageError("unknown format");
  if (c.threads < 1) throw UsageError("--threads must be at least 1");
  const std::string dir = cache_dir_for(c);
  // validate before touching the cache
  std::string label;
  generators_for(c, label);
  rank_options(c);
  const std::string key = cache_key(config_json(c));
  std::optional<nlohmann::json> result;
  std::filesystem::path file;
  if (!dir.empty()) {
    file = std::filesystem::path(dir) / (key + ".json");
    if (std::filesystem::exists(file)) {
      std::ifstream in(file);
      try {
        result = nlohmann::json::parse(in);
        err << "cache hit " << file.string() << "\n";
      } catch (const std::exception&) {
        result.reset();
      }
    }
  }
  if (!result) {
    // fresh results go through the same text round trip as cached ones
    result = nlohmann::json::parse(compute_growth(c).dump());
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      std::ofstream o(file);
      o << result->dump() << "\n";
    }
  }
  out << render_growth(*result, c.format);
  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    std::ofstream(std::filesystem::path(c.out_dir) / "series.csv") << render_csv(*result);
    std::ofstream(std::filesystem::path(c.out_dir) / "report.json") << result->dump(2) << "\n";
  }
  return (*result)["diagnostics"]["all_stable"].get<bool>() ? kOk : kUnstable;
}

inline nlohmann::json report_json(const WeylFamily& fam) {
  const GkdimReport r = gkdim_report(fam);
  nlohmann::json j{{"family", std::string(1, family_char(fam.family))},
                   {"rank", fam.rank},
                   {"name", fam.name()},
                   {"longest_length", r.longest_length},
                   {"enumerated", r.enumerated},
                   {"gkdim", r.gkdim},
                   {"manifold_dim", r.manifold_dim},
                   {"match", r.match},
                   {"order", fam.order_formula()},
                   {"corep_dim", fam.corep_dim()}};
  if (fam.rank <= 5) {
    const WeylGroup g(fam);
    const Word w = longest_element(g);
    j["longest_word"] = w;
    try {
      const PartsDecomposition pd = parts_decompose(g, w);
      nlohmann::json parts = nlohmann::json::array();
      for (const Part& p : pd.parts)
        parts.push_back({{"r", p.r}, {"epsilon", p.epsilon}, {"k", p.k}, {"letters", p.letters}});
      j["parts"] = parts;
    } catch (const std::exception&) {
      j["parts"] = nullptr;
    }
  }
  return j;
}

inline int cmd_report(const std::string& family, int rank, const std::string& format, std::ostream& out) {
  const WeylFamily fam = make_family(family, rank);
  const nlohmann::json j = report_json(fam);
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "family,rank,longest_length,gkdim,manifold_dim,match\n"
        << j["family"].get<std::string>() << ',' << rank << ',' << j["longest_length"].get<int>() << ','
        << j["gkdim"].get<int>() << ',' << j["manifold_dim"].get<int>() << ','
        << (j["match"].get<bool>() ? "true" : "false") << "\n";
  } else {
    out << fam.name() << "\n";
    out << "  |W|                 " << j["order"].get<long long>() << "\n";
    out << "  l(w0)               " << j["longest_length"].get<int>()
        << (j["enumerated"].get<bool>() ? " (enumerated)" : " (formula)") << "\n";
    out << "  2 l(w0) + n         " << j["gkdim"].get<int>() << "\n";
    out << "  dim G               " << j["manifold_dim"].get<int>() << (j["match"].get<bool>() ? "  match" : "  MISMATCH")
        << "\n";
    if (j.contains("longest_word")) out << "  w0                  " << word_str(j["longest_word"].get<Word>()) << "\n";
  }
  return kOk;
}

inline int cmd_weyl(const std::string& family, int rank, const std::string& word, const std::string& subset,
                    const std::string& format, std::ostream& out) {
  const WeylFamily fam = make_family(family, rank);
  if (fam.rank > 5) throw UsageError("weyl command enumerates groups up to rank 5");
  const WeylGroup g(fam);
  const Word w = word == "longest" ? longest_element(g) : parse_word(word);
  for (int x : w)
    if (x < 1 || x > fam.rank) throw UsageError("letter " + std::to_string(x) + " out of range");
  nlohmann::json j{{"family", fam.name()}, {"word", w}};
  const SignedPerm e = g.element(w);
  j["reduced"] = g.is_reduced(w);
  j["length"] = g.length(e);
  j["normal_form"] = g.reduced_word(e);
  j["signed_permutation"] = e.str();
  try {
    const PartsDecomposition pd = parts_decompose(g, g.reduced_word(e));
    nlohmann::json parts = nlohmann::json::array();
    for (const Part& p : pd.parts)
      parts.push_back({{"r", p.r}, {"epsilon", p.epsilon}, {"k", p.k}, {"letters", p.letters}});
    j["parts"] = parts;
  } catch (const std::logic_error&) {
    j["parts"] = nullptr;
  }
  {
    const std::set<int> s = parse_subset(subset);
    try {
      g.check_subset(s);
    } catch (const std::exception& ex) {
      throw UsageError(ex.what());
    }
    const SignedPerm rep = g.longest_coset_rep(s);
    j["subset"] = std::vector<int>(s.begin(), s.end());
    j["longest_coset_rep"] = g.reduced_word(rep);
    j["coset_length"] = g.length(rep);
  }
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << fam.name() << "  word " << word_str(w) << "\n";
    out << "  length       " << j["length"].get<int>() << (j["reduced"].get<bool>() ? " (reduced)" : "") << "\n";
    out << "  normal form  " << word_str(j["normal_form"].get<Word>()) << "\n";
    out << "  signed perm  " << j["signed_permutation"].get<std::string>() << "\n";
    if (j["parts"].is_null()) {
      out << "  parts        none\n";
    } else {
      out << "  parts       ";
      for (const auto& p : j["parts"]) out << " [" << word_str(p["letters"].get<Word>()) << "]";
      out << "\n";
    }
    out << "  coset rep    " << word_str(j["longest_coset_rep"].get<Word>()) << " (length "
        << j["coset_length"].get<int>() << ", S = {" << subset << "})\n";
  }
  return kOk;
}

inline int cmd_quotient(const std::string& family, int rank, const std::string& subset, const std::string& lattice,
                        int torus_dim, const std::string& format, std::ostream& out) {
  const WeylFamily fam = make_family(family, rank);
  const std::set<int> s = parse_subset(subset);
  TorusSubgroup l;
  try {
    int m = torus_dim;
    if (m < 0) {
      std::istringstream first(lattice.substr(0, lattice.find(';')));
      std::string tok;
      m = 0;
      while (first >> tok) ++m;
      if (m == 0) throw UsageError("--torus-dim is required when the lattice is empty");
    }
    l = parse_lattice(m, lattice);
    WeylGroup(fam).check_subset(s);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const QuotientReport r = gkdim_quotient(fam, s, l);
  const TorusEmbedding e = torus_embedding(l);
  auto to_vec = [](const IntMatrix& m) {
    std::vector<std::vector<std::string>> v;
    for (const auto& row : m) {
      v.emplace_back();
      for (const auto& x : row) v.back().push_back(x.get_str());
    }
    return v;
  };
  nlohmann::json j{{"family", fam.name()},
                   {"subset", std::vector<int>(s.begin(), s.end())},
                   {"torus_dim", l.ambient},
                   {"coset_length", r.coset_length},
                   {"k", r.k},
                   {"value", r.value},
                   {"proven", r.proven},
                   {"torsion", r.torsion},
                   {"embedding", to_vec(e.embedding)},
                   {"characters", to_vec(e.characters)}};
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else {
    out << fam.name() << "  S = {" << subset << "}  lattice [" << lattice << "] in Z^" << l.ambient << "\n";
    out << "  l(w^S)          " << r.coset_length << "\n";
    out << "  rank L          " << r.k << (r.torsion ? " (torsion ignored)" : "") << "\n";
    out << "  2 l(w^S) + k    " << r.value << (r.proven ? "" : "  (subset outside the proven families)") << "\n";
  }
  return kOk;
}

inline int cmd_verify(const std::string& suite, const std::string& level, const std::string& format,
                      std::ostream& out) {
  Level lv;
  try {
    lv = parse_level(level);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw UsageError("unknown suite '" + suite + "'");
  const auto checks = run_verify(suite, lv);
  const nlohmann::json j = verify_summary(suite, lv, checks);
  if (format == "json") {
    out << j.dump(2) << "\n";
  } else {
    for (const CheckResult& c : checks)
      out << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << (c.detail.empty() ? "" : "  [" + c.detail + "]")
          << "\n";
    out << j["passed"].get<int>() << " passed, " << j["failed"].get<int>() << " failed\n";
  }
  return j["failed"].get<int>() == 0 ? kOk : kVerifyFailed;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Growth of quantized function algebras on Laurent/Fock operators", "qgrowth"};
  app.set_config("--config", "", "INI file of key=value defaults (flags win)");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string format = "table";
  app.add_option("--format", format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}))
      ->capture_default_str();

  RunConfig cfg;
  std::string family;
  int rank = 0;

  auto* report = app.add_subcommand("report", "longest-element length and GK dimension table");
  report->add_option("--family", family, "A, C or D")->required();
  report->add_option("--rank", rank, "rank n")->required();

  auto* growth = app.add_subcommand("growth", "span growth d(m) of a generating set");
  growth->add_option("--family", cfg.family, "A, C or D");
  growth->add_option("--rank", cfg.rank, "rank n");
  growth->add_option("--word", cfg.word, "reduced word like 1,2,1 or 'longest'")->capture_default_str();
  growth->add_flag("!--no-adjoints", cfg.adjoints, "leave adjoints out of the generating set");
  growth->add_option("--preset", cfg.preset, "laurent, pqt or alpha-d")
      ->check(CLI::IsMember({"laurent", "pqt", "alpha-d"}));
  growth->add_option("--disc", cfg.disc, "d for the alpha-d preset")->capture_default_str();
  growth->add_option("--q0", cfg.q0, "evaluation point(s) in (0,1), e.g. 1/2")->delimiter(',');
  growth->add_option("--backend", cfg.backend, "multipoint or numeric")
      ->check(CLI::IsMember({"multipoint", "numeric"}))
      ->capture_default_str();
  growth->add_option("--m-max", cfg.m_max, "largest m")->capture_default_str();
  growth->add_option("--laurent-radius", cfg.laurent_radius, "Laurent input radius")->capture_default_str();
  growth->add_option("--initial-cap", cfg.initial_cap, "first Fock cap (default 2 m_max + 2)");
  growth->add_option("--step", cfg.step, "Fock cap increment")->capture_default_str();
  growth->add_option("--budget", cfg.budget, "largest Fock cap (default initial + 4 step)");
  growth->add_option("--digits", cfg.digits, "numeric backend digits")->capture_default_str();
  growth->add_option("--tolerance", cfg.tolerance, "numeric backend relative tolerance")->capture_default_str();
  growth->add_option("--cache-dir", cfg.cache_dir, "result cache (QGROWTH_CACHE overrides)");
  growth->add_option("--out-dir", cfg.out_dir, "also write series.csv and report.json here");
  growth->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();

  std::string suite = "all";
  std::string level = "smoke";
  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", suite, "weyl, oper, growth, witness, quotient or all")->capture_default_str();
  verify->add_option("--level", level, "smoke or desk")->capture_default_str();

  std::string subset;
  std::string lattice;
  int torus_dim = -1;
  auto* quotient = app.add_subcommand("quotient", "GK dimension of a quotient space");
  quotient->add_option("--family", family, "A, C or D")->required();
  quotient->add_option("--rank", rank, "rank n")->required();
  quotient->add_option("--subset", subset, "parabolic subset S, e.g. 1,2");
  quotient->add_option("--lattice", lattice, "annihilator rows, e.g. \"1 0; 0 2\"");
  quotient->add_option("--torus-dim", torus_dim, "ambient torus dimension m");

  std::string word = "longest";
  auto* weyl = app.add_subcommand("weyl", "Weyl group data for a word");
  weyl->add_option("--family", family, "A, C or D")->required();
  weyl->add_option("--rank", rank, "rank n")->required();
  weyl->add_option("--word", word, "word like 1,2,1 or 'longest'")->capture_default_str();
  weyl->add_option("--subset", subset, "parabolic subset S for the longest coset representative");

  for (auto* sub : {report, growth, verify, quotient, weyl})
    sub->add_option("--format", format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (*report) return cmd_report(family, rank, format, out);
    if (*growth) {
      cfg.format = format;
      return cmd_growth(cfg, out, err);
    }
    if (*verify) return cmd_verify(suite, level, format, out);
    if (*quotient) return cmd_quotient(family, rank, subset, lattice, torus_dim, format, out);
    if (*weyl) return cmd_weyl(family, rank, word, subset, format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace qgk::cli
