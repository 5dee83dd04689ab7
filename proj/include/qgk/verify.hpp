#pragma once

// Property suites run by `qgrowth verify`.

#include "qgk/corep.hpp"
#include "qgk/growth.hpp"
#include "qgk/quotient.hpp"
#include "qgk/weyl.hpp"
#include "qgk/witness.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgk {

enum class Level { Smoke, Desk };

inline Level parse_level(const std::string& s) {
  if (s == "smoke") return Level::Smoke;
  if (s == "desk") return Level::Desk;
  throw std::invalid_argument("unknown level '" + s + "'");
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"weyl", "oper", "growth", "witness", "quotient"};
  return names;
}

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

class SuiteRunner {
 public:
  SuiteRunner(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  /// fn returns true on pass and may write a detail line.
  void check(const std::string& name, const std::function<bool(std::ostream&)>& fn) {
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    std::ostringstream detail;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.pass = fn(detail);
    } catch (const std::exception& e) {
      r.pass = false;
      detail << "exception: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.detail = detail.str();
    out_.push_back(std::move(r));
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

inline std::vector<WeylFamily> families(int a_max, int c_max, int d_max, int d_min = 2) {
  std::vector<WeylFamily> out;
  for (int n = 1; n <= a_max; ++n) out.emplace_back(Family::A, n);
  for (int n = 2; n <= c_max; ++n) out.emplace_back(Family::C, n);
  for (int n = d_min; n <= d_max; ++n) out.emplace_back(Family::D, n);
  return out;
}

inline void for_each_word(int rank, int len, Word& cur, const std::function<void(const Word&)>& fn) {
  fn(cur);
  if (static_cast<int>(cur.size()) == len) return;
  for (int i = 1; i <= rank; ++i) {
    cur.push_back(i);
    for_each_word(rank, len, cur, fn);
    cur.pop_back();
  }
}

inline void weyl_suite(Level level, std::vector<CheckResult>& out) {
  SuiteRunner s("weyl", out);
  const bool desk = level == Level::Desk;
  const auto fams = desk ? families(4, 3, 4) : families(2, 2, 3, 3);
  s.check("group orders match formula", [&](std::ostream& os) {
    bool ok = true;
    for (const WeylFamily& f : fams) {
      if (f.rank > (desk ? 4 : 3)) continue;
      const long long n = WeylGroup(f).order();
      os << f.name() << "=" << n << " ";
      ok = ok && n == f.order_formula();
    }
    return ok;
  });
  s.check("longest length by enumeration", [&](std::ostream& os) {
    bool ok = true;
    for (const WeylFamily& f : fams) {
      const WeylGroup g(f);
      const int l = g.length(g.longest());
      os << f.name() << ":" << l << " ";
      ok = ok && l == f.longest_length_formula() && 2 * l + f.rank == f.manifold_dim();
    }
    return ok;
  });
  s.check("braid relations", [&](std::ostream&) {
    for (const WeylFamily& f : fams) {
      const WeylGroup g(f);
      for (int i = 1; i <= f.rank; ++i)
        for (int j = i + 1; j <= f.rank; ++j) {
          Word a, b;
          const Word ij{i, j};
          SignedPerm x = g.element(ij);
          int m = 1;
          while (x != g.element({}) && m < 8) {
            x = x * g.element(ij);
            ++m;
          }
          if (m > 4) return false;
          for (int t = 0; t < m; ++t) {
            a.push_back(t % 2 ? j : i);
            b.push_back(t % 2 ? i : j);
          }
          if (g.element(a) != g.element(b)) return false;
        }
    }
    return true;
  });
  s.check("coset length identity", [&](std::ostream&) {
    for (const WeylFamily& f : families(3, 3, 3, 3)) {
      const WeylGroup g(f);
      const int full = g.length(g.longest());
      for (int mask = 0; mask < (1 << f.rank); ++mask) {
        std::set<int> sub;
        for (int i = 0; i < f.rank; ++i)
          if (mask >> i & 1) sub.insert(i + 1);
        if (g.length(g.longest_coset_rep(sub)) != full - g.length(g.parabolic_longest(sub))) return false;
      }
    }
    return true;
  });
  s.check("parts decomposition of the longest element", [&](std::ostream& os) {
    for (const WeylFamily& f : fams) {
      const WeylGroup g(f);
      const Word w = longest_element(g);
      const PartsDecomposition pd = parts_decompose(g, w);
      if (g.element(pd.concatenated()) != g.element(w)) return false;
      os << f.name() << ":" << word_str(pd.concatenated()) << " ";
    }
    return true;
  });
}

inline void oper_suite(Level level, std::vector<CheckResult>& out) {
  SuiteRunner s("oper", out);
  const bool desk = level == Level::Desk;
  s.check("unitarity of chi on the longest element", [&](std::ostream& os) {
    bool ok = true;
    for (const WeylFamily& f : desk ? families(3, 2, 3, 3) : families(2, 0, 0)) {
      const CorepMatrix m = chi_word(f, longest_element(WeylGroup(f)));
      const double d = unitarity_defect(m, Window{0, 14, 6}, Rational(1, 2));
      os << f.name() << ":" << d << " ";
      ok = ok && d <= 1e-10;
    }
    return ok;
  });
  s.check("flipped sign breaks unitarity", [&](std::ostream& os) {
    CorepMatrix m = chi_word(WeylFamily(Family::A, 1), {1});
    m.at(1, 2) = m.at(1, 2).scaled(ScalarExpr(-1));
    const double d = unitarity_defect(m, Window{0, 14, 6}, Rational(1, 2));
    os << d;
    return d > 1e-2;
  });
  s.check("chi factors through the diagonal", [&](std::ostream&) {
    for (const WeylFamily& f : desk ? families(3, 3, 3) : families(2, 2, 0)) {
      const WeylGroup g(f);
      Word cur;
      bool ok = true;
      for_each_word(f.rank, desk ? 4 : 3, cur, [&](const Word& w) {
        if (ok && g.is_reduced(w) && !diagonal_factorization_holds(f, w)) ok = false;
      });
      if (!ok) return false;
    }
    return true;
  });
  s.check("disc relations", [&](std::ostream&) {
    const Operator a = disc_alpha(1), as = disc_alpha_star(1), b = disc_beta(1);
    const bool comm = a * as - as * a == (b * b).scaled(ScalarExpr(1) - ScalarExpr::q_power(2));
    const bool qc = (b * a).scaled(ScalarExpr::q_power(1)) == a * b;
    return comm && qc && a.adjoint() == as && as.adjoint() == a;
  });
}

inline void growth_suite(Level level, std::vector<CheckResult>& out) {
  SuiteRunner s("growth", out);
  const bool desk = level == Level::Desk;
  s.check("Laurent d(m) = 2m+1", [&](std::ostream& os) {
    const GrowthSeries g = span_growth(laurent_generators(), 20);
    for (const GrowthRow& r : g.rows)
      if (r.d != 2 * r.m + 1) return false;
    const int deg = degree_detect(g).degree;
    os << "degree " << deg;
    return deg == 1;
  });
  const int pm = desk ? 12 : 8;
  s.check("P_q(T) growth and degree", [&](std::ostream& os) {
    const GrowthSeries g = span_growth(disc_generators(), pm);
    bool ok = g.all_stable() && g.rows.front().d == 4;
    for (const GrowthRow& r : g.rows) {
      os << r.d << " ";
      ok = ok && r.d <= (r.m + 1) * (r.m + 1);
    }
    const int deg = degree_detect(g).degree;
    os << "degree " << deg;
    return ok && deg == 2;
  });
  s.check("P_q(T) lower family rank", [&](std::ostream&) {
    for (int m = 0; m <= pm; ++m)
      if (rank_of(lower_family(m), window_inputs(Signature{0, 1}, 0, 2 * m + 4), RankOptions{}) !=
          (m + 1) * (m + 2) / 2)
        return false;
    return true;
  });
  if (!desk) return;
  s.check("SU_q(2) growth and degree", [&](std::ostream& os) {
    const GrowthSeries g = span_growth(chi_generators(WeylFamily(Family::A, 1), {1}), 10);
    for (const GrowthRow& r : g.rows) os << r.d << " ";
    const int deg = degree_detect(g).degree;
    os << "degree " << deg;
    return g.all_stable() && deg == 3;
  });
  s.check("backends agree for m <= 6", [&](std::ostream&) {
    RankOptions num;
    num.backend = Backend::Numeric;
    for (const GeneratorSet& gs : {disc_generators(), chi_generators(WeylFamily(Family::A, 1), {1})})
      if (span_growth(gs, 6).values() != span_growth(gs, 6, {}, num).values()) return false;
    return true;
  });
}

inline void witness_suite(Level level, std::vector<CheckResult>& out) {
  SuiteRunner s("witness", out);
  const bool desk = level == Level::Desk;
  s.check("unique paths", [&](std::ostream& os) {
    std::size_t n = 0;
    for (const WeylFamily& f : desk ? families(3, 2, 3, 3) : families(2, 0, 0)) {
      for (const PathTableEntry& e : path_table(f)) {
        ++n;
        if (!e.result.ok()) {
          os << f.name() << " fails at k=" << e.result.k;
          return false;
        }
      }
    }
    os << n << " entries";
    return true;
  });
  s.check("alpha family rank and certificate", [&](std::ostream&) {
    const int jmax = desk ? 6 : 3;
    for (int d = 1; d <= 2; ++d)
      for (int j = 0; j <= jmax; ++j)
        for (int k = 0; k <= 3; ++k) {
          const AlphaFamilyRank r = alpha_family_rank(d, j, k, 2 * j + k + 4);
          if (r.rank != j + 1 || !r.stable || !alpha_family_certificate(d, j, k).valid) return false;
        }
    return true;
  });
  s.check("sim examples", [&](std::ostream&) {
    const auto in = window_inputs(Signature{0, 1}, 0, 8);
    const auto w = sim_check(disc_beta(1) * disc_alpha(1), disc_alpha(1), in, 3);
    return w && w->constant == ScalarExpr::q_power(-1) && w->exponents == std::vector<int>{1} &&
           !sim_check(disc_alpha(1), disc_beta(1), in, 3);
  });
  s.check("ladder element", [&](std::ostream& os) {
    std::vector<WeylFamily> fams{WeylFamily(Family::A, 1), WeylFamily(Family::A, 2)};
    if (desk) fams.emplace_back(Family::C, 2);
    for (const WeylFamily& f : fams) {
      const LadderResult r = ladder_witness(f, longest_element(WeylGroup(f)), desk ? 3 : 2, 2);
      if (!r.witness) return false;
      os << f.name() << ":C=" << r.witness->constant.str() << " ";
    }
    return true;
  });
}

inline void quotient_suite(Level level, std::vector<CheckResult>& out) {
  SuiteRunner s("quotient", out);
  s.check("quotient values 5, 7, 8", [&](std::ostream& os) {
    const int a = gkdim_quotient(WeylFamily(Family::A, 2), {1}, parse_lattice(1, "")).value;
    const int c = gkdim_quotient(WeylFamily(Family::C, 2), {2}, parse_lattice(1, "")).value;
    const int full = gkdim_quotient(WeylFamily(Family::A, 2), {}, parse_lattice(2, "")).value;
    os << a << " " << c << " " << full;
    return a == 5 && c == 7 && full == 8;
  });
  s.check("lattice ranks", [&](std::ostream&) {
    return lattice_rank(parse_lattice(2, "")).k == 2 && lattice_rank(parse_lattice(2, "1 -1")).k == 1 &&
           lattice_rank(parse_lattice(2, "2 0; 0 2")).k == 0;
  });
  if (level != Level::Desk) return;
  s.check("matches dim G - dim K", [&](std::ostream&) {
    for (const WeylFamily& f : families(4, 4, 0)) {
      for (int m = 1; m <= f.rank; ++m)
        if (gkdim_quotient(f, standard_quotient_subset(f, m), parse_lattice(m, "")).value !=
            homogeneous_space_dim(f, m))
          return false;
    }
    return true;
  });
  s.check("Smith form reconstructs the lattice", [&](std::ostream&) {
    const std::vector<IntMatrix> cases{{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, {{1, -1}}, {{6, 0}, {0, 4}}};
    for (const IntMatrix& a : cases) {
      const SmithForm sf = smith_normal_form(a, static_cast<int>(a[0].size()));
      if (multiply(multiply(sf.u, a), sf.v) != sf.d) return false;
    }
    return true;
  });
}

}  // namespace detail

/// Runs one suite or "all". Throws invalid_argument on an unknown suite.
inline std::vector<CheckResult> run_verify(const std::string& suite, Level level) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  if (all || suite == "weyl") detail::weyl_suite(level, out);
  if (all || suite == "oper") detail::oper_suite(level, out);
  if (all || suite == "growth") detail::growth_suite(level, out);
  if (all || suite == "witness") detail::witness_suite(level, out);
  if (all || suite == "quotient") detail::quotient_suite(level, out);
  return out;
}

inline nlohmann::json verify_summary(const std::string& suite, Level level, const std::vector<CheckResult>& checks) {
  nlohmann::json j;
  j["suite"] = suite;
  j["level"] = level == Level::Desk ? "desk" : "smoke";
  j["checks"] = nlohmann::json::array();
  int failed = 0;
  for (const CheckResult& c : checks) {
    j["checks"].push_back({{"suite", c.suite}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass) ++failed;
  }
  j["passed"] = static_cast<int>(checks.size()) - failed;
  j["failed"] = failed;
  return j;
}

}  // namespace qgk
