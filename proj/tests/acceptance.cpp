// Acceptance run: one PASS/FAIL line per criterion.

#include "qgk/corep.hpp"
#include "qgk/growth.hpp"
#include "qgk/quotient.hpp"
#include "qgk/weyl.hpp"
#include "qgk/witness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qgk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::map<int, bool> g_results;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || s < limit_s;
  if (!in_time) o.detail += " (over time limit)";
  g_results[id] = o.pass && in_time;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  std::cout << (g_results[id] ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << buf << ")"
            << (o.detail.empty() ? "" : " -- " + o.detail) << std::endl;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::vector<WeylFamily> fams(std::initializer_list<std::pair<Family, int>> list) {
  std::vector<WeylFamily> out;
  for (const auto& [f, n] : list) out.emplace_back(f, n);
  return out;
}

void for_each_word(int rank, int len, Word& cur, const std::function<void(const Word&)>& fn) {
  fn(cur);
  if (static_cast<int>(cur.size()) == len) return;
  for (int i = 1; i <= rank; ++i) {
    cur.push_back(i);
    for_each_word(rank, len, cur, fn);
    cur.pop_back();
  }
}

}  // namespace

int main() {
  criterion(1, "Laurent baseline d(m) = 2m+1 for m <= 20, degree 1", 1.0, [] {
    const GrowthSeries s = span_growth(laurent_generators(), 20);
    bool ok = s.all_stable();
    for (const GrowthRow& r : s.rows) ok = ok && r.d == 2 * r.m + 1;
    const int deg = degree_detect(s).degree;
    return Outcome{ok && deg == 1, "d(20)=" + std::to_string(s.rows.back().d) + " degree " + std::to_string(deg)};
  });

  criterion(2, "P_q(T): lower family rank (m+1)(m+2)/2, d(m) <= (m+1)^2 for m <= 12, degree 2", 60.0, [] {
    bool ok = true;
    for (int m = 0; m <= 12; ++m)
      ok = ok && rank_of(lower_family(m), window_inputs(Signature{0, 1}, 0, 2 * m + 4), RankOptions{}) ==
                     (m + 1) * (m + 2) / 2;
    const GrowthSeries s = span_growth(disc_generators(1), 12);
    ok = ok && s.all_stable();
    for (const GrowthRow& r : s.rows) ok = ok && r.d <= (r.m + 1) * (r.m + 1);
    const int deg = degree_detect(s).degree;
    return Outcome{ok && deg == 2, "d = " + join(s.values()) + ", degree " + std::to_string(deg)};
  });

  criterion(3, "SU_q(2): growth of {1, chi(u), chi(u)*} for m <= 10, stable, degree 3", 600.0, [] {
    const GrowthSeries s = span_growth(chi_generators(WeylFamily(Family::A, 1), {1}), 10);
    const int deg = degree_detect(s).degree;
    return Outcome{s.all_stable() && deg == 3, "d = " + join(s.values()) + ", Rf = " +
                                                   std::to_string(s.rows.back().window_rf) + ", degree " +
                                                   std::to_string(deg)};
  });

  criterion(4, "length and dimension tables for A (n<=4), C (n<=3), D (n=2..4)", 1.0, [] {
    bool ok = true;
    std::ostringstream os;
    for (const WeylFamily& f : fams({{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::A, 4}, {Family::C, 2},
                                     {Family::C, 3}, {Family::D, 2}, {Family::D, 3}, {Family::D, 4}})) {
      const int n = f.rank;
      const GkdimReport r = gkdim_report(f);
      int len = 0, dim = 0;
      if (f.family == Family::A) {
        len = n * (n + 1) / 2;
        dim = n * n + 2 * n;
      } else if (f.family == Family::C) {
        len = n * n;
        dim = 2 * n * n + n;
      } else {
        len = n * n - n;
        dim = 2 * n * n - n;
      }
      ok = ok && r.enumerated && r.longest_length == len && r.gkdim == dim;
      os << f.name() << ":" << r.longest_length << "/" << r.gkdim << " ";
    }
    return Outcome{ok, os.str()};
  });

  criterion(5, "alpha_d family rank j+1 (d in {1,2}, j <= 6, k <= 3), rank and certificate", 60.0, [] {
    int cases = 0;
    for (int d = 1; d <= 2; ++d)
      for (int j = 0; j <= 6; ++j)
        for (int k = 0; k <= 3; ++k) {
          const AlphaFamilyRank r = alpha_family_rank(d, j, k, 2 * j + k + 4);
          const VandermondeCertificate c = alpha_family_certificate(d, j, k);
          if (r.rank != j + 1 || !r.stable || !c.valid)
            return Outcome{false, "fails at d=" + std::to_string(d) + " j=" + std::to_string(j) +
                                      " k=" + std::to_string(k)};
          ++cases;
        }
    return Outcome{true, std::to_string(cases) + " cases"};
  });

  criterion(6, "unitarity of chi on the longest element <= 1e-10, flipped sign > 1e-2", 300.0, [] {
    const Window win{0, 14, 6};
    const Rational q0(1, 2);
    bool ok = true;
    std::ostringstream os;
    for (const WeylFamily& f :
         fams({{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::C, 2}, {Family::D, 3}})) {
      const double d = unitarity_defect(chi_word(f, longest_element(WeylGroup(f))), win, q0);
      ok = ok && d <= 1e-10;
      os << f.name() << ":" << d << " ";
    }
    const WeylFamily a2(Family::A, 2);
    CorepMatrix bad = chi_word(a2, longest_element(WeylGroup(a2)));
    bool flipped = false;
    for (int i = 1; i <= bad.size() && !flipped; ++i)
      for (int j = 1; j <= bad.size() && !flipped; ++j)
        if (i != j && !bad.at(i, j).is_zero()) {
          bad.at(i, j) = bad.at(i, j).scaled(ScalarExpr(-1));
          flipped = true;
        }
    const double neg = unitarity_defect(bad, win, q0);
    os << "control:" << neg;
    return Outcome{ok && flipped && neg > 1e-2, os.str()};
  });

  criterion(7, "unique path r_w(k) with clauses (1)-(3) for A <= 3, C2, D3", 300.0, [] {
    std::size_t n = 0;
    for (const WeylFamily& f :
         fams({{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::C, 2}, {Family::D, 3}})) {
      for (const PathTableEntry& e : path_table(f)) {
        ++n;
        if (!e.result.ok())
          return Outcome{false, f.name() + " word " + word_str(e.word) + " k=" + std::to_string(e.result.k)};
      }
    }
    return Outcome{true, std::to_string(n) + " (word, k) pairs"};
  });

  criterion(8, "chi_word entries factor as chi_e(u^i_i) (x) pi_w(u^i_j), reduced words of length <= 4", 0, [] {
    std::size_t n = 0;
    for (const WeylFamily& f : fams({{Family::A, 1}, {Family::A, 2}, {Family::A, 3}, {Family::C, 2}, {Family::C, 3},
                                     {Family::D, 2}, {Family::D, 3}})) {
      const WeylGroup g(f);
      Word cur;
      bool ok = true;
      for_each_word(f.rank, 4, cur, [&](const Word& w) {
        if (!ok || !g.is_reduced(w)) return;
        ++n;
        if (!diagonal_factorization_holds(f, w)) ok = false;
      });
      if (!ok) return Outcome{false, "fails for " + f.name()};
    }
    return Outcome{true, std::to_string(n) + " words"};
  });

  criterion(9, "A2: s1 s2 s1 and s2 s1 s2 give identical d(m) for m <= 4", 0, [] {
    const WeylFamily a2(Family::A, 2);
    WindowPolicy pol;
    pol.initial_cap = 4;
    pol.budget = 6;
    const GrowthSeries x = span_growth(chi_generators(a2, {1, 2, 1}), 4, pol);
    const GrowthSeries y = span_growth(chi_generators(a2, {2, 1, 2}), 4, pol);
    const bool same = x.history == y.history && x.values() == y.values();
    return Outcome{same, "d = " + join(x.values()) + " vs " + join(y.values()) + " at Fock caps 4 and 6"};
  });

  criterion(10, "quotients 5, 7, 8 and 2 l(w^S) + k = dim G - dim K for A/C, n <= 4", 10.0, [] {
    const int a = gkdim_quotient(WeylFamily(Family::A, 2), {1}, parse_lattice(1, "")).value;
    const int c = gkdim_quotient(WeylFamily(Family::C, 2), {2}, parse_lattice(1, "")).value;
    const int full = gkdim_quotient(WeylFamily(Family::A, 2), {}, parse_lattice(2, "")).value;
    bool ok = a == 5 && c == 7 && full == 8;
    int n_cases = 0;
    for (Family fam : {Family::A, Family::C})
      for (int n = fam == Family::A ? 1 : 2; n <= 4; ++n) {
        const WeylFamily f(fam, n);
        for (int m = 1; m <= n; ++m, ++n_cases) {
          const QuotientReport r = gkdim_quotient(f, standard_quotient_subset(f, m), parse_lattice(m, ""));
          ok = ok && r.proven && r.value == homogeneous_space_dim(f, m);
        }
      }
    return Outcome{ok, std::to_string(a) + " " + std::to_string(c) + " " + std::to_string(full) + ", " +
                           std::to_string(n_cases) + " homogeneous spaces"};
  });

  criterion(11, "GKdim >= 8 growth fits not attempted; substitutes 4, 5, 7, 8 plus ladder on SU_q(3), SP_q(4)", 0,
            [] {
              std::ostringstream os;
              bool ok = g_results[4] && g_results[5] && g_results[7] && g_results[8];
              for (const WeylFamily& f : fams({{Family::A, 2}, {Family::C, 2}})) {
                const LadderResult r = ladder_witness(f, longest_element(WeylGroup(f)), 3, 2);
                ok = ok && r.witness.has_value();
                os << f.name() << " g0 = u^" << r.row << "_" << r.column;
                if (r.witness) os << " ~ S* (x) 1, C=" << r.witness->constant.str() << "; ";
              }
              return Outcome{ok, os.str()};
            });

  int failed = 0;
  for (const auto& [id, pass] : g_results)
    if (!pass) ++failed;
  std::cout << (g_results.size() - failed) << "/" << g_results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
