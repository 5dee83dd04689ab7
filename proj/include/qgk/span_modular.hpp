#pragma once

// Window images of span elements carried modulo p at one evaluation point.
//
// An element x is stored as its matrix coefficients on (input, output)
// pairs, each divided by the odd root product of that pair. Left
// multiplication by a generator g is done directly on these values: for
// entries with root sets A (of g) and B (of x) the product is
// r_{A xor B} * prod_{k in A and B} (1 - q^{2k}), so only the polynomial
// factor has to be folded in.

#include "qgk/operator.hpp"
#include "qgk/rank.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qgk {

using SparseModRow = std::vector<std::pair<std::uint64_t, std::uint64_t>>;  // sorted by column

/// Row echelon form over F_p with sparse rows.
class SparseModEliminator {
 public:
  bool insert(const SparseModRow& row) {
    std::unordered_map<std::uint64_t, std::uint64_t> acc;
    acc.reserve(row.size() * 2);
    std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> heap;
    for (const auto& [c, v] : row) {
      if (v == 0) continue;
      acc.emplace(c, v);
      heap.push(c);
    }
    while (!heap.empty()) {
      const std::uint64_t c = heap.top();
      heap.pop();
      while (!heap.empty() && heap.top() == c) heap.pop();
      auto it = acc.find(c);
      if (it == acc.end()) continue;
      if (it->second == 0) {
        acc.erase(it);
        continue;
      }
      auto pit = pivots_.find(c);
      if (pit == pivots_.end()) {
        const std::uint64_t li = modp::inv(it->second);
        SparseModRow stored;
        stored.reserve(acc.size());
        for (const auto& [cc, v] : acc)
          if (v != 0 && cc >= c) stored.emplace_back(cc, modp::mul(v, li));
        std::sort(stored.begin(), stored.end());
        pivots_.emplace(c, std::move(stored));
        return true;
      }
      const std::uint64_t f = it->second;
      acc.erase(it);
      const SparseModRow& prow = pit->second;
      for (std::size_t i = 1; i < prow.size(); ++i) {
        const auto& [cc, v] = prow[i];
        auto [jt, inserted] = acc.try_emplace(cc, 0);
        if (inserted) heap.push(cc);
        jt->second = modp::sub(jt->second, modp::mul(f, v));
      }
    }
    return false;
  }
  int rank() const { return static_cast<int>(pivots_.size()); }

 private:
  std::unordered_map<std::uint64_t, SparseModRow> pivots_;
};

/// Growth engine for one evaluation point and one input window.
class ModularSpanEngine {
 public:
  ModularSpanEngine(const std::vector<Operator>& gens, const Rational& q0, const std::vector<BasisIndex>& inputs)
      : gens_(gens), eval_(q0), actions_(gens.size()) {
    q2_ = eval_.q_power(2);
    atom_sets_.emplace_back();
    atom_ids_.emplace(std::vector<int>{}, 0);
    for (const BasisIndex& in : inputs) inputs_.push_back(intern(in));
  }

  /// Window image of the unit.
  SparseModRow unit() {
    SparseModRow r;
    for (int in : inputs_) r.emplace_back(key(in, in), 1);
    std::sort(r.begin(), r.end());
    for (const auto& [c, v] : r) record_atoms(c, 0);
    return r;
  }

  /// Images of g * x for the given (generator, element) pairs.
  std::vector<SparseModRow> products(const std::vector<std::pair<std::size_t, const SparseModRow*>>& jobs,
                                     int threads) {
    // generator columns are filled up front
    for (const auto& [g, x] : jobs)
      for (const auto& [c, v] : *x) action(g, out_of(c));
    std::vector<SparseModRow> out(jobs.size());
    std::vector<std::vector<std::pair<std::uint64_t, int>>> atoms(jobs.size());
    auto work = [&](std::size_t i) { out[i] = multiply(jobs[i].first, *jobs[i].second, atoms[i]); };
    if (threads <= 1) {
      for (std::size_t i = 0; i < jobs.size(); ++i) work(i);
    } else {
      std::vector<std::thread> pool;
      const std::size_t t = std::min<std::size_t>(threads, jobs.size());
      for (std::size_t k = 0; k < t; ++k)
        pool.emplace_back([&, k] {
          for (std::size_t i = k; i < jobs.size(); i += t) work(i);
        });
      for (auto& th : pool) th.join();
    }
    for (const auto& list : atoms)
      for (const auto& [c, a] : list) record_atoms(c, a);
    return out;
  }

 private:
  struct GenEntry {
    int out;
    std::uint64_t value;
    int atoms;
  };

  static std::uint64_t key(int in, int out) {
    return (static_cast<std::uint64_t>(in) << 32) | static_cast<std::uint32_t>(out);
  }
  static int in_of(std::uint64_t c) { return static_cast<int>(c >> 32); }
  static int out_of(std::uint64_t c) { return static_cast<int>(c & 0xffffffffULL); }

  int intern(const BasisIndex& b) {
    auto [it, inserted] = index_ids_.try_emplace(b, static_cast<int>(indices_.size()));
    if (inserted) indices_.push_back(b);
    return it->second;
  }

  int intern_atoms(const std::vector<int>& a) {
    auto [it, inserted] = atom_ids_.try_emplace(a, static_cast<int>(atom_sets_.size()));
    if (inserted) atom_sets_.push_back(a);
    return it->second;
  }

  void record_atoms(std::uint64_t col, int atoms) {
    auto [it, inserted] = col_atoms_.try_emplace(col, atoms);
    if (!inserted && it->second != atoms) throw std::logic_error("column root profile mismatch");
  }

  const std::vector<GenEntry>& action(std::size_t g, int mid) {
    auto& cache = actions_[g];
    auto it = cache.find(mid);
    if (it != cache.end()) return it->second;
    std::vector<GenEntry> entries;
    const BasisIndex in = indices_[mid];
    for (const auto& [out, s] : gens_[g].apply(in)) {
      auto split = s.split_atoms();
      if (!split) throw std::logic_error("generator entry mixes root profiles: " + s.str());
      std::uint64_t v = 0;
      for (const auto& [e, c] : split->second) v = modp::add(v, modp::mul(modp::from_rational(c), eval_.q_power(e)));
      if (v == 0) continue;
      entries.push_back(GenEntry{intern(out), v, intern_atoms(split->first)});
    }
    return cache.emplace(mid, std::move(entries)).first->second;
  }

  /// (atom set of A xor B, prod_{k in A and B} (1 - q^{2k})) for interned sets.
  std::pair<int, std::uint64_t> combine(int a, int b) {
    const std::uint64_t k = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    std::lock_guard<std::mutex> lock(combine_mutex_);
    auto it = combine_cache_.find(k);
    if (it != combine_cache_.end()) return it->second;
    std::vector<int> sym;
    std::vector<int> both;
    const auto& x = atom_sets_[a];
    const auto& y = atom_sets_[b];
    std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(sym));
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
    std::uint64_t f = 1;
    for (int t : both) f = modp::mul(f, modp::sub(1, modp::pow(q2_, t)));
    const auto result = std::make_pair(intern_atoms(sym), f);
    combine_cache_.emplace(k, result);
    return result;
  }

  SparseModRow multiply(std::size_t g, const SparseModRow& x, std::vector<std::pair<std::uint64_t, int>>& atoms_out) {
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> acc;
    acc.reserve(x.size() * 2);
    const auto& cache = actions_[g];
    for (const auto& [c, v] : x) {
      const int in = in_of(c);
      const int mid = out_of(c);
      const int b = col_atoms_.at(c);
      for (const GenEntry& e : cache.at(mid)) {
        const auto [sym, f] = combine(e.atoms, b);
        const std::uint64_t val = modp::mul(modp::mul(e.value, v), f);
        auto [it, inserted] = acc.try_emplace(key(in, e.out), std::make_pair(val, sym));
        if (!inserted) {
          if (it->second.second != sym) throw std::logic_error("column root profile mismatch in product");
          it->second.first = modp::add(it->second.first, val);
        }
      }
    }
    SparseModRow r;
    r.reserve(acc.size());
    for (const auto& [c, vs] : acc) {
      if (vs.first == 0) continue;
      r.emplace_back(c, vs.first);
      atoms_out.emplace_back(c, vs.second);
    }
    std::sort(r.begin(), r.end());
    return r;
  }

  const std::vector<Operator>& gens_;
  ModularEvaluator eval_;
  std::uint64_t q2_ = 0;
  std::vector<int> inputs_;
  std::map<BasisIndex, int> index_ids_;
  std::vector<BasisIndex> indices_;
  std::map<std::vector<int>, int> atom_ids_;
  std::vector<std::vector<int>> atom_sets_;
  std::unordered_map<std::uint64_t, int> col_atoms_;
  std::vector<std::unordered_map<int, std::vector<GenEntry>>> actions_;
  std::mutex combine_mutex_;
  std::unordered_map<std::uint64_t, std::pair<int, std::uint64_t>> combine_cache_;
};

}  // namespace qgk
