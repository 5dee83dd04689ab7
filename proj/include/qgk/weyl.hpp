#pragma once

// Weyl groups of types A_n, C_n, D_n realized as (signed) permutation groups.
//
//   A_n: permutations of {1..n+1}, s_i = (i, i+1).
//   C_n: signed permutations of {1..n}, s_i = (i, i+1) for i < n, s_n negates n.
//   D_n: even signed permutations of {1..n}, s_i = (i, i+1) for i < n,
//        s_n : (.., x_{n-1}, x_n) -> (.., -x_n, -x_{n-1}).
//
// Lengths are counted as the number of positive roots sent to negative
// roots. With the simple roots above a root vector is positive iff its first
// nonzero coordinate is positive.

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgk {

enum class Family { A, C, D };

inline char family_char(Family f) {
  switch (f) {
    case Family::A:
      return 'A';
    case Family::C:
      return 'C';
    case Family::D:
      return 'D';
  }
  return '?';
}

inline Family parse_family(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw std::invalid_argument("unknown family '" + s + "' (expected A, C or D)");
}

/// Type-and-rank descriptor with the derived indexing data used by the
/// corepresentation and witness code.
struct WeylFamily {
  Family family = Family::A;
  int rank = 1;

  WeylFamily() = default;
  WeylFamily(Family f, int n) : family(f), rank(n) {
    const int min_rank = f == Family::A ? 1 : 2;
    if (n < min_rank) {
      throw std::invalid_argument(std::string("rank ") + std::to_string(n) + " out of range for type " +
                                  family_char(f) + " (minimum " + std::to_string(min_rank) + ")");
    }
  }

  /// Dimension N_n of the defining (vector) corepresentation.
  int corep_dim() const { return family == Family::A ? rank + 1 : 2 * rank; }

  /// Number of letters the permutation acts on.
  int perm_degree() const { return family == Family::A ? rank + 1 : rank; }

  /// d_i = <alpha_i, alpha_i>/2
  int root_exponent(int i) const {
    check_index(i);
    return family == Family::C && i == rank ? 2 : 1;
  }

  int lower_index(int i) const { return family == Family::A ? 1 : rank - i + 1; }
  int upper_index(int i) const { return family == Family::A ? i + 1 : corep_dim() - rank + i; }

  int manifold_dim() const {
    const int n = rank;
    switch (family) {
      case Family::A:
        return n * n + 2 * n;
      case Family::C:
        return 2 * n * n + n;
      case Family::D:
        return 2 * n * n - n;
    }
    return 0;
  }

  /// Closed-form length of the longest element.
  int longest_length_formula() const {
    const int n = rank;
    switch (family) {
      case Family::A:
        return n * (n + 1) / 2;
      case Family::C:
        return n * n;
      case Family::D:
        return n * n - n;
    }
    return 0;
  }

  /// |W| from the closed formula.
  long long order_formula() const {
    long long fact = 1;
    for (int i = 2; i <= perm_degree(); ++i) fact *= i;
    switch (family) {
      case Family::A:
        return fact;
      case Family::C:
        return fact << rank;
      case Family::D:
        return fact << (rank - 1);
    }
    return 0;
  }

  void check_index(int i) const {
    if (i < 1 || i > rank) throw std::out_of_range("generator index " + std::to_string(i) + " out of range");
  }

  std::string name() const { return std::string(1, family_char(family)) + std::to_string(rank); }

  bool operator==(const WeylFamily&) const = default;
};

/// Signed permutation: images[i-1] = w(i) in {+-1..+-m}.
class SignedPerm {
 public:
  SignedPerm() = default;
  explicit SignedPerm(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size() + 1, false);
    for (int v : images_) {
      const int a = std::abs(v);
      if (a < 1 || a > static_cast<int>(images_.size()) || seen[a])
        throw std::invalid_argument("not a signed permutation");
      seen[a] = true;
    }
  }
  static SignedPerm identity(int m) {
    std::vector<int> im(m);
    std::iota(im.begin(), im.end(), 1);
    return SignedPerm(std::move(im));
  }

  int degree() const { return static_cast<int>(images_.size()); }
  const std::vector<int>& images() const { return images_; }

  int operator()(int i) const {
    const int v = images_.at(std::abs(i) - 1);
    return i < 0 ? -v : v;
  }

  /// (u*v)(i) = u(v(i))
  friend SignedPerm operator*(const SignedPerm& u, const SignedPerm& v) {
    if (u.degree() != v.degree()) throw std::invalid_argument("degree mismatch");
    std::vector<int> im(v.degree());
    for (int i = 1; i <= v.degree(); ++i) im[i - 1] = u(v(i));
    SignedPerm r;
    r.images_ = std::move(im);
    return r;
  }

  SignedPerm inverse() const {
    std::vector<int> im(images_.size());
    for (int i = 1; i <= degree(); ++i) {
      const int v = images_[i - 1];
      im[std::abs(v) - 1] = v > 0 ? i : -i;
    }
    SignedPerm r;
    r.images_ = std::move(im);
    return r;
  }

  int negative_count() const {
    return static_cast<int>(std::count_if(images_.begin(), images_.end(), [](int v) { return v < 0; }));
  }

  auto operator<=>(const SignedPerm&) const = default;
  bool operator==(const SignedPerm&) const = default;

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < images_.size(); ++i) os << (i ? " " : "") << images_[i];
    os << "]";
    return os.str();
  }

 private:
  std::vector<int> images_;
};

using Word = std::vector<int>;

inline std::string word_str(const Word& w) {
  if (w.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? " " : "") << "s" << w[i];
  return os.str();
}

class WeylGroup {
 public:
  explicit WeylGroup(WeylFamily fam) : fam_(fam) {
    const int n = fam_.rank;
    const int m = fam_.perm_degree();
    for (int i = 1; i <= n; ++i) {
      std::vector<int> im(m);
      std::iota(im.begin(), im.end(), 1);
      if (i < n || fam_.family == Family::A) {
        std::swap(im[i - 1], im[i]);
      } else if (fam_.family == Family::C) {
        im[n - 1] = -n;
      } else {
        im[n - 2] = -n;
        im[n - 1] = -(n - 1);
      }
      gens_.emplace_back(std::move(im));
    }
    build_positive_roots();
  }
  WeylGroup(Family f, int n) : WeylGroup(WeylFamily(f, n)) {}

  const WeylFamily& family() const { return fam_; }
  int rank() const { return fam_.rank; }
  const std::vector<SignedPerm>& generators() const { return gens_; }
  const SignedPerm& generator(int i) const {
    fam_.check_index(i);
    return gens_[i - 1];
  }
  SignedPerm identity() const { return SignedPerm::identity(fam_.perm_degree()); }

  bool contains(const SignedPerm& w) const {
    if (w.degree() != fam_.perm_degree()) return false;
    if (fam_.family == Family::A) return w.negative_count() == 0;
    if (fam_.family == Family::D) return w.negative_count() % 2 == 0;
    return true;
  }

  /// s_{i1} s_{i2} ... s_{ik}
  SignedPerm element(const Word& letters) const {
    SignedPerm w = identity();
    for (int i : letters) w = w * generator(i);
    return w;
  }

  /// Number of positive roots made negative by w.
  int length(const SignedPerm& w) const {
    int count = 0;
    std::vector<int> image(fam_.perm_degree());
    for (const auto& root : positive_roots_) {
      std::fill(image.begin(), image.end(), 0);
      for (int i = 1; i <= fam_.perm_degree(); ++i) {
        if (root[i - 1] == 0) continue;
        const int wi = w(i);
        image[std::abs(wi) - 1] += wi > 0 ? root[i - 1] : -root[i - 1];
      }
      for (int v : image) {
        if (v != 0) {
          if (v < 0) ++count;
          break;
        }
      }
    }
    return count;
  }

  bool is_left_descent(const SignedPerm& w, int i) const { return length(generator(i) * w) < length(w); }
  bool is_right_descent(const SignedPerm& w, int i) const { return length(w * generator(i)) < length(w); }

  /// Canonical reduced word: strip the smallest left descent repeatedly.
  Word reduced_word(const SignedPerm& w) const {
    Word out;
    SignedPerm cur = w;
    int len = length(cur);
    while (len > 0) {
      bool found = false;
      for (int i = 1; i <= rank(); ++i) {
        SignedPerm next = generator(i) * cur;
        const int nl = length(next);
        if (nl < len) {
          out.push_back(i);
          cur = std::move(next);
          len = nl;
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("no descent found for element of positive length");
    }
    return out;
  }

  /// Canonical reduced word for the product of `letters`.
  Word normalize(const Word& letters) const {
    for (int i : letters) fam_.check_index(i);
    return reduced_word(element(letters));
  }

  bool is_reduced(const Word& letters) const {
    return static_cast<int>(letters.size()) == length(element(letters));
  }

  /// Longest element, grown by right ascents.
  SignedPerm longest() const {
    SignedPerm w = identity();
    int len = 0;
    for (bool grew = true; grew;) {
      grew = false;
      for (int i = 1; i <= rank(); ++i) {
        SignedPerm next = w * generator(i);
        const int nl = length(next);
        if (nl > len) {
          w = std::move(next);
          len = nl;
          grew = true;
          break;
        }
      }
    }
    return w;
  }

  Word longest_word() const { return reduced_word(longest()); }

  /// Breadth-first closure under the generators (ranks <= 5).
  std::vector<SignedPerm> enumerate() const {
    if (fam_.rank > 5) throw std::invalid_argument("group enumeration is capped at rank 5");
    std::set<SignedPerm> seen{identity()};
    std::vector<SignedPerm> order{identity()};
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (const SignedPerm& g : gens_) {
        SignedPerm next = order[head] * g;
        if (seen.insert(next).second) order.push_back(std::move(next));
      }
    }
    return order;
  }

  long long order() const {
    if (fam_.rank <= 5) return static_cast<long long>(enumerate().size());
    return fam_.order_formula();
  }

  /// Elements of the standard parabolic subgroup W_S.
  std::vector<SignedPerm> parabolic_elements(const std::set<int>& subset) const {
    check_subset(subset);
    std::set<SignedPerm> seen{identity()};
    std::vector<SignedPerm> order{identity()};
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (int i : subset) {
        SignedPerm next = order[head] * generator(i);
        if (seen.insert(next).second) order.push_back(std::move(next));
      }
    }
    return order;
  }

  /// Longest element of W_S.
  SignedPerm parabolic_longest(const std::set<int>& subset) const {
    check_subset(subset);
    SignedPerm w = identity();
    int len = 0;
    for (bool grew = true; grew;) {
      grew = false;
      for (int i : subset) {
        SignedPerm next = w * generator(i);
        const int nl = length(next);
        if (nl > len) {
          w = std::move(next);
          len = nl;
          grew = true;
          break;
        }
      }
    }
    return w;
  }

  /// W^S = { w : l(s_a w) > l(w) for all a in S }, by enumeration.
  std::vector<SignedPerm> min_coset_reps(const std::set<int>& subset) const {
    check_subset(subset);
    std::vector<SignedPerm> out;
    for (const SignedPerm& w : enumerate()) {
      bool ok = true;
      for (int i : subset) {
        if (is_left_descent(w, i)) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(w);
    }
    return out;
  }

  /// Longest element of W^S, namely w_S * w_0 (length l(w_0) - l(w_S)).
  SignedPerm longest_coset_rep(const std::set<int>& subset) const {
    return parabolic_longest(subset) * longest();
  }

  void check_subset(const std::set<int>& subset) const {
    for (int i : subset) fam_.check_index(i);
  }

 private:
  void build_positive_roots() {
    const int m = fam_.perm_degree();
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        std::vector<int> r(m, 0);
        r[i] = 1;
        r[j] = -1;
        positive_roots_.push_back(r);
        if (fam_.family != Family::A) {
          r[j] = 1;
          positive_roots_.push_back(r);
        }
      }
      if (fam_.family == Family::C) {
        std::vector<int> r(m, 0);
        r[i] = 2;
        positive_roots_.push_back(r);
      }
    }
  }

  WeylFamily fam_;
  std::vector<SignedPerm> gens_;
  std::vector<std::vector<int>> positive_roots_;
};

/// Canonical reduced word of the longest element.
inline Word longest_element(const WeylGroup& g) { return g.longest_word(); }

inline Word longest_coset_rep(const WeylGroup& g, const std::set<int>& subset) {
  return g.reduced_word(g.longest_coset_rep(subset));
}

// ---------------------------------------------------------------------------
// Parts decomposition  w = psi_{1,k_1}^{(e_1)} psi_{2,k_2}^{(e_2)} ... psi_{n,k_n}^{(e_n)}

struct Part {
  int r = 0;
  int epsilon = 0;
  int k = 0;
  Word letters;
};

struct PartsDecomposition {
  std::vector<Part> parts;

  Word concatenated() const {
    Word w;
    for (const Part& p : parts) w.insert(w.end(), p.letters.begin(), p.letters.end());
    return w;
  }
  const Part& part(int r) const { return parts.at(r - 1); }
};

/// Template string psi_{r,k}^{(epsilon)} for the family.
inline Word part_template(const WeylFamily& fam, int r, int epsilon, int k) {
  const int n = fam.rank;
  if (r < 1 || r > n) throw std::out_of_range("part index out of range");
  if (k < n - r + 1 || k > n) throw std::out_of_range("k_r out of range");
  Word w;
  if (epsilon == 0) return w;
  if (epsilon != 1 && epsilon != 2) throw std::invalid_argument("epsilon must be 0, 1 or 2");
  switch (fam.family) {
    case Family::A:
      for (int i = r; i >= n - k + 1; --i) w.push_back(i);
      break;
    case Family::C:
      if (epsilon == 1) {
        for (int i = n - r + 1; i <= k; ++i) w.push_back(i);
      } else {
        for (int i = n - r + 1; i <= n; ++i) w.push_back(i);
        for (int i = n - 1; i >= k; --i) w.push_back(i);
      }
      break;
    case Family::D:
      if (epsilon == 1) {
        for (int i = n - r + 1; i <= k; ++i) w.push_back(i);
      } else {
        for (int i = n - r + 1; i <= n - 1; ++i) w.push_back(i);
        w.push_back(n);
        for (int i = n - 2; i >= k; --i) w.push_back(i);
      }
      break;
  }
  return w;
}

/// Candidate parts for index r in search order: epsilon 2, 1, 0 with k
/// descending; a string already offered for this r is skipped.
inline std::vector<Part> part_candidates(const WeylFamily& fam, int r) {
  const int n = fam.rank;
  std::vector<Part> out;
  std::set<Word> offered;
  for (int eps : {2, 1}) {
    for (int k = n; k >= n - r + 1; --k) {
      Word w = part_template(fam, r, eps, k);
      if (offered.insert(w).second) out.push_back(Part{r, eps, k, std::move(w)});
    }
  }
  if (offered.insert(Word{}).second) out.push_back(Part{r, 0, n, Word{}});
  return out;
}

/// Finds the parts decomposition of the element represented by `word`
/// (depth-first template matching with backtracking). Every prefix of parts
/// must be a reduced left factor of w, so lengths add up exactly.
inline PartsDecomposition parts_decompose(const WeylGroup& g, const Word& word) {
  const WeylFamily& fam = g.family();
  const SignedPerm target = g.element(word);
  const int total = g.length(target);
  std::vector<std::vector<Part>> cands;
  for (int r = 1; r <= fam.rank; ++r) cands.push_back(part_candidates(fam, r));

  PartsDecomposition result;
  // prefix element and its length at each depth
  std::vector<SignedPerm> prefix{g.identity()};
  std::vector<int> prefix_len{0};
  std::vector<std::size_t> choice(fam.rank, 0);
  int depth = 0;
  while (depth >= 0) {
    if (depth == fam.rank) {
      if (prefix.back() == target) {
        for (int r = 0; r < fam.rank; ++r) result.parts.push_back(cands[r][choice[r] - 1]);
        return result;
      }
      --depth;
      prefix.pop_back();
      prefix_len.pop_back();
      continue;
    }
    bool advanced = false;
    while (choice[depth] < cands[depth].size()) {
      const Part& p = cands[depth][choice[depth]++];
      SignedPerm next = prefix.back() * g.element(p.letters);
      const int len = prefix_len.back() + static_cast<int>(p.letters.size());
      if (g.length(next) != len) continue;
      // next must be a left factor of the target: l(next^{-1} target) = l(target) - l(next)
      if (g.length(next.inverse() * target) != total - len) continue;
      prefix.push_back(std::move(next));
      prefix_len.push_back(len);
      ++depth;
      if (depth < fam.rank) choice[depth] = 0;
      advanced = true;
      break;
    }
    if (!advanced) {
      choice[depth] = 0;
      --depth;
      if (depth >= 0) {
        prefix.pop_back();
        prefix_len.pop_back();
      }
    }
  }
  throw std::logic_error("no parts decomposition found for " + word_str(word) + " in " + fam.name());
}

}  // namespace qgk
