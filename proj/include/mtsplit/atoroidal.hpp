// Bounded checks on the hyperbolicity side: scanning for periodic conjugacy
// classes, and the single-letter extension psi(a) = a w with its word-level
// and abelianized conditions.

#ifndef MTSPLIT_ATOROIDAL_HPP_
#define MTSPLIT_ATOROIDAL_HPP_

#include <algorithm>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "intlinalg.hpp"
#include "morphisms.hpp"
#include "words.hpp"

namespace mtsplit {

/// phi^power(w) is conjugate to w, and power is minimal for w.
struct Obstruction {
  Word w;
  long power = 0;
  bool operator==(const Obstruction&) const = default;
};

struct ScanReport {
  int max_len = 0;
  long max_power = 0;
  std::size_t classes_scanned = 0;  // orbit representatives tested
  std::vector<Obstruction> obstructions;
};

namespace detail {

// x_i -> 2i, x_i^{-1} -> 2i+1
inline std::vector<int> letter_codes(const Word& w) {
  std::vector<int> out;
  for (int c : w.signed_letters())
    out.push_back(c > 0 ? 2 * (c - 1) : 2 * (-c - 1) + 1);
  return out;
}

inline bool shortlex_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    return a.size() < b.size();
  return a < b;
}

inline std::vector<int> least_rotation(std::vector<int> v) {
  std::vector<int> best = v;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::rotate(v.begin(), v.begin() + 1, v.end());
    if (v < best)
      best = v;
  }
  return best;
}

inline Word from_codes(const std::vector<int>& codes) {
  std::vector<int> s;
  for (int c : codes)
    s.push_back(c % 2 == 0 ? c / 2 + 1 : -(c / 2 + 1));
  return Word::from_letters(s);
}

}  // namespace detail

/// Least representative among all rotations of the cyclic core of w and of
/// its inverse. Identity for the identity.
inline Word orbit_key(const Word& w) {
  Word core = cyclic_reduce(w).core;
  auto a = detail::least_rotation(detail::letter_codes(core));
  auto b = detail::least_rotation(detail::letter_codes(invert(core)));
  return detail::from_codes(std::min(a, b));
}

/// Smallest M in [1, max_power] with phi^M(w) conjugate to w.
inline std::optional<long> periodic_power(const GroupMorphism& phi, const Word& w, long max_power) {
  Word u = w;
  const std::size_t len = cyclic_reduce(w).core.length();
  for (long m = 1; m <= max_power; ++m) {
    u = apply(phi, u);
    if (cyclic_reduce(u).core.length() == len && is_conjugate(u, w))
      return m;
  }
  return std::nullopt;
}

/// Every conjugacy class (up to inversion) of cyclic length 1..max_len whose
/// class is fixed by some phi^M, 1 <= M <= max_power, with minimal M.
/// An empty list says nothing beyond these bounds.
inline ScanReport toroidal_scan(const GroupMorphism& phi, int max_len, long max_power) {
  ScanReport report;
  report.max_len = max_len;
  report.max_power = max_power;
  const int r = static_cast<int>(phi.rank());
  if (max_len <= 0 || max_power <= 0 || r == 0)
    return report;
  const int codes = 2 * r;

  struct Part {
    std::size_t scanned = 0;
    std::vector<std::pair<std::vector<int>, long>> found;
  };

  // Canonical words start with their least code, so worker c only sees
  // sequences beginning with code c.
  auto worker = [&](int first) {
    Part part;
    std::vector<int> seq{first};
    auto visit = [&] {
      std::vector<int> cyc = seq;
      if (cyc.size() > 1 && (cyc.front() ^ 1) == cyc.back())
        return;
      Word w = detail::from_codes(cyc);
      if (!(orbit_key(w) == w))
        return;
      ++part.scanned;
      if (auto m = periodic_power(phi, w, max_power))
        part.found.emplace_back(cyc, *m);
    };
    auto rec = [&](auto&& self) -> void {
      visit();
      if (static_cast<int>(seq.size()) == max_len)
        return;
      for (int c = first; c < codes; ++c) {
        if ((seq.back() ^ 1) == c)
          continue;
        seq.push_back(c);
        self(self);
        seq.pop_back();
      }
    };
    rec(rec);
    return part;
  };

  std::vector<std::future<Part>> jobs;
  for (int c = 0; c < codes; ++c)
    jobs.push_back(std::async(std::launch::async, worker, c));
  std::vector<std::pair<std::vector<int>, long>> all;
  for (auto& j : jobs) {
    Part p = j.get();
    report.classes_scanned += p.scanned;
    all.insert(all.end(), p.found.begin(), p.found.end());
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return detail::shortlex_less(a.first, b.first); });
  for (auto& [codes_, m] : all)
    report.obstructions.push_back({detail::from_codes(codes_), m});
  return report;
}

/// psi on F * <a> with psi|F = phi1 and psi(a) = a w.
inline GroupMorphism extend_by_letter(const GroupMorphism& phi1, const Word& w, const std::string& name = "a") {
  if (phi1.basis().contains(name) || name == kStableLetter)
    throw InvalidArgument("extend_by_letter: letter '" + name + "' already in use");
  if (w.max_letter() >= static_cast<int>(phi1.rank()))
    throw BasisMismatch("extend_by_letter: w uses a letter outside the basis");
  Basis basis = phi1.basis().extended({name});
  const int a = static_cast<int>(phi1.rank());
  std::vector<Word> imgs = phi1.images();
  imgs.push_back(Word::letter(a) * w);
  GroupMorphism psi(basis, imgs);
  if (phi1.has_inverse()) {
    std::vector<Word> inv = phi1.inverse_witness().images();
    inv.push_back(Word::letter(a) * invert(apply(phi1.inverse_witness(), w)));
    psi = psi.with_inverse(GroupMorphism(basis, inv));
    if (!verify_automorphism(psi))
      throw Error("extend_by_letter: derived inverse failed verification");
  }
  return psi;
}

/// w phi(w) ... phi^{k-1}(w)
inline Word orbit_product(const GroupMorphism& phi, const Word& w, int k) {
  Word out, cur = w;
  for (int j = 0; j < k; ++j) {
    out *= cur;
    cur = apply(phi, cur);
  }
  return out;
}

/// All reduced words of length <= max_len, shortlex in the code order.
inline std::vector<Word> enumerate_reduced(std::size_t rank, int max_len) {
  std::vector<Word> out{Word()};
  std::vector<std::vector<int>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : layer)
      for (int c = 0; c < static_cast<int>(2 * rank); ++c) {
        if (!s.empty() && (s.back() ^ 1) == c)
          continue;
        auto t = s;
        t.push_back(c);
        next.push_back(std::move(t));
      }
    for (const auto& s : next)
      out.push_back(detail::from_codes(s));
    layer = std::move(next);
  }
  return out;
}

struct SplitexWitness {
  int k = 0;
  Word v;
};

/// First (k, v), k ascending then v shortlex, with
/// w phi(w) ... phi^{k-1}(w) = v phi^k(v^{-1}). nullopt: none within bounds.
inline std::optional<SplitexWitness> check_splitex_direct(const GroupMorphism& phi, const Word& w, int k_max,
                                                          int v_len_max) {
  const std::vector<Word> vs = enumerate_reduced(phi.rank(), v_len_max);
  GroupMorphism pk = GroupMorphism::identity(phi.basis()).without_inverse();
  for (int k = 1; k <= k_max; ++k) {
    pk = compose(phi.without_inverse(), pk);
    const Word lhs = orbit_product(phi, w, k);
    for (const Word& v : vs)
      if (v * apply(pk, invert(v)) == lhs)
        return SplitexWitness{k, v};
  }
  return std::nullopt;
}

struct AbelianVerdict {
  int k = 0;
  bool obstructed = false;
  std::optional<IntVector> preimage;  // y with (I - A^k) y = S_k [w] when inconclusive
};

/// OBSTRUCTED at k: S_k [w] is not in the image of I - A^k, so the word
/// equation has no solution v for that k.
inline std::vector<AbelianVerdict> check_splitex_abelian(const GroupMorphism& phi, const Word& w, int k_max) {
  const std::size_t n = phi.rank();
  const IntMatrix A = abelianization_matrix(phi);
  const IntVector e = exponent_vector(w, n);
  std::vector<AbelianVerdict> out;
  IntMatrix Ak = IntMatrix::identity(n), S(n, n);
  for (int k = 1; k <= k_max; ++k) {
    S = S + Ak;
    Ak = Ak * A;
    AbelianVerdict v;
    v.k = k;
    v.preimage = solve_integer(IntMatrix::identity(n) - Ak, S * e);
    v.obstructed = !v.preimage.has_value();
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace mtsplit

#endif  // MTSPLIT_ATOROIDAL_HPP_
