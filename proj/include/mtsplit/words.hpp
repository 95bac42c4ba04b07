// Free-group words over a named basis: parsing, free and cyclic reduction,
// inversion, conjugacy testing, alphabet restriction.

#ifndef MTSPLIT_WORDS_HPP_
#define MTSPLIT_WORDS_HPP_

#include <algorithm>
#include <cstdlib>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mtsplit {

/// Name of the stable letter of a mapping torus; never a basis letter.
inline constexpr std::string_view kStableLetter = "t";

inline bool is_identifier(std::string_view s) {
  if (s.empty())
    return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(s[0]))
    return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

/// Ordered list of distinct generator names.
///
/// A Basis built through the public constructor is a basis of a free group F
/// and rejects the reserved name `t`. Presentations of the mapping torus
/// need alphabets that do contain `t`; those are built with alphabet().
class Basis {
public:
  Basis() = default;
  explicit Basis(std::vector<std::string> letters) : Basis(std::move(letters), true) {}

  /// Alphabet of arbitrary distinct identifiers (the stable letter allowed).
  static Basis alphabet(std::vector<std::string> letters) {
    return Basis(std::move(letters), false);
  }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::string& name(int i) const { return letters_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& letters() const { return letters_; }

  int index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(std::string_view name) const { return index_of(name) >= 0; }

  /// Copy with `extra` appended.
  Basis extended(const std::vector<std::string>& extra, bool allow_stable = false) const {
    std::vector<std::string> all = letters_;
    all.insert(all.end(), extra.begin(), extra.end());
    return Basis(std::move(all), !allow_stable);
  }

  bool operator==(const Basis& o) const { return letters_ == o.letters_; }

private:
  Basis(std::vector<std::string> letters, bool reject_stable) : letters_(std::move(letters)) {
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      const std::string& s = letters_[i];
      if (!is_identifier(s))
        throw InvalidArgument("invalid generator name '" + s + "'");
      if (reject_stable && s == kStableLetter)
        throw InvalidArgument("'t' is reserved for the stable letter");
      if (!index_.emplace(s, static_cast<int>(i)).second)
        throw InvalidArgument("duplicate generator name '" + s + "'");
    }
  }

  std::vector<std::string> letters_;
  std::unordered_map<std::string, int> index_;
};

struct Syllable {
  int letter;
  long exp;
  bool operator==(const Syllable&) const = default;
  auto operator<=>(const Syllable&) const = default;
};

using LetterSet = std::set<int>;

/// Freely reduced word stored as run-length syllables (letter, exponent).
/// The empty word is the identity.
class Word {
public:
  Word() = default;
  explicit Word(const std::vector<Syllable>& syllables) {
    for (const Syllable& s : syllables)
      push(s);
  }

  static Word letter(int i, long exp = 1) { return Word(std::vector<Syllable>{{i, exp}}); }

  /// Build from signed letters: +(i+1) is x_i, -(i+1) is x_i^{-1}.
  static Word from_letters(std::span<const int> seq) {
    Word w;
    for (int c : seq)
      w.push({std::abs(c) - 1, c > 0 ? 1 : -1});
    return w;
  }

  const std::vector<Syllable>& syllables() const { return syl_; }
  bool is_identity() const { return syl_.empty(); }
  std::size_t syllable_count() const { return syl_.size(); }

  /// Letter length, sum of |exponent|.
  long length() const {
    long n = 0;
    for (const Syllable& s : syl_)
      n += std::labs(s.exp);
    return n;
  }

  std::vector<int> signed_letters() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(length()));
    for (const Syllable& s : syl_)
      for (long j = 0; j < std::labs(s.exp); ++j)
        out.push_back(s.exp > 0 ? s.letter + 1 : -(s.letter + 1));
    return out;
  }

  /// In-place right multiplication with free cancellation at the seam.
  Word& operator*=(const Word& o) {
    for (const Syllable& s : o.syl_)
      push(s);
    return *this;
  }

  /// Appends x^e, cancelling against the tail.
  void push(Syllable s) {
    if (s.exp == 0)
      return;
    if (!syl_.empty() && syl_.back().letter == s.letter) {
      syl_.back().exp += s.exp;
      if (syl_.back().exp == 0)
        syl_.pop_back();
      return;
    }
    syl_.push_back(s);
  }

  int max_letter() const {
    int m = -1;
    for (const Syllable& s : syl_)
      m = std::max(m, s.letter);
    return m;
  }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

private:
  std::vector<Syllable> syl_;
};

inline Word concat(const Word& u, const Word& v) {
  Word r = u;
  r *= v;
  return r;
}
inline Word operator*(const Word& u, const Word& v) { return concat(u, v); }

inline Word invert(const Word& u) {
  const auto& s = u.syllables();
  std::vector<Syllable> r;
  r.reserve(s.size());
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    r.push_back({it->letter, -it->exp});
  return Word(r);
}

inline Word power(const Word& u, long n) {
  Word base = n < 0 ? invert(u) : u;
  Word r;
  for (long i = 0; i < std::labs(n); ++i)
    r *= base;
  return r;
}

struct CyclicReduction {
  Word core;
  Word conjugator;
};

/// u = conjugator * core * conjugator^{-1} with core cyclically reduced.
inline CyclicReduction cyclic_reduce(const Word& u) {
  std::vector<Syllable> s = u.syllables();
  std::size_t lo = 0, hi = s.size();
  Word conj;
  while (hi - lo >= 2 && s[lo].letter == s[hi - 1].letter &&
         (s[lo].exp > 0) != (s[hi - 1].exp > 0)) {
    long c = std::min(std::labs(s[lo].exp), std::labs(s[hi - 1].exp));
    long sign = s[lo].exp > 0 ? 1 : -1;
    conj.push({s[lo].letter, sign * c});
    s[lo].exp -= sign * c;
    s[hi - 1].exp += sign * c;
    if (s[hi - 1].exp == 0)
      --hi;
    if (s[lo].exp == 0)
      ++lo;
  }
  return {Word(std::vector<Syllable>(s.begin() + static_cast<long>(lo),
                                     s.begin() + static_cast<long>(hi))),
          conj};
}

/// Conjugacy in F: cyclic cores must be cyclic rotations of one another.
inline bool is_conjugate(const Word& u, const Word& v) {
  std::vector<int> a = cyclic_reduce(u).core.signed_letters();
  std::vector<int> b = cyclic_reduce(v).core.signed_letters();
  if (a.size() != b.size())
    return false;
  if (a.empty())
    return true;
  std::vector<int> aa = a;
  aa.insert(aa.end(), a.begin(), a.end());
  return std::search(aa.begin(), aa.end(), b.begin(), b.end()) != aa.end();
}

inline bool uses_only(const Word& u, const LetterSet& subset) {
  return std::all_of(u.syllables().begin(), u.syllables().end(),
                     [&](const Syllable& s) { return subset.count(s.letter) != 0; });
}

/// Bit-exact token syntax: `name` or `name^<signed int>`, whitespace separated.
inline Word parse_word(std::string_view text, const Basis& basis) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::string name = tok;
    long exp = 1;
    if (auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      std::string e = tok.substr(caret + 1);
      std::size_t pos = 0;
      bool ok = !e.empty();
      if (ok) {
        try {
          exp = std::stol(e, &pos);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || pos != e.size() || e.front() == ' ')
        throw ParseError("malformed token '" + tok + "'");
      if (exp == 0)
        throw ParseError("zero exponent in token '" + tok + "'");
    }
    if (!is_identifier(name))
      throw ParseError("malformed token '" + tok + "'");
    int idx = basis.index_of(name);
    if (idx < 0)
      throw ParseError("unknown letter '" + name + "'");
    w.push({idx, exp});
  }
  return w;
}

/// Inverse of parse_word; the identity formats as the empty string.
inline std::string format_word(const Word& w, const Basis& basis) {
  std::string out;
  for (const Syllable& s : w.syllables()) {
    if (!out.empty())
      out += ' ';
    out += basis.name(s.letter);
    if (s.exp != 1)
      out += '^' + std::to_string(s.exp);
  }
  return out;
}

/// Human-facing form: "1" for the identity.
inline std::string display_word(const Word& w, const Basis& basis) {
  return w.is_identity() ? "1" : format_word(w, basis);
}

inline LetterSet letter_set(std::span<const int> letters) {
  return LetterSet(letters.begin(), letters.end());
}

}  // namespace mtsplit

#endif  // MTSPLIT_WORDS_HPP_
