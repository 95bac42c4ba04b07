// Splittings of mapping tori over Z: certificates for the four explicit case
// templates, the template verifier, the splitting emitter and its checker,
// and the congruence arithmetic of the two cases that are only outlined.
//
// Case letters:
//   A  HNN extension, t elliptic
//   B  HNN extension, t hyperbolic with translation distance 1
//   D  amalgamated product, t elliptic
//   E  amalgamated product, two vertex orbits of sizes m < n, n = 1 mod m
//
// Certificates describe phi in an adapted basis: every factor F_V, F_{t^i W}
// is spanned by a literal subset of basis letters. Finding such a basis for
// an arbitrary phi is not attempted.

#ifndef MTSPLIT_SPLITTING_HPP_
#define MTSPLIT_SPLITTING_HPP_

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "detail/folding.hpp"
#include "error.hpp"
#include "morphisms.hpp"
#include "torus.hpp"
#include "words.hpp"

namespace mtsplit {

using Block = std::vector<int>;

/// HNN, elliptic t. loops[i] = a_i, i = 0..k-1.
struct CaseA {
  int k = 1;
  Block v_letters;
  Block loops;
};

/// HNN, distance 1. blocks[i] spans F_{t^i V}; loops[j] = a_{m-1+j}, j = 0..(k-1)m.
struct CaseB {
  int m = 2, k = 1;
  std::vector<Block> blocks;
  Block loops;
};

/// Amalgam, elliptic t. w_blocks[i] spans F_{t^i W}; loops[j] = a_{n+j}, j = 0..(k-1)n-1.
struct CaseD {
  int n = 1, k = 1;
  Block v_letters;
  std::vector<Block> w_blocks;
  Block loops;
};

/// Amalgam with m < n coprime, n = 1 mod m. loops[j] = a_{n+m-1+j}, up to a_{kmn-1}.
struct CaseE {
  int m = 2, n = 3, k = 1;
  std::vector<Block> v_blocks, w_blocks;
  Block loops;
};

using SplittingCertificate = std::variant<CaseA, CaseB, CaseD, CaseE>;

enum class CaseTag { A, B, D, E };

inline CaseTag case_of(const SplittingCertificate& c) { return static_cast<CaseTag>(c.index()); }

inline char case_letter(CaseTag t) {
  switch (t) {
  case CaseTag::A: return 'A';
  case CaseTag::B: return 'B';
  case CaseTag::D: return 'D';
  case CaseTag::E: return 'E';
  }
  return '?';
}

inline int mod_floor(long a, long m) { return static_cast<int>(((a % m) + m) % m); }

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok)
    throw InvalidArgument("certificate: " + what);
}

inline void check_partition(const Basis& basis, const std::vector<const Block*>& parts) {
  std::vector<int> seen(basis.size(), 0);
  for (const Block* b : parts)
    for (int x : *b) {
      require(x >= 0 && x < static_cast<int>(basis.size()), "letter outside basis");
      require(seen[static_cast<std::size_t>(x)]++ == 0, "letter '" + basis.name(x) + "' listed twice");
    }
  for (std::size_t i = 0; i < seen.size(); ++i)
    require(seen[i] == 1, "basis letter '" + basis.name(static_cast<int>(i)) + "' not covered");
}

inline void check_blocks(const std::vector<Block>& blocks, std::size_t count, const char* what) {
  require(blocks.size() == count, std::string("expected ") + std::to_string(count) + " " + what);
  for (const Block& b : blocks)
    require(b.size() == blocks.front().size(), std::string(what) + " must have equal sizes");
}

}  // namespace detail

/// Structural invariants: letters partition the basis, counts and arithmetic
/// side conditions match the case. Throws InvalidArgument.
inline void validate_certificate(const Basis& basis, const SplittingCertificate& cert) {
  using detail::require;
  std::vector<const Block*> parts;
  if (const auto* a = std::get_if<CaseA>(&cert)) {
    require(a->k >= 1, "k >= 1");
    require(static_cast<int>(a->loops.size()) == a->k, "case A needs k loop letters");
    parts = {&a->v_letters, &a->loops};
  } else if (const auto* b = std::get_if<CaseB>(&cert)) {
    require(b->m >= 2 && b->k >= 1, "case B needs m >= 2, k >= 1");
    detail::check_blocks(b->blocks, static_cast<std::size_t>(b->m), "vertex blocks");
    require(static_cast<int>(b->loops.size()) == (b->k - 1) * b->m + 1,
            "case B needs (k-1)m+1 loop letters");
    for (const Block& x : b->blocks)
      parts.push_back(&x);
    parts.push_back(&b->loops);
  } else if (const auto* d = std::get_if<CaseD>(&cert)) {
    require(d->n >= 1 && d->k >= 1, "case D needs n >= 1, k >= 1");
    detail::check_blocks(d->w_blocks, static_cast<std::size_t>(d->n), "W blocks");
    require(static_cast<int>(d->loops.size()) == (d->k - 1) * d->n, "case D needs (k-1)n loop letters");
    parts.push_back(&d->v_letters);
    for (const Block& x : d->w_blocks)
      parts.push_back(&x);
    parts.push_back(&d->loops);
  } else if (const auto* e = std::get_if<CaseE>(&cert)) {
    require(e->m >= 2 && e->m < e->n && e->k >= 1, "case E needs 2 <= m < n, k >= 1");
    require(std::gcd(e->m, e->n) == 1, "m and n must be coprime");
    require(e->n % e->m == 1, "case E needs n = 1 mod m");
    detail::check_blocks(e->v_blocks, static_cast<std::size_t>(e->m), "V blocks");
    detail::check_blocks(e->w_blocks, static_cast<std::size_t>(e->n), "W blocks");
    require(static_cast<int>(e->loops.size()) == e->k * e->m * e->n - e->n - e->m + 1,
            "case E needs kmn-n-m+1 loop letters");
    for (const Block& x : e->v_blocks)
      parts.push_back(&x);
    for (const Block& x : e->w_blocks)
      parts.push_back(&x);
    parts.push_back(&e->loops);
  }
  detail::check_partition(basis, parts);
}

/// Words extracted from phi's images; never supplied by the user.
struct WitnessSet {
  Word v;
  Word w;
  std::optional<Word> a;  // distinguished loop letter (cases B, D with k > 1, E)
  std::optional<Word> x;  // case E conjugator of F_W
  bool operator==(const WitnessSet&) const = default;
};

struct Rejection {
  std::string clause;  // e.g. "A.last"
  int letter = -1;     // offending basis letter, -1 if none
  Word word;           // offending reduced word
  std::string message;
};

struct VerifyResult {
  std::optional<WitnessSet> witnesses;
  Rejection rejection;
  bool accepted() const { return witnesses.has_value(); }
};

namespace detail {

struct Verifier {
  const GroupMorphism& phi;
  VerifyResult result;

  bool fail(std::string clause, int letter, Word word, std::string message) {
    result.rejection = {std::move(clause), letter, std::move(word), std::move(message)};
    return false;
  }

  Word img(int x) const { return phi.image(x); }

  bool shift(const Block& from, const Block& to, const std::string& clause) {
    LetterSet target = letter_set(to);
    for (int x : from)
      if (!uses_only(img(x), target))
        return fail(clause, x, img(x), "image leaves the next vertex factor");
    return true;
  }

  // c * phi(x) * c^{-1} must lie in F(to) for every x in from.
  bool wrap(const Block& from, const Block& to, const Word& c, const std::string& clause) {
    LetterSet target = letter_set(to);
    for (int x : from) {
      Word u = c * img(x) * invert(c);
      if (!uses_only(u, target))
        return fail(clause, x, u, "conjugated image leaves the base vertex factor");
    }
    return true;
  }

  bool invariant_factor(const Block& v, const std::string& clause) {
    LetterSet set = letter_set(v);
    for (int x : v) {
      if (!uses_only(img(x), set))
        return fail(clause, x, img(x), "factor not preserved");
      Word back = phi.inverse_witness().image(x);
      if (!uses_only(back, set))
        return fail(clause + "-inverse", x, back, "inverse witness does not preserve the factor");
    }
    return true;
  }

  bool expect(int letter, const Word& want, const std::string& clause) {
    if (!(img(letter) == want))
      return fail(clause, letter, img(letter), "image does not match the template");
    return true;
  }

  // u = w v with w over `left` and v over `right`.
  bool split_wv(const Word& u, const Block& left, const Block& right, int letter,
                const std::string& clause, WitnessSet& out) {
    LetterSet l = letter_set(left), r = letter_set(right);
    const auto& s = u.syllables();
    std::size_t cut = 0;
    while (cut < s.size() && l.count(s[cut].letter))
      ++cut;
    Word w(std::vector<Syllable>(s.begin(), s.begin() + static_cast<long>(cut)));
    Word v(std::vector<Syllable>(s.begin() + static_cast<long>(cut), s.end()));
    if (!uses_only(v, r))
      return fail(clause, letter, u, "last loop image does not reduce to w v");
    out.w = w;
    out.v = v;
    return true;
  }

  bool run(const CaseA& c) {
    if (!invariant_factor(c.v_letters, "A.factor"))
      return false;
    for (int i = 0; i + 1 < c.k; ++i)
      if (!expect(c.loops[i], Word::letter(c.loops[i + 1]), "A.shift"))
        return false;
    const int last = c.loops.back(), a0 = c.loops.front();
    const Word u = img(last);
    const auto& s = u.syllables();
    int pos = -1;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].letter == a0) {
        if (pos >= 0 || s[i].exp != 1)
          return fail("A.last", last, u, "a_0 must occur exactly once with exponent +1");
        pos = static_cast<int>(i);
      }
    if (pos < 0)
      return fail("A.last", last, u, "a_0 does not occur");
    WitnessSet ws;
    ws.w = Word(std::vector<Syllable>(s.begin(), s.begin() + pos));
    ws.v = Word(std::vector<Syllable>(s.begin() + pos + 1, s.end()));
    LetterSet v = letter_set(c.v_letters);
    if (!uses_only(ws.w, v) || !uses_only(ws.v, v))
      return fail("A.last", last, u, "w and v must lie in F_V");
    result.witnesses = ws;
    return true;
  }

  bool run(const CaseB& c) {
    const int m = c.m;
    for (int i = 0; i + 1 < m; ++i)
      if (!shift(c.blocks[i], c.blocks[i + 1], "B.block-shift"))
        return false;
    const int a = c.loops.front();
    if (!wrap(c.blocks[m - 1], c.blocks[0], Word::letter(a), "B.block-wrap"))
      return false;
    const int top = c.k * m - 1;
    WitnessSet ws;
    ws.a = Word::letter(a);
    for (std::size_t j = 0; j < c.loops.size(); ++j) {
      const int i = m - 1 + static_cast<int>(j);
      const int ai = c.loops[j];
      if (i == top) {
        const Word u = img(ai);
        const auto& s = u.syllables();
        if (s.empty() || !(s.back() == Syllable{a, 1}))
          return fail("B.last", ai, u, "image must end in a_{m-1}");
        ws.v = Word(std::vector<Syllable>(s.begin(), s.end() - 1));
        if (!uses_only(ws.v, letter_set(c.blocks[0])))
          return fail("B.last", ai, u, "v must lie in F_V");
        continue;
      }
      const Word next = Word::letter(c.loops[j + 1]);
      const int r = mod_floor(i, m);
      Word want = r < m - 2    ? next
                  : r == m - 2 ? Word::letter(a, -1) * next
                               : next * Word::letter(a);
      if (!expect(ai, want, "B.loop"))
        return false;
    }
    result.witnesses = ws;
    return true;
  }

  bool run(const CaseD& c) {
    const int n = c.n, k = c.k;
    if (!invariant_factor(c.v_letters, "D.factor"))
      return false;
    for (int i = 0; i + 1 < n; ++i)
      if (!shift(c.w_blocks[i], c.w_blocks[i + 1], "D.block-shift"))
        return false;
    const Word an = k > 1 ? Word::letter(c.loops.front()) : Word();
    if (!wrap(c.w_blocks[n - 1], c.w_blocks[0], an, "D.block-wrap"))
      return false;
    WitnessSet ws;
    if (k == 1) {
      result.witnesses = ws;
      return true;
    }
    ws.a = an;
    for (std::size_t j = 0; j + 1 < c.loops.size(); ++j)
      if (!expect(c.loops[j], Word::letter(c.loops[j + 1]), "D.loop"))
        return false;
    // a_n a_{2n} ... a_{(k-1)n} phi(a_{kn-1}) = w v
    Word u;
    for (int j = 1; j < k; ++j)
      u *= Word::letter(c.loops[static_cast<std::size_t>((j - 1) * n)]);
    u *= img(c.loops.back());
    if (!split_wv(u, c.w_blocks[0], c.v_letters, c.loops.back(), "D.last", ws))
      return false;
    result.witnesses = ws;
    return true;
  }

  bool run(const CaseE& c) {
    const int m = c.m, n = c.n, k = c.k, q = n / m;
    const int first = n + m - 1, top = k * m * n - 1;
    auto loop = [&](int i) { return c.loops.at(static_cast<std::size_t>(i - first)); };
    for (int i = 0; i + 1 < m; ++i)
      if (!shift(c.v_blocks[i], c.v_blocks[i + 1], "E.vblock-shift"))
        return false;
    for (int i = 0; i + 1 < n; ++i)
      if (!shift(c.w_blocks[i], c.w_blocks[i + 1], "E.wblock-shift"))
        return false;
    const int a = loop(first);
    const Word aw = Word::letter(a);
    WitnessSet ws;
    ws.a = aw;
    for (int i = first; i <= top; ++i) {
      if (i == top) {
        // a_{(km-1)n}^{-1} ... a_{2n}^{-1} w v a^{-1}
        Word lead;
        for (int j = k * m - 1; j >= 2; --j)
          lead *= Word::letter(loop(j * n), -1);
        Word u = invert(lead) * img(loop(i)) * aw;
        if (!split_wv(u, c.w_blocks[0], c.v_blocks[0], loop(i), "E.last", ws))
          return false;
        continue;
      }
      const Word next = Word::letter(loop(i + 1));
      Word want = mod_floor(i, m) == m - 1       ? next * invert(aw)
                  : mod_floor(i - n, m) == m - 1 ? aw * next
                                                 : next;
      if (!expect(loop(i), want, "E.loop"))
        return false;
    }
    if (!wrap(c.v_blocks[m - 1], c.v_blocks[0], invert(aw), "E.vblock-wrap"))
      return false;
    // x = phi(a^{-1}) phi^{m+1}(a^{-1}) ... phi^{(q-1)m+1}(a^{-1})
    Word x;
    for (int j = 0; j < q; ++j)
      x *= apply_power(phi, invert(aw), static_cast<long>(j) * m + 1);
    ws.x = x;
    if (!wrap(c.w_blocks[n - 1], c.w_blocks[0], x, "E.wblock-wrap"))
      return false;
    result.witnesses = ws;
    return true;
  }
};

}  // namespace detail

/// Accepts iff phi matches the certificate's case template exactly after
/// free reduction; the witnesses v, w (and a, x) are extracted on the way.
inline VerifyResult verify_certificate(const GroupMorphism& phi, const SplittingCertificate& cert) {
  validate_certificate(phi.basis(), cert);
  detail::Verifier ver{phi, {}};
  if (!verify_automorphism(phi)) {
    ver.fail("automorphism", -1, Word(), "inverse witness does not invert phi");
    return ver.result;
  }
  std::visit([&](const auto& c) { ver.run(c); }, cert);
  return ver.result;
}

// ---------------------------------------------------------------------------
// Emission

enum class SplitKind { HNN, Amalgam };

/// lhs = rhs (vertex relations) or lhs ~ rhs (edge identification).
struct Relation {
  Word lhs, rhs;
};

struct VertexGroup {
  Block factor;     // letters spanning the free-group part
  int stable = -1;  // letter acting on the factor by conjugation
  std::vector<Relation> relations;
};

/// A splitting of M_phi over Z written over a new generating alphabet whose
/// letters are anchored in M_phi.
///
/// HNN: edge_conjugator * edge.lhs * edge_conjugator^{-1} = edge.rhs, the
/// conjugator being a word in the stable letter hnn_stable.
struct SplittingDescription {
  SplitKind kind = SplitKind::HNN;
  CaseTag tag = CaseTag::A;
  Basis alphabet;
  std::vector<Word> definitions;  // per letter, over F-basis + t
  std::vector<TorusElement> anchors;
  std::vector<VertexGroup> vertices;
  Relation edge;
  int hnn_stable = -1;
  Word edge_conjugator;
  std::vector<Word> generation;  // per F letter, then t

  /// Relators of the presentation assembled from the vertex groups and edge.
  std::vector<Word> relators() const {
    std::vector<Word> out;
    for (const VertexGroup& v : vertices)
      for (const Relation& r : v.relations)
        out.push_back(r.lhs * invert(r.rhs));
    if (kind == SplitKind::Amalgam)
      out.push_back(edge.lhs * invert(edge.rhs));
    else
      out.push_back(edge_conjugator * edge.lhs * invert(edge_conjugator) * invert(edge.rhs));
    return out;
  }
};

inline TorusElement evaluate(const SplittingDescription& d, const MappingTorus& m, const Word& w) {
  TorusElement acc;
  for (const Syllable& s : w.syllables())
    acc = m.mul(acc, m.pow(d.anchors.at(static_cast<std::size_t>(s.letter)), s.exp));
  return acc;
}

inline AbelianInvariants h1_invariants(const SplittingDescription& d) {
  return relator_h1(d.alphabet.size(), d.relators());
}

namespace detail {

/// Accumulates letters of a description and translates F-words into it.
struct Emitter {
  const MappingTorus& torus;
  std::vector<std::string> names;
  std::vector<Word> defs;
  std::map<int, int> from_f;  // F letter -> description letter

  std::string fresh(const std::string& want) const {
    auto taken = [&](const std::string& s) {
      return torus.alphabet().contains(s) || std::find(names.begin(), names.end(), s) != names.end();
    };
    if (!taken(want))
      return want;
    for (int i = 1;; ++i)
      if (!taken(want + std::to_string(i)))
        return want + std::to_string(i);
  }

  int add(const std::string& name, const Word& def) {
    names.push_back(name);
    defs.push_back(def);
    return static_cast<int>(names.size()) - 1;
  }
  int add_f(int f_letter) {
    int i = add(torus.basis().name(f_letter), Word::letter(f_letter));
    from_f[f_letter] = i;
    return i;
  }
  Block add_block(const Block& b) {
    Block out;
    for (int x : b)
      out.push_back(add_f(x));
    return out;
  }
  int add_t() { return add(std::string(kStableLetter), Word::letter(torus.stable_index())); }

  /// F-word over letters already present in the description.
  Word tr(const Word& w) const {
    Word r;
    for (const Syllable& s : w.syllables()) {
      auto it = from_f.find(s.letter);
      if (it == from_f.end())
        throw InvalidArgument("emit: word leaves the vertex factors");
      r.push({it->second, s.exp});
    }
    return r;
  }

  static Word L(int i, long e = 1) { return Word::letter(i, e); }

  SplittingDescription finish(SplittingDescription d) const {
    d.alphabet = Basis::alphabet(names);
    d.definitions = defs;
    for (const Word& def : defs)
      d.anchors.push_back(torus.eval(def));
    return d;
  }

  // t^i * phi^{-i}(x) * t^{-i} with T standing for t
  Word transport(int x, int i, const Word& T) const {
    Word base = tr(torus.twist(Word::letter(x), -i));
    return power(T, i) * base * power(T, -i);
  }
};

}  // namespace detail

/// Builds the splitting displayed at the end of each case derivation.
/// Precondition: verify_certificate(phi, cert) accepted with `ws`.
inline SplittingDescription emit_splitting(const MappingTorus& torus, const SplittingCertificate& cert,
                                           const WitnessSet& ws) {
  using E = detail::Emitter;
  detail::Emitter em{torus, {}, {}, {}};
  const GroupMorphism& phi = torus.phi();
  const int tF = torus.stable_index();
  const std::size_t rank = phi.rank();
  SplittingDescription d;
  d.tag = case_of(cert);
  std::vector<Word> gen(rank + 1);

  if (const auto* c = std::get_if<CaseA>(&cert)) {
    d.kind = SplitKind::HNN;
    VertexGroup vg;
    vg.factor = em.add_block(c->v_letters);
    const int t = em.add_t();
    const int a0 = em.add_f(c->loops.front());
    vg.stable = t;
    for (int y : c->v_letters)
      vg.relations.push_back({E::L(t) * em.tr(Word::letter(y)) * E::L(t, -1), em.tr(phi.image(y))});
    d.vertices.push_back(vg);
    d.edge = {em.tr(invert(ws.w)) * E::L(t, c->k), em.tr(ws.v) * E::L(t, c->k)};
    d.hnn_stable = a0;
    d.edge_conjugator = E::L(a0, -1);
    for (int y : c->v_letters)
      gen[static_cast<std::size_t>(y)] = em.tr(Word::letter(y));
    for (int i = 0; i < c->k; ++i)
      gen[static_cast<std::size_t>(c->loops[static_cast<std::size_t>(i)])] = E::L(t, i) * E::L(a0) * E::L(t, -i);
    gen[rank] = E::L(t);
  } else if (const auto* c = std::get_if<CaseB>(&cert)) {
    d.kind = SplitKind::HNN;
    const int m = c->m, k = c->k;
    const Word a = *ws.a;
    VertexGroup vg;
    vg.factor = em.add_block(c->blocks[0]);
    const int s = em.add(em.fresh("s"), a * E::L(tF, m));
    const int t = em.add_t();
    vg.stable = s;
    for (int y : c->blocks[0])
      vg.relations.push_back({E::L(s) * em.tr(Word::letter(y)) * E::L(s, -1),
                              em.tr(a * apply_power(phi, Word::letter(y), m) * invert(a))});
    d.vertices.push_back(vg);
    d.edge = {E::L(s, k), em.tr(ws.v) * E::L(s, k)};
    d.hnn_stable = t;
    d.edge_conjugator = E::L(t);
    const Word T = E::L(t);
    for (int i = 0; i < m; ++i)
      for (int x : c->blocks[static_cast<std::size_t>(i)])
        gen[static_cast<std::size_t>(x)] = em.transport(x, i, T);
    const Word A = E::L(s) * E::L(t, -m);
    Word cur = A;
    gen[static_cast<std::size_t>(c->loops[0])] = cur;
    for (std::size_t j = 1; j < c->loops.size(); ++j) {
      const int i = m - 1 + static_cast<int>(j) - 1;  // index of the previous loop letter
      const int r = mod_floor(i, m);
      Word conj = T * cur * invert(T);
      cur = r < m - 2 ? conj : r == m - 2 ? A * conj : conj * invert(A);
      gen[static_cast<std::size_t>(c->loops[j])] = cur;
    }
    gen[rank] = T;
    (void)k;
  } else if (const auto* c = std::get_if<CaseD>(&cert)) {
    d.kind = SplitKind::Amalgam;
    const int n = c->n, k = c->k;
    const Word an = ws.a.value_or(Word());
    VertexGroup wg, vg;
    wg.factor = em.add_block(c->w_blocks[0]);
    const int s = em.add(em.fresh("s"), an * E::L(tF, n));
    wg.stable = s;
    vg.factor = em.add_block(c->v_letters);
    const int t = em.add_t();
    vg.stable = t;
    for (int y : c->w_blocks[0])
      wg.relations.push_back({E::L(s) * em.tr(Word::letter(y)) * E::L(s, -1),
                              em.tr(an * apply_power(phi, Word::letter(y), n) * invert(an))});
    for (int y : c->v_letters)
      vg.relations.push_back({E::L(t) * em.tr(Word::letter(y)) * E::L(t, -1), em.tr(phi.image(y))});
    d.vertices = {wg, vg};
    d.edge = {em.tr(invert(ws.w)) * E::L(s, k), em.tr(ws.v) * E::L(t, static_cast<long>(k) * n)};
    const Word T = E::L(t);
    for (int y : c->v_letters)
      gen[static_cast<std::size_t>(y)] = em.tr(Word::letter(y));
    for (int i = 0; i < n; ++i)
      for (int x : c->w_blocks[static_cast<std::size_t>(i)])
        gen[static_cast<std::size_t>(x)] = em.transport(x, i, T);
    Word cur = E::L(s) * E::L(t, -n);
    for (int l : c->loops) {
      gen[static_cast<std::size_t>(l)] = cur;
      cur = T * cur * invert(T);
    }
    gen[rank] = T;
  } else if (const auto* c = std::get_if<CaseE>(&cert)) {
    d.kind = SplitKind::Amalgam;
    const int m = c->m, n = c->n, k = c->k, q = n / m;
    const Word a = *ws.a, x = *ws.x;
    VertexGroup vg, wg;
    vg.factor = em.add_block(c->v_blocks[0]);
    Word rdef = invert(a) * E::L(tF, m);
    const int r = em.add(em.fresh("r"), rdef);
    vg.stable = r;
    wg.factor = em.add_block(c->w_blocks[0]);
    Word sdef = E::L(tF);
    for (int j = 0; j < q; ++j)
      sdef *= rdef;
    const int s = em.add(em.fresh("s"), sdef);
    wg.stable = s;
    for (int y : c->v_blocks[0])
      vg.relations.push_back({E::L(r) * em.tr(Word::letter(y)) * E::L(r, -1),
                              em.tr(invert(a) * apply_power(phi, Word::letter(y), m) * a)});
    for (int y : c->w_blocks[0])
      wg.relations.push_back({E::L(s) * em.tr(Word::letter(y)) * E::L(s, -1),
                              em.tr(x * apply_power(phi, Word::letter(y), n) * invert(x))});
    d.vertices = {vg, wg};
    d.edge = {em.tr(ws.v) * E::L(r, static_cast<long>(k) * n),
              em.tr(invert(ws.w)) * E::L(s, static_cast<long>(k) * m)};
    const Word T = E::L(s) * E::L(r, -q);
    const Word A = power(T, m) * E::L(r, -1);
    for (int i = 0; i < m; ++i)
      for (int y : c->v_blocks[static_cast<std::size_t>(i)])
        gen[static_cast<std::size_t>(y)] = em.transport(y, i, T);
    for (int i = 0; i < n; ++i)
      for (int y : c->w_blocks[static_cast<std::size_t>(i)])
        gen[static_cast<std::size_t>(y)] = em.transport(y, i, T);
    const int first = n + m - 1;
    Word cur = A;
    gen[static_cast<std::size_t>(c->loops[0])] = cur;
    for (std::size_t j = 1; j < c->loops.size(); ++j) {
      const int i = first + static_cast<int>(j) - 1;
      Word conj = T * cur * invert(T);
      cur = mod_floor(i, m) == m - 1       ? conj * A
            : mod_floor(i - n, m) == m - 1 ? invert(A) * conj
                                           : conj;
      gen[static_cast<std::size_t>(c->loops[j])] = cur;
    }
    gen[rank] = T;
  }
  d.generation = std::move(gen);
  return em.finish(std::move(d));
}

/// Mechanical validation of an emitted splitting against M_phi.
inline std::vector<Violation> check_splitting(const SplittingDescription& d, const MappingTorus& m) {
  std::vector<Violation> out;
  auto fmt = [&](const Word& w) { return display_word(w, d.alphabet); };
  auto ev = [&](const Word& w) { return evaluate(d, m, w); };
  for (std::size_t i = 0; i < d.definitions.size(); ++i)
    if (!(d.anchors[i] == m.eval(d.definitions[i])))
      out.push_back({"anchor", static_cast<int>(i), d.alphabet.name(static_cast<int>(i)) + " anchor mismatch"});
  auto letters_of = [&](const VertexGroup& v) {
    LetterSet s = letter_set(v.factor);
    s.insert(v.stable);
    return s;
  };
  for (std::size_t vi = 0; vi < d.vertices.size(); ++vi) {
    const VertexGroup& v = d.vertices[vi];
    LetterSet factor = letter_set(v.factor), all = letters_of(v);
    for (int f : v.factor)
      if (d.anchors[static_cast<std::size_t>(f)].n != 0)
        out.push_back({"factor", f, d.alphabet.name(f) + " is not an element of F"});
    for (std::size_t ri = 0; ri < v.relations.size(); ++ri) {
      const Relation& r = v.relations[ri];
      if (!uses_only(r.rhs, factor) || !uses_only(r.lhs, all))
        out.push_back({"vertex-letters", static_cast<int>(ri),
                       fmt(r.lhs) + " = " + fmt(r.rhs) + " leaves its vertex group"});
      TorusElement l = ev(r.lhs), rr = ev(r.rhs);
      if (!(l == rr))
        out.push_back({"vertex-relation", static_cast<int>(ri),
                       fmt(r.lhs) + " = " + fmt(r.rhs) + " fails: " + m.format(l) + " vs " + m.format(rr)});
    }
  }
  if (!d.vertices.empty()) {
    LetterSet left = letters_of(d.vertices.front());
    LetterSet right = d.kind == SplitKind::Amalgam && d.vertices.size() > 1 ? letters_of(d.vertices[1]) : left;
    if (!uses_only(d.edge.lhs, left) || !uses_only(d.edge.rhs, right))
      out.push_back({"edge-letters", 0, "edge words leave their vertex groups"});
  }
  Word lhs = d.kind == SplitKind::Amalgam ? d.edge.lhs
                                          : d.edge_conjugator * d.edge.lhs * invert(d.edge_conjugator);
  TorusElement l = ev(lhs), r = ev(d.edge.rhs);
  if (!(l == r))
    out.push_back({"edge", 0, fmt(d.edge.lhs) + " ~ " + fmt(d.edge.rhs) + " fails: " + m.format(l) + " vs " +
                                  m.format(r)});
  for (std::size_t i = 0; i < d.generation.size(); ++i) {
    TorusElement got = ev(d.generation[i]);
    if (!(got == m.atom(static_cast<int>(i))))
      out.push_back({"generation", static_cast<int>(i),
                     m.alphabet().name(static_cast<int>(i)) + " is not expressed: " + m.format(got)});
  }
  return out;
}

inline std::string format_vertex(const SplittingDescription& d, const VertexGroup& v) {
  std::string s = "⟨";
  Block letters = v.factor;
  letters.push_back(v.stable);
  for (std::size_t i = 0; i < letters.size(); ++i)
    s += (i ? ", " : "") + d.alphabet.name(letters[i]);
  for (std::size_t i = 0; i < v.relations.size(); ++i)
    s += (i ? ", " : " | ") + display_word(v.relations[i].lhs, d.alphabet) + " = " +
         display_word(v.relations[i].rhs, d.alphabet);
  return s + "⟩";
}

/// "<x, s | s x s^-1 = x> *_{s ~ t^2} <t>" (angle brackets as U+27E8/U+27E9).
inline std::string format_splitting(const SplittingDescription& d) {
  std::string edge = "*_{" + display_word(d.edge.lhs, d.alphabet) + " ~ " + display_word(d.edge.rhs, d.alphabet) + "}";
  std::string s = format_vertex(d, d.vertices.at(0)) + " " + edge;
  if (d.kind == SplitKind::Amalgam)
    s += " " + format_vertex(d, d.vertices.at(1));
  return s;
}

// ---------------------------------------------------------------------------
// Distance-1 HNN substitution

/// b_i = a_{m+i-1} a_{m+i-2} ... a_{m-1}, i = 0..(k-1)m.
inline std::vector<Word> build_b_generators(const CaseB& c) {
  std::vector<Word> b;
  Word cur;
  for (int l : c.loops) {
    cur = Word::letter(l) * cur;
    b.push_back(cur);
  }
  return b;
}

/// The expected phi(b_i) from the three-branch display.
inline Word expected_b_image(const CaseB& c, const std::vector<Word>& b, const Word& v, int i) {
  const int top = (c.k - 1) * c.m;
  if (i == top)
    return v * b[static_cast<std::size_t>(top)];
  if (mod_floor(i, c.m) == c.m - 1)
    return invert(b[0]) * b[static_cast<std::size_t>(i + 1)];
  return b[static_cast<std::size_t>(i + 1)];
}

// ---------------------------------------------------------------------------
// Congruence helpers for the outlined cases

struct CongruenceData {
  int s = 0;         // least positive s with r s = +-1 mod m
  int d = 0;         // translation distance min(s, m - s)
  int sign = 1;      // r s = sign mod m
  bool invert_t = false;  // d = m - s: replace t by t^{-1}
};

inline CongruenceData congruence_data(int m, int r) {
  if (m < 2 || r <= 1 || std::gcd(m, r) != 1)
    throw InvalidArgument("congruence_data needs m >= 2, r > 1, gcd(m, r) = 1");
  for (int s = 1; s <= m; ++s) {
    int p = mod_floor(static_cast<long>(r) * s, m);
    if (p == 1 % m || p == m - 1) {
      CongruenceData c;
      c.s = s;
      c.d = std::min(s, m - s);
      c.sign = p == 1 % m ? 1 : -1;
      c.invert_t = c.d != s;
      return c;
    }
  }
  throw InvalidArgument("congruence_data: no solution");
}

/// (initial, terminal) vertex indices of edge E_j: (v(rj), v(r(j+1))).
inline std::pair<int, int> edge_labels(int m, int r, long j) {
  if (m < 2 || r <= 1 || std::gcd(m, r) != 1)
    throw InvalidArgument("edge_labels needs m >= 2, r > 1, gcd(m, r) = 1");
  return {mod_floor(r * j, m), mod_floor(r * (j + 1), m)};
}

/// The s in (1, m) with s n = 1 mod m, for n != 1 mod m.
inline int general_amalgam_s(int m, int n) {
  if (m < 3 || std::gcd(m, n) != 1 || mod_floor(n, m) == 1)
    throw InvalidArgument("general_amalgam_s needs m >= 3, gcd(m, n) = 1, n != 1 mod m");
  for (int s = 2; s < m; ++s)
    if (mod_floor(static_cast<long>(s) * n, m) == 1)
      return s;
  throw InvalidArgument("general_amalgam_s: no s in (1, m)");
}

// ---------------------------------------------------------------------------
// Instance synthesis (test data)

struct SynthesisParams {
  int m = 2;
  int n = 3;
  int k = 1;
  int v_rank = 1;  // rank of F_V (cases A, D) or of each V block (B, E)
  int w_rank = 1;  // rank of each W block (D, E)
  int witness_len = 4;
};

struct SynthesizedInstance {
  GroupMorphism phi;  // carries a verified inverse witness
  SplittingCertificate cert;
};

namespace detail {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  int below(int n) { return n <= 0 ? 0 : static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
  bool coin() { return below(2) == 1; }

private:
  std::mt19937_64 gen_;
};

inline Word random_word(Rng& rng, const Block& letters, int max_len, bool exact = false) {
  if (letters.empty())
    return Word();
  int len = exact ? max_len : rng.below(max_len + 1);
  std::vector<int> seq;
  while (static_cast<int>(seq.size()) < len) {
    int c = letters[static_cast<std::size_t>(rng.below(static_cast<int>(letters.size())))] + 1;
    if (rng.coin())
      c = -c;
    if (!seq.empty() && seq.back() == -c)
      continue;
    seq.push_back(c);
  }
  return Word::from_letters(seq);
}

/// Images of `from` (in order) under a random isomorphism F(from) -> F(to).
inline std::vector<Word> random_iso(Rng& rng, const Block& to) {
  std::vector<Word> imgs;
  for (int y : to)
    imgs.push_back(Word::letter(y));
  const int r = static_cast<int>(imgs.size());
  for (int step = 0; r > 0 && step < 3; ++step) {
    int i = rng.below(r);
    if (r == 1 || rng.below(4) == 0) {
      imgs[static_cast<std::size_t>(i)] = invert(imgs[static_cast<std::size_t>(i)]);
      continue;
    }
    int j = rng.below(r - 1);
    if (j >= i)
      ++j;
    Word other = imgs[static_cast<std::size_t>(j)];
    if (rng.coin())
      other = invert(other);
    Word& cur = imgs[static_cast<std::size_t>(i)];
    cur = rng.coin() ? cur * other : other * cur;
  }
  return imgs;
}

struct BasisBuilder {
  std::vector<std::string> names;
  Block add(const std::string& prefix, int count) {
    Block b;
    for (int j = 0; j < count; ++j) {
      b.push_back(static_cast<int>(names.size()));
      names.push_back(prefix + std::to_string(j));
    }
    return b;
  }
  int add_one(const std::string& name) {
    names.push_back(name);
    return static_cast<int>(names.size()) - 1;
  }
};

inline void set_iso(std::vector<Word>& images, Rng& rng, const Block& from, const Block& to,
                    const Word& conj = Word()) {
  std::vector<Word> iso = random_iso(rng, to);
  for (std::size_t j = 0; j < from.size(); ++j)
    images[static_cast<std::size_t>(from[j])] = conj * iso[j] * invert(conj);
}

}  // namespace detail

/// Random phi fitting the case template, with its certificate. Deterministic
/// in (tag, params, seed).
inline SynthesizedInstance synthesize_instance(CaseTag tag, const SynthesisParams& p, std::uint64_t seed) {
  detail::Rng rng(seed);
  detail::BasisBuilder bb;
  std::vector<Word> img;
  SplittingCertificate cert;
  auto resize = [&] { img.resize(bb.names.size()); };
  const int L = p.witness_len;

  switch (tag) {
  case CaseTag::A: {
    CaseA c;
    c.k = p.k;
    int vr = std::max(p.v_rank, c.k >= 2 ? 0 : 1);
    c.v_letters = bb.add("p", vr);
    for (int i = 0; i < c.k; ++i)
      c.loops.push_back(bb.add_one("a" + std::to_string(i)));
    resize();
    detail::set_iso(img, rng, c.v_letters, c.v_letters);
    for (int i = 0; i + 1 < c.k; ++i)
      img[static_cast<std::size_t>(c.loops[static_cast<std::size_t>(i)])] = Word::letter(c.loops[static_cast<std::size_t>(i) + 1]);
    Word w = detail::random_word(rng, c.v_letters, L), v = detail::random_word(rng, c.v_letters, L);
    img[static_cast<std::size_t>(c.loops.back())] = w * Word::letter(c.loops.front()) * v;
    cert = c;
    break;
  }
  case CaseTag::B: {
    CaseB c;
    c.m = p.m;
    c.k = p.k;
    for (int i = 0; i < c.m; ++i)
      c.blocks.push_back(bb.add("x" + std::to_string(i) + "_", std::max(1, p.v_rank)));
    for (int i = c.m - 1; i <= c.k * c.m - 1; ++i)
      c.loops.push_back(bb.add_one("a" + std::to_string(i)));
    resize();
    const int a = c.loops.front();
    for (int i = 0; i + 1 < c.m; ++i)
      detail::set_iso(img, rng, c.blocks[static_cast<std::size_t>(i)], c.blocks[static_cast<std::size_t>(i) + 1]);
    detail::set_iso(img, rng, c.blocks.back(), c.blocks.front(), Word::letter(a, -1));
    const Word v = detail::random_word(rng, c.blocks[0], L);
    for (std::size_t j = 0; j < c.loops.size(); ++j) {
      const int i = c.m - 1 + static_cast<int>(j);
      Word& out = img[static_cast<std::size_t>(c.loops[j])];
      if (i == c.k * c.m - 1) {
        out = v * Word::letter(a);
        continue;
      }
      Word next = Word::letter(c.loops[j + 1]);
      int r = mod_floor(i, c.m);
      out = r < c.m - 2 ? next : r == c.m - 2 ? Word::letter(a, -1) * next : next * Word::letter(a);
    }
    cert = c;
    break;
  }
  case CaseTag::D: {
    CaseD c;
    c.n = p.n;
    c.k = p.k;
    int vr = p.v_rank;
    int wr = std::max(1, p.w_rank);
    if (vr + wr * c.n + (c.k - 1) * c.n < 2)
      vr = 2 - wr * c.n;
    c.v_letters = bb.add("p", vr);
    for (int i = 0; i < c.n; ++i)
      c.w_blocks.push_back(bb.add("y" + std::to_string(i) + "_", wr));
    for (int i = c.n; i < c.k * c.n; ++i)
      c.loops.push_back(bb.add_one("a" + std::to_string(i)));
    resize();
    detail::set_iso(img, rng, c.v_letters, c.v_letters);
    for (int i = 0; i + 1 < c.n; ++i)
      detail::set_iso(img, rng, c.w_blocks[static_cast<std::size_t>(i)], c.w_blocks[static_cast<std::size_t>(i) + 1]);
    const Word an = c.k > 1 ? Word::letter(c.loops.front()) : Word();
    detail::set_iso(img, rng, c.w_blocks.back(), c.w_blocks.front(), invert(an));
    if (c.k > 1) {
      for (std::size_t j = 0; j + 1 < c.loops.size(); ++j)
        img[static_cast<std::size_t>(c.loops[j])] = Word::letter(c.loops[j + 1]);
      Word w = detail::random_word(rng, c.w_blocks[0], L), v = detail::random_word(rng, c.v_letters, L);
      Word lead;
      for (int j = c.k - 1; j >= 1; --j)
        lead *= Word::letter(c.loops[static_cast<std::size_t>((j - 1) * c.n)], -1);
      img[static_cast<std::size_t>(c.loops.back())] = lead * w * v;
    }
    cert = c;
    break;
  }
  case CaseTag::E: {
    CaseE c;
    c.m = p.m;
    c.n = p.n;
    c.k = p.k;
    for (int i = 0; i < c.m; ++i)
      c.v_blocks.push_back(bb.add("x" + std::to_string(i) + "_", std::max(1, p.v_rank)));
    for (int i = 0; i < c.n; ++i)
      c.w_blocks.push_back(bb.add("y" + std::to_string(i) + "_", std::max(1, p.w_rank)));
    const int first = c.n + c.m - 1, top = c.k * c.m * c.n - 1;
    for (int i = first; i <= top; ++i)
      c.loops.push_back(bb.add_one("a" + std::to_string(i)));
    resize();
    auto loop = [&](int i) { return c.loops.at(static_cast<std::size_t>(i - first)); };
    const Word a = Word::letter(loop(first));
    for (int i = 0; i + 1 < c.m; ++i)
      detail::set_iso(img, rng, c.v_blocks[static_cast<std::size_t>(i)], c.v_blocks[static_cast<std::size_t>(i) + 1]);
    detail::set_iso(img, rng, c.v_blocks.back(), c.v_blocks.front(), a);
    for (int i = 0; i + 1 < c.n; ++i)
      detail::set_iso(img, rng, c.w_blocks[static_cast<std::size_t>(i)], c.w_blocks[static_cast<std::size_t>(i) + 1]);
    Word w = detail::random_word(rng, c.w_blocks[0], L), v = detail::random_word(rng, c.v_blocks[0], L);
    for (int i = first; i <= top; ++i) {
      Word& out = img[static_cast<std::size_t>(loop(i))];
      if (i == top) {
        Word lead;
        for (int j = c.k * c.m - 1; j >= 2; --j)
          lead *= Word::letter(loop(j * c.n), -1);
        out = lead * w * v * invert(a);
        continue;
      }
      Word next = Word::letter(loop(i + 1));
      out = mod_floor(i, c.m) == c.m - 1       ? next * invert(a)
            : mod_floor(i - c.n, c.m) == c.m - 1 ? a * next
                                                 : next;
    }
    // The W wrap conjugator only involves loop images, which are final now.
    GroupMorphism partial(Basis(bb.names), img);
    Word x;
    for (int j = 0; j < c.n / c.m; ++j)
      x *= apply_power(partial, invert(a), static_cast<long>(j) * c.m + 1);
    detail::set_iso(img, rng, c.w_blocks.back(), c.w_blocks.front(), invert(x));
    cert = c;
    break;
  }
  }

  GroupMorphism phi(Basis(bb.names), img);
  auto inv = detail::invert_by_folding(phi);
  if (!inv)
    throw Error("synthesize_instance: generated map is not an automorphism");
  return {phi.with_inverse(*inv), cert};
}

/// Parameter draw over the documented small ranges
/// (m <= 4, n <= 5, k <= 3, witness length <= 4).
inline SynthesisParams random_params(CaseTag tag, std::uint64_t seed) {
  SynthesisParams p;
  const auto s = static_cast<int>(seed % 1000003);
  p.witness_len = 1 + s % 4;
  switch (tag) {
  case CaseTag::A:
    p.k = 1 + s % 3;
    p.v_rank = (s / 3) % 3;
    break;
  case CaseTag::B:
    p.m = 2 + s % 3;
    p.k = 1 + (s / 3) % 3;
    p.v_rank = 1 + (s / 9) % 2;
    break;
  case CaseTag::D:
    p.n = 1 + s % 4;
    p.k = 1 + (s / 4) % 3;
    p.v_rank = (s / 12) % 2;
    p.w_rank = 1 + (s / 24) % 2;
    break;
  case CaseTag::E: {
    static const int pairs[][2] = {{2, 3}, {2, 5}, {3, 4}, {4, 5}};
    p.m = pairs[s % 4][0];
    p.n = pairs[s % 4][1];
    p.k = 1 + (s / 4) % 3;
    p.v_rank = 1;
    // rank-2 W blocks only for k = 1: with k > 1 the anchor words grow past
    // what check_splitting evaluates in reasonable time
    p.w_rank = p.k == 1 ? 1 + (s / 12) % 2 : 1;
    break;
  }
  }
  return p;
}

}  // namespace mtsplit

#endif  // MTSPLIT_SPLITTING_HPP_
