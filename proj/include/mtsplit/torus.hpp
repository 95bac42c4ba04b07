// The mapping torus M_phi = F x|_phi Z: normal forms u t^n, exact equality,
// and anchored presentations transformed by checked Tietze moves.

#ifndef MTSPLIT_TORUS_HPP_
#define MTSPLIT_TORUS_HPP_

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "intlinalg.hpp"
#include "morphisms.hpp"
#include "words.hpp"

namespace mtsplit {

/// Element u * t^n in normal form. Structural equality is group equality.
struct TorusElement {
  Word u;
  long n = 0;
  bool operator==(const TorusElement&) const = default;
  bool is_identity() const { return u.is_identity() && n == 0; }
};

class MappingTorus {
public:
  /// phi must carry a verified inverse witness.
  explicit MappingTorus(const GroupMorphism& phi) : phi_(phi.without_inverse()) {
    if (!verify_automorphism(phi))
      throw InvalidArgument("mapping torus needs an automorphism; inverse witness fails");
    inv_ = phi.inverse_witness().without_inverse();
    alphabet_ = phi.basis().extended({std::string(kStableLetter)}, true);
  }

  const GroupMorphism& phi() const { return phi_; }
  const GroupMorphism& phi_inverse() const { return inv_; }
  const Basis& basis() const { return phi_.basis(); }
  /// F-basis followed by `t`; expressions over it are evaluated by eval().
  const Basis& alphabet() const { return alphabet_; }
  int stable_index() const { return static_cast<int>(phi_.rank()); }

  /// phi^a(u); negative a goes through the witness.
  Word twist(const Word& u, long a) const {
    const GroupMorphism& f = a >= 0 ? phi_ : inv_;
    Word r = u;
    for (long i = 0; i < std::labs(a); ++i)
      r = apply(f, r);
    return r;
  }

  /// (u t^a)(v t^b) = u phi^a(v) t^{a+b}
  TorusElement mul(const TorusElement& g, const TorusElement& h) const {
    return {g.u * twist(h.u, g.n), g.n + h.n};
  }

  /// (u t^n)^{-1} = phi^{-n}(u^{-1}) t^{-n}
  TorusElement inverse(const TorusElement& g) const { return {twist(invert(g.u), -g.n), -g.n}; }

  TorusElement pow(const TorusElement& g, long e) const {
    TorusElement base = e < 0 ? inverse(g) : g;
    TorusElement acc;
    for (unsigned long k = static_cast<unsigned long>(std::labs(e)); k; k >>= 1) {
      if (k & 1)
        acc = mul(acc, base);
      if (k > 1)
        base = mul(base, base);
    }
    return acc;
  }

  TorusElement atom(int letter) const {
    if (letter == stable_index())
      return {Word(), 1};
    return {Word::letter(letter), 0};
  }

  /// Left-to-right product of a word over alphabet().
  TorusElement eval(const Word& expr) const {
    TorusElement acc;
    for (const Syllable& s : expr.syllables()) {
      if (s.letter > stable_index())
        throw BasisMismatch("expression letter outside F-basis and t");
      if (s.letter == stable_index())
        acc.n += s.exp;
      else
        acc = mul(acc, {Word::letter(s.letter, s.exp), 0});
    }
    return acc;
  }

  TorusElement eval(std::string_view text) const { return eval(parse_word(text, alphabet_)); }

  std::string format(const TorusElement& g) const {
    std::string u = display_word(g.u, basis());
    return "(" + u + ", " + std::to_string(g.n) + ")";
  }

private:
  GroupMorphism phi_;
  GroupMorphism inv_;
  Basis alphabet_;
};

inline TorusElement torus_mul(const MappingTorus& m, const TorusElement& g, const TorusElement& h) {
  return m.mul(g, h);
}
inline TorusElement torus_eval(const MappingTorus& m, const Word& expr) { return m.eval(expr); }
inline TorusElement torus_eval(const MappingTorus& m, std::string_view expr) { return m.eval(expr); }

/// Substitute a word for each letter: result = prod subst[letter]^exp.
inline Word substitute(const Word& w, const std::vector<Word>& subst) {
  Word r;
  for (const Syllable& s : w.syllables()) {
    const Word& img = subst.at(static_cast<std::size_t>(s.letter));
    r *= power(img, s.exp);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Anchored presentations

/// One term c * r_i^{sign} * c^{-1} of a derivation certificate.
struct CertificateTerm {
  int relator = 0;
  int sign = 1;
  Word conjugator;
};
using Certificate = std::vector<CertificateTerm>;

/// Finite presentation with an evaluation map into M_phi.
///
/// witnesses[i] expresses F-letter i (and witnesses[rank] expresses t) as a
/// word over the current generators.
struct AnchoredPresentation {
  std::shared_ptr<const MappingTorus> torus;
  Basis generators;
  std::vector<Word> relators;
  std::vector<TorusElement> anchor;
  std::vector<Word> witnesses;

  TorusElement evaluate(const Word& w) const {
    TorusElement acc;
    for (const Syllable& s : w.syllables())
      acc = torus->mul(acc, torus->pow(anchor.at(static_cast<std::size_t>(s.letter)), s.exp));
    return acc;
  }

  Word parse(std::string_view text) const { return parse_word(text, generators); }
  std::string format(const Word& w) const { return display_word(w, generators); }
};

/// <x_1..x_b, t | t x_i t^{-1} phi(x_i)^{-1}>
inline AnchoredPresentation standard_presentation(std::shared_ptr<const MappingTorus> m) {
  AnchoredPresentation p;
  const int t = m->stable_index();
  p.generators = m->alphabet();
  for (int i = 0; i < t; ++i) {
    p.relators.push_back(Word::letter(t) * Word::letter(i) * Word::letter(t, -1) *
                         invert(m->phi().image(i)));
    p.anchor.push_back(m->atom(i));
    p.witnesses.push_back(Word::letter(i));
  }
  p.anchor.push_back(m->atom(t));
  p.witnesses.push_back(Word::letter(t));
  p.torus = std::move(m);
  return p;
}

struct Violation {
  std::string kind;  // "relator" | "witness" | "anchor" | ...
  int index = 0;
  std::string detail;
};

/// Evaluates every relator and generation witness through the anchor.
inline std::vector<Violation> check_anchor(const AnchoredPresentation& p) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    TorusElement e = p.evaluate(p.relators[i]);
    if (!e.is_identity())
      out.push_back({"relator", static_cast<int>(i),
                     p.format(p.relators[i]) + " evaluates to " + p.torus->format(e)});
  }
  for (std::size_t i = 0; i < p.witnesses.size(); ++i) {
    TorusElement want = p.torus->atom(static_cast<int>(i));
    TorusElement got = p.evaluate(p.witnesses[i]);
    if (!(got == want))
      out.push_back({"witness", static_cast<int>(i),
                     p.torus->alphabet().name(static_cast<int>(i)) + " := " + p.format(p.witnesses[i]) +
                         " evaluates to " + p.torus->format(got)});
  }
  return out;
}

/// Abelian invariants of the presented group: cokernel of the
/// generators-by-relators exponent-sum matrix.
inline AbelianInvariants relator_h1(std::size_t generator_count, const std::vector<Word>& relators) {
  IntMatrix m(generator_count, relators.size());
  for (std::size_t j = 0; j < relators.size(); ++j)
    for (const Syllable& s : relators[j].syllables())
      m(static_cast<std::size_t>(s.letter), j) += s.exp;
  return cokernel_invariants(m);
}

inline AbelianInvariants h1_invariants(const AnchoredPresentation& p) {
  return relator_h1(p.generators.size(), p.relators);
}

// Tietze moves ----------------------------------------------------------------

/// New generator `name` with `name = definition`; adds relator name * definition^{-1}.
struct AddGenerator {
  std::string name;
  Word definition;
};
/// Eliminates `name` using a relator in which it occurs exactly once.
struct RemoveGenerator {
  std::string name;
  int relator = 0;
};
/// Adds a relator. With a certificate the product of conjugates must freely
/// reduce to it; without one it is only checked against the anchor.
struct AddRelator {
  Word relator;
  std::optional<Certificate> certificate;
};
/// Drops a relator derivable (by the certificate) from the others.
struct RemoveRelator {
  int index = 0;
  Certificate certificate;
};
using TietzeMove = std::variant<AddGenerator, RemoveGenerator, AddRelator, RemoveRelator>;

enum class MoveMode { Certified, Anchored };

inline Word expand_certificate(const AnchoredPresentation& p, const Certificate& cert,
                               std::optional<int> excluded = std::nullopt) {
  Word prod;
  for (const CertificateTerm& term : cert) {
    if (term.relator < 0 || term.relator >= static_cast<int>(p.relators.size()))
      throw TietzeError("certificate refers to relator " + std::to_string(term.relator) +
                        " which does not exist");
    if (excluded && term.relator == *excluded)
      throw TietzeError("certificate may not use the relator being removed");
    if (term.sign != 1 && term.sign != -1)
      throw TietzeError("certificate exponent must be +1 or -1");
    Word r = p.relators[static_cast<std::size_t>(term.relator)];
    if (term.sign < 0)
      r = invert(r);
    prod *= term.conjugator * r * invert(term.conjugator);
  }
  return prod;
}

namespace detail {

inline AnchoredPresentation remove_generator(const AnchoredPresentation& p, const RemoveGenerator& mv) {
  const int g = p.generators.index_of(mv.name);
  if (g < 0)
    throw TietzeError("delgen: unknown generator '" + mv.name + "'");
  if (mv.relator < 0 || mv.relator >= static_cast<int>(p.relators.size()))
    throw TietzeError("delgen: no relator " + std::to_string(mv.relator));
  const auto& syl = p.relators[static_cast<std::size_t>(mv.relator)].syllables();
  int pos = -1;
  for (std::size_t i = 0; i < syl.size(); ++i)
    if (syl[i].letter == g) {
      if (pos >= 0 || std::labs(syl[i].exp) != 1)
        throw TietzeError("delgen: '" + mv.name + "' must occur exactly once in the relator");
      pos = static_cast<int>(i);
    }
  if (pos < 0)
    throw TietzeError("delgen: '" + mv.name + "' does not occur in the relator");
  Word before(std::vector<Syllable>(syl.begin(), syl.begin() + pos));
  Word after(std::vector<Syllable>(syl.begin() + pos + 1, syl.end()));
  // before g^e after = 1
  Word value = syl[static_cast<std::size_t>(pos)].exp > 0 ? invert(before) * invert(after) : after * before;

  const int n = static_cast<int>(p.generators.size());
  std::vector<Word> subst;
  for (int i = 0; i < n; ++i)
    subst.push_back(i == g ? value : Word::letter(i));
  std::vector<Word> reindex;
  for (int i = 0; i < n; ++i)
    reindex.push_back(i == g ? Word() : Word::letter(i < g ? i : i - 1));

  AnchoredPresentation q;
  q.torus = p.torus;
  std::vector<std::string> names = p.generators.letters();
  names.erase(names.begin() + g);
  q.generators = Basis::alphabet(std::move(names));
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    if (static_cast<int>(i) != mv.relator) {
      Word r = substitute(substitute(p.relators[i], subst), reindex);
      if (!r.is_identity())
        q.relators.push_back(std::move(r));
    }
  for (int i = 0; i < n; ++i)
    if (i != g)
      q.anchor.push_back(p.anchor[static_cast<std::size_t>(i)]);
  for (const Word& w : p.witnesses)
    q.witnesses.push_back(substitute(substitute(w, subst), reindex));
  return q;
}

}  // namespace detail

/// Applies one move; the result is re-validated against the anchor.
inline AnchoredPresentation apply_tietze_move(const AnchoredPresentation& p, const TietzeMove& move,
                                              MoveMode* mode = nullptr) {
  AnchoredPresentation q;
  MoveMode used = MoveMode::Certified;
  if (const auto* add = std::get_if<AddGenerator>(&move)) {
    if (p.generators.contains(add->name))
      throw TietzeError("addgen: '" + add->name + "' already exists");
    if (add->definition.max_letter() >= static_cast<int>(p.generators.size()))
      throw TietzeError("addgen: definition uses unknown letters");
    q = p;
    q.generators = p.generators.extended({add->name}, true);
    const int g = static_cast<int>(p.generators.size());
    q.anchor.push_back(p.evaluate(add->definition));
    q.relators.push_back(Word::letter(g) * invert(add->definition));
  } else if (const auto* del = std::get_if<RemoveGenerator>(&move)) {
    q = detail::remove_generator(p, *del);
  } else if (const auto* rel = std::get_if<AddRelator>(&move)) {
    if (rel->relator.max_letter() >= static_cast<int>(p.generators.size()))
      throw TietzeError("addrel: relator uses unknown letters");
    if (rel->certificate) {
      Word derived = expand_certificate(p, *rel->certificate);
      if (!(derived == rel->relator))
        throw TietzeError("addrel: certificate reduces to '" + p.format(derived) + "', not '" +
                          p.format(rel->relator) + "'");
    } else {
      used = MoveMode::Anchored;
      TorusElement e = p.evaluate(rel->relator);
      if (!e.is_identity())
        throw TietzeError("addrel: anchor violation, relator evaluates to " + p.torus->format(e));
    }
    q = p;
    q.relators.push_back(rel->relator);
  } else if (const auto* rm = std::get_if<RemoveRelator>(&move)) {
    if (rm->index < 0 || rm->index >= static_cast<int>(p.relators.size()))
      throw TietzeError("delrel: no relator " + std::to_string(rm->index));
    Word derived = expand_certificate(p, rm->certificate, rm->index);
    const Word& target = p.relators[static_cast<std::size_t>(rm->index)];
    if (!(derived == target))
      throw TietzeError("delrel: certificate reduces to '" + p.format(derived) + "', not '" +
                        p.format(target) + "'");
    q = p;
    q.relators.erase(q.relators.begin() + rm->index);
  }
  if (auto v = check_anchor(q); !v.empty())
    throw TietzeError("anchor violation after move: " + v.front().detail);
  if (mode)
    *mode = used;
  return q;
}

}  // namespace mtsplit

#endif  // MTSPLIT_TORUS_HPP_
