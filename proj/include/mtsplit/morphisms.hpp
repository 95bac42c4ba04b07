// Endomorphisms and automorphisms of free groups given by generator images.

#ifndef MTSPLIT_MORPHISMS_HPP_
#define MTSPLIT_MORPHISMS_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "intlinalg.hpp"
#include "words.hpp"

namespace mtsplit {

/// Endomorphism of F(basis): one image word per basis letter, plus an
/// optional user-supplied inverse witness certifying invertibility.
class GroupMorphism {
public:
  GroupMorphism() = default;
  GroupMorphism(Basis basis, std::vector<Word> images)
      : basis_(std::move(basis)), images_(std::move(images)) {
    if (images_.size() != basis_.size())
      throw InvalidArgument("need exactly one image per basis letter");
    for (const Word& w : images_)
      if (w.max_letter() >= static_cast<int>(basis_.size()))
        throw BasisMismatch("image uses a letter outside the basis");
  }

  static GroupMorphism identity(const Basis& basis) {
    std::vector<Word> imgs;
    for (std::size_t i = 0; i < basis.size(); ++i)
      imgs.push_back(Word::letter(static_cast<int>(i)));
    GroupMorphism id(basis, imgs);
    id.witness_ = std::make_shared<const GroupMorphism>(GroupMorphism(basis, imgs));
    return id;
  }

  /// Copy carrying `inverse` as witness. The witness is stored without a
  /// witness of its own; use inverse_of() to get a two-way pair.
  GroupMorphism with_inverse(const GroupMorphism& inverse) const {
    if (!(inverse.basis_ == basis_))
      throw BasisMismatch("inverse witness lives over a different basis");
    GroupMorphism r = *this;
    r.witness_ = std::make_shared<const GroupMorphism>(inverse.without_inverse());
    return r;
  }

  GroupMorphism without_inverse() const {
    GroupMorphism r = *this;
    r.witness_.reset();
    return r;
  }

  const Basis& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int letter) const { return images_.at(static_cast<std::size_t>(letter)); }
  bool has_inverse() const { return static_cast<bool>(witness_); }
  const GroupMorphism& inverse_witness() const {
    if (!witness_)
      throw MissingWitness("morphism has no inverse witness");
    return *witness_;
  }

  /// The witness, carrying this morphism as its own witness.
  GroupMorphism inverse_of() const { return inverse_witness().with_inverse(*this); }

private:
  Basis basis_;
  std::vector<Word> images_;
  std::shared_ptr<const GroupMorphism> witness_;
};

inline Word apply(const GroupMorphism& phi, const Word& u) {
  Word r;
  for (const Syllable& s : u.syllables()) {
    if (s.letter >= static_cast<int>(phi.rank()))
      throw BasisMismatch("word uses a letter outside the morphism's basis");
    const Word& img = phi.image(s.letter);
    if (s.exp > 0) {
      for (long j = 0; j < s.exp; ++j)
        r *= img;
    } else {
      Word inv = invert(img);
      for (long j = 0; j < -s.exp; ++j)
        r *= inv;
    }
  }
  return r;
}

/// phi^n(u) for n >= 0 by iterated substitution; n < 0 uses the witness.
inline Word apply_power(const GroupMorphism& phi, Word u, long n) {
  const GroupMorphism& f = n >= 0 ? phi : phi.inverse_witness();
  for (long i = 0; i < std::labs(n); ++i)
    u = apply(f, u);
  return u;
}

/// (phi o psi)(u) = phi(psi(u)).
inline GroupMorphism compose(const GroupMorphism& phi, const GroupMorphism& psi) {
  if (!(phi.basis() == psi.basis()))
    throw BasisMismatch("compose: different bases");
  std::vector<Word> imgs;
  imgs.reserve(psi.rank());
  for (const Word& w : psi.images())
    imgs.push_back(apply(phi, w));
  GroupMorphism r(phi.basis(), std::move(imgs));
  if (phi.has_inverse() && psi.has_inverse())
    r = r.with_inverse(compose(psi.inverse_witness(), phi.inverse_witness()));
  return r;
}

inline GroupMorphism power(const GroupMorphism& phi, long n) {
  if (n < 0)
    return power(phi.inverse_of(), -n);
  GroupMorphism r = GroupMorphism::identity(phi.basis());
  for (long i = 0; i < n; ++i)
    r = compose(phi, r);
  if (!phi.has_inverse())
    r = r.without_inverse();
  return r;
}

inline bool fixes_every_letter(const GroupMorphism& f) {
  for (std::size_t i = 0; i < f.rank(); ++i)
    if (!(f.image(static_cast<int>(i)) == Word::letter(static_cast<int>(i))))
      return false;
  return true;
}

/// Both composites with the witness must be the identity on every letter.
/// Throws MissingWitness when there is nothing to check.
inline bool verify_automorphism(const GroupMorphism& phi) {
  const GroupMorphism& w = phi.inverse_witness();
  if (!(w.basis() == phi.basis()))
    return false;
  return fixes_every_letter(compose(phi.without_inverse(), w)) &&
         fixes_every_letter(compose(w, phi.without_inverse()));
}

/// phi maps every letter of `subset` to a word over `subset`.
inline bool restricts_to(const GroupMorphism& phi, const LetterSet& subset) {
  for (int s : subset)
    if (!uses_only(phi.image(s), subset))
      return false;
  return true;
}

/// Exponent-sum vector of a word.
inline IntVector exponent_vector(const Word& w, std::size_t rank) {
  IntVector v(rank);
  for (const Syllable& s : w.syllables())
    v.at(static_cast<std::size_t>(s.letter)) += s.exp;
  return v;
}

/// Column j is the exponent-sum vector of phi(x_j).
inline IntMatrix abelianization_matrix(const GroupMorphism& phi) {
  const std::size_t n = phi.rank();
  IntMatrix a(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    IntVector col = exponent_vector(phi.image(static_cast<int>(j)), n);
    for (std::size_t i = 0; i < n; ++i)
      a(i, j) = col[i];
  }
  return a;
}

inline Word shift_letters(const Word& w, int offset) {
  std::vector<Syllable> s = w.syllables();
  for (Syllable& x : s)
    x.letter += offset;
  return Word(s);
}

/// phi1 * phi2 on the concatenated basis.
inline GroupMorphism free_product(const GroupMorphism& phi1, const GroupMorphism& phi2) {
  for (const std::string& name : phi2.basis().letters())
    if (phi1.basis().contains(name))
      throw InvalidArgument("free_product: letter '" + name + "' occurs in both bases");
  Basis basis = phi1.basis().extended(phi2.basis().letters());
  const int off = static_cast<int>(phi1.rank());
  auto images = [&](const GroupMorphism& a, const GroupMorphism& b) {
    std::vector<Word> imgs = a.images();
    for (const Word& w : b.images())
      imgs.push_back(shift_letters(w, off));
    return imgs;
  };
  GroupMorphism r(basis, images(phi1, phi2));
  if (phi1.has_inverse() && phi2.has_inverse())
    r = r.with_inverse(GroupMorphism(basis, images(phi1.inverse_witness(), phi2.inverse_witness())));
  return r;
}

}  // namespace mtsplit

#endif  // MTSPLIT_MORPHISMS_HPP_
