// Stallings folding with label tracking. Used by the instance synthesizer to
// compute inverse witnesses for generated automorphisms.

#ifndef MTSPLIT_DETAIL_FOLDING_HPP_
#define MTSPLIT_DETAIL_FOLDING_HPP_

#include <map>
#include <optional>
#include <vector>

#include "../morphisms.hpp"

namespace mtsplit::detail {

/// Returns phi^{-1} when the images of phi form a basis of F, else nullopt.
///
/// Each edge carries a word over the image generators; the product of labels
/// along a closed path at the base vertex expresses the path's F-word in
/// terms of the images. Folding merges vertices and conjugates the labels of
/// the absorbed vertex so that this stays true.
inline std::optional<GroupMorphism> invert_by_folding(const GroupMorphism& phi) {
  struct Edge {
    int from, to, letter;
    Word label;
    bool alive = true;
  };
  const int rank = static_cast<int>(phi.rank());
  std::vector<Edge> edges;
  int vertices = 1;
  for (int i = 0; i < rank; ++i) {
    std::vector<int> seq = phi.image(i).signed_letters();
    if (seq.empty())
      return std::nullopt;
    int cur = 0;
    for (std::size_t j = 0; j < seq.size(); ++j) {
      int next = j + 1 == seq.size() ? 0 : vertices++;
      Word label = j == 0 ? Word::letter(i) : Word();
      int x = std::abs(seq[j]) - 1;
      if (seq[j] > 0)
        edges.push_back({cur, next, x, label});
      else
        edges.push_back({next, cur, x, invert(label)});
      cur = next;
    }
  }

  // Absorb vertex `gone` into `keep`; c is inserted when entering `gone`.
  auto merge = [&](int keep, int gone, const Word& c) {
    for (Edge& e : edges) {
      if (!e.alive)
        continue;
      if (e.from == gone) {
        e.label = c * e.label;
        e.from = keep;
      }
      if (e.to == gone) {
        e.label = e.label * invert(c);
        e.to = keep;
      }
    }
  };

  for (bool changed = true; changed;) {
    changed = false;
    // (vertex, signed letter) -> (edge index, outgoing?)
    std::map<std::pair<int, int>, std::pair<std::size_t, bool>> seen;
    for (std::size_t k = 0; k < edges.size() && !changed; ++k) {
      if (!edges[k].alive)
        continue;
      for (bool out : {true, false}) {
        const Edge& e = edges[k];
        int at = out ? e.from : e.to;
        int key = out ? e.letter + 1 : -(e.letter + 1);
        auto [it, fresh] = seen.try_emplace({at, key}, k, out);
        if (fresh)
          continue;
        const Edge& f = edges[it->second.first];
        bool fout = it->second.second;
        int v1 = fout ? f.to : f.from, v2 = out ? e.to : e.from;
        Word l1 = fout ? f.label : invert(f.label);
        Word l2 = out ? e.label : invert(e.label);
        std::size_t drop = k;
        if (v1 == v2) {
          if (!(l1 == l2))
            return std::nullopt;
        } else if (v2 == 0) {
          merge(v2, v1, invert(l2) * l1);
        } else {
          merge(v1, v2, invert(l1) * l2);
        }
        edges[drop].alive = false;
        changed = true;
        break;
      }
    }
  }

  std::vector<Word> inverse(static_cast<std::size_t>(rank));
  std::vector<bool> have(static_cast<std::size_t>(rank), false);
  for (const Edge& e : edges) {
    if (!e.alive)
      continue;
    if (e.from != 0 || e.to != 0 || have[static_cast<std::size_t>(e.letter)])
      return std::nullopt;
    have[static_cast<std::size_t>(e.letter)] = true;
    inverse[static_cast<std::size_t>(e.letter)] = e.label;
  }
  for (bool h : have)
    if (!h)
      return std::nullopt;
  GroupMorphism inv(phi.basis(), inverse);
  GroupMorphism out = phi.with_inverse(inv);
  if (!verify_automorphism(out))
    return std::nullopt;
  return inv;
}

}  // namespace mtsplit::detail

#endif  // MTSPLIT_DETAIL_FOLDING_HPP_
