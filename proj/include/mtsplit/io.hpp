// Text formats: automorphism files, certificate files, Tietze scripts.
//
// Automorphism and certificate files are sectioned:
//
//   [basis]
//   letters = x y
//   [images]
//   x = y
//   y = x
//   [inverse]        optional
//   x = y
//   y = x
//
//   [case]
//   D
//   [params]
//   n = 2
//   k = 1
//   [V]
//   letters =
//   [blocks]
//   W0 = x
//   W1 = y
//   [loops]
//   letters =
//
// '#' starts a comment everywhere.

#ifndef MTSPLIT_IO_HPP_
#define MTSPLIT_IO_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "morphisms.hpp"
#include "splitting.hpp"
#include "torus.hpp"
#include "words.hpp"

namespace mtsplit {

namespace io {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string strip_comment(std::string_view s) {
  return trim(s.substr(0, s.find('#')));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string t; in >> t;)
    out.push_back(t);
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Entry {
  std::string key;  // empty for bare lines
  std::string value;
  int line = 0;
};

/// Ordered sections of ordered entries.
struct SectionedFile {
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;

  const std::vector<Entry>* find(std::string_view name) const {
    for (const auto& [n, e] : sections)
      if (n == name)
        return &e;
    return nullptr;
  }
  const std::vector<Entry>& get(std::string_view name) const {
    if (const auto* e = find(name))
      return *e;
    throw ParseError("missing section [" + std::string(name) + "]");
  }
  std::string value(std::string_view section, std::string_view key) const {
    for (const Entry& e : get(section))
      if (e.key == key)
        return e.value;
    throw ParseError("missing '" + std::string(key) + "' in [" + std::string(section) + "]");
  }
};

inline SectionedFile parse_sections(std::string_view text) {
  SectionedFile f;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
      std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
      for (const auto& s : f.sections)
        if (s.first == name)
          throw ParseError("line " + std::to_string(lineno) + ": duplicate section [" + name + "]");
      f.sections.emplace_back(name, std::vector<Entry>{});
      continue;
    }
    if (f.sections.empty())
      throw ParseError("line " + std::to_string(lineno) + ": content before the first section");
    Entry e;
    e.line = lineno;
    if (auto eq = line.find('='); eq != std::string::npos) {
      e.key = trim(std::string_view(line).substr(0, eq));
      e.value = trim(std::string_view(line).substr(eq + 1));
    } else {
      e.value = line;
    }
    f.sections.back().second.push_back(std::move(e));
  }
  return f;
}

inline std::vector<Word> read_images(const std::vector<Entry>& entries, const Basis& basis,
                                     const std::string& section) {
  std::vector<std::optional<Word>> imgs(basis.size());
  for (const Entry& e : entries) {
    int i = basis.index_of(e.key);
    if (i < 0)
      throw ParseError("line " + std::to_string(e.line) + ": [" + section + "] names unknown letter '" + e.key + "'");
    if (imgs[static_cast<std::size_t>(i)])
      throw ParseError("line " + std::to_string(e.line) + ": image of '" + e.key + "' given twice");
    imgs[static_cast<std::size_t>(i)] = parse_word(e.value, basis);
  }
  std::vector<Word> out;
  for (std::size_t i = 0; i < imgs.size(); ++i) {
    if (!imgs[i])
      throw ParseError("[" + section + "] has no image for '" + basis.name(static_cast<int>(i)) + "'");
    out.push_back(*imgs[i]);
  }
  return out;
}

inline long parse_long(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size())
    throw ParseError(what + ": expected an integer, got '" + s + "'");
  return v;
}

inline Block read_letters(const std::string& value, const Basis& basis) {
  Block out;
  for (const std::string& name : split_ws(value)) {
    int i = basis.index_of(name);
    if (i < 0)
      throw ParseError("unknown letter '" + name + "' in certificate");
    out.push_back(i);
  }
  return out;
}

}  // namespace io

/// Morphism from an automorphism file; carries the [inverse] witness if given.
inline GroupMorphism parse_automorphism(std::string_view text) {
  io::SectionedFile f = io::parse_sections(text);
  Basis basis(io::split_ws(f.value("basis", "letters")));
  GroupMorphism phi(basis, io::read_images(f.get("images"), basis, "images"));
  if (const auto* inv = f.find("inverse"))
    phi = phi.with_inverse(GroupMorphism(basis, io::read_images(*inv, basis, "inverse")));
  return phi;
}

inline GroupMorphism load_automorphism(const std::filesystem::path& path) {
  return parse_automorphism(io::read_file(path));
}

inline std::string format_automorphism(const GroupMorphism& phi) {
  std::ostringstream out;
  const Basis& b = phi.basis();
  out << "[basis]\nletters =";
  for (const std::string& l : b.letters())
    out << ' ' << l;
  out << "\n[images]\n";
  for (std::size_t i = 0; i < b.size(); ++i)
    out << b.name(static_cast<int>(i)) << " = " << format_word(phi.image(static_cast<int>(i)), b) << '\n';
  if (phi.has_inverse()) {
    out << "[inverse]\n";
    for (std::size_t i = 0; i < b.size(); ++i)
      out << b.name(static_cast<int>(i)) << " = "
          << format_word(phi.inverse_witness().image(static_cast<int>(i)), b) << '\n';
  }
  return out.str();
}

inline SplittingCertificate parse_certificate(std::string_view text, const Basis& basis) {
  io::SectionedFile f = io::parse_sections(text);
  const auto& cs = f.get("case");
  if (cs.size() != 1 || !cs.front().key.empty())
    throw ParseError("[case] must hold a single case letter");
  const std::string tag = cs.front().value;
  auto param = [&](const char* k) { return static_cast<int>(io::parse_long(f.value("params", k), k)); };
  auto letters = [&](const char* section) { return io::read_letters(f.value(section, "letters"), basis); };
  auto blocks = [&](const std::string& prefix, int count) {
    std::vector<Block> out;
    for (int i = 0; i < count; ++i)
      out.push_back(io::read_letters(f.value("blocks", prefix + std::to_string(i)), basis));
    return out;
  };
  auto check_block_keys = [&](const std::vector<std::string>& allowed) {
    for (const io::Entry& e : f.get("blocks"))
      if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end())
        throw ParseError("line " + std::to_string(e.line) + ": unexpected block '" + e.key + "'");
  };
  auto names = [](const std::string& prefix, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i)
      out.push_back(prefix + std::to_string(i));
    return out;
  };
  SplittingCertificate cert;
  if (tag == "A") {
    CaseA c;
    c.k = param("k");
    c.v_letters = letters("V");
    c.loops = letters("loops");
    cert = c;
  } else if (tag == "B") {
    CaseB c;
    c.m = param("m");
    c.k = param("k");
    if (c.m < 1 || c.m > 64)
      throw ParseError("m out of range");
    check_block_keys(names("B", c.m));
    c.blocks = blocks("B", c.m);
    c.loops = letters("loops");
    cert = c;
  } else if (tag == "D") {
    CaseD c;
    c.n = param("n");
    c.k = param("k");
    if (c.n < 1 || c.n > 64)
      throw ParseError("n out of range");
    c.v_letters = letters("V");
    check_block_keys(names("W", c.n));
    c.w_blocks = blocks("W", c.n);
    c.loops = letters("loops");
    cert = c;
  } else if (tag == "E") {
    CaseE c;
    c.m = param("m");
    c.n = param("n");
    c.k = param("k");
    if (c.m < 1 || c.n < 1 || c.m > 64 || c.n > 64)
      throw ParseError("m, n out of range");
    auto allowed = names("V", c.m);
    for (auto& s : names("W", c.n))
      allowed.push_back(s);
    check_block_keys(allowed);
    c.v_blocks = blocks("V", c.m);
    c.w_blocks = blocks("W", c.n);
    c.loops = letters("loops");
    cert = c;
  } else {
    throw ParseError("unknown case '" + tag + "' (expected A, B, D or E)");
  }
  return cert;
}

inline SplittingCertificate load_certificate(const std::filesystem::path& path, const Basis& basis) {
  return parse_certificate(io::read_file(path), basis);
}

inline std::string format_certificate(const SplittingCertificate& cert, const Basis& basis) {
  std::ostringstream out;
  auto letters = [&](const Block& b) {
    std::string s;
    for (int x : b)
      s += " " + basis.name(x);
    return s;
  };
  auto blocks = [&](const std::string& prefix, const std::vector<Block>& bs) {
    for (std::size_t i = 0; i < bs.size(); ++i)
      out << prefix << i << " =" << letters(bs[i]) << '\n';
  };
  out << "[case]\n" << case_letter(case_of(cert)) << "\n[params]\n";
  if (const auto* c = std::get_if<CaseA>(&cert)) {
    out << "k = " << c->k << "\n[V]\nletters =" << letters(c->v_letters) << '\n';
    out << "[loops]\nletters =" << letters(c->loops) << '\n';
  } else if (const auto* c = std::get_if<CaseB>(&cert)) {
    out << "m = " << c->m << "\nk = " << c->k << "\n[blocks]\n";
    blocks("B", c->blocks);
    out << "[loops]\nletters =" << letters(c->loops) << '\n';
  } else if (const auto* c = std::get_if<CaseD>(&cert)) {
    out << "n = " << c->n << "\nk = " << c->k << "\n[V]\nletters =" << letters(c->v_letters) << "\n[blocks]\n";
    blocks("W", c->w_blocks);
    out << "[loops]\nletters =" << letters(c->loops) << '\n';
  } else if (const auto* c = std::get_if<CaseE>(&cert)) {
    out << "m = " << c->m << "\nn = " << c->n << "\nk = " << c->k << "\n[blocks]\n";
    blocks("V", c->v_blocks);
    blocks("W", c->w_blocks);
    out << "[loops]\nletters =" << letters(c->loops) << '\n';
  }
  return out.str();
}

/// "v = 1, w = 1" plus a and x when present.
inline std::string format_witnesses(const WitnessSet& ws, const Basis& basis) {
  std::string s = "v = " + display_word(ws.v, basis) + ", w = " + display_word(ws.w, basis);
  if (ws.a)
    s += ", a = " + display_word(*ws.a, basis);
  if (ws.x)
    s += ", x = " + display_word(*ws.x, basis);
  return s;
}

// ---------------------------------------------------------------------------
// Tietze scripts
//
//   automorphism <path>               relative to the script
//   addgen s := a1 t^2
//   delgen y via <relator index>
//   addrel <word> by <certificate>    or: by anchor
//   delrel <index> by <certificate>
//   final gens = x s t
//   final rel <word>                  one per relator of the expected form
//
// A certificate is ';'-separated terms `<index>[^-1] [@ <conjugator>]`;
// an empty certificate is written `by 1`.

struct ScriptStep {
  int line = 0;
  std::string text;
  std::string op;      // addgen | delgen | addrel | delrel
  std::string name;    // addgen / delgen
  std::string word;    // definition or relator, unparsed
  int index = 0;       // delgen relator, delrel index
  bool anchored = false;
  struct Term {
    int relator;
    int sign;
    std::string conjugator;
  };
  std::vector<Term> certificate;
};

struct TietzeScript {
  std::filesystem::path automorphism;
  std::vector<ScriptStep> steps;
  std::optional<std::vector<std::string>> final_gens;
  std::vector<std::string> final_rels;
};

namespace io {

inline std::vector<ScriptStep::Term> parse_cert_terms(const std::string& text, int line) {
  std::vector<ScriptStep::Term> out;
  if (trim(text) == "1")
    return out;
  std::istringstream in(text);
  for (std::string part; std::getline(in, part, ';');) {
    part = trim(part);
    if (part.empty())
      throw ParseError("line " + std::to_string(line) + ": empty certificate term");
    ScriptStep::Term t{0, 1, {}};
    std::string head = part;
    if (auto at = part.find('@'); at != std::string::npos) {
      head = trim(std::string_view(part).substr(0, at));
      t.conjugator = trim(std::string_view(part).substr(at + 1));
    }
    if (head.size() > 3 && head.substr(head.size() - 3) == "^-1") {
      t.sign = -1;
      head = head.substr(0, head.size() - 3);
    }
    t.relator = static_cast<int>(parse_long(head, "line " + std::to_string(line) + ": relator index"));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace io

inline TietzeScript parse_tietze_script(std::string_view text, const std::filesystem::path& base_dir = {}) {
  TietzeScript s;
  std::istringstream in{std::string(text)};
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string line = io::strip_comment(raw);
    if (line.empty())
      continue;
    std::istringstream ls(line);
    std::string op;
    ls >> op;
    std::string rest;
    std::getline(ls, rest);
    rest = io::trim(rest);
    ScriptStep st;
    st.line = lineno;
    st.text = line;
    st.op = op;
    if (op == "automorphism") {
      if (rest.empty())
        throw fail("automorphism needs a path");
      s.automorphism = base_dir / rest;
      continue;
    }
    if (op == "final") {
      if (rest.rfind("gens", 0) == 0) {
        auto eq = rest.find('=');
        if (eq == std::string::npos)
          throw fail("expected 'final gens = ...'");
        s.final_gens = io::split_ws(rest.substr(eq + 1));
      } else if (rest.rfind("rel", 0) == 0) {
        s.final_rels.push_back(io::trim(rest.substr(3)));
      } else {
        throw fail("expected 'final gens' or 'final rel'");
      }
      continue;
    }
    if (op == "addgen") {
      auto def = rest.find(":=");
      if (def == std::string::npos)
        throw fail("expected 'addgen <name> := <word>'");
      st.name = io::trim(rest.substr(0, def));
      st.word = io::trim(rest.substr(def + 2));
      if (!is_identifier(st.name))
        throw fail("bad generator name '" + st.name + "'");
    } else if (op == "delgen") {
      auto parts = io::split_ws(rest);
      if (parts.size() != 3 || parts[1] != "via")
        throw fail("expected 'delgen <name> via <index>'");
      st.name = parts[0];
      st.index = static_cast<int>(io::parse_long(parts[2], "relator index"));
    } else if (op == "addrel" || op == "delrel") {
      auto by = rest.rfind(" by ");
      if (by == std::string::npos)
        throw fail("expected '" + op + " ... by <certificate>'");
      std::string subject = io::trim(rest.substr(0, by));
      std::string cert = io::trim(rest.substr(by + 4));
      if (op == "addrel") {
        st.word = subject;
        if (cert == "anchor")
          st.anchored = true;
        else
          st.certificate = io::parse_cert_terms(cert, lineno);
      } else {
        st.index = static_cast<int>(io::parse_long(subject, "relator index"));
        st.certificate = io::parse_cert_terms(cert, lineno);
      }
    } else {
      throw fail("unknown command '" + op + "'");
    }
    s.steps.push_back(std::move(st));
  }
  if (s.automorphism.empty())
    throw ParseError("script has no 'automorphism' line");
  return s;
}

/// Translates a script step into a move against the current presentation.
inline TietzeMove resolve_step(const AnchoredPresentation& p, const ScriptStep& st) {
  auto cert = [&] {
    Certificate c;
    for (const auto& t : st.certificate)
      c.push_back({t.relator, t.sign, p.parse(t.conjugator)});
    return c;
  };
  if (st.op == "addgen")
    return AddGenerator{st.name, p.parse(st.word)};
  if (st.op == "delgen")
    return RemoveGenerator{st.name, st.index};
  if (st.op == "addrel")
    return AddRelator{p.parse(st.word), st.anchored ? std::nullopt : std::optional<Certificate>(cert())};
  return RemoveRelator{st.index, cert()};
}

/// Cyclic words up to rotation and inversion; `a` and `b` are multisets.
inline bool same_relators_up_to_cyclic(const std::vector<Word>& a, const std::vector<Word>& b) {
  if (a.size() != b.size())
    return false;
  std::vector<bool> used(b.size(), false);
  for (const Word& r : a) {
    bool hit = false;
    for (std::size_t j = 0; j < b.size() && !hit; ++j)
      if (!used[j] && (is_conjugate(r, b[j]) || is_conjugate(r, invert(b[j])))) {
        used[j] = hit = true;
      }
    if (!hit)
      return false;
  }
  return true;
}

struct ReplayStep {
  int line = 0;
  std::string text;
  MoveMode mode = MoveMode::Certified;
  std::size_t generators = 0, relators = 0;
  AbelianInvariants h1;
};

struct ReplayReport {
  bool ok = false;
  std::vector<ReplayStep> steps;
  AbelianInvariants initial_h1;
  bool h1_constant = true;
  std::optional<bool> final_match;  // nullopt when the script states no final form
  std::string error;                // first failure, empty when ok
  AnchoredPresentation result;
};

/// Replays every move from the standard presentation of M_phi; every step is
/// anchor-checked, h1 is tracked, the end state compared with the final form.
inline ReplayReport replay_tietze(const TietzeScript& script, const GroupMorphism& phi) {
  ReplayReport rep;
  auto torus = std::make_shared<const MappingTorus>(phi);
  AnchoredPresentation p = standard_presentation(torus);
  rep.initial_h1 = h1_invariants(p);
  for (const ScriptStep& st : script.steps) {
    ReplayStep rs;
    rs.line = st.line;
    rs.text = st.text;
    try {
      p = apply_tietze_move(p, resolve_step(p, st), &rs.mode);
    } catch (const Error& e) {
      rep.error = "line " + std::to_string(st.line) + ": " + e.what();
      rep.result = p;
      return rep;
    }
    rs.generators = p.generators.size();
    rs.relators = p.relators.size();
    rs.h1 = h1_invariants(p);
    rep.h1_constant = rep.h1_constant && rs.h1 == rep.initial_h1;
    rep.steps.push_back(std::move(rs));
  }
  rep.result = p;
  if (script.final_gens || !script.final_rels.empty()) {
    bool match = true;
    if (script.final_gens) {
      auto want = *script.final_gens, have = p.generators.letters();
      std::sort(want.begin(), want.end());
      std::sort(have.begin(), have.end());
      match = want == have;
    }
    if (match) {
      std::vector<Word> want;
      try {
        for (const std::string& r : script.final_rels)
          want.push_back(p.parse(r));
        match = same_relators_up_to_cyclic(want, p.relators);
      } catch (const ParseError&) {
        match = false;
      }
    }
    rep.final_match = match;
    if (!match)
      rep.error = "end state differs from the stated final form";
  }
  if (!rep.h1_constant && rep.error.empty())
    rep.error = "h1 changed along the chain";
  rep.ok = rep.error.empty();
  return rep;
}

inline ReplayReport replay_tietze_file(const std::filesystem::path& path) {
  TietzeScript s = parse_tietze_script(io::read_file(path), path.parent_path());
  GroupMorphism phi = load_automorphism(s.automorphism);
  return replay_tietze(s, phi);
}

}  // namespace mtsplit

#endif  // MTSPLIT_IO_HPP_
