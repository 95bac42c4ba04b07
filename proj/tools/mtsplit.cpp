// Command-line front end.
//
// Exit codes: 0 success / nothing found, 1 rejected or failed check,
// 2 malformed input, 3 toroidal obstruction found.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtsplit/mtsplit.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mtsplit;

enum Exit { kOk = 0, kReject = 1, kInput = 2, kObstruction = 3 };

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string aut, cert, script, word, out_dir;
  std::string case_tag = "A";
  int max_len = 4;
  long max_power = 4;
  int k_max = 4, v_max = 4;
  long power = 1;
};

bool structured(const Options& o) { return o.format == "structured"; }

// Missing [inverse] sections are filled in by folding; the derived witness
// is still checked like a supplied one.
GroupMorphism load_with_witness(const std::string& path, json& rep) {
  GroupMorphism phi = load_automorphism(path);
  if (phi.has_inverse()) {
    rep["inverse"] = "supplied";
    return phi;
  }
  auto inv = mtsplit::detail::invert_by_folding(phi);
  if (!inv)
    throw MissingWitness("no [inverse] given and the images are not a basis");
  rep["inverse"] = "derived";
  return phi.with_inverse(*inv);
}

std::string invariants_text(const AbelianInvariants& a) { return format_invariants(a); }

json invariants_json(const AbelianInvariants& a) {
  json t = json::array();
  for (const Integer& d : a.torsion)
    t.push_back(d.str());
  return {{"free_rank", a.free_rank}, {"torsion", t}, {"text", format_invariants(a)}};
}

void print(const Options& o, const json& rep, const std::vector<std::string>& lines) {
  if (structured(o)) {
    std::cout << rep.dump(2) << '\n';
    return;
  }
  for (const std::string& l : lines)
    std::cout << l << '\n';
}

int cmd_verify(const Options& o) {
  json rep;
  rep["command"] = "verify-cert";
  GroupMorphism phi = load_with_witness(o.aut, rep);
  SplittingCertificate cert = load_certificate(o.cert, phi.basis());
  VerifyResult r = verify_certificate(phi, cert);
  const Basis& b = phi.basis();
  rep["case"] = std::string(1, case_letter(case_of(cert)));
  rep["accepted"] = r.accepted();
  std::vector<std::string> lines;
  if (r.accepted()) {
    const WitnessSet& ws = *r.witnesses;
    rep["v"] = format_word(ws.v, b);
    rep["w"] = format_word(ws.w, b);
    if (ws.a)
      rep["a"] = format_word(*ws.a, b);
    if (ws.x)
      rep["x"] = format_word(*ws.x, b);
    lines = {std::string("accepted case ") + case_letter(case_of(cert)), format_witnesses(ws, b)};
  } else {
    const Rejection& rj = r.rejection;
    rep["clause"] = rj.clause;
    rep["letter"] = rj.letter >= 0 ? json(b.name(rj.letter)) : json(nullptr);
    rep["word"] = format_word(rj.word, b);
    rep["message"] = rj.message;
    lines = {"rejected at " + rj.clause + (rj.letter >= 0 ? " (letter " + b.name(rj.letter) + ")" : "") +
                 ": " + rj.message,
             "word: " + display_word(rj.word, b)};
  }
  print(o, rep, lines);
  return r.accepted() ? kOk : kReject;
}

int cmd_emit(const Options& o) {
  json rep;
  rep["command"] = "emit-splitting";
  GroupMorphism phi = load_with_witness(o.aut, rep);
  SplittingCertificate cert = load_certificate(o.cert, phi.basis());
  VerifyResult r = verify_certificate(phi, cert);
  if (!r.accepted()) {
    rep["accepted"] = false;
    rep["clause"] = r.rejection.clause;
    rep["message"] = r.rejection.message;
    print(o, rep, {"rejected at " + r.rejection.clause + ": " + r.rejection.message});
    return kReject;
  }
  MappingTorus torus(phi);
  SplittingDescription d = emit_splitting(torus, cert, *r.witnesses);
  auto violations = check_splitting(d, torus);
  AbelianInvariants h_orig = h1_invariants(standard_presentation(std::make_shared<const MappingTorus>(phi)));
  AbelianInvariants h_new = h1_invariants(d);

  rep["accepted"] = true;
  rep["case"] = std::string(1, case_letter(d.tag));
  rep["kind"] = d.kind == SplitKind::HNN ? "hnn" : "amalgam";
  rep["splitting"] = format_splitting(d);
  json defs = json::object();
  std::vector<std::string> lines = {format_splitting(d)};
  if (d.kind == SplitKind::HNN)
    lines.push_back("stable letter " + d.alphabet.name(d.hnn_stable) + ": " +
                    display_word(d.edge_conjugator, d.alphabet) + " (" + display_word(d.edge.lhs, d.alphabet) +
                    ") " + display_word(invert(d.edge_conjugator), d.alphabet) + " = " +
                    display_word(d.edge.rhs, d.alphabet));
  for (std::size_t i = 0; i < d.definitions.size(); ++i) {
    const std::string name = d.alphabet.name(static_cast<int>(i));
    const std::string def = display_word(d.definitions[i], torus.alphabet());
    defs[name] = def;
    if (name != def)
      lines.push_back(name + " := " + def);
  }
  rep["definitions"] = defs;
  json vj = json::array();
  for (const Violation& v : violations) {
    vj.push_back({{"kind", v.kind}, {"index", v.index}, {"detail", v.detail}});
    lines.push_back("violation " + v.kind + ": " + v.detail);
  }
  rep["violations"] = vj;
  rep["h1_original"] = invariants_json(h_orig);
  rep["h1_emitted"] = invariants_json(h_new);
  rep["h1_agree"] = h_orig == h_new;
  lines.push_back("check: " + (violations.empty() ? std::string("ok") : std::to_string(violations.size()) + " violations"));
  lines.push_back("H1 original = " + invariants_text(h_orig) + ", emitted = " + invariants_text(h_new) +
                  (h_orig == h_new ? " (agree)" : " (DIFFER)"));
  print(o, rep, lines);
  return violations.empty() && h_orig == h_new ? kOk : kReject;
}

int cmd_scan(const Options& o) {
  json rep;
  rep["command"] = "scan-toroidal";
  GroupMorphism phi = load_with_witness(o.aut, rep);
  ScanReport s = toroidal_scan(phi, o.max_len, o.max_power);
  rep["max_len"] = s.max_len;
  rep["max_power"] = s.max_power;
  rep["classes_scanned"] = s.classes_scanned;
  json ob = json::array();
  std::vector<std::string> lines = {"scanned len<=" + std::to_string(s.max_len) +
                                    " powers<=" + std::to_string(s.max_power)};
  for (const Obstruction& x : s.obstructions) {
    ob.push_back({{"w", format_word(x.w, phi.basis())}, {"M", x.power}});
    lines.push_back("w=" + format_word(x.w, phi.basis()) + " M=" + std::to_string(x.power));
  }
  rep["obstructions"] = ob;
  print(o, rep, lines);
  return s.obstructions.empty() ? kOk : kObstruction;
}

int cmd_splitex(const Options& o) {
  json rep;
  rep["command"] = "splitex-check";
  GroupMorphism phi = power(load_with_witness(o.aut, rep), o.power);
  rep["power"] = o.power;
  Word w = parse_word(o.word, phi.basis());
  GroupMorphism psi = extend_by_letter(phi, w, "a");
  rep["psi_a"] = format_word(psi.image(static_cast<int>(phi.rank())), psi.basis());
  std::vector<std::string> lines = {"psi(a) = " + display_word(psi.image(static_cast<int>(phi.rank())), psi.basis())};
  auto direct = check_splitex_direct(phi, w, o.k_max, o.v_max);
  if (direct) {
    rep["direct"] = {{"k", direct->k}, {"v", format_word(direct->v, phi.basis())}};
    lines.push_back("direct k<=" + std::to_string(o.k_max) + " |v|<=" + std::to_string(o.v_max) +
                    ": witness k=" + std::to_string(direct->k) + " v=" + display_word(direct->v, phi.basis()));
  } else {
    rep["direct"] = nullptr;
    lines.push_back("direct k<=" + std::to_string(o.k_max) + " |v|<=" + std::to_string(o.v_max) + ": none");
  }
  json ab = json::array();
  for (const AbelianVerdict& v : check_splitex_abelian(phi, w, o.k_max)) {
    ab.push_back({{"k", v.k}, {"verdict", v.obstructed ? "OBSTRUCTED" : "INCONCLUSIVE"}});
    lines.push_back("abelian k=" + std::to_string(v.k) + ": " + (v.obstructed ? "OBSTRUCTED" : "INCONCLUSIVE"));
  }
  rep["abelian"] = ab;
  print(o, rep, lines);
  return direct ? kReject : kOk;
}

int cmd_h1(const Options& o) {
  json rep;
  rep["command"] = "h1";
  GroupMorphism phi = load_with_witness(o.aut, rep);
  AbelianInvariants h = h1_invariants(standard_presentation(std::make_shared<const MappingTorus>(phi)));
  rep["h1"] = invariants_json(h);
  print(o, rep, {invariants_text(h)});
  return kOk;
}

int cmd_replay(const Options& o) {
  json rep;
  rep["command"] = "tietze-replay";
  namespace fs = std::filesystem;
  TietzeScript script = parse_tietze_script(io::read_file(o.script), fs::path(o.script).parent_path());
  GroupMorphism phi = load_with_witness(script.automorphism.string(), rep);
  ReplayReport r = replay_tietze(script, phi);
  std::vector<std::string> lines = {"start H1 = " + invariants_text(r.initial_h1)};
  json steps = json::array();
  for (const ReplayStep& s : r.steps) {
    const char* mode = s.mode == MoveMode::Certified ? "certified" : "anchored";
    steps.push_back({{"line", s.line},
                     {"move", s.text},
                     {"mode", mode},
                     {"generators", s.generators},
                     {"relators", s.relators},
                     {"h1", invariants_json(s.h1)}});
    lines.push_back("line " + std::to_string(s.line) + " [" + mode + "] " + s.text + "  -> " +
                    std::to_string(s.generators) + " gens, " + std::to_string(s.relators) +
                    " rels, H1 = " + invariants_text(s.h1));
  }
  rep["steps"] = steps;
  json fin = json::array();
  std::string gens;
  for (const std::string& g : r.result.generators.letters())
    gens += (gens.empty() ? "" : " ") + g;
  lines.push_back("final gens = " + gens);
  for (const Word& w : r.result.relators) {
    fin.push_back(r.result.format(w));
    lines.push_back("final rel " + r.result.format(w));
  }
  rep["final_generators"] = gens;
  rep["final_relators"] = fin;
  rep["h1_constant"] = r.h1_constant;
  rep["final_match"] = r.final_match ? json(*r.final_match) : json(nullptr);
  rep["ok"] = r.ok;
  rep["error"] = r.error;
  lines.push_back(r.ok ? "replay ok" : "replay FAILED: " + r.error);
  print(o, rep, lines);
  return r.ok ? kOk : kReject;
}

int cmd_synthesize(const Options& o) {
  json rep;
  rep["command"] = "synthesize";
  if (o.case_tag.size() != 1 || std::string("ABDE").find(o.case_tag) == std::string::npos)
    throw InvalidArgument("--case must be one of A, B, D, E");
  const CaseTag tag = static_cast<CaseTag>(std::string("ABDE").find(o.case_tag));
  SynthesizedInstance inst = synthesize_instance(tag, random_params(tag, o.seed), o.seed);
  namespace fs = std::filesystem;
  fs::create_directories(o.out_dir);
  const std::string stem = "case" + o.case_tag + "_" + std::to_string(o.seed);
  fs::path aut = fs::path(o.out_dir) / (stem + ".aut"), cert = fs::path(o.out_dir) / (stem + ".cert");
  std::ofstream(aut) << format_automorphism(inst.phi);
  std::ofstream(cert) << format_certificate(inst.cert, inst.phi.basis());
  rep["automorphism"] = aut.string();
  rep["certificate"] = cert.string();
  print(o, rep, {"wrote " + aut.string(), "wrote " + cert.string()});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Splittings over Z of mapping tori of free-group automorphisms"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", o.seed, "Seed for randomized commands");

  auto* verify = app.add_subcommand("verify-cert", "Check a splitting certificate against an automorphism");
  verify->add_option("automorphism", o.aut)->required();
  verify->add_option("certificate", o.cert)->required();

  auto* emit = app.add_subcommand("emit-splitting", "Print and check the splitting a certificate yields");
  emit->add_option("automorphism", o.aut)->required();
  emit->add_option("certificate", o.cert)->required();

  auto* scan = app.add_subcommand("scan-toroidal", "Search for periodic conjugacy classes");
  scan->add_option("automorphism", o.aut)->required();
  scan->add_option("--max-len", o.max_len)->check(CLI::NonNegativeNumber);
  scan->add_option("--max-power", o.max_power)->check(CLI::PositiveNumber);

  auto* splitex = app.add_subcommand("splitex-check", "Conditions for psi(a) = a w");
  splitex->add_option("automorphism", o.aut)->required();
  splitex->add_option("--word", o.word)->required();
  splitex->add_option("--k-max", o.k_max)->check(CLI::PositiveNumber);
  splitex->add_option("--v-max", o.v_max)->check(CLI::NonNegativeNumber);
  splitex->add_option("--power", o.power, "Use phi^power in place of phi")->check(CLI::PositiveNumber);

  auto* h1 = app.add_subcommand("h1", "Abelianization of the mapping torus");
  h1->add_option("automorphism", o.aut)->required();

  auto* replay = app.add_subcommand("tietze-replay", "Replay and check a Tietze script");
  replay->add_option("script", o.script)->required();

  auto* synth = app.add_subcommand("synthesize", "Write a random instance of a case template");
  synth->add_option("--case", o.case_tag)->required();
  synth->add_option("--out", o.out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*verify)
      return cmd_verify(o);
    if (*emit)
      return cmd_emit(o);
    if (*scan)
      return cmd_scan(o);
    if (*splitex)
      return cmd_splitex(o);
    if (*h1)
      return cmd_h1(o);
    if (*replay)
      return cmd_replay(o);
    if (*synth)
      return cmd_synthesize(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}
