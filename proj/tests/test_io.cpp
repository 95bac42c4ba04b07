#include <gtest/gtest.h>

#include "mtsplit/io.hpp"

using namespace mtsplit;

namespace {

std::string data(const char* name) { return std::string(MTSPLIT_DATA_DIR) + "/" + name; }

const char* kSwap = "[basis]\nletters = x y\n[images]\nx = y\ny = x\n";

}  // namespace

TEST(Io, ParseAutomorphism) {
  GroupMorphism f = parse_automorphism(std::string("# comment\n") + kSwap);
  EXPECT_EQ(f.basis().letters(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(f.image(0), Word::letter(1));
  EXPECT_FALSE(f.has_inverse());
  GroupMorphism a = load_automorphism(data("pv_alpha.aut"));
  EXPECT_TRUE(a.has_inverse());
  EXPECT_TRUE(verify_automorphism(a));
}

TEST(Io, AutomorphismErrors) {
  EXPECT_THROW(parse_automorphism("[basis]\nletters = x y\n[images]\nx = y\n"), ParseError);
  EXPECT_THROW(parse_automorphism("[basis]\nletters = x y\n[images]\nx = y\ny = x\nx = x\n"), ParseError);
  EXPECT_THROW(parse_automorphism("[basis]\nletters = x y\n[images]\nx = y\ny = x\nz = x\n"), ParseError);
  EXPECT_THROW(parse_automorphism("[basis]\nletters = x y\n[images]\nx = y w\ny = x\n"), ParseError);
  EXPECT_THROW(parse_automorphism("[images]\nx = y\n"), ParseError);
  EXPECT_THROW(load_automorphism(data("no_such_file.aut")), ParseError);
  try {
    parse_automorphism("[basis]\nletters = x y\n[images]\nx = y\nq = x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
  }
}

TEST(Io, AutomorphismRoundTrip) {
  for (const char* name : {"swap.aut", "pv_alpha.aut", "caseA.aut", "caseB.aut", "caseD.aut"}) {
    GroupMorphism f = load_automorphism(data(name));
    std::string text = format_automorphism(f);
    GroupMorphism g = parse_automorphism(text);
    EXPECT_EQ(g.images(), f.images()) << name;
    EXPECT_EQ(format_automorphism(g), text) << name;
  }
}

TEST(Io, CertificateRoundTripAndErrors) {
  for (auto [aut, cert] : {std::pair{"swap.aut", "swap_caseD.cert"}, std::pair{"caseA.aut", "caseA.cert"},
                           std::pair{"caseB.aut", "caseB.cert"}, std::pair{"caseD.aut", "caseD.cert"}}) {
    Basis b = load_automorphism(data(aut)).basis();
    SplittingCertificate c = load_certificate(data(cert), b);
    std::string text = format_certificate(c, b);
    EXPECT_EQ(format_certificate(parse_certificate(text, b), b), text) << cert;
  }
  Basis b({"p", "q", "a0", "a1"});
  EXPECT_THROW(parse_certificate("[case]\nC\n", b), ParseError);
  EXPECT_THROW(parse_certificate("[case]\nA\n[params]\nk = two\n[V]\nletters = p q\n[loops]\nletters = a0 a1\n", b),
               ParseError);
  EXPECT_THROW(parse_certificate("[case]\nA\n[params]\nk = 2\n[V]\nletters = p w\n[loops]\nletters = a0 a1\n", b),
               ParseError);
}

TEST(Io, FormatWitnesses) {
  Basis b({"p", "q"});
  WitnessSet ws{Word(), Word(), std::nullopt, std::nullopt};
  EXPECT_EQ(format_witnesses(ws, b), "v = 1, w = 1");
  ws.v = Word::letter(1);
  ws.a = Word::letter(0);
  ws.x = Word();
  EXPECT_EQ(format_witnesses(ws, b), "v = q, w = 1, a = p, x = 1");
}

TEST(Io, TietzeScriptParse) {
  TietzeScript s = parse_tietze_script(
      "# demo\nautomorphism swap.aut\naddgen s := t^2\ndelgen y via 0\n"
      "addrel s x s^-1 x^-1 by 1 ; 0 ; 1^-1 @ x\nfinal gens = x s t\n",
      MTSPLIT_DATA_DIR);
  EXPECT_EQ(s.steps.size(), 3u);
  ASSERT_TRUE(s.final_gens);
  EXPECT_EQ(*s.final_gens, (std::vector<std::string>{"x", "s", "t"}));
  EXPECT_THROW(parse_tietze_script("automorphism a\nfrobnicate\n"), ParseError);
  EXPECT_THROW(parse_tietze_script("automorphism a\ndelrel x by 1\n"), ParseError);
}
