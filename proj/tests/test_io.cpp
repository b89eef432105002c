#include <string>

#include <gtest/gtest.h>

#include "mslab/dot.hpp"
#include "mslab/io.hpp"
#include "mslab/maxa.hpp"
#include "mslab/random.hpp"
#include "mslab/relquant.hpp"
#include "mslab/topology.hpp"

using namespace mslab;

namespace {

std::string data(const std::string &name) { return std::string(MSLAB_DATA_DIR) + "/" + name; }

std::string parse_message(const std::string &text) {
  try {
    parse_json(text, "in.json");
  } catch (const ParseError &e) {
    return e.what();
  }
  return {};
}

std::string schema_message(const std::string &text) {
  try {
    quantale_from_json(parse_json(text, "in.json"));
  } catch (const ParseError &e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST(Json, ParseErrorNamesLineAndColumn) {
  const std::string msg = parse_message("{\n \"a\": 1,\n \"b\": [1 2]\n}");
  EXPECT_EQ(msg.rfind("in.json:3:", 0), 0u) << msg;
  EXPECT_NE(msg.find("\"b\": [1 2]"), std::string::npos) << msg;
  EXPECT_TRUE(parse_message("{\"a\": 1}").empty());
}

TEST(Json, MalformedFileIsParseError) {
  try {
    load_json(data("malformed_quantale.json"));
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("malformed_quantale.json:4:"), std::string::npos) << msg;
  }
  EXPECT_THROW(load_json(data("missing.json")), ParseError);
}

TEST(Json, SchemaErrorsNameTheField) {
  EXPECT_NE(schema_message(R"({"size": 1, "leq": [[1]], "prod": [[0]]})").find("inv"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"size": 1, "leq": [[1]], "prod": [[3]], "inv": [0]})")
                .find("prod[0][0]"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"size": 0, "leq": [], "prod": [], "inv": []})").find("size"),
            std::string::npos);
  EXPECT_NE(schema_message(R"({"size": 2, "leq": [[1, 1]], "prod": [[0, 0], [0, 1]], "inv": [0, 1]})")
                .find("leq"),
            std::string::npos);
}

TEST(Json, QuantaleRoundTrip) {
  const FiniteQuantale q = quantale_from_json(load_json(data("chain3_quantale.json")));
  EXPECT_EQ(q.size(), 3u);
  EXPECT_TRUE(check_axioms(q).passed());
  ASSERT_TRUE(q.opens);
  EXPECT_TRUE(check_continuity(q).passed());
  const FiniteQuantale back = quantale_from_json(quantale_to_json(q));
  EXPECT_EQ(back.leq, q.leq);
  EXPECT_EQ(back.prod, q.prod);
  EXPECT_EQ(back.inv, q.inv);
  EXPECT_EQ(back.names, q.names);
  EXPECT_EQ(*back.opens, *q.opens);
  const FiniteQuantale r = relation_quantale(2);
  EXPECT_EQ(quantale_from_json(quantale_to_json(r)).prod, r.prod);
}

TEST(Json, CorruptedQuantaleLoadsButFailsAxioms) {
  const FiniteQuantale q = quantale_from_json(load_json(data("corrupted_quantale.json")));
  EXPECT_FALSE(check_axioms(q).passed());
}

TEST(Json, SpacesAndLattices) {
  const FiniteSpace z = space_from_json(load_json(data("z_space.json")));
  EXPECT_EQ(z.size(), 3u);
  EXPECT_TRUE(check_sober(z).passed());
  const FiniteSpace s = space_from_json(load_json(data("sierpinski.json")));
  EXPECT_EQ(s.opens.size(), 3u);
  const FiniteSpace d = space_from_json(load_json(data("discrete2.json")));
  EXPECT_EQ(d.opens.size(), 4u);
  const FiniteSpace back = space_from_json(space_to_json(z));
  EXPECT_EQ(back.points, z.points);
  EXPECT_EQ(back.opens, z.opens);
  const FiniteLattice m3 = lattice_from_json(load_json(data("m3_lattice.json")));
  EXPECT_EQ(m3.size(), 5u);
  EXPECT_FALSE(check_distributive(m3).passed());
  EXPECT_THROW(space_from_json(parse_json(R"({"points": ["a"], "opens": [[0]]})", "x")), Error);
}

TEST(Json, GroupoidRoundTrip) {
  const FiniteGroupoid g = groupoid_from_json(load_json(data("pair_groupoid2.json")));
  EXPECT_TRUE(check_groupoid(g).passed());
  EXPECT_EQ(g.arrows.size(), 4u);
  const FiniteGroupoid p = pair_groupoid(2);
  const FiniteGroupoid back = groupoid_from_json(groupoid_to_json(p));
  EXPECT_EQ(back.compose, p.compose);
  EXPECT_EQ(back.inverse, p.inverse);
  EXPECT_FALSE(back.compose[0][2].has_value());
}

TEST(Json, SubspaceRoundTrip) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 3;
    const Subspace p = random_subspace(rng, n, n * n);
    const Subspace back = subspace_from_json(subspace_to_json(p));
    ASSERT_TRUE(equal(back, p));
    ASSERT_EQ(subspace_to_json(p)["dim"], p.dim());
  }
  EXPECT_THROW(subspace_from_json(parse_json(R"({"n": 1, "generators": [[[1]]]})", "x")),
               ParseError);
  EXPECT_THROW(subspace_from_json(parse_json(R"({"n": 0, "generators": []})", "x")),
               ParseError);
}

TEST(Json, MatrixSnapsNoiseToZero) {
  ComplexMatrix m(1, 1);
  m(0, 0) = Complex(1e-15, 0.5);
  const Json j = matrix_to_json(m);
  EXPECT_EQ(j[0][0].get<double>(), 0.0);
  EXPECT_FALSE(std::signbit(matrix_to_json(-m)[0][0].get<double>()));
  EXPECT_EQ(j[0][1].get<double>(), 0.5);
}

TEST(Json, RoundSig) {
  EXPECT_EQ(round_sig(0.1 + 0.2), 0.3);
  EXPECT_EQ(round_sig(-0.0), 0.0);
  EXPECT_EQ(round_sig(123456789.123456789), 123456789.123);
  EXPECT_EQ(round_sig(1.0 / 3.0, 3), 0.333);
}

TEST(Dot, HasseDiagram) {
  const auto f = spin_half_fixtures();
  const auto covers = hasse({f["0"], f["z_up"], f["z"]});
  const std::string dot = to_dot("fragment", {"0", "z_up", "z"}, covers);
  EXPECT_EQ(dot, "digraph \"fragment\" {\n"
                 "  rankdir=BT;\n"
                 "  n0 [label=\"0\"];\n"
                 "  n1 [label=\"z_up\"];\n"
                 "  n2 [label=\"z\"];\n"
                 "  n0 -> n1;\n"
                 "  n1 -> n2;\n"
                 "}\n");
  EXPECT_NE(to_dot("q", {"a \"b\""}, {}).find("\\\"b\\\""), std::string::npos);
}
