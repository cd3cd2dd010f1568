#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pluri/io.hpp"

using namespace pluri;

namespace {

const std::string kDomains = PLURI_DOMAINS_DIR;

TEST(ParseComplex, AcceptedForms) {
  EXPECT_EQ(parse_complex("0.5"), cplx(0.5, 0));
  EXPECT_EQ(parse_complex("-0.1-0.3i"), cplx(-0.1, -0.3));
  EXPECT_EQ(parse_complex("2i"), cplx(0, 2));
  EXPECT_EQ(parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("1e-3+2e1i"), cplx(1e-3, 20));
  EXPECT_EQ(parse_complex(" 3 - i"), cplx(3, -1));
}

TEST(ParseComplex, RejectsGarbage) {
  for (const char *s : {"", "abc", "1+", "1+2j", "i2", "--1"})
    EXPECT_THROW(parse_complex(s), InputError) << s;
}

TEST(ParsePoint, OneOrTwoCoordinates) {
  EXPECT_EQ(parse_point("0.5"), Point(0.5));
  EXPECT_EQ(parse_point("0.5,0.1i"), Point(0.5, cplx(0, 0.1)));
  EXPECT_THROW(parse_point("1,2,3"), DimensionError);
  EXPECT_THROW(parse_point("1,x"), InputError);
}

TEST(Format, RoundTripsThroughTheParser) {
  Point p(cplx(0.25, -0.125), cplx(-3.0, 0.5));
  EXPECT_EQ(parse_point(format_point(p)), p);
  EXPECT_EQ(format_complex(cplx(0.5, 0.0)), "0.5+0.0i");
}

TEST(Json, NonFiniteNumbersAsStrings) {
  EXPECT_EQ(num(-kInf), json("-inf"));
  EXPECT_EQ(num(kInf), json("inf"));
  EXPECT_EQ(num(std::nan("")), json("nan"));
  EXPECT_EQ(num(0.25), json(0.25));
  EXPECT_EQ(csv_number(-kInf), "-inf");
  EXPECT_EQ(csv_number(0.1), "0.1");
  auto j = to_json(BoundInterval::pole());
  EXPECT_EQ(j["lo"], "-inf");
  EXPECT_EQ(j["hi"], "-inf");
  EXPECT_EQ(j["width"], 0.0);
}

TEST(Json, PointsAndComplexNumbers) {
  Point p(cplx(0.1, 0.2), cplx(-0.3, 0.0));
  EXPECT_EQ(point_from_json(to_json(p)), p);
  EXPECT_EQ(complex_from_json(json(0.5)), cplx(0.5, 0));
  EXPECT_EQ(complex_from_json(json("0.1-2i")), cplx(0.1, -2));
  EXPECT_THROW(complex_from_json(json::array({1, 2, 3})), InputError);
  EXPECT_THROW(point_from_json(json::array()), InputError);
}

TEST(Domains, ShippedFilesLoad) {
  std::map<std::string, int> dims{{"ball2", 2}, {"disk", 1}, {"bidisk", 2},
                                  {"sublevel_dcg", 2}, {"hartogs_pgvlu", 2},
                                  {"planar_complement", 1}, {"bidisk_mobius", 2}};
  for (const auto &[name, n] : dims) {
    auto d = load_domain(kDomains + "/" + name + ".json");
    EXPECT_EQ(dim(*d), n) << name;
    EXPECT_GT(contains(*d, Point::zeros(n) + (n == 1 ? Point(0.9) : Point(0.1, 0.02))), 0.0)
        << name;
  }
}

TEST(Domains, BuiltinNamesMatchTheFiles) {
  auto a = load_domain("ball2");
  auto b = load_domain(kDomains + "/ball2.json");
  for (const auto &p : sample_points(*a, 20, 4))
    EXPECT_DOUBLE_EQ(contains(*a, p), contains(*b, p));
  EXPECT_THROW(load_domain("no_such_domain"), InputError);
}

TEST(Domains, PushforwardCompositionAgreesWithDirectConstruction) {
  json j = json::parse(R"({"type": "pushforward",
      "source": {"type": "polydisk", "center": [[0, 0], [0, 0]]},
      "map": {"type": "composition", "chain": [
        {"type": "mobius", "coordinate": 0, "a": [0.3, 0.1]}, {"type": "swap"}]}})");
  auto M = domain_from_json(j);
  auto P = make_unit_polydisk(2);
  auto F = compose({coordinate_mobius(P, 0, cplx(0.3, 0.1)), swap_map(P)});
  for (const auto &p : sample_points(*P, 50, 6))
    EXPECT_GT(contains(*M, evaluate(F, p)), 0.0);
}

TEST(Domains, MalformedSpecsRejected) {
  EXPECT_THROW(domain_from_json(json::parse(R"({"radius": 1})")), InputError);
  EXPECT_THROW(domain_from_json(json::parse(R"({"type": "torus"})")), InputError);
  EXPECT_THROW(domain_from_json(json::parse(R"({"type": "ball"})")), InputError);
  EXPECT_THROW(domain_from_json(json::parse(
                   R"({"type": "pushforward", "source": {"type": "disk"}, "map": {"type": "swap"}})")),
               InputError);

  auto path = std::filesystem::temp_directory_path() / "pluri_io_bad.json";
  std::ofstream(path) << "{ \"type\": \"ball\", ";
  EXPECT_THROW(read_json_file(path.string()), InputError);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file("/nonexistent/pluri.json"), InputError);
}

TEST(Scan, DiskRowsMatchTheClosedForm) {
  RunConfig cfg;
  const cplx w(0.2, -0.1);
  std::istringstream in(scan_csv(make_unit_disk(), Point(w), 33, 0, 0.0, cfg));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,lo,hi,lo_provenance,hi_provenance,status");
  int rows = 0, inside = 0, outside = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');)
      f.push_back(cell);
    cplx z(std::stod(f[0]), std::stod(f[1]));
    if (std::abs(z) >= 1) {
      EXPECT_EQ(line.substr(line.size() - 8), ",outside");
      ++outside;
      continue;
    }
    ASSERT_EQ(f.size(), 7u) << line;
    double oracle = std::log(std::abs((z - w) / (1.0 - std::conj(w) * z)));
    EXPECT_NEAR(std::stod(f[2]), oracle, 1e-9) << line;
    EXPECT_NEAR(std::stod(f[3]), oracle, 1e-9) << line;
    EXPECT_EQ(f[6], "inside");
    ++inside;
  }
  EXPECT_EQ(rows, 33 * 33);
  EXPECT_GT(inside, 0);
  EXPECT_GT(outside, 0);
  EXPECT_EQ(scan_csv(make_unit_disk(), Point(w), 0, 0, 0.0, cfg),
            "x,y,lo,hi,lo_provenance,hi_provenance,status\n");
  EXPECT_THROW(scan_csv(make_unit_disk(), Point(w), -1, 0, 0.0, cfg), InputError);
}

TEST(Config, RoundTripAndOverrides) {
  RunConfig c;
  c.seed = 7;
  c.budget.restarts = 3;
  c.tol.pinch = 2e-3;
  RunConfig d;
  apply_config(d, to_json(c));
  EXPECT_EQ(to_json(d), to_json(c));

  RunConfig e;
  apply_config(e, json::parse(R"({"budget": {"annuli": 4}})"));
  EXPECT_EQ(e.budget.annuli, 4);
  EXPECT_EQ(e.budget.restarts, RunConfig{}.budget.restarts);
  EXPECT_THROW(apply_config(e, json::parse(R"({"budget": {"restarts": 0}})")), InputError);
}

} // namespace
