#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ccproof/covering.hpp"

using namespace ccproof;
namespace fs = std::filesystem;

namespace {

// A synthetic complete certificate proving the cube of half-width h.
Certificate fake(std::size_t index, const MassPoint& m, Real h) {
  Certificate c;
  c.index = index;
  c.mass = m;
  c.solution = CertifiedSolution{};
  IftConstants k;
  k.epsilon = rounding::mul_up(h, rounding::sqrt_up(3)) * 2;
  c.ift = k;
  ExclusionReport e;
  e.status = ExclusionStatus::Excluded;
  c.exclusion = e;
  c.mass_half_width = h;
  c.divisor = rounding::sqrt_up(3);
  return c;
}

std::vector<Certificate> fake_grid(const MassGrid& g, Real h) {
  std::vector<Certificate> out;
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(fake(i, g.point(i), h));
  return out;
}

std::string temp_path(const char* name) {
  const fs::path p = fs::temp_directory_path() / (std::string("ccproof_") + name);
  fs::remove(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

PipelineConfig quick_config() {
  PipelineConfig cfg;
  cfg.search.grid_n1 = 10;
  cfg.divisors = cube_divisors();
  return cfg;
}

}  // namespace

TEST_CASE("grid coordinates and ordering") {
  MassGrid g{0.9L, 4};
  CHECK(g.size() == 125);
  CHECK(g.coordinate(0) == 0.9L);
  CHECK(g.coordinate(4) == 1);
  const MassPoint p = g.point(1 * 25 + 2 * 5 + 3);
  CHECK(p.m1 == g.coordinate(1));
  CHECK(p.m3 == g.coordinate(2));
  CHECK(p.m4 == g.coordinate(3));
  CHECK_THROWS_AS((MassGrid{1, 2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MassGrid{0.5L, 0}.validate()), std::invalid_argument);
}

TEST_CASE("required M1 from the smallest radius") {
  CHECK(required_M1(0.009L, 1 - 0.6L) == 39);
  CHECK(required_M1(1, 0.1L) == 1);
  CHECK_THROWS_AS(required_M1(0, 1), std::invalid_argument);
}

TEST_CASE("cubes at spacing-sized half-widths cover") {
  const MassGrid g{0.9L, 3};
  const Real spacing = (1 - g.delta0) / g.M1;
  const auto rep = verify_covering(fake_grid(g, spacing * 0.51L), g);
  CHECK(rep.covered);
  CHECK(rep.complete == g.size());
  CHECK(rep.witnesses.empty());
  CHECK(rep.required_M1 <= g.M1);
}

TEST_CASE("gaps are found and located") {
  const MassGrid g{0.9L, 3};
  const Real spacing = (1 - g.delta0) / g.M1;
  const auto thin = verify_covering(fake_grid(g, spacing * 0.49L), g);
  CHECK_FALSE(thin.covered);
  CHECK(thin.required_M1 > g.M1);
  CHECK(thin.witnesses.size() == 27);

  const auto zero = verify_covering(fake_grid(g, 0), g, 1000);
  CHECK_FALSE(zero.covered);
  CHECK(zero.witnesses.size() == 27);

  // One failed point in the middle opens a hole around it.
  auto certs = fake_grid(g, spacing * 0.51L);
  certs[21].failure = "certify: boom";
  const auto hole = verify_covering(certs, g);
  CHECK_FALSE(hole.covered);
  CHECK(hole.failed == 1);
  REQUIRE_FALSE(hole.witnesses.empty());
  const MassPoint w = hole.witnesses.front();
  const MassPoint c = g.point(21);
  CHECK(std::fabs(w.m1 - c.m1) <= spacing);
  CHECK(std::fabs(w.m3 - c.m3) <= spacing);
  CHECK(std::fabs(w.m4 - c.m4) <= spacing);
}

TEST_CASE("one large cube covers everything") {
  const MassGrid g{0.9L, 2};
  std::vector<Certificate> certs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    certs[i].index = i;
    certs[i].mass = g.point(i);
    certs[i].failure = "ift: skipped";
  }
  certs[13] = fake(13, g.point(13), 0.06L);
  const auto rep = verify_covering(certs, g);
  CHECK(rep.covered);
  CHECK(rep.failed == 26);
}

TEST_CASE("certificate JSON round-trips exactly") {
  const auto c = run_point(0, {0.95L, 0.9L, 1}, quick_config());
  REQUIRE(c.complete());
  const auto j = to_json(c);
  const auto back = certificate_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back).dump() == j.dump());
  CHECK(back.ift->epsilon == c.ift->epsilon);
  CHECK(back.solution->enclosure[2].hi() == c.solution->enclosure[2].hi());
  CHECK(back.proven_half_width() == c.proven_half_width());

  auto bad = j;
  bad["ift"]["r"] = "not a number";
  CHECK_THROWS_AS(certificate_from_json(bad), CorruptJournal);
  bad = j;
  bad["status"] = "failed";
  CHECK_THROWS_AS(certificate_from_json(bad), CorruptJournal);
}

TEST_CASE("config hash ignores nothing proof-relevant") {
  const MassGrid g;
  auto cfg = quick_config();
  const auto h = config_hash(config_json(cfg, g));
  CHECK(h.size() == 64);
  CHECK(config_hash(config_json(cfg, g)) == h);
  auto [back, grid] = config_from_json(config_json(cfg, g));
  CHECK(config_hash(config_json(back, grid)) == h);
  cfg.R2 = 0.25L;
  CHECK(config_hash(config_json(cfg, g)) != h);
}

TEST_CASE("journal resume, torn lines and hash mismatch") {
  const MassGrid g{0.9L, 1};
  const auto cfg = quick_config();
  const auto conf = config_json(cfg, g);
  const std::string full = temp_path("full.jsonl");
  {
    Journal j(full, conf);
    const auto certs = run_grid(g, cfg, 3, &j);
    CHECK(certs.size() == 8);
    for (const auto& c : certs) CHECK(c.complete());
  }
  const std::string text = slurp(full);

  // Cut after the third record plus half a line, then resume.
  const std::string part = temp_path("part.jsonl");
  std::size_t cut = 0;
  for (int n = 0; n < 4; ++n) cut = text.find('\n', cut) + 1;
  {
    std::ofstream out(part, std::ios::binary);
    out << text.substr(0, cut + 40);
  }
  {
    Journal j(part, conf);
    CHECK(j.records().size() == 3);
    run_grid(g, cfg, 2, &j);
  }
  CHECK(slurp(part) == text);

  auto other = cfg;
  other.R1 = 0.05L;
  CHECK_THROWS_AS(Journal(full, config_json(other, g)), CorruptJournal);

  // Damage in the middle is not a torn tail.
  std::string broken = text;
  broken[text.find("\"index\"", cut)] = '#';
  {
    std::ofstream out(part, std::ios::binary | std::ios::trunc);
    out << broken;
  }
  CHECK_THROWS_AS(Journal::read(part), CorruptJournal);
  fs::remove(full);
  fs::remove(part);
}

TEST_CASE("recheck accepts honest records and rejects tampered ones") {
  const auto cfg = quick_config();
  const auto c = run_point(0, {1, 0.95L, 0.9L}, cfg);
  REQUIRE(c.complete());
  CHECK(recheck_certificate(c, cfg).empty());

  auto t = c;
  t.ift->epsilon = rounding::next_up(t.ift->epsilon);
  CHECK_FALSE(recheck_certificate(t, cfg).empty());
  t = c;
  t.exclusion->leaf_digest[0] = t.exclusion->leaf_digest[0] == '0' ? '1' : '0';
  CHECK_FALSE(recheck_certificate(t, cfg).empty());
  t = c;
  t.solution->enclosure[1] = Interval(t.solution->enclosure[1].lo(), t.solution->enclosure[1].lo());
  CHECK_FALSE(recheck_certificate(t, cfg).empty());

  const MassGrid g{0.9L, 1};
  std::vector<Certificate> certs{c};
  const auto rep = check_certificates(certs, cfg, g, 1);
  REQUIRE(rep.problems.size() == 1);  // index 0 is the grid point (0.9, 0.9, 0.9)
  CHECK_FALSE(rep.coverage.covered);
}
