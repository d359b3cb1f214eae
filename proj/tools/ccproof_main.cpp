#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ccproof/covering.hpp"

using namespace ccproof;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kMalformed = 1, kProofFailure = 2, kNotCovered = 3, kCheckFailure = 4 };

// Flag values as typed; reals stay strings until parse_real reads them.
struct RunConfig {
  std::string mode = "rigorous";
  int grid_n1 = SearchConfig{}.grid_n1;
  std::string tol = "1e-15";
  int max_depth = SearchConfig{}.max_depth;
  int max_iterations = SearchConfig{}.max_iterations;
  long max_boxes = SearchConfig{}.max_boxes;
  std::string R1 = "0.1", R2 = "0.2";
  int exclusion_max_depth = ExclusionConfig{}.max_depth;
  long exclusion_max_boxes = ExclusionConfig{}.max_boxes;
  std::vector<std::string> divisors;
  int samples = ReferenceSampling{}.samples;
  std::uint64_t seed = ReferenceSampling{}.seed;
  bool reference_side_by_side = false;
  std::string delta0 = "0.9";
  int M1 = 0;
  int max_rounds = 4;
  int workers = int(std::max(1u, std::thread::hardware_concurrency()));
  std::string journal = "cover.jsonl";
  bool json_out = false;
  bool quiet = false;

  PipelineConfig pipeline(bool covering) const {
    PipelineConfig p;
    p.mode = parse_ift_mode(mode);
    p.search.grid_n1 = grid_n1;
    p.search.tol = parse_real(tol);
    p.search.max_depth = max_depth;
    p.search.max_iterations = max_iterations;
    p.search.max_boxes = max_boxes;
    p.R1 = parse_real(R1);
    p.R2 = parse_real(R2);
    p.exclusion.max_depth = exclusion_max_depth;
    p.exclusion.max_boxes = exclusion_max_boxes;
    p.divisors = covering ? cube_divisors() : default_divisors();
    if (!divisors.empty()) {
      p.divisors.clear();
      // "sqrt3" names the inscribed-cube divisor, rounded up.
      for (const auto& d : divisors) p.divisors.push_back(d == "sqrt3" ? rounding::sqrt_up(3) : parse_real(d));
    }
    p.reference_side_by_side = reference_side_by_side;
    p.sampling.samples = samples;
    p.sampling.seed = seed;
    if (p.search.grid_n1 < 1 || !(p.R1 > 0) || !(p.R2 > 0) || p.sampling.samples < 1)
      throw std::invalid_argument("grid-n1, R1, R2 and samples must be positive");
    for (Real d : p.divisors)
      if (!(d >= 1)) throw std::invalid_argument("divisors must be at least 1");
    return p;
  }
};

std::string env_name(const std::string& flag) {
  std::string s = "CCPROOF_";
  for (char c : flag) s += c == '-' ? '_' : char(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

template <class T>
CLI::Option* add(CLI::App& app, const std::string& flag, T& value, const std::string& help) {
  return app.add_option("--" + flag, value, help)->envname(env_name(flag))->capture_default_str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MassPoint read_masses(const std::vector<std::string>& args) {
  if (args.size() != 3 && args.size() != 4) throw std::invalid_argument("give masses as m1 m3 m4 or m1 m2 m3 m4");
  std::vector<Real> v;
  for (const auto& a : args) v.push_back(parse_real(a));
  if (v.size() == 4) {
    if (v[1] != 1) throw std::invalid_argument("m2 is the normalising mass and must be 1");
    v.erase(v.begin() + 1);
  }
  MassPoint m{v[0], v[1], v[2]};
  m.validate();
  return m;
}

json mass_json(const MassPoint& m) { return {format_real(m.m1), "1", format_real(m.m3), format_real(m.m4)}; }

json solution_json(const CertifiedSolution& s) {
  json enc = json::array(), mid = json::array(), diam = json::array();
  for (const auto& c : s.enclosure) {
    enc.push_back(to_string(c));
    mid.push_back(format_real(midpoint(c)));
    diam.push_back(format_real(diameter(c)));
  }
  return {{"enclosure", enc},
          {"midpoint", mid},
          {"diameter", diam},
          {"max_diameter", format_real(max_diameter(s.enclosure))},
          {"residual_bound", format_real(s.midpoint_residual_bound)},
          {"survivors", s.survivor_count},
          {"bisections", s.bisection_count},
          {"krawczyk_steps", s.krawczyk_steps},
          {"refuted", s.refuted_count}};
}

void print_solution(const CertifiedSolution& s) {
  std::printf("unique solution in the admissible box\n");
  for (int i = 0; i < 4; ++i)
    std::printf("  x%d  %s  diam %.3Le\n", i + 1, to_string(s.enclosure[i]).c_str(), diameter(s.enclosure[i]));
  std::printf("  midpoint (%s, %s, %s, %s)\n", format_real(midpoint(s.enclosure[0])).c_str(),
              format_real(midpoint(s.enclosure[1])).c_str(), format_real(midpoint(s.enclosure[2])).c_str(),
              format_real(midpoint(s.enclosure[3])).c_str());
  std::printf("  max diameter %.3Le, |F| <= %.3Le\n", max_diameter(s.enclosure), s.midpoint_residual_bound);
  std::printf("  survivors %zu, bisections %zu, krawczyk steps %zu, refuted %zu\n", s.survivor_count,
              s.bisection_count, s.krawczyk_steps, s.refuted_count);
}

json constants_json(const IftConstants& c) {
  return {{"mode", to_string(c.mode)}, {"M_x", format_real(c.M_x)},   {"L_m", format_real(c.L_m)},
          {"K_xx", format_real(c.K_xx)}, {"K_xm", format_real(c.K_xm)}, {"K_mm", format_real(c.K_mm)},
          {"R1", format_real(c.R1)},     {"R2", format_real(c.R2)},     {"P", format_real(c.P)},
          {"r", format_real(c.r)},       {"epsilon", format_real(c.epsilon)}};
}

void print_constants(const IftConstants& c) {
  std::printf("%-9s M_x %.7Lf  L_m %.7Lf  K_xx %.7Lf  K_xm %.7Lf  K_mm %.7Lf  r %.6Lf  eps %.6Lf\n",
              to_string(c.mode).c_str(), c.M_x, c.L_m, c.K_xx, c.K_xm, c.K_mm, c.r, c.epsilon);
}

class Progress {
 public:
  Progress(std::string label, bool quiet) : label_(std::move(label)), quiet_(quiet) {}
  void operator()(const GridProgress& p) {
    if (quiet_) return;
    const auto now = std::chrono::steady_clock::now();
    if (p.done < p.total && now - last_ < std::chrono::seconds(2)) return;
    last_ = now;
    std::fprintf(stderr, "%s %zu/%zu done, %zu failed\n", label_.c_str(), p.done, p.total, p.failed);
  }

 private:
  std::string label_;
  bool quiet_;
  std::chrono::steady_clock::time_point last_{};
};

int cmd_certify(const RunConfig& rc, const std::vector<std::string>& masses) {
  const MassPoint m = read_masses(masses);
  const PipelineConfig cfg = rc.pipeline(false);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CertifiedSolution s = certify_unique(m, cfg.search);
    const double t = seconds_since(t0);
    if (rc.json_out) {
      json j = solution_json(s);
      j["mass"] = mass_json(m);
      j["status"] = "unique";
      j["seconds"] = t;
      std::cout << j.dump() << '\n';
    } else {
      print_solution(s);
      std::printf("  %.2f s\n", t);
    }
    return kOk;
  } catch (const ProofError& e) {
    if (rc.json_out)
      std::cout << json{{"mass", mass_json(m)}, {"status", "failed"}, {"error", e.what()}}.dump() << '\n';
    std::fprintf(stderr, "proof failed: %s\n", e.what());
    return kProofFailure;
  }
}

int cmd_ball(const RunConfig& rc, const std::vector<std::string>& masses) {
  const MassPoint m = read_masses(masses);
  const PipelineConfig cfg = rc.pipeline(false);
  const auto t0 = std::chrono::steady_clock::now();
  json out{{"mass", mass_json(m)}, {"mode", to_string(cfg.mode)}};
  auto fail = [&](const std::string& stage, const std::exception& e) {
    out["status"] = "failed";
    out["error"] = stage + ": " + e.what();
    if (rc.json_out) std::cout << out.dump() << '\n';
    std::fprintf(stderr, "proof failed in %s: %s\n", stage.c_str(), e.what());
    return kProofFailure;
  };
  CertifiedSolution s;
  try {
    s = certify_unique(m, cfg.search);
  } catch (const ProofError& e) {
    return fail("certify", e);
  }
  out["solution"] = solution_json(s);
  if (!rc.json_out) print_solution(s);

  // Both modes are reported; only the configured one is used for the proof.
  const IftMode other = cfg.mode == IftMode::Rigorous ? IftMode::Reference : IftMode::Rigorous;
  try {
    const IftConstants k = ift_constants(s.enclosure, m, cfg.R1, cfg.R2, other, cfg.sampling);
    out[to_string(other)] = constants_json(k);
    if (!rc.json_out) print_constants(k);
  } catch (const ProofError& e) {
    out[to_string(other)] = {{"error", e.what()}};
    if (!rc.json_out) std::printf("%-9s %s\n", to_string(other).c_str(), e.what());
  }
  UniquenessBall ball;
  try {
    ball = make_ball(s, cfg.R1, cfg.R2, cfg.mode, cfg.sampling);
  } catch (const ProofError& e) {
    return fail("ift", e);
  }
  out[to_string(cfg.mode)] = constants_json(ball.constants);
  if (!rc.json_out) print_constants(ball.constants);

  BallExclusion be;
  try {
    be = exclude_ball(ball, cfg.divisors, cfg.exclusion);
  } catch (const std::invalid_argument& e) {
    return fail("exclusion", e);
  }
  const double t = seconds_since(t0);
  json ex{{"status", to_string(be.report.status)},
          {"boxes_checked", be.report.boxes_checked},
          {"leaves", be.report.leaves},
          {"max_depth_used", be.report.max_depth_used},
          {"leaf_digest", be.report.leaf_digest},
          {"mass_half_width", format_real(be.mass_half_width)},
          {"divisor", format_real(be.divisor)},
          {"inner_half_width", format_real(ball.inner_half_width())},
          {"log", be.log}};
  if (be.report.witness) ex["witness"] = to_string(*be.report.witness);
  out["exclusion"] = ex;
  out["status"] = ball.excluded ? "Excluded" : "Failed";
  out["seconds"] = t;
  if (rc.json_out) {
    std::cout << out.dump() << '\n';
  } else {
    for (const auto& line : be.log) std::printf("  %s\n", line.c_str());
    std::printf("%s: mass box half-width %.6Le around m0, position box half-width %.6Le, %.2f s\n",
                ball.excluded ? "Excluded" : "Failed", be.mass_half_width, ball.inner_half_width(), t);
  }
  return ball.excluded ? kOk : kProofFailure;
}

std::string journal_for(const std::string& base, int M1, bool auto_M1) {
  if (!auto_M1) return base;
  const std::filesystem::path p(base);
  return (p.parent_path() / (p.stem().string() + ".M1-" + std::to_string(M1) + p.extension().string())).string();
}

json coverage_json(const CoverageReport& c) {
  json w = json::array();
  for (const auto& m : c.witnesses) w.push_back(mass_json(m));
  return {{"covered", c.covered},
          {"min_epsilon", format_real(c.min_epsilon)},
          {"required_M1", c.required_M1},
          {"complete", c.complete},
          {"failed", c.failed},
          {"witnesses", w}};
}

int cmd_cover(const RunConfig& rc) {
  const PipelineConfig cfg = rc.pipeline(true);
  MassGrid grid{parse_real(rc.delta0), rc.M1};
  const bool auto_M1 = rc.M1 == 0;
  if (auto_M1) grid.M1 = 1;
  grid.validate();
  if (rc.workers < 1) throw std::invalid_argument("workers must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  json out{{"delta0", format_real(grid.delta0)}, {"auto_M1", auto_M1}};

  if (auto_M1) {
    // Pilot on the corners; the smallest radius there suggests the spacing.
    const auto pilot = run_grid(grid, cfg, rc.workers, nullptr, Progress("[pilot]", rc.quiet));
    const CoverageReport pr = verify_covering(pilot, grid);
    out["pilot"] = coverage_json(pr);
    if (pr.required_M1 == 0) {
      out["covered"] = false;
      if (rc.json_out) std::cout << out.dump() << '\n';
      std::fprintf(stderr, "pilot run proved no corner; cannot suggest M1\n");
      return kNotCovered;
    }
    grid.M1 = pr.required_M1;
    if (!rc.quiet) std::fprintf(stderr, "[pilot] min eps %.6Le, suggested M1 = %d\n", pr.min_epsilon, grid.M1);
  }

  CoverageReport rep;
  std::string path;
  for (int round = 0;; ++round) {
    path = journal_for(rc.journal, grid.M1, auto_M1);
    Journal journal(path, config_json(cfg, grid));
    const auto certs =
        run_grid(grid, cfg, rc.workers, &journal, Progress("[M1=" + std::to_string(grid.M1) + "]", rc.quiet));
    rep = verify_covering(certs, grid);
    if (rep.covered || !auto_M1 || round + 1 >= rc.max_rounds || rep.required_M1 <= grid.M1) break;
    grid.M1 = rep.required_M1;
  }
  const double t = seconds_since(t0);
  out["M1"] = grid.M1;
  out["points"] = grid.size();
  out["journal"] = path;
  out["coverage"] = coverage_json(rep);
  out["covered"] = rep.covered;
  out["seconds"] = t;
  if (rc.json_out) {
    std::cout << out.dump() << '\n';
  } else {
    std::printf("%s: [%s, 1]^3 with M1 = %d (%zu points, %zu failed)\n", rep.covered ? "covered" : "NOT covered",
                rc.delta0.c_str(), grid.M1, grid.size(), rep.failed);
    std::printf("min eps %.6Le, required M1 %d, journal %s, %.1f s\n", rep.min_epsilon, rep.required_M1,
                path.c_str(), t);
    for (const auto& w : rep.witnesses)
      std::printf("  uncovered near (%s, 1, %s, %s)\n", format_real(w.m1).c_str(), format_real(w.m3).c_str(),
                  format_real(w.m4).c_str());
  }
  return rep.covered ? kOk : kNotCovered;
}

int cmd_check(const RunConfig& rc, const std::string& path) {
  if (!std::filesystem::exists(path)) throw std::invalid_argument("no journal at " + path);
  const auto t0 = std::chrono::steady_clock::now();
  json out{{"journal", path}};
  try {
    const auto [config, records] = Journal::read(path);
    const auto [cfg, grid] = config_from_json(config);
    const CheckReport rep = check_certificates(records, cfg, grid, rc.workers, Progress("[check]", rc.quiet));
    const bool missing = records.size() < grid.size();
    json problems = json::array();
    for (const auto& [i, what] : rep.problems) problems.push_back({{"index", i}, {"problem", what}});
    out["config_hash"] = config_hash(config);
    out["records"] = records.size();
    out["points"] = grid.size();
    out["rechecked"] = rep.rechecked;
    out["problems"] = problems;
    out["coverage"] = coverage_json(rep.coverage);
    out["seconds"] = seconds_since(t0);
    const int code = !rep.problems.empty() ? kCheckFailure : rep.coverage.covered ? kOk : kNotCovered;
    out["status"] = code == kOk ? "verified" : code == kNotCovered ? "not covered" : "check failed";
    if (rc.json_out) {
      std::cout << out.dump() << '\n';
    } else {
      std::printf("%zu/%zu records, %zu complete certificates re-verified, %zu problems\n", records.size(),
                  grid.size(), rep.rechecked, rep.problems.size());
      for (const auto& [i, what] : rep.problems) std::printf("  record %zu: %s\n", i, what.c_str());
      if (missing) std::printf("journal is incomplete\n");
      std::printf("%s\n", rep.coverage.covered ? "covering verified" : "NOT covered");
    }
    return code;
  } catch (const CorruptJournal& e) {
    out["status"] = "check failed";
    out["error"] = e.what();
    if (rc.json_out) std::cout << out.dump() << '\n';
    std::fprintf(stderr, "%s\n", e.what());
    return kCheckFailure;
  }
}

int cmd_export(const std::string& path, const std::string& out_path) {
  if (!std::filesystem::exists(path)) throw std::invalid_argument("no journal at " + path);
  std::vector<Certificate> records;
  try {
    records = Journal::read(path).second;
  } catch (const CorruptJournal& e) {
    throw std::invalid_argument(e.what());
  }
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::invalid_argument("cannot write " + out_path);
  }
  std::ostream& os = out_path.empty() ? std::cout : file;
  os << "index,m1,m2,m3,m4,x1,x2,x3,x4,r,epsilon,status\n";
  for (const auto& c : records) {
    os << c.index << ',' << format_real(c.mass.m1) << ",1," << format_real(c.mass.m3) << ','
       << format_real(c.mass.m4);
    for (int i = 0; i < 4; ++i) {
      os << ',';
      if (c.solution) os << format_real(midpoint(c.solution->enclosure[i]));
    }
    os << ',' << (c.ift ? format_real(c.ift->r) : "") << ',' << (c.ift ? format_real(c.ift->epsilon) : "") << ','
       << (c.complete() ? "complete" : "failed") << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computer-assisted uniqueness proof for the convex central configuration of four bodies"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "TOML or INI file with option values; command-line flags win");
  app.fallthrough();
  app.require_subcommand(1);

  RunConfig rc;
  add(app, "mode", rc.mode, "IFT constants: rigorous or reference")
      ->check(CLI::IsMember({"rigorous", "reference"}));
  add(app, "grid-n1", rc.grid_n1, "tiles along x1 in the initial search grid");
  add(app, "tol", rc.tol, "target enclosure diameter");
  add(app, "max-depth", rc.max_depth, "bisection depth limit of the Krawczyk search");
  add(app, "max-iterations", rc.max_iterations, "Krawczyk steps per box before splitting");
  add(app, "max-boxes", rc.max_boxes, "work items per candidate in the Krawczyk search");
  add(app, "R1", rc.R1, "x-ball radius for the second x-derivative bound");
  add(app, "R2", rc.R2, "ball radius for the mixed and mass bounds");
  add(app, "exclusion-max-depth", rc.exclusion_max_depth, "bisection depth limit of the exclusion search");
  add(app, "exclusion-max-boxes", rc.exclusion_max_boxes, "boxes per exclusion attempt");
  add(app, "divisors", rc.divisors, "mass box divisors N (half-width eps/N) tried in order; sqrt3 allowed")
      ->delimiter(',');
  add(app, "samples", rc.samples, "sample count for reference-mode suprema");
  add(app, "seed", rc.seed, "seed for reference-mode sampling");
  add(app, "workers", rc.workers, "worker threads for cover and check");
  app.add_flag("--reference-side-by-side", rc.reference_side_by_side,
               "cover: also record reference-mode constants per point")
      ->envname(env_name("reference-side-by-side"));
  app.add_flag("--json", rc.json_out, "machine-readable output on stdout")->envname(env_name("json"));
  app.add_flag("-q,--quiet", rc.quiet, "no progress on stderr")->envname(env_name("quiet"));

  std::vector<std::string> masses;
  auto* certify = app.add_subcommand("certify", "certify the unique convex solution for masses m1 m3 m4 (m2 = 1)");
  certify->add_option("masses", masses, "m1 m3 m4, or m1 1 m3 m4")->required()->expected(3, 4);
  auto* ball = app.add_subcommand("ball", "uniqueness ball and complement exclusion around masses m1 m3 m4");
  ball->add_option("masses", masses, "m1 m3 m4, or m1 1 m3 m4")->required()->expected(3, 4);

  auto* cover = app.add_subcommand("cover", "cover [delta0, 1]^3 by proven mass cubes");
  add(*cover, "delta0", rc.delta0, "lower end of the mass cube");
  add(*cover, "M1", rc.M1, "grid intervals per side; 0 runs a pilot and uses the suggested value");
  add(*cover, "max-rounds", rc.max_rounds, "auto M1: refinement rounds before giving up");
  add(*cover, "journal", rc.journal, "JSON-lines journal; auto M1 inserts .M1-<n> before the extension");

  std::string journal_path, csv_out;
  auto* check = app.add_subcommand("check", "re-verify every certificate in a journal and the covering");
  check->add_option("journal", journal_path, "journal written by cover")->required();
  auto* exp = app.add_subcommand("export-csv", "write a journal as CSV: mass, x midpoints, r, eps, status");
  exp->add_option("journal", journal_path, "journal written by cover")->required();
  exp->add_option("-o,--output", csv_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (*certify) return cmd_certify(rc, masses);
    if (*ball) return cmd_ball(rc, masses);
    if (*cover) return cmd_cover(rc);
    if (*check) return cmd_check(rc, journal_path);
    if (*exp) return cmd_export(journal_path, csv_out);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMalformed;
  } catch (const CorruptJournal& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kCheckFailure;
  } catch (const ProofError& e) {
    std::fprintf(stderr, "proof failed: %s\n", e.what());
    return kProofFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kMalformed;
  }
  return kMalformed;
}
