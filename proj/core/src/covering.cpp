#include "ccproof/covering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ccproof/digest.hpp"

namespace ccproof {

using nlohmann::json;

Real MassGrid::coordinate(int k) const {
  if (k >= M1) return 1;
  return delta0 + (1 - delta0) * Real(k) / Real(M1);
}

MassPoint MassGrid::point(std::size_t index) const {
  const std::size_t n = std::size_t(M1) + 1;
  const int k4 = int(index % n), k3 = int(index / n % n), k1 = int(index / n / n);
  return {coordinate(k1), coordinate(k3), coordinate(k4)};
}

void MassGrid::validate() const {
  if (!(delta0 > 0 && delta0 < 1)) throw std::invalid_argument("delta0 must lie in (0, 1)");
  if (M1 < 1) throw std::invalid_argument("M1 must be at least 1");
}

std::vector<Real> cube_divisors() { return {rounding::sqrt_up(3), 3, 6}; }

bool Certificate::complete() const {
  return failure.empty() && solution && ift && exclusion && exclusion->status == ExclusionStatus::Excluded;
}

Real Certificate::proven_half_width() const {
  if (!complete()) return 0;
  // The ball B(m, eps) contains the cube of half-width eps / sqrt 3; a mass
  // box excluded with divisor >= sqrt 3 is itself inside the ball.
  return std::min(mass_half_width, rounding::div_down(ift->epsilon, rounding::sqrt_up(3)));
}

Certificate run_point(std::size_t index, const MassPoint& m, const PipelineConfig& cfg) {
  Certificate c;
  c.index = index;
  c.mass = m;
  auto failed = [&](const char* stage, const std::exception& e) {
    c.failure = std::string(stage) + ": " + e.what();
    return c;
  };
  try {
    c.solution = certify_unique(m, cfg.search);
  } catch (const std::exception& e) {
    return failed("certify", e);
  }
  UniquenessBall ball;
  try {
    ball = make_ball(*c.solution, cfg.R1, cfg.R2, cfg.mode, cfg.sampling);
  } catch (const std::exception& e) {
    return failed("ift", e);
  }
  c.ift = ball.constants;
  c.center = ball.center_x;
  c.inner_half_width = ball.inner_half_width();
  if (cfg.reference_side_by_side && cfg.mode == IftMode::Rigorous) {
    try {
      c.ift_reference = ift_constants(c.solution->enclosure, m, cfg.R1, cfg.R2, IftMode::Reference, cfg.sampling);
    } catch (const ProofError&) {
      // informational only
    }
  }
  try {
    const BallExclusion be = exclude_ball(ball, cfg.divisors, cfg.exclusion);
    c.exclusion = be.report;
    c.mass_half_width = be.mass_half_width;
    c.divisor = be.divisor;
    c.retries = be.retries;
    if (!ball.excluded) c.failure = "exclusion: a box near " + to_string(*be.report.witness) + " was not refuted";
  } catch (const std::exception& e) {
    return failed("exclusion", e);
  }
  return c;
}

// ---- JSON -----------------------------------------------------------------

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw CorruptJournal("corrupt journal: " + what); }

json real(Real v) { return format_real(v); }
Real real(const json& j) { return parse_real(j.get<std::string>()); }

json box_json(const Box& b) {
  json a = json::array();
  for (const Interval& c : b) a.push_back(to_string(c));
  return a;
}
Box box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) corrupt("box needs four intervals");
  Box b;
  for (int i = 0; i < 4; ++i) b[i] = parse_interval(j[i].get<std::string>());
  return b;
}

json point_json(const Point& p) {
  json a = json::array();
  for (Real v : p) a.push_back(real(v));
  return a;
}
Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 4) corrupt("point needs four coordinates");
  Point p;
  for (int i = 0; i < 4; ++i) p[i] = real(j[i]);
  return p;
}

json ift_json(const IftConstants& c) {
  return {{"mode", to_string(c.mode)}, {"L_m", real(c.L_m)}, {"M_x", real(c.M_x)}, {"K_xx", real(c.K_xx)},
          {"K_mm", real(c.K_mm)},      {"K_xm", real(c.K_xm)}, {"R1", real(c.R1)},  {"R2", real(c.R2)},
          {"P", real(c.P)},            {"r", real(c.r)},       {"epsilon", real(c.epsilon)}};
}
IftConstants ift_from(const json& j) {
  IftConstants c;
  c.mode = parse_ift_mode(j.at("mode").get<std::string>());
  c.L_m = real(j.at("L_m"));
  c.M_x = real(j.at("M_x"));
  c.K_xx = real(j.at("K_xx"));
  c.K_mm = real(j.at("K_mm"));
  c.K_xm = real(j.at("K_xm"));
  c.R1 = real(j.at("R1"));
  c.R2 = real(j.at("R2"));
  c.P = real(j.at("P"));
  c.r = real(j.at("r"));
  c.epsilon = real(j.at("epsilon"));
  return c;
}

}  // namespace

json to_json(const Certificate& c) {
  json j;
  j["type"] = "certificate";
  j["index"] = c.index;
  j["mass"] = {{"m1", real(c.mass.m1)}, {"m2", "1"}, {"m3", real(c.mass.m3)}, {"m4", real(c.mass.m4)}};
  j["status"] = c.complete() ? "complete" : "failed";
  if (!c.failure.empty()) j["failure"] = c.failure;
  j["derivatives_digest"] = derivatives_digest();
  if (c.solution) {
    const auto& s = *c.solution;
    j["solution"] = {{"krawczyk_box", box_json(s.krawczyk_box)},
                     {"enclosure", box_json(s.enclosure)},
                     {"residual_bound", real(s.midpoint_residual_bound)},
                     {"survivor_count", s.survivor_count},
                     {"bisection_count", s.bisection_count},
                     {"krawczyk_steps", s.krawczyk_steps},
                     {"refuted_count", s.refuted_count}};
  }
  if (c.ift) {
    j["ift"] = ift_json(*c.ift);
    j["ball"] = {{"center", point_json(c.center)}, {"inner_half_width", real(c.inner_half_width)}};
  }
  if (c.ift_reference) j["ift_reference"] = ift_json(*c.ift_reference);
  if (c.exclusion) {
    const auto& e = *c.exclusion;
    json x = {{"status", to_string(e.status)},
              {"boxes_checked", e.boxes_checked},
              {"leaves", e.leaves},
              {"max_depth_used", e.max_depth_used},
              {"leaf_digest", e.leaf_digest},
              {"mass_half_width", real(c.mass_half_width)},
              {"divisor", real(c.divisor)},
              {"retries", c.retries}};
    if (e.witness) x["witness"] = box_json(*e.witness);
    j["exclusion"] = x;
  }
  return j;
}

Certificate certificate_from_json(const json& j) {
  try {
    if (j.at("type") != "certificate") corrupt("expected a certificate record");
    Certificate c;
    c.index = j.at("index").get<std::size_t>();
    const json& m = j.at("mass");
    c.mass = {real(m.at("m1")), real(m.at("m3")), real(m.at("m4"))};
    if (j.contains("failure")) c.failure = j["failure"].get<std::string>();
    if (j.contains("solution")) {
      const json& s = j["solution"];
      CertifiedSolution sol;
      sol.mass = c.mass;
      sol.krawczyk_box = box_from(s.at("krawczyk_box"));
      sol.enclosure = box_from(s.at("enclosure"));
      sol.midpoint_residual_bound = real(s.at("residual_bound"));
      sol.survivor_count = s.at("survivor_count").get<std::size_t>();
      sol.bisection_count = s.at("bisection_count").get<std::size_t>();
      sol.krawczyk_steps = s.at("krawczyk_steps").get<std::size_t>();
      sol.refuted_count = s.at("refuted_count").get<std::size_t>();
      c.solution = sol;
    }
    if (j.contains("ift")) {
      c.ift = ift_from(j["ift"]);
      c.center = point_from(j.at("ball").at("center"));
      c.inner_half_width = real(j.at("ball").at("inner_half_width"));
    }
    if (j.contains("ift_reference")) c.ift_reference = ift_from(j["ift_reference"]);
    if (j.contains("exclusion")) {
      const json& x = j["exclusion"];
      ExclusionReport e;
      const std::string status = x.at("status").get<std::string>();
      if (status != "Excluded" && status != "Failed") corrupt("unknown exclusion status " + status);
      e.status = status == "Excluded" ? ExclusionStatus::Excluded : ExclusionStatus::Failed;
      e.boxes_checked = x.at("boxes_checked").get<std::uint64_t>();
      e.leaves = x.at("leaves").get<std::uint64_t>();
      e.max_depth_used = x.at("max_depth_used").get<int>();
      e.leaf_digest = x.at("leaf_digest").get<std::string>();
      if (x.contains("witness")) e.witness = box_from(x["witness"]);
      c.exclusion = e;
      c.mass_half_width = real(x.at("mass_half_width"));
      c.divisor = real(x.at("divisor"));
      c.retries = x.at("retries").get<int>();
    }
    if ((j.at("status") == "complete") != c.complete()) corrupt("status field disagrees with record content");
    return c;
  } catch (const CorruptJournal&) {
    throw;
  } catch (const std::exception& e) {
    corrupt(e.what());
  }
}

json config_json(const PipelineConfig& cfg, const MassGrid& grid) {
  json div = json::array();
  for (Real d : cfg.divisors) div.push_back(real(d));
  return {{"mode", to_string(cfg.mode)},
          {"delta0", real(grid.delta0)},
          {"M1", grid.M1},
          {"grid_n1", cfg.search.grid_n1},
          {"tol", real(cfg.search.tol)},
          {"max_depth", cfg.search.max_depth},
          {"max_iterations", cfg.search.max_iterations},
          {"max_boxes", cfg.search.max_boxes},
          {"R1", real(cfg.R1)},
          {"R2", real(cfg.R2)},
          {"exclusion_max_depth", cfg.exclusion.max_depth},
          {"exclusion_max_boxes", cfg.exclusion.max_boxes},
          {"divisors", div},
          {"reference_side_by_side", cfg.reference_side_by_side},
          {"reference_samples", cfg.sampling.samples},
          {"reference_seed", cfg.sampling.seed},
          {"version", kVersion},
          {"derivatives_digest", derivatives_digest()}};
}

std::string config_hash(const json& config) { return sha256_hex(config.dump()); }

std::pair<PipelineConfig, MassGrid> config_from_json(const json& j) {
  try {
    PipelineConfig cfg;
    MassGrid grid;
    cfg.mode = parse_ift_mode(j.at("mode").get<std::string>());
    grid.delta0 = real(j.at("delta0"));
    grid.M1 = j.at("M1").get<int>();
    cfg.search.grid_n1 = j.at("grid_n1").get<int>();
    cfg.search.tol = real(j.at("tol"));
    cfg.search.max_depth = j.at("max_depth").get<int>();
    cfg.search.max_iterations = j.at("max_iterations").get<int>();
    cfg.search.max_boxes = j.at("max_boxes").get<long>();
    cfg.R1 = real(j.at("R1"));
    cfg.R2 = real(j.at("R2"));
    cfg.exclusion.max_depth = j.at("exclusion_max_depth").get<int>();
    cfg.exclusion.max_boxes = j.at("exclusion_max_boxes").get<long>();
    cfg.divisors.clear();
    for (const json& d : j.at("divisors")) cfg.divisors.push_back(real(d));
    cfg.reference_side_by_side = j.at("reference_side_by_side").get<bool>();
    cfg.sampling.samples = j.at("reference_samples").get<int>();
    cfg.sampling.seed = j.at("reference_seed").get<std::uint64_t>();
    if (j.at("derivatives_digest") != derivatives_digest())
      corrupt("journal was written with derivative code " + j["derivatives_digest"].get<std::string>());
    return {cfg, grid};
  } catch (const CorruptJournal&) {
    throw;
  } catch (const std::exception& e) {
    corrupt(std::string("bad config: ") + e.what());
  }
}

// ---- journal ---------------------------------------------------------------

namespace {

struct ParsedJournal {
  json config;
  std::vector<Certificate> records;
  // Byte length of the well-formed prefix.
  std::size_t valid_bytes = 0;
};

ParsedJournal parse_journal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open journal " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  ParsedJournal out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;  // torn final line
    const std::string line = text.substr(pos, nl - pos);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      corrupt("line " + std::to_string(out.records.size() + 1) + ": " + e.what());
    }
    if (header) {
      if (!j.contains("type") || j["type"] != "header") corrupt("missing header record");
      out.config = j.at("config");
      if (j.at("config_hash") != config_hash(out.config)) corrupt("header hash does not match its config");
      header = false;
    } else {
      Certificate c = certificate_from_json(j);
      if (c.index != out.records.size()) corrupt("records out of order at index " + std::to_string(c.index));
      out.records.push_back(std::move(c));
    }
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  if (header) corrupt("missing header record");
  return out;
}

}  // namespace

Journal::Journal(std::string path, const json& config) : path_(std::move(path)) {
  namespace fs = std::filesystem;
  const std::string hash = config_hash(config);
  if (fs::exists(path_) && fs::file_size(path_) > 0) {
    ParsedJournal p = parse_journal(path_);
    if (config_hash(p.config) != hash)
      throw CorruptJournal("journal " + path_ + " was written with config hash " + config_hash(p.config) +
                           ", current config hash is " + hash);
    if (p.valid_bytes < fs::file_size(path_)) fs::resize_file(path_, p.valid_bytes);
    records_ = std::move(p.records);
    return;
  }
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create journal " + path_);
  out << json{{"type", "header"}, {"config", config}, {"config_hash", hash}}.dump() << '\n';
  if (!out) throw std::runtime_error("cannot write journal " + path_);
}

void Journal::append(const Certificate& c) {
  if (c.index != records_.size()) throw std::logic_error("journal records must be appended in index order");
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << to_json(c).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to journal " + path_);
  records_.push_back(c);
}

std::pair<json, std::vector<Certificate>> Journal::read(const std::string& path) {
  ParsedJournal p = parse_journal(path);
  return {std::move(p.config), std::move(p.records)};
}

// ---- grid run --------------------------------------------------------------

std::vector<Certificate> run_grid(const MassGrid& grid, const PipelineConfig& cfg, int workers, Journal* journal,
                                  const std::function<void(const GridProgress&)>& progress) {
  grid.validate();
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  std::vector<Certificate> out = journal ? journal->records() : std::vector<Certificate>{};
  const std::size_t total = grid.size();
  if (out.size() > total) throw CorruptJournal("journal holds more records than the grid has points");

  GridProgress prog;
  prog.total = total;
  prog.done = out.size();
  for (const auto& c : out) prog.failed += !c.complete();

  std::atomic<std::size_t> next{out.size()};
  std::mutex mu;
  std::condition_variable ready;
  std::map<std::size_t, Certificate> pending;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      Certificate c;
      try {
        c = run_point(i, grid.point(i), cfg);
      } catch (const std::exception& e) {
        c.index = i;
        c.mass = grid.point(i);
        c.failure = std::string("internal: ") + e.what();
      }
      std::lock_guard lock(mu);
      pending.emplace(i, std::move(c));
      ready.notify_one();
    }
  };
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);

  // Single writer: records leave in index order whatever the interleaving.
  while (out.size() < total) {
    Certificate c;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return pending.count(out.size()) > 0; });
      auto it = pending.find(out.size());
      c = std::move(it->second);
      pending.erase(it);
    }
    if (journal) journal->append(c);
    prog.failed += !c.complete();
    out.push_back(std::move(c));
    prog.done = out.size();
    if (progress) progress(prog);
  }
  return out;
}

// ---- covering --------------------------------------------------------------

int required_M1(Real eps0, Real side) {
  if (!(eps0 > 0) || !(side > 0)) throw std::invalid_argument("required_M1 needs positive eps0 and side");
  const Real q = side * std::sqrt(Real(3)) / (2 * eps0);
  return int(std::floor(q)) + 1;
}

namespace {

using Box3 = std::array<std::pair<Real, Real>, 3>;

void subtract(const Box3& r, const Box3& c, std::vector<Box3>& out) {
  for (int d = 0; d < 3; ++d)
    if (!(r[d].first < c[d].second && c[d].first < r[d].second)) {
      out.push_back(r);
      return;
    }
  Box3 rest = r;
  for (int d = 0; d < 3; ++d) {
    if (rest[d].first < c[d].first) {
      Box3 piece = rest;
      piece[d].second = c[d].first;
      out.push_back(piece);
      rest[d].first = c[d].first;
    }
    if (c[d].second < rest[d].second) {
      Box3 piece = rest;
      piece[d].first = c[d].second;
      out.push_back(piece);
      rest[d].second = c[d].second;
    }
  }
}

}  // namespace

CoverageReport verify_covering(const std::vector<Certificate>& certs, const MassGrid& grid,
                               std::size_t max_witnesses) {
  grid.validate();
  CoverageReport rep;
  const int n = grid.M1;
  std::vector<Real> edges(n + 1);
  for (int k = 0; k <= n; ++k) edges[k] = grid.coordinate(k);
  // One ulp below the stored delta0 lies below the decimal it was read from.
  edges[0] = rounding::next_down(grid.delta0);

  std::vector<Box3> cubes;
  Real min_eff = 0;
  bool any = false;
  for (const auto& c : certs) {
    if (!c.complete()) {
      ++rep.failed;
      continue;
    }
    ++rep.complete;
    const Real h = std::max(Real(0), c.proven_half_width());
    rep.min_epsilon = any ? std::min(rep.min_epsilon, c.ift->epsilon) : c.ift->epsilon;
    const Real eff = h * std::sqrt(Real(3));
    min_eff = any ? std::min(min_eff, eff) : eff;
    any = true;
    const auto m = c.mass.as_array();
    Box3 b;
    for (int d = 0; d < 3; ++d) b[d] = {rounding::sub_up(m[d], h), rounding::add_down(m[d], h)};
    if (b[0].first < b[0].second && b[1].first < b[1].second && b[2].first < b[2].second) cubes.push_back(b);
  }
  if (any && min_eff > 0) rep.required_M1 = required_M1(min_eff, 1 - grid.delta0);

  // Bucket cubes by the cells they meet.
  auto cell_range = [&](Real lo, Real hi) {
    const int a = int(std::upper_bound(edges.begin(), edges.end(), lo) - edges.begin()) - 1;
    const int b = int(std::lower_bound(edges.begin(), edges.end(), hi) - edges.begin());
    return std::pair{std::max(a, 0), std::min(b, n)};
  };
  std::vector<std::vector<int>> bucket(std::size_t(n) * n * n);
  for (int id = 0; id < int(cubes.size()); ++id) {
    const auto [a0, b0] = cell_range(cubes[id][0].first, cubes[id][0].second);
    const auto [a1, b1] = cell_range(cubes[id][1].first, cubes[id][1].second);
    const auto [a2, b2] = cell_range(cubes[id][2].first, cubes[id][2].second);
    for (int i = a0; i < b0; ++i)
      for (int j = a1; j < b1; ++j)
        for (int k = a2; k < b2; ++k) bucket[(std::size_t(i) * n + j) * n + k].push_back(id);
  }

  rep.covered = true;
  std::vector<Box3> remaining, next;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        remaining = {Box3{std::pair{edges[i], edges[i + 1]}, {edges[j], edges[j + 1]}, {edges[k], edges[k + 1]}}};
        for (int id : bucket[(std::size_t(i) * n + j) * n + k]) {
          next.clear();
          for (const Box3& r : remaining) subtract(r, cubes[id], next);
          remaining.swap(next);
          if (remaining.empty()) break;
        }
        if (!remaining.empty()) {
          rep.covered = false;
          if (rep.witnesses.size() < max_witnesses) {
            const Box3& w = remaining.front();
            rep.witnesses.push_back({(w[0].first + w[0].second) / 2, (w[1].first + w[1].second) / 2,
                                     (w[2].first + w[2].second) / 2});
          }
        }
      }
  return rep;
}

// ---- recheck ---------------------------------------------------------------

namespace {

bool same(const IftConstants& a, const IftConstants& b) {
  return a.mode == b.mode && a.L_m == b.L_m && a.M_x == b.M_x && a.K_xx == b.K_xx && a.K_mm == b.K_mm &&
         a.K_xm == b.K_xm && a.R1 == b.R1 && a.R2 == b.R2 && a.P == b.P && a.r == b.r && a.epsilon == b.epsilon;
}

}  // namespace

std::string recheck_certificate(const Certificate& c, const PipelineConfig& cfg) {
  if (!c.complete()) return {};
  const CertifiedSolution& s = *c.solution;
  try {
    if (!verify_enclosure(s.krawczyk_box, s.enclosure, c.mass)) return "enclosure does not re-verify";
    const IftConstants k = ift_constants(s.enclosure, c.mass, cfg.R1, cfg.R2, cfg.mode, cfg.sampling);
    if (!same(k, *c.ift)) return "recomputed IFT constants differ from the record";
    if (!ift_inequality_holds(k)) return "IFT inequality fails for the recorded r and epsilon";
    UniquenessBall ball;
    ball.center_mass = c.mass;
    ball.enclosure = s.enclosure;
    ball.center_x = midpoint(s.enclosure);
    ball.constants = k;
    ball.r = k.r;
    ball.epsilon = k.epsilon;
    if (ball.center_x != c.center || ball.inner_half_width() != c.inner_half_width)
      return "ball centre or inner half-width differs from the record";
    if (std::find(cfg.divisors.begin(), cfg.divisors.end(), c.divisor) == cfg.divisors.end())
      return "divisor " + format_real(c.divisor) + " is not configured";
    if (c.mass_half_width != rounding::div_down(k.epsilon, c.divisor)) return "mass half-width is not epsilon / divisor";
    const ExclusionReport e =
        exclude(complement_boxes(c.center, c.inner_half_width), MassInterval::cube(c.mass, c.mass_half_width),
                cfg.exclusion);
    if (e.status != ExclusionStatus::Excluded) return "exclusion does not re-verify";
    if (e.leaf_digest != c.exclusion->leaf_digest) return "exclusion leaf digest differs from the record";
  } catch (const std::exception& e) {
    return std::string("recheck threw: ") + e.what();
  }
  return {};
}

CheckReport check_certificates(const std::vector<Certificate>& certs, const PipelineConfig& cfg, const MassGrid& grid,
                               int workers, const std::function<void(const GridProgress&)>& progress) {
  grid.validate();
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  CheckReport rep;
  std::vector<std::string> problem(certs.size());
  std::atomic<std::size_t> next{0}, done{0}, failed{0};
  std::mutex mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= certs.size()) return;
      const Certificate& c = certs[i];
      if (c.index != i || i >= grid.size() || !(c.mass == grid.point(i)))
        problem[i] = "record does not sit at grid point " + std::to_string(i);
      else
        problem[i] = recheck_certificate(c, cfg);
      failed += !problem[i].empty();
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(mu);
        progress({d, certs.size(), failed});
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < certs.size(); ++i) {
    rep.rechecked += certs[i].complete();
    if (!problem[i].empty()) rep.problems.emplace_back(i, problem[i]);
  }
  rep.coverage = verify_covering(certs, grid);
  return rep;
}

}  // namespace ccproof
