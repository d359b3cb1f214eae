#pragma once

// Mass-cube covering: grid, per-point pipeline, certificates, journal and the
// inscribed-cube covering check.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccproof/exclusion.hpp"
#include "ccproof/ift.hpp"
#include "ccproof/krawczyk.hpp"

namespace ccproof {

inline constexpr const char* kVersion = "0.1.0";

struct MassGrid {
  Real delta0 = 0.9L;
  int M1 = 2;

  // delta0 + (1 - delta0) k / M1, with k = M1 giving exactly 1.
  Real coordinate(int k) const;
  std::size_t size() const { return std::size_t(M1 + 1) * (M1 + 1) * (M1 + 1); }
  // Row-major in (m1, m3, m4).
  MassPoint point(std::size_t index) const;
  void validate() const;
};

// Everything that changes the content of a certificate.
struct PipelineConfig {
  IftMode mode = IftMode::Rigorous;
  SearchConfig search;
  Real R1 = 0.1L, R2 = 0.2L;
  ExclusionConfig exclusion;
  // Mass-box divisors tried in order by the exclusion stage.
  std::vector<Real> divisors = default_divisors();
  // Also compute reference-mode constants for each certificate.
  bool reference_side_by_side = false;
  ReferenceSampling sampling;
};

// Divisors for covering runs: the inscribed cube eps/sqrt 3 and its fallbacks.
std::vector<Real> cube_divisors();

struct Certificate {
  std::size_t index = 0;
  MassPoint mass;
  // Empty when complete; otherwise "<stage>: <message>".
  std::string failure;
  std::optional<CertifiedSolution> solution;
  std::optional<IftConstants> ift;
  std::optional<IftConstants> ift_reference;
  Point center{};
  Real inner_half_width = 0;
  std::optional<ExclusionReport> exclusion;
  Real mass_half_width = 0;
  Real divisor = 0;
  int retries = 0;

  bool complete() const;
  // Half-width of the mass cube on which uniqueness is proved.
  Real proven_half_width() const;
};

Certificate run_point(std::size_t index, const MassPoint& m, const PipelineConfig& cfg);

nlohmann::json to_json(const Certificate& c);
// Throws CorruptJournal on a malformed record.
Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json config_json(const PipelineConfig& cfg, const MassGrid& grid);
std::string config_hash(const nlohmann::json& config);
// Inverse of config_json. Throws CorruptJournal.
std::pair<PipelineConfig, MassGrid> config_from_json(const nlohmann::json& j);

// Append-only JSON-lines journal: a header record, then one record per grid
// point in index order.
class Journal {
 public:
  // Opens path for appending. An existing journal must carry the same config
  // hash (else CorruptJournal); its records are loaded and a torn final line
  // is dropped.
  Journal(std::string path, const nlohmann::json& config);

  const std::vector<Certificate>& records() const { return records_; }
  void append(const Certificate& c);

  // Reads header config and records without modifying the file.
  static std::pair<nlohmann::json, std::vector<Certificate>> read(const std::string& path);

 private:
  std::string path_;
  std::vector<Certificate> records_;
};

struct GridProgress {
  std::size_t done = 0, total = 0, failed = 0;
};

// Runs every grid point not yet in the journal with the given number of
// worker threads. Records are appended in index order.
std::vector<Certificate> run_grid(const MassGrid& grid, const PipelineConfig& cfg, int workers, Journal* journal,
                                  const std::function<void(const GridProgress&)>& progress = {});

struct CoverageReport {
  bool covered = false;
  Real min_epsilon = 0;
  int required_M1 = 0;
  std::size_t complete = 0, failed = 0;
  std::vector<MassPoint> witnesses;
};

// Smallest M1 with grid spacing side / M1 below the inscribed-cube side
// 2 eps0 / sqrt 3 of the smallest ball.
int required_M1(Real eps0, Real side);

// Exact check that the inscribed cubes of the complete certificates cover
// [delta0, 1]^3 (lower end taken one ulp down, below the decimal delta0).
CoverageReport verify_covering(const std::vector<Certificate>& certs, const MassGrid& grid,
                               std::size_t max_witnesses = 64);

// Re-derives a complete certificate from its recorded boxes: the Krawczyk
// inclusion, bit-identical IFT constants and the inequality, the ball centre,
// and the exclusion run with its leaf digest. Returns the first problem, or
// an empty string. Incomplete certificates prove nothing and pass.
std::string recheck_certificate(const Certificate& c, const PipelineConfig& cfg);

struct CheckReport {
  std::size_t rechecked = 0;
  // (index, problem) for every certificate that did not re-verify.
  std::vector<std::pair<std::size_t, std::string>> problems;
  CoverageReport coverage;
};

// Rechecks every record (in parallel), that each sits at its grid point, and
// the covering.
CheckReport check_certificates(const std::vector<Certificate>& certs, const PipelineConfig& cfg, const MassGrid& grid,
                               int workers, const std::function<void(const GridProgress&)>& progress = {});

}  // namespace ccproof
