// End-to-end acceptance run: drives the command-line tool and prints one
// PASS/FAIL line per criterion.
//
//   acceptance <ccproof binary> <unit_tests binary> <work dir>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "ccproof/covering.hpp"

using namespace ccproof;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  double seconds = 0;
};

Run run(const std::string& cmd) {
  Run r;
  const auto t0 = std::chrono::steady_clock::now();
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json parse_last_line(const std::string& out) {
  std::istringstream in(out);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  try {
    return json::parse(last);
  } catch (const json::exception&) {
    return {};
  }
}

Real get(const json& j, const char* key) { return parse_real(j.at(key).get<std::string>()); }

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  failures += !ok;
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

void equal_masses(const std::string& cli) {
  const Run r = run(cli + " certify 1 1 1 --json -q");
  const json j = parse_last_line(r.out);
  bool ok = r.exit_code == 0 && j.value("status", "") == "unique";
  Real worst = 0;
  if (ok) {
    const Real exact[4] = {0, 1, 0, -1};
    for (int i = 0; i < 4; ++i) {
      const Interval e = parse_interval(j["enclosure"][i].get<std::string>());
      ok = ok && e.contains(exact[i]);
      worst = std::max(worst, diameter(e));
    }
  }
  ok = ok && worst < 1e-15L && r.seconds < 60;
  report(1, ok,
         "certify 1 1 1 encloses (0,1,0,-1), max diameter " + fmt("%.3e", double(worst)) + ", " +
             fmt("%.2f s", r.seconds));
}

void unequal_masses(const std::string& cli) {
  const Run r = run(cli + " certify 0.2 0.3 0.4 --json -q");
  const json j = parse_last_line(r.out);
  const char* published[4] = {"[0.15385328707521665441880634609065, 0.15385328707521665448042670172252]",
                              "[1.4086619698548151890849667722929, 1.4086619698548151891412057380232]",
                              "[0.11611158428853550145374041262273, 0.11611158428853550155068635233120]",
                              "[-1.484878202646704369219144317714, -1.484878202646704369133519439332]"};
  bool ok = r.exit_code == 0 && j.value("status", "") == "unique";
  Real worst = 0;
  if (ok)
    for (int i = 0; i < 4; ++i) {
      const Interval e = parse_interval(j["enclosure"][i].get<std::string>());
      const Interval p = enclose_interval(published[i]);
      ok = ok && overlaps(e, p);
      worst = std::max(worst, std::fabs(midpoint(e) - midpoint(p)));
    }
  ok = ok && worst < 1e-15L && r.seconds < 120;
  report(2, ok,
         "certify 0.2 0.3 0.4 meets the published intervals, midpoint error " + fmt("%.3e", double(worst)) + ", " +
             fmt("%.2f s", r.seconds));
}

void survivors(const std::string& cli) {
  const json a = parse_last_line(run(cli + " certify 1 1 1 --grid-n1 20 --json -q").out);
  const json b = parse_last_line(run(cli + " certify 0.2 0.3 0.4 --grid-n1 15 --json -q").out);
  const long sa = a.value("survivors", -1L), sb = b.value("survivors", -1L);
  report(3, sa >= 30 && sa <= 120 && sb >= 30 && sb <= 150,
         "step-2 survivors " + std::to_string(sa) + " (N1=20, equal) and " + std::to_string(sb) +
             " (N1=15, 0.2 0.3 0.4)");
}

// Returns the default ball run for reuse by criterion 5.
json reference_constants(const std::string& cli) {
  const Run ra = run(cli + " ball 0.2 1 0.3 0.4 --R1 0.1 --R2 0.2 --json -q");
  const Run rb = run(cli + " ball 0.2 1 0.3 0.4 --R1 0.2 --R2 0.2 --json -q");
  const json a = parse_last_line(ra.out), b = parse_last_line(rb.out);
  std::string detail;
  bool ok = a.contains("reference") && b.contains("reference");
  auto within = [&](const json& k, const char* key, double target) {
    if (!k.contains(key)) {
      ok = false;
      detail += std::string(key) + " missing; ";
      return;
    }
    const double v = double(get(k, key));
    const double rel = std::fabs(v - target) / target;
    if (rel > 0.01) {
      ok = false;
      detail += std::string(key) + " " + fmt("%.6f", v) + " vs " + fmt("%.6f", target) + fmt(" (%.1f%%); ", rel * 100);
    }
  };
  if (ok) {
    const json& ka = a["reference"];
    within(ka, "M_x", 3.193848);
    within(ka, "L_m", 0.591292);
    within(ka, "K_xx", 1.880567);
    within(ka, "K_xm", 1.9330632);
    within(ka, "K_mm", 2.160289);
    within(ka, "r", 0.083247);
    within(ka, "epsilon", 0.016540);
    const json& kb = b["reference"];
    within(kb, "r", 0.066053);
    within(kb, "epsilon", 0.013632);
  }
  report(4, ok, "reference constants within 1%" + (detail.empty() ? std::string() : ": " + detail));
  json out = a;
  out["wall_seconds"] = ra.seconds;
  out["exit_code"] = ra.exit_code;
  return out;
}

void rigorous_ball(const json& a) {
  const bool ok = a.value("exit_code", -1) == 0 && a.value("status", "") == "Excluded" &&
                  a.value("wall_seconds", 1e9) < 1800;
  std::string detail = "rigorous ball at (0.2, 1, 0.3, 0.4): " + a.value("status", std::string("no result"));
  if (a.contains("rigorous"))
    detail += ", r " + fmt("%.6f", double(get(a["rigorous"], "r"))) + ", eps " +
              fmt("%.6f", double(get(a["rigorous"], "epsilon")));
  report(5, ok, detail + ", " + fmt("%.1f s", a.value("wall_seconds", 0.0)));
}

void covering(const std::string& cli, const fs::path& dir) {
  const fs::path journal = dir / "cover.jsonl";
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("cover", 0) == 0) fs::remove(e.path());
  const Run c = run(cli + " cover --delta0 0.9 --M1 0 --grid-n1 10 --journal " + journal.string() + " --json -q");
  const json j = parse_last_line(c.out);
  const std::string path = j.value("journal", std::string());
  const Run k = path.empty() ? Run{} : run(cli + " check " + path + " --json -q");
  const bool ok = c.exit_code == 0 && j.value("covered", false) && k.exit_code == 0 && c.seconds + k.seconds < 7200;
  report(6, ok,
         "cover [0.9,1]^3 with suggested M1 " + std::to_string(j.value("M1", 0)) + ": covered=" +
             (j.value("covered", false) ? "true" : "false") + ", check exit " + std::to_string(k.exit_code) + ", " +
             fmt("%.0f s", c.seconds + k.seconds));
}

void suggested_M1() {
  const int m = required_M1(0.009L, 1 - 0.6L);
  report(7, m == 39, "eps0 = 0.009 on a side of 0.4 gives M1 = " + std::to_string(m));
}

void properties(const std::string& cli, const std::string& unit, const fs::path& dir) {
  const Run u = run(unit +
                    " \"-tc=containment and monotonicity fuzzing,Jacobian agrees*,Hessians agree*,"
                    "mass-swap symmetry*,homogeneity*\"");
  const fs::path a = dir / "desk_a.jsonl", b = dir / "desk_b.jsonl";
  fs::remove(a);
  fs::remove(b);
  const Run ra = run(cli + " cover --delta0 0.9 --M1 2 --workers 1 -q --journal " + a.string());
  const Run rb = run(cli + " cover --delta0 0.9 --M1 2 --workers 3 -q --journal " + b.string());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string ja = slurp(a), jb = slurp(b);
  const bool same = !ja.empty() && ja == jb && ra.exit_code == rb.exit_code;
  report(8, u.exit_code == 0 && same,
         std::string("fuzzing, derivative differences, mass swap, homogeneity: ") +
             (u.exit_code == 0 ? "pass" : "fail") + "; desk runs byte-identical: " + (same ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::fprintf(stderr, "usage: acceptance <ccproof> <unit_tests> <work dir>\n");
    return 1;
  }
  const std::string cli = argv[1], unit = argv[2];
  const fs::path dir = argv[3];
  fs::create_directories(dir);

  equal_masses(cli);
  unequal_masses(cli);
  survivors(cli);
  const json ball = reference_constants(cli);
  rigorous_ball(ball);
  covering(cli, dir);
  suggested_M1();
  properties(cli, unit, dir);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
