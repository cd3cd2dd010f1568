// Runs the thirteen acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>

#include "pluri/verify.hpp"

using namespace pluri;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string failed_checks(const SuiteResult &r) {
  std::string s;
  for (const auto &c : r.checks)
    if (!c.passed)
      s += (s.empty() ? "" : ", ") + c.name + " " + c.data.dump();
  return s.empty() ? "all checks passed" : "failed: " + s;
}

Outcome ball_closed_form(const RunConfig &cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto B = make_unit_ball(2);
  std::mt19937_64 rng(stream_seed(cfg.seed, 0xACCE1ULL));
  std::uniform_real_distribution<double> radius(0.1, 0.9);
  int bad = 0;
  double max_width = 0;
  for (int k = 0; k < 50; ++k) {
    Point z = detail::random_unit_sphere(2, rng) * radius(rng);
    auto iv = green_interval(B, z, Point(0.0, 0.0), cfg);
    double exact = std::log(z.norm());
    max_width = std::max(max_width, iv.width());
    if (!(iv.lo <= exact + 1e-12 && exact <= iv.hi + 1e-12 && iv.width() <= 0.05))
      ++bad;
  }
  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "50 points, %d outside or too wide, max width %.3g, %.1f s", bad,
                max_width, secs);
  return {bad == 0 && secs <= 600, buf};
}

Outcome from_suite(const SuiteResult &r) { return {r.passed(), failed_checks(r)}; }

} // namespace

int main() {
  RunConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, Outcome>> results;
  std::map<std::string, std::string> first_pass;

  auto suite = [&](const std::string &name) {
    auto r = run_suite(name, cfg);
    first_pass[name] = r.summary().dump();
    return from_suite(r);
  };

  auto record = [&](const std::string &label, const std::function<Outcome()> &f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS" : "FAIL") << "  " << label << "  (" << o.detail << ")"
              << std::endl;
    results.emplace_back(label, o);
  };

  record("1 ball closed form", [&] { return ball_closed_form(cfg); });
  record("2 inequality chain", [&] { return suite("chain"); });
  record("3 monotonicity", [&] { return suite("monotone"); });
  record("4 discontinuity witness", [&] { return suite("discontinuity"); });
  // Criteria 5 and 7 share the azukawa suite; each reads its own checks.
  SuiteResult az;
  record("5 azukawa on the ball", [&] {
    az = run_suite("azukawa", cfg);
    first_pass["azukawa"] = az.summary().dump();
    SuiteResult part{"azukawa", {}};
    for (const auto &c : az.checks)
      if (c.name == "ball_origin" || c.name == "homogeneity")
        part.checks.push_back(c);
    return from_suite(part);
  });
  record("6 bergman sigma constants", [&] { return suite("sigma"); });
  record("7 royden dominates azukawa", [&] {
    SuiteResult part{"azukawa", {}};
    for (const auto &c : az.checks)
      if (c.name.rfind("royden_dominates_", 0) == 0)
        part.checks.push_back(c);
    return from_suite(part);
  });
  record("8 suita on the disk", [&] { return suite("suita"); });
  record("9 ratio lemma delta", [&] { return suite("ratio"); });
  record("10 pole classification", [&] { return suite("pole"); });
  record("11 lelong-jensen residuals", [&] { return suite("jensen"); });
  record("12 compactification clusters", [&] { return suite("compactify"); });
  record("13 determinism", [&] {
    std::string diff;
    for (const auto &[name, fn] : suites()) {
      std::string again = fn(cfg).summary().dump();
      auto it = first_pass.find(name);
      std::string before = it != first_pass.end() ? it->second : fn(cfg).summary().dump();
      if (again != before)
        diff += (diff.empty() ? "" : ", ") + name;
    }
    return Outcome{diff.empty(), diff.empty() ? std::to_string(suites().size()) +
                                                    " suite summaries identical across runs"
                                              : "summaries differ: " + diff};
  });

  int failed = 0;
  for (const auto &[label, o] : results)
    failed += !o.passed;
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failed,
              results.size(), seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
