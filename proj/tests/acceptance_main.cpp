// Acceptance suite: one line per criterion, non-zero exit if any required
// criterion fails. The scaling check is informational and can only warn.

#include <chrono>
#include <cstdio>
#include <thread>
#include <vector>

#include "nomaidnc/checks.hpp"

namespace {

constexpr std::uint64_t kSeed = 20250809;

int g_index = 0;
bool g_failed = false;

void report(const nomaidnc::CheckResult& r, double seconds) {
  const char* tag = r.passed ? "PASS" : (r.warn_only ? "WARN" : "FAIL");
  std::printf("[%s] %d. %s (%.1fs)\n", tag, ++g_index, r.name.c_str(), seconds);
  if (!r.detail.empty()) {
    if (r.detail.find('\n') != std::string::npos)
      std::printf("%s", r.detail.c_str());
    else
      std::printf("       %s\n", r.detail.c_str());
  }
  std::fflush(stdout);
  if (!r.passed && !r.warn_only) g_failed = true;
}

template <typename Fn>
void run(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  const nomaidnc::CheckResult r = fn();
  const auto stop = std::chrono::steady_clock::now();
  report(r, std::chrono::duration<double>(stop - start).count());
}

}  // namespace

int main() {
  const int threads =
      static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  run([] { return nomaidnc::check_rate_split_identity(10000, kSeed + 1); });
  run([] { return nomaidnc::check_clique_search_validity(1000, kSeed + 2); });
  run([] { return nomaidnc::check_exact_dominance(500, kSeed + 3, nomaidnc::kDefaultOracleCap); });
  run([&] { return nomaidnc::check_power_control(1000, kSeed + 4, 1000000, threads); });
  run([] { return nomaidnc::check_layer_gain_identity(500, kSeed + 5); });
  run([] { return nomaidnc::check_two_stage_exactness(100, kSeed + 6); });
  run([&] { return nomaidnc::check_trend_reproduction(200, kSeed + 7, threads); });
  run([] { return nomaidnc::check_scaling_smoke(kSeed + 8); });
  run([] { return nomaidnc::check_determinism(kSeed + 9); });

  std::printf("%s\n", g_failed ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS");
  return g_failed ? 1 : 0;
}
