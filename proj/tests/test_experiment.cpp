#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nomaidnc/experiment.hpp"

using namespace nomaidnc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  return std::filesystem::temp_directory_path() / ("nomaidnc_test_" + tag);
}

}  // namespace

TEST_CASE("wants generation") {
  SECTION("buffer ratio extremes") {
    const SideInfo full = generate_wants(10, 1.0, 5, 1);
    for (const auto& w : full.wants) CHECK(w.none());
    const SideInfo none = generate_wants(10, 0.0, 5, 1);
    for (const auto& w : none.wants) CHECK(w.count() == 10);
  }

  SECTION("deterministic per seed") {
    CHECK(generate_wants(12, 0.5, 8, 99).wants == generate_wants(12, 0.5, 8, 99).wants);
    CHECK(generate_wants(12, 0.5, 8, 99).wants != generate_wants(12, 0.5, 8, 100).wants);
  }

  SECTION("empirical buffering fraction tracks mu") {
    const double mu = 0.37;
    const SideInfo si = generate_wants(1000, mu, 100, 7);
    long wanted = 0;
    for (const auto& w : si.wants) wanted += static_cast<long>(w.count());
    const double has_fraction = 1.0 - static_cast<double>(wanted) / 100000.0;
    CHECK(std::abs(has_fraction - mu) <= 0.01);
  }

  SECTION("bad arguments are refused") {
    CHECK_THROWS_AS(generate_wants(10, 1.5, 5, 1), ConfigError);
    CHECK_THROWS_AS(generate_wants(-1, 0.5, 5, 1), ConfigError);
  }
}

TEST_CASE("config parsing") {
  SECTION("full round trip") {
    const std::string text =
        "# comment\n"
        "base_seed=99\n"
        "trials=4\n"
        "receivers=10,20\n"
        "packets=15\n"
        "mu=0.5\n"
        "p_max_dbm_hz=-40\n"
        "schemes=RLNC,NOMA-RLNC\n"
        "strict_sic=true\n"
        "threads=2\n";
    const ExperimentConfig cfg = parse_config_text(text).finalize();
    CHECK(cfg.base_seed == 99);
    CHECK(cfg.trials == 4);
    CHECK(cfg.axis == SweepAxis::Receivers);
    CHECK(cfg.sweep_values == std::vector<double>{10, 20});
    CHECK(cfg.packets == 15);
    CHECK(cfg.mu == 0.5);
    CHECK(cfg.p_max_dbm_hz == -40.0);
    CHECK(cfg.schemes == std::vector<Scheme>{Scheme::Rlnc, Scheme::NomaRlnc});
    CHECK(cfg.scheduler.strict_sic);
    CHECK(cfg.threads == 2);
  }

  SECTION("scalar-only config becomes a single-point receiver sweep") {
    const ExperimentConfig cfg = parse_config_text("receivers=12\n").finalize();
    CHECK(cfg.axis == SweepAxis::Receivers);
    CHECK(cfg.sweep_values == std::vector<double>{12});
  }

  SECTION("a trailing comma marks a one-value sweep") {
    const ExperimentConfig cfg = parse_config_text("mu=0.4,\n").finalize();
    CHECK(cfg.axis == SweepAxis::BufferRatio);
    CHECK(cfg.sweep_values == std::vector<double>{0.4});
  }

  SECTION("two sweep lists are rejected") {
    CHECK_THROWS_AS(parse_config_text("receivers=10,20\npackets=10,20\n"), ConfigError);
  }

  SECTION("a scalar write un-sweeps, freeing the list for another axis") {
    const std::string text = "receivers=10,20\nreceivers=20\nmu=0.2,0.6\n";
    const ExperimentConfig cfg = parse_config_text(text).finalize();
    CHECK(cfg.axis == SweepAxis::BufferRatio);
    CHECK(cfg.receivers == 20);
  }

  SECTION("errors carry the offending line") {
    CHECK_THROWS_AS(parse_config_text("nonsense=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("trials\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mu=maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("strict_sic=perhaps\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("schemes=RLNC,WAT\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("trials=0\n").finalize(), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mu=1.5\n").finalize(), ConfigError);
    CHECK_THROWS_AS(parse_config_text("receivers=2.5,\n").finalize(), ConfigError);
  }
}

TEST_CASE("seed derivation is pure and spreads") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("sweep execution") {
  SECTION("one point, one trial, one scheme: exactly one row") {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.receivers = 6;
    cfg.packets = 6;
    cfg.sweep_values = {6};
    cfg.schemes = {Scheme::Rlnc};
    const std::vector<TrialResult> rows = run_sweep(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].scheme == Scheme::Rlnc);
    CHECK(rows[0].sweep_value == 6.0);
    CHECK(rows[0].trial == 0);
    CHECK(rows[0].throughput >= 0.0);
    CHECK(rows[0].ao_iterations == 1);
  }

  SECTION("rows are deterministic and thread-count independent") {
    ExperimentConfig cfg;
    cfg.base_seed = 5;
    cfg.trials = 3;
    cfg.packets = 8;
    cfg.axis = SweepAxis::Receivers;
    cfg.sweep_values = {6, 9};
    cfg.threads = 3;
    const std::vector<TrialResult> a = run_sweep(cfg);
    const std::vector<TrialResult> b = run_sweep(cfg);
    CHECK(a == b);
    ExperimentConfig single = cfg;
    single.threads = 1;
    CHECK(a == run_sweep(single));

    // paired realization: every scheme saw the same draw, so row counts match
    CHECK(a.size() == cfg.schemes.size() * 3 * 2);
    for (std::size_t i = 1; i < a.size(); ++i) {
      const auto ka = std::tuple(scheme_name(a[i - 1].scheme), a[i - 1].sweep_value, a[i - 1].trial);
      const auto kb = std::tuple(scheme_name(a[i].scheme), a[i].sweep_value, a[i].trial);
      CHECK(ka < kb);
    }
  }
}

TEST_CASE("result emission") {
  const auto dir = temp_dir("emit");
  std::filesystem::remove_all(dir);

  SECTION("zero rows give header-only files") {
    emit_results({}, SweepAxis::Receivers, dir);
    CHECK(slurp(dir / "results.csv") == std::string(kResultsHeader) + "\n");
    CHECK(slurp(dir / "summary.csv") == std::string(kSummaryHeader) + "\n");
  }

  SECTION("summary statistics") {
    std::vector<TrialResult> rows{
        {Scheme::Rlnc, 20.0, 0, 2.0, 1, 0.0},
        {Scheme::Rlnc, 20.0, 1, 4.0, 1, 0.0},
    };
    const std::vector<SummaryRow> sum = summarize(rows);
    REQUIRE(sum.size() == 1);
    CHECK(sum[0].trials == 2);
    CHECK(sum[0].mean == 3.0);
    // sd = sqrt(2), half-width 1.96 * sqrt(2)/sqrt(2)
    CHECK(sum[0].ci95_half_width == Catch::Approx(1.96).margin(1e-12));
  }

  SECTION("emitted rows parse back exactly") {
    ExperimentConfig cfg;
    cfg.base_seed = 17;
    cfg.trials = 2;
    cfg.packets = 7;
    cfg.axis = SweepAxis::BufferRatio;
    cfg.sweep_values = {0.3, 0.6};
    const std::vector<TrialResult> rows = run_sweep(cfg);
    emit_results(rows, cfg.axis, dir);
    const std::vector<TrialResult> parsed = parse_results_csv(dir / "results.csv");
    CHECK(parsed == rows);
  }

  SECTION("identical runs produce byte-identical files") {
    ExperimentConfig cfg;
    cfg.base_seed = 23;
    cfg.trials = 2;
    cfg.packets = 6;
    cfg.sweep_values = {5};
    cfg.receivers = 5;
    const auto dir_a = temp_dir("emit_a");
    const auto dir_b = temp_dir("emit_b");
    emit_results(run_sweep(cfg), cfg.axis, dir_a);
    emit_results(run_sweep(cfg), cfg.axis, dir_b);
    CHECK(slurp(dir_a / "results.csv") == slurp(dir_b / "results.csv"));
    CHECK(slurp(dir_a / "summary.csv") == slurp(dir_b / "summary.csv"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
  }

  std::filesystem::remove_all(dir);
}
