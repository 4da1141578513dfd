#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "prodimm/config.hpp"
#include "prodimm/errors.hpp"
#include "prodimm/runner.hpp"

using namespace prodimm;

namespace {

RunConfig small_config(const std::string& entry, int per_axis) {
  RunConfig rc = default_config_for_entry(entry);
  std::vector<int> counts(static_cast<size_t>(rc.immersion.domain_dim), per_axis);
  set_grid(rc, counts);
  return rc;
}

const CheckAggregate* find_aggregate(const Report& r, const std::string& name) {
  for (const CheckAggregate& a : r.aggregates)
    if (a.check == name) return &a;
  return nullptr;
}

}  // namespace

TEST_CASE("identical runs serialize to identical bytes") {
  RunConfig rc = small_config("totally_geodesic_slice_S2xR", 3);
  std::string a = emit_report(run_checks(rc), ReportFormat::Json);
  std::string b = emit_report(run_checks(rc), ReportFormat::Json);
  CHECK(a == b);

  // parallel evaluation must not change a single byte
  setenv("PRODIMM_THREADS", "4", 1);
  std::string c = emit_report(run_checks(rc), ReportFormat::Json);
  unsetenv("PRODIMM_THREADS");
  CHECK(a == c);

  std::string csv1 = emit_report(run_checks(rc), ReportFormat::Csv);
  std::string csv2 = emit_report(run_checks(rc), ReportFormat::Csv);
  CHECK(csv1 == csv2);
}

TEST_CASE("a clean entry exits 0; a failing check exits 1") {
  RunConfig rc = small_config("totally_geodesic_slice_S2xR", 3);
  Report rep = run_checks(rc);
  CHECK(rep.aggregate_pass);
  CHECK(exit_code_for(rep) == 0);
  CHECK(rep.samples_total == 9);
  CHECK(rep.samples_failed == 0);
  CHECK(rep.errors.empty());

  // the non-minimal control keeps its battery honest: ||H|| = 1 is a Fail
  RunConfig lat = small_config("latitude_sphere_nonminimal", 3);
  Report lrep = run_checks(lat);
  CHECK(!lrep.aggregate_pass);
  CHECK(exit_code_for(lrep) == 1);
  const CheckAggregate* minim = find_aggregate(lrep, "minimality");
  REQUIRE(minim != nullptr);
  CHECK(minim->verdict == Verdict::Fail);
  CHECK(minim->worst == doctest::Approx(1.0).epsilon(1e-6));

  // margins that assume minimality step aside rather than fire
  const CheckAggregate* marg = find_aggregate(lrep, "ricci_margin_sxr");
  REQUIRE(marg != nullptr);
  CHECK(marg->verdict == Verdict::NotApplicable);
  CHECK(marg->notes.find("requires a minimal immersion") != std::string::npos);
}

TEST_CASE("an unevaluable run produces no rows and exits 2") {
  std::string path = "runner_degenerate.ini";
  {
    std::ofstream out(path, std::ios::trunc);
    out << "[target]\nc1 = 1\nn1 = 2\nc2 = 0\nn2 = 1\n"
        << "[immersion]\nname = stuck\ndim = 2\n"
        << "lo = -1, -1\nhi = 1, 1\n"
        << "f1 = 1, 0, 0\nf2 = 0\nj = 0, -1, 1, 0\n"
        << "[grid]\npoints = 2, 2\n";
  }
  RunConfig rc = load_config_file(path);
  std::remove(path.c_str());
  Report rep = run_checks(rc);
  CHECK(rep.rows.empty());
  CHECK(rep.aggregates.empty());
  CHECK(!rep.aggregate_pass);
  CHECK(rep.samples_total == 4);
  CHECK(rep.samples_failed == 4);
  REQUIRE(rep.errors.size() == 4);
  CHECK(exit_code_for(rep) == 2);
}

TEST_CASE("sample grids: insets, midpoints, and row-major order") {
  const ImmersionDefinition& imm = find_entry("totally_geodesic_slice_S2xR");
  const double h = 1e-3;
  const Vec& lo = imm.chart.lo;
  const Vec& hi = imm.chart.hi;

  std::vector<Vec> one = make_grid(imm, {1, 1}, h);
  REQUIRE(one.size() == 1);
  CHECK(one[0][0] == doctest::Approx(0.5 * (lo[0] + hi[0])));
  CHECK(one[0][1] == doctest::Approx(0.5 * (lo[1] + hi[1])));

  std::vector<Vec> grid = make_grid(imm, {2, 3}, h);
  REQUIRE(grid.size() == 6);
  // row-major: last axis fastest
  CHECK(grid[0][0] == doctest::Approx(lo[0] + 4 * h));
  CHECK(grid[0][1] == doctest::Approx(lo[1] + 4 * h));
  CHECK(grid[1][0] == doctest::Approx(lo[0] + 4 * h));
  CHECK(grid[1][1] == doctest::Approx(0.5 * (lo[1] + hi[1])));
  CHECK(grid[2][1] == doctest::Approx(hi[1] - 4 * h));
  CHECK(grid[3][0] == doctest::Approx(hi[0] - 4 * h));
  CHECK(grid[5][0] == doctest::Approx(hi[0] - 4 * h));
  CHECK(grid[5][1] == doctest::Approx(hi[1] - 4 * h));
}

TEST_CASE("row budget: samples times applicable point-level checks") {
  RunConfig rc = small_config("latitude_sphere_nonminimal", 3);
  Report rep = run_checks(rc);
  size_t expected = 0;
  for (const CheckAggregate& a : rep.aggregates) {
    if (is_grid_level_check(a.check)) continue;  // never emitted as rows
    expected += static_cast<size_t>(a.applicable);
  }
  CHECK(rep.rows.size() == expected);
  for (const SampleRow& row : rep.rows) CHECK(!is_grid_level_check(row.result.check));

  std::string csv = emit_report(rep, ReportFormat::Csv);
  size_t lines = static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == rep.rows.size() + 1);  // header + one line per row
}

TEST_CASE("grid-level verdicts on a geodesic first-factor slice") {
  RunConfig rc = small_config("totally_geodesic_slice_S2xR", 3);
  Report rep = run_checks(rc);

  const CheckAggregate* slice = find_aggregate(rep, "slice");
  REQUIRE(slice != nullptr);
  CHECK(slice->verdict == Verdict::Pass);
  CHECK(slice->notes.find("FirstFactorSlice") != std::string::npos);

  const CheckAggregate* obs = find_aggregate(rep, "obstruction");
  REQUIRE(obs != nullptr);
  CHECK(obs->verdict == Verdict::Pass);

  const CheckAggregate* eq = find_aggregate(rep, "equality_ricci_margin_sxr");
  REQUIRE(eq != nullptr);
  CHECK(eq->verdict == Verdict::Pass);
  CHECK(eq->notes.find("bound attained") != std::string::npos);

  // S^2 x R is not the balanced sphere-hyperbolic shape
  const CheckAggregate* eqh = find_aggregate(rep, "equality_ricci_margin_sxh");
  REQUIRE(eqh != nullptr);
  CHECK(eqh->verdict == Verdict::NotApplicable);

  CHECK(!rep.notes.empty());  // unverifiable hypotheses are spelled out
}

TEST_CASE("convergence study: second-order decay of the Gauss residual") {
  RunConfig rc = small_config("clifford_torus_slice", 3);
  Report rep = run_convergence(rc, "gauss_residual", {1e-2, 5e-3, 2.5e-3});
  CHECK(rep.convergence_check == "gauss_residual");
  REQUIRE(rep.convergence.size() == 3);
  CHECK(rep.convergence[0].residual > rep.convergence[1].residual);
  CHECK(rep.convergence[1].residual > rep.convergence[2].residual);
  CHECK(rep.convergence[0].order == 0.0);
  CHECK(rep.convergence[1].order > 1.5);
  CHECK(rep.convergence[2].order > 1.5);
  CHECK(rep.aggregate_pass);
  CHECK(exit_code_for(rep) == 0);

  bool echoed = false;
  for (const auto& [k, v] : rep.config_echo)
    if (k == "convergence_check" && v == "gauss_residual") echoed = true;
  CHECK(echoed);
}

TEST_CASE("convergence study rejects bad arguments") {
  RunConfig rc = small_config("clifford_torus_slice", 3);
  CHECK_THROWS_AS((void)run_convergence(rc, "slice", {1e-2, 5e-3}), ConfigError);
  CHECK_THROWS_AS((void)run_convergence(rc, "gauss_residual", {1e-2}), ConfigError);
  CHECK_THROWS_AS((void)run_convergence(rc, "gauss_residual", {1e-2, -1e-3}),
                  ConfigError);
  CHECK(!convergence_checks().empty());
}
