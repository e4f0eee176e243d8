#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "natgrad/descent.hpp"
#include "natgrad/report.hpp"

using namespace natgrad;
using Catch::Approx;

TEST_CASE("descent on the overparametrized line contracts the objective") {
  const auto model = models::a3_overparam();
  DescentConfig cfg;  // 100 steps, lr 0.05, MP
  const Trajectory traj =
      run_descent(model.space, model.phi, model.obj, model.xi0, model.box, cfg);
  REQUIRE(traj.records.size() == 101);
  CHECK_FALSE(traj.domain_exit);
  // scalar model coordinate contracts by 0.9 per step: L_k = 9 * 0.81^k
  double expected = 9.0;
  for (const auto& rec : traj.records) {
    CHECK(rec.objective == Approx(expected).epsilon(1e-10).margin(1e-18));
    expected *= 0.81;
  }
  CHECK(traj.records.back().objective < 1e-6);
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    CHECK(traj.records[i].objective < traj.records[i - 1].objective);
  }
}

TEST_CASE("zero step size leaves the trajectory constant") {
  const auto model = models::a3_overparam();
  DescentConfig cfg;
  cfg.step_size = 0.0;
  cfg.steps = 5;
  const Trajectory traj =
      run_descent(model.space, model.phi, model.obj, model.xi0, model.box, cfg);
  for (const auto& rec : traj.records) {
    CHECK((rec.xi - model.xi0).norm() == 0.0);
  }
}

TEST_CASE("ascending on an unbounded objective exits the parameter box") {
  const auto model = models::a3_overparam();
  DescentConfig cfg;
  cfg.ascend = true;
  cfg.steps = 200;
  const Trajectory traj =
      run_descent(model.space, model.phi, model.obj, model.xi0, model.box, cfg);
  CHECK(traj.domain_exit);
  CHECK_FALSE(traj.diagnostic.empty());
  CHECK(traj.records.size() < 201);
}

TEST_CASE("paired runs coincide on the model for the linear line") {
  // every map in this bundle is linear, so both recursions drive the model
  // coordinate through the identical contraction and never separate
  const auto model = models::a3_overparam();
  DescentConfig cfg;
  cfg.steps = 50;
  const PairedTrajectories traj = run_paired_descent(model, cfg);
  REQUIRE(traj.reparametrized.records.size() == traj.primary.records.size());
  for (std::size_t i = 0; i < traj.primary.records.size(); ++i) {
    const double gap = (traj.primary.records[i].model_point -
                        traj.reparametrized.records[i].model_point)
                           .norm();
    CHECK(gap <= 1e-12);
  }
}

TEST_CASE("paired runs separate on the nonlinear overparametrized model") {
  const auto model = models::prod_overparam();
  DescentConfig cfg;
  cfg.steps = 50;
  const PairedTrajectories traj = run_paired_descent(model, cfg);
  const auto gap_at = [&](int step) {
    return (traj.primary.records[step].model_point -
            traj.reparametrized.records[step].model_point)
        .norm();
  };
  CHECK(gap_at(1) <= cfg.step_size * cfg.step_size * 10.0);
  CHECK(gap_at(50) > 1e-6);
}

TEST_CASE("trajectory serialization is deterministic and structured") {
  const auto model = models::a3_overparam();
  DescentConfig cfg;
  cfg.steps = 3;
  const Trajectory traj =
      run_descent(model.space, model.phi, model.obj, model.xi0, model.box, cfg);
  const std::string csv = report::trajectory_to_csv(traj);
  CHECK(csv == report::trajectory_to_csv(traj));
  CHECK(csv.rfind("step,xi1,xi2,x1,x2,L,coeff1,coeff2,gnorm,thm1_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  const std::string json = report::trajectory_to_json(traj, "a3-overparam");
  CHECK(json.find("\"records\"") != std::string::npos);
}
