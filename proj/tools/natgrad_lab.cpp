// Experiment front end: verification suites, worked-example reports, natural
// gradient descent trajectories and non-proper-set sampling.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "natgrad/descent.hpp"
#include "natgrad/models.hpp"
#include "natgrad/report.hpp"
#include "natgrad/suites.hpp"

namespace {

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace natgrad;

  CLI::App app{"natural gradient experiment runner"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  double tol = -1.0;
  std::string out_path;
  std::string format = "csv";
  std::string example_id;
  std::string model_id;
  std::string inverse = "mp";
  double lambda = 1e-8;
  int steps = 100;
  double step_size = 0.05;
  bool ascend = false;
  int samples = 100000;

  auto* verify = app.add_subcommand("verify", "run the randomized verification suites");
  verify->add_option("--seed", seed, "suite seed");
  verify->add_option("--tol", tol, "override every suite threshold");
  verify->add_option("--out", out_path, "output file (stdout if omitted)");
  verify->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* example = app.add_subcommand("example", "print a worked example report");
  example->add_option("--id", example_id, "example id")
      ->required()
      ->check(CLI::IsMember({"a1-cubic", "a2-figure-eight", "a3-overparam",
                             "ex1-orthogonal-spans"}));
  example->add_option("--out", out_path, "output file (stdout if omitted)");
  example->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* descend = app.add_subcommand("descend", "run descent trajectories");
  descend->add_option("--model", model_id, "registered model id")->required();
  descend->add_option("--steps", steps, "number of updates")->check(CLI::PositiveNumber);
  descend->add_option("--lr", step_size, "step size")
      ->check(CLI::NonNegativeNumber);
  descend->add_option("--inverse", inverse, "mp or damped")
      ->check(CLI::IsMember({"mp", "damped"}));
  descend->add_option("--lambda", lambda, "damping strength")->check(CLI::PositiveNumber);
  descend->add_flag("--ascend", ascend, "step along the gradient instead of against it");
  descend->add_option("--out", out_path,
                      "output file; the reparametrized run gets a .reparam sibling");
  descend->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* sample = app.add_subcommand("sample-proper", "sample the non-proper fraction");
  sample->add_option("--model", model_id, "registered model id")->required();
  sample->add_option("--samples", samples, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "sampler seed");
  sample->add_option("--out", out_path, "output file (stdout if omitted)");
  sample->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) {
      const auto results = suites::run_all(seed, tol);
      bool all_passed = true;
      for (const auto& r : results) {
        std::cerr << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << " ("
                  << r.instances << " instances, max residual " << r.max_residual
                  << ", threshold " << r.threshold << ")"
                  << (r.note.empty() ? "" : " - " + r.note) << '\n';
        all_passed = all_passed && r.passed;
      }
      write_or_print(out_path, format == "json" ? report::suites_to_json(results, seed)
                                                : report::suites_to_csv(results));
      return all_passed ? 0 : 1;
    }

    if (*example) {
      const auto rows = report::example_report(example_id);
      write_or_print(out_path, format == "json" ? report::rows_to_json(rows)
                                                : report::rows_to_csv(rows));
      return 0;
    }

    if (*descend) {
      const models::ModelBundle model = models::get_model(model_id);
      DescentConfig cfg;
      cfg.steps = steps;
      cfg.step_size = step_size;
      cfg.ascend = ascend;
      cfg.inverse =
          inverse == "damped" ? InverseKind::damped(lambda) : InverseKind::mp();
      const PairedTrajectories traj = run_paired_descent(model, cfg);
      auto render = [&](const Trajectory& t, const std::string& label) {
        return format == "json" ? report::trajectory_to_json(t, label)
                                : report::trajectory_to_csv(t);
      };
      write_or_print(out_path, render(traj.primary, model_id));
      if (model.f) {
        const std::string reparam_path =
            out_path.empty() ? "" : out_path + ".reparam";
        write_or_print(reparam_path, render(traj.reparametrized, model_id + ".reparam"));
      }
      return 0;
    }

    if (*sample) {
      const models::ModelBundle model = models::get_model(model_id);
      const NonProperSampleReport rep = nonproper_set_sampling(
          model.phi, model.box, model.model_dim, samples, seed);
      std::string content;
      if (format == "json") {
        content = "{\"model\":\"" + model_id +
                  "\",\"fraction\":" + report::fmt(rep.fraction) +
                  ",\"num_samples\":" + std::to_string(rep.num_samples) +
                  ",\"num_non_proper\":" + std::to_string(rep.num_non_proper) +
                  ",\"seed\":" + std::to_string(rep.seed) + "}\n";
      } else {
        content = "model,fraction,num_samples,num_non_proper,seed\n" + model_id + "," +
                  report::fmt(rep.fraction) + "," + std::to_string(rep.num_samples) +
                  "," + std::to_string(rep.num_non_proper) + "," +
                  std::to_string(rep.seed) + "\n";
      }
      write_or_print(out_path, content);
      return 0;
    }
  } catch (const UnknownExample& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
