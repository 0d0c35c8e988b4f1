#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "plectic/catalog.hpp"
#include "plectic/suites.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kEvalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run verification suites on bundle-valued plectic models."};
  std::string model_arg;
  std::string suite = "all";
  int points = 200;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::string format = "text";
  std::string out_path;
  app.add_option("--model", model_arg, "builtin name, model file path, or 'all'")->required();
  app.add_option("--suite", suite, "cartan|algebroid|hms|compat|bracket|quaternionic|reduction|all")
      ->check(CLI::IsMember(plectic::suite_names()));
  app.add_option("--points", points, "random sample points per check")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol, "residual threshold")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--out", out_path, "write the report here instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::vector<plectic::Model> models;
  try {
    if (model_arg == "all") {
      for (const auto& n : plectic::builtin_names()) models.push_back(plectic::builtin(n));
    } else {
      models.push_back(plectic::resolve_model(model_arg));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  plectic::Report report;
  try {
    for (const auto& m : models) report.append(plectic::run_suite(suite, m, points, seed, tol));
  } catch (const std::exception& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kEvalError;
  }

  const std::string text = format == "json" ? report.to_json() : report.to_text();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kUsage;
    }
    f << text;
  }
  return report.pass() ? kPass : kFail;
}
