#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "conegeo/harness.hpp"

namespace {

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw conegeo::UsageError("--tol expects id=value, got '" + item + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1 || !(v >= 0.0)) throw std::invalid_argument(item);
      out[item.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw conegeo::UsageError("--tol value is not a nonnegative number in '" + item + "'");
    }
  }
  return out;
}

void print_summary(std::ostream& os, const std::vector<conegeo::CheckReport>& reports) {
  for (const auto& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-40s max %.3e  tol %.1e", conegeo::to_string(r.verdict),
                  r.identity.c_str(), r.max_residual, r.tolerance);
    os << line;
    if (!r.message.empty()) os << "  " << r.message;
    os << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of cone, contact and Weitzenboeck identities"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with the same fields as the flags; flags win");

  conegeo::SuiteConfig cfg;
  int grid = 0;
  std::vector<std::string> tols;
  std::string report_path;

  auto* verify = app.add_subcommand("verify", "Run one identity suite on a catalog manifold");
  verify->add_option("suite", cfg.suite, "Suite id")->required();
  verify->add_option("--manifold", cfg.manifold, "Catalog id")->required();
  verify->add_option("--radius", cfg.radii, "Cone radii (repeatable)");
  verify->add_option("--grid", grid, "Quadrature nodes per coordinate");
  verify->add_option("--jet-order", cfg.jet_order, "Metric jet order");
  verify->add_option("--tol", tols, "Tolerance override id=value (repeatable)");
  verify->add_option("--seed", cfg.seed, "Seed for sample points and directions");
  verify->add_option("--samples", cfg.samples, "Random points per pointwise identity");
  verify->add_option("--report", report_path, "Write the JSON report here instead of stdout");

  auto* list = app.add_subcommand("list", "List suites, manifolds and integrands");

  std::string integrand, manifold;
  double radius = 1.0;
  int int_grid = 0;
  int int_order = conegeo::kDefaultJetOrder;
  auto* integ = app.add_subcommand("integrate", "Integrate a named function over the level set M_r");
  integ->add_option("integrand", integrand, "Integrand id")->required();
  integ->add_option("--manifold", manifold, "Catalog id")->required();
  integ->add_option("--radius", radius, "Level r")->required();
  integ->add_option("--grid", int_grid, "Quadrature nodes per coordinate");
  integ->add_option("--jet-order", int_order, "Metric jet order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      std::cout << "suites:";
      for (const auto& s : conegeo::suite_ids()) std::cout << " " << s;
      std::cout << "\nmanifolds:";
      for (const auto& m : conegeo::catalog_ids()) std::cout << " " << m;
      std::cout << "\nintegrands:";
      for (const auto& i : conegeo::integrand_ids()) std::cout << " " << i;
      std::cout << "\n";
      return 0;
    }
    if (integ->parsed()) {
      if (!(radius > 0.0)) throw conegeo::UsageError("radius must be positive");
      if (int_order < conegeo::kMinWeitzenboeckOrder) throw conegeo::UsageError("jet order must be at least 4");
      const conegeo::CatalogEntry e = conegeo::catalog_entry(manifold);
      if (integ->count("--grid") && int_grid < 1) throw conegeo::UsageError("grid must be positive");
      const std::vector<int> nodes = int_grid > 0 ? std::vector<int>(e.chart.dim(), int_grid) : e.quadrature_nodes;
      char out[64];
      std::snprintf(out, sizeof out, "%.17g", conegeo::integrate_level_set(e, radius, integrand, nodes, int_order));
      std::cout << out << "\n";
      return 0;
    }
    if (verify->count("--grid")) cfg.grid = grid;
    cfg.tolerances = parse_tolerances(tols);
    const conegeo::ResolvedConfig rc = conegeo::resolve(cfg);
    const auto reports = conegeo::run_suite(rc);
    const std::string doc = conegeo::report_document(rc, reports);
    if (report_path.empty()) {
      std::cout << doc;
    } else {
      std::ofstream f(report_path, std::ios::binary);
      if (!f) throw conegeo::UsageError("cannot write report to '" + report_path + "'");
      f << doc;
      print_summary(std::cout, reports);
    }
    for (const auto& r : reports)
      if (!r.message.empty()) std::cerr << r.identity << ": " << r.message << "\n";
    return conegeo::all_passed(reports) ? 0 : 1;
  } catch (const conegeo::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
