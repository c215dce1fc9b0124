#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "felab/assembly.hpp"
#include "felab/bestapprox.hpp"
#include "felab/quadrature.hpp"
#include "felab/study.hpp"

using namespace felab;

namespace {

int verdict_exit_code(const ConvergenceTable& table) {
  return table.any_fail() ? 2 : 0;
}

void print_summary(const ConvergenceTable& table) {
  std::printf("problem=%s family=%s solution=%s mesh=%s\n",
              problem_name(table.config.problem).c_str(),
              family_name(table.config.family).c_str(), table.config.solution.c_str(),
              table.config.mesh_mode.kind == MeshMode::Kind::Structured
                  ? "structured"
                  : (table.config.mesh_mode.kind == MeshMode::Kind::Perturbed ? "perturbed"
                                                                              : "graded"));
  std::printf("%-6s %-6s %-12s %-8s", "level", "n", "h", "dofs");
  for (const auto& c : table.columns) std::printf(" %-14s", c.c_str());
  std::printf("\n");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::printf("%-6zu %-6d %-12.6g %-8d", i, row.n, row.h, row.dofs);
    for (double e : row.errors) std::printf(" %-14.8g", e);
    if (row.failed) std::printf(" FAILED: %s", row.failure.c_str());
    std::printf("\n");
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const RateFit& r = table.rates[c];
    if (r.valid)
      std::printf("rate[%s] = %.4f (fit residual %.2g)\n", table.columns[c].c_str(), r.slope,
                  r.residual);
  }
  for (const auto& s : table.sharpness) {
    std::printf("sharpness j=%d p=%s: band=%.4g rate=%.4f verdict=%s%s%s\n", s.pair.j,
                norm_p_name(s.pair.p).c_str(), s.band, s.rate.slope,
                verdict_name(s.verdict).c_str(), s.note.empty() ? "" : " -- ", s.note.c_str());
  }
  std::printf("gamma-gate max |D^gamma v_h| = %.3g\n", table.gamma_gate_max);
}

int finish_study(ConvergenceTable& table, const std::string& out, const std::string& format) {
  print_summary(table);
  const std::string path = out.empty() ? table.config.out_path : out;
  if (!path.empty()) {
    emit_table(table, format, path);
    std::printf("wrote %s (%s)\n", path.c_str(), format.c_str());
  }
  return verdict_exit_code(table);
}

MeshMode parse_mesh_mode(const std::string& text) {
  // Reuses the config-file syntax: structured | perturbed:amp:seed | graded:mu.
  const StudyConfig cfg =
      parse_config_text("problem = bestapprox\nfamily = P1\nlevels = 2\nmesh = " + text);
  return cfg.mesh_mode;
}

int run_selftest() {
  int failures = 0;
  const auto expect = [&failures](bool ok, const std::string& what) {
    std::printf("%-58s %s\n", what.c_str(), ok ? "ok" : "FAIL");
    if (!ok) ++failures;
  };

  for (int d = 1; d <= 10; ++d) {
    const QuadRule rule = simplex_rule(d);
    double worst = 0.0;
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
        double exact = 1.0;
        for (int k = 1; k <= a; ++k) exact *= k;
        for (int k = 1; k <= b; ++k) exact *= k;
        for (int k = 1; k <= a + b + 2; ++k) exact /= k;
        worst = std::max(worst, std::abs(s - exact));
      }
    expect(worst < 1e-12, "simplex rule degree " + std::to_string(d) + " monomial sweep");
  }
  for (int d = 1; d <= 11; ++d) {
    const QuadRule rule = box_rule(d);
    double worst = 0.0;
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.points.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
        const double exact = (a % 2 || b % 2) ? 0.0 : 2.0 / (a + 1) * 2.0 / (b + 1);
        worst = std::max(worst, std::abs(s - exact));
      }
    expect(worst < 1e-12, "box rule degree " + std::to_string(d) + " monomial sweep");
  }

  const Family all[] = {Family::P1, Family::P2,  Family::P3,    Family::Q1,     Family::Q2,
                        Family::CR, Family::ECR, Family::Q1ROT, Family::EQ1ROT, Family::MORLEY};
  for (Family f : all) {
    const ReferenceElement& el = reference_element(f);
    double worst = 0.0;
    for (int a = 0; a < el.num_basis(); ++a)
      for (int b = 0; b < el.num_basis(); ++b)
        worst = std::max(worst,
                         std::abs(el.apply_reference_dof(a, el.basis[b]) - (a == b ? 1.0 : 0.0)));
    expect(worst < 1e-10, "unisolvence " + family_name(f));
  }

  for (Family f : all) {
    const CellKind kind = reference_element(f).cell_kind;
    const auto mesh = std::make_shared<Mesh>(build_structured(3, kind));
    const FESpace space(mesh, f, 0);
    double worst = 0.0;
    for (const MultiIndex& g : reference_element(f).gamma)
      worst = std::max(worst, check_vanishing(space, g, 3));
    expect(worst <= 1e-10, "Gamma vanishing " + family_name(f));
  }
  {
    const auto mesh = std::make_shared<Mesh>(build_structured(3, CellKind::Quadrilateral));
    const FESpace q1(mesh, Family::Q1, 0);
    expect(check_vanishing(q1, {1, 1}, 3) > 1e-3, "negative control Q1 (1,1)");
    const FESpace q1rot(mesh, Family::Q1ROT, 0);
    expect(check_vanishing(q1rot, {2, 0}, 3) > 1e-3, "negative control Q1ROT (2,0)");
  }

  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"felab -- finite element convergence-floor laboratory"};
  app.require_subcommand(1);

  std::string out, format = "csv", mesh_mode_text = "structured";
  int threads = 1;
  app.add_option("--out", out, "output file path");
  auto* format_opt =
      app.add_option("--format", format, "output format: csv|json")->capture_default_str();
  app.add_option("--threads", threads, "concurrent levels for studies")->capture_default_str();

  auto* mesh_cmd = app.add_subcommand("mesh", "generate or inspect a mesh file");
  std::string kind = "tri", mesh_in;
  int n = 8, refine = 0;
  double amplitude = 0.0, mu = 0.0;
  std::uint64_t seed = 0;
  mesh_cmd->add_option("--kind", kind, "tri|quad")->capture_default_str();
  mesh_cmd->add_option("--n", n, "cells per side")->capture_default_str();
  mesh_cmd->add_option("--refine", refine, "uniform refinement passes");
  mesh_cmd->add_option("--perturb", amplitude, "perturbation amplitude (<= 0.3)");
  mesh_cmd->add_option("--seed", seed, "perturbation seed");
  mesh_cmd->add_option("--grade", mu, "grading exponent mu in (0,1]");
  mesh_cmd->add_option("--in", mesh_in, "inspect an existing mesh file instead of generating");

  auto* solve_cmd = app.add_subcommand("solve", "source-problem refinement ladder");
  auto* eigen_cmd = app.add_subcommand("eigen", "smallest-eigenpair refinement ladder");
  auto* best_cmd = app.add_subcommand("bestapprox", "best-approximation refinement ladder");
  std::string family = "P1", solution = "sinsin", levels_text = "8,16,32", problem = "poisson";
  for (auto* cmd : {solve_cmd, eigen_cmd, best_cmd}) {
    cmd->add_option("--family", family, "element family")->capture_default_str();
    cmd->add_option("--levels", levels_text, "comma-separated n per level")->capture_default_str();
    cmd->add_option("--mesh", mesh_mode_text, "structured|perturbed:amp:seed|graded:mu")
        ->capture_default_str();
  }
  solve_cmd->add_option("--solution", solution, "manufactured solution id")->capture_default_str();
  solve_cmd->add_option("--problem", problem, "poisson|biharmonic")->capture_default_str();
  best_cmd->add_option("--solution", solution, "manufactured solution id");
  std::string pairs_text = "0:2,1:2";
  best_cmd->add_option("--pairs", pairs_text, "sharpness pairs j:p")->capture_default_str();

  auto* study_cmd = app.add_subcommand("study", "full ladder from a config file");
  std::string config_path;
  study_cmd->add_option("--config", config_path, "flat key = value config file")->required();

  auto* selftest_cmd =
      app.add_subcommand("selftest", "element unisolvence, Gamma-vanishing, quadrature sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed()) {
      Mesh m = [&] {
        if (!mesh_in.empty()) return read_mesh_text(mesh_in);
        if (mu > 0.0) return grade_toward_corner(n, mu);
        Mesh base =
            build_structured(n, kind == "quad" ? CellKind::Quadrilateral : CellKind::Triangle);
        if (amplitude > 0.0) base = perturb(base, amplitude, seed);
        return base;
      }();
      for (int k = 0; k < refine; ++k) m = refine_uniform(m);
      m.validate();
      const MeshQuality q = quality(m);
      std::printf("vertices %d cells %d faces %d kind %s\n", m.num_vertices(), m.num_cells(),
                  m.num_faces(), m.kind() == CellKind::Triangle ? "tri" : "quad");
      std::printf("h = %.12g  h_min = %.12g  sigma = %.12g  beta = %.12g  area = %.12g\n", q.h,
                  q.h_min, q.sigma, q.beta, m.total_area());
      if (!out.empty()) {
        write_mesh_text(m, out);
        std::printf("wrote %s\n", out.c_str());
      }
      return 0;
    }

    if (selftest_cmd->parsed()) return run_selftest();

    StudyConfig cfg;
    if (study_cmd->parsed()) {
      cfg = parse_config_file(config_path);
    } else {
      cfg.family = family_from_string(family);
      cfg.levels.clear();
      for (const auto& item : CLI::detail::split(levels_text, ','))
        cfg.levels.push_back(std::stoi(item));
      cfg.mesh_mode = parse_mesh_mode(mesh_mode_text);
      cfg.solution = solution;
      if (solve_cmd->parsed()) {
        cfg.problem = problem == "biharmonic" ? StudyProblem::SourceBiharmonic
                                              : StudyProblem::SourcePoisson;
        if (cfg.problem == StudyProblem::SourceBiharmonic) {
          if (solution == "sinsin") cfg.solution = "sinsin2";
          cfg.norms = {NormSpec::norm(1, NormP::Two), NormSpec::norm(2, NormP::Two)};
          cfg.sharpness = {{2, NormP::Two}};
        } else {
          cfg.norms = {NormSpec::norm(0, NormP::Two), NormSpec::norm(1, NormP::Two)};
          cfg.sharpness = {{0, NormP::Two}, {1, NormP::Two}};
        }
      } else if (eigen_cmd->parsed()) {
        cfg.problem = StudyProblem::EigenLaplace;
        cfg.solution = "sinsin";
        cfg.norms = {NormSpec::norm(0, NormP::Two), NormSpec::norm(1, NormP::Two)};
        cfg.sharpness = {{1, NormP::Two}};
      } else {
        cfg.problem = StudyProblem::BestApprox;
        cfg.sharpness.clear();
        for (const auto& item : CLI::detail::split(pairs_text, ',')) {
          const auto parts = CLI::detail::split(item, ':');
          if (parts.size() != 2) throw std::invalid_argument("--pairs expects j:p items");
          cfg.sharpness.push_back({std::stoi(parts[0]), norm_p_from_string(parts[1])});
        }
      }
      cfg.validate();
    }
    if (format_opt->count() > 0) cfg.out_format = format;
    ConvergenceTable table = run_study(cfg, threads);
    return finish_study(table, out, cfg.out_format);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
