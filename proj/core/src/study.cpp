#include "felab/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "felab/assembly.hpp"
#include "felab/bestapprox.hpp"
#include "felab/quadrature.hpp"
#include "felab/sparse.hpp"

namespace felab {

StudyProblem problem_from_string(const std::string& s) {
  if (s == "source_poisson") return StudyProblem::SourcePoisson;
  if (s == "source_biharmonic") return StudyProblem::SourceBiharmonic;
  if (s == "eigen_laplace") return StudyProblem::EigenLaplace;
  if (s == "bestapprox") return StudyProblem::BestApprox;
  throw std::invalid_argument("unknown study problem '" + s + "'");
}

std::string problem_name(StudyProblem p) {
  switch (p) {
    case StudyProblem::SourcePoisson: return "source_poisson";
    case StudyProblem::SourceBiharmonic: return "source_biharmonic";
    case StudyProblem::EigenLaplace: return "eigen_laplace";
    case StudyProblem::BestApprox: return "bestapprox";
  }
  return "?";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Skip: return "SKIP";
  }
  return "?";
}

void StudyConfig::validate() const {
  if (levels.empty()) throw std::invalid_argument("study: levels must be non-empty");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("study: levels must be strictly increasing");
  const bool is_morley = family == Family::MORLEY;
  if (problem == StudyProblem::SourceBiharmonic && !is_morley)
    throw std::invalid_argument("study: the biharmonic problem requires the MORLEY family");
  if ((problem == StudyProblem::SourcePoisson || problem == StudyProblem::EigenLaplace) && is_morley)
    throw std::invalid_argument("study: MORLEY is only compatible with the biharmonic problem");
  if (problem == StudyProblem::EigenLaplace && solution != "sinsin")
    throw std::invalid_argument("study: eigen studies use the sinsin solution");
  if (mesh_mode.kind == MeshMode::Kind::Graded &&
      reference_element(family).cell_kind != CellKind::Triangle)
    throw std::invalid_argument("study: graded meshes are triangular");
  if (mesh_mode.kind == MeshMode::Kind::Perturbed &&
      (mesh_mode.amplitude < 0.0 || mesh_mode.amplitude > 0.3))
    throw std::invalid_argument("study: perturbation amplitude must be in [0, 0.3]");
  if (out_format != "csv" && out_format != "json")
    throw std::invalid_argument("study: format must be csv or json");
}

Mesh build_study_mesh(const StudyConfig& cfg, int n) {
  const CellKind kind = reference_element(cfg.family).cell_kind;
  switch (cfg.mesh_mode.kind) {
    case MeshMode::Kind::Structured:
      return build_structured(n, kind);
    case MeshMode::Kind::Perturbed:
      return perturb(build_structured(n, kind), cfg.mesh_mode.amplitude, cfg.mesh_mode.seed);
    case MeshMode::Kind::Graded:
      return grade_toward_corner(n, cfg.mesh_mode.mu);
  }
  throw std::logic_error("build_study_mesh: unhandled mode");
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& errors) {
  RateFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] > 0.0 && std::isfinite(errors[i])) {
      x.push_back(std::log(h[i]));
      y.push_back(std::log(errors[i]));
    } else {
      fit.excluded_levels.push_back(static_cast<int>(i));
    }
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] > 0.0 && errors[i + 1] > 0.0 && h[i] != h[i + 1])
      fit.pairwise.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
    else
      fit.pairwise.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  const std::size_t m = x.size();
  if (m < 3) return fit;
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  fit.slope = sxy / sxx;
  const double intercept = ym - fit.slope * xm;
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = y[i] - (fit.slope * x[i] + intercept);
    res += d * d;
  }
  fit.residual = std::sqrt(res / m);
  fit.valid = true;
  return fit;
}

int ConvergenceTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

bool ConvergenceTable::any_fail() const {
  for (const auto& s : sharpness)
    if (s.verdict == Verdict::Fail) return true;
  for (const auto& row : rows)
    if (row.failed) return true;
  return false;
}

namespace {

std::string norm_column_name(const NormSpec& spec) {
  return std::string(spec.full ? "norm" : "semi") + "_j" + std::to_string(spec.j) + "_p" +
         norm_p_name(spec.p);
}

std::string dist_column_name(int j, NormP p) {
  return "dist_j" + std::to_string(j) + "_p" + norm_p_name(p);
}

std::string weighted_column_name(const WeightedSpec& w) {
  return "wsum_j" + std::to_string(w.j) + "_p" + norm_p_name(w.p) + "_q" + norm_p_name(w.q);
}

// ||D^gamma u||_{0,2,G} on a sample mesh, for hypothesis screening.
double dgamma_norm(const ManufacturedSolution& u, MultiIndex gamma, const Mesh& mesh,
                   const Region& region) {
  const QuadRule rule = mesh.kind() == CellKind::Triangle ? simplex_rule(10) : box_rule(11);
  double acc = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (!region.contains_cell(mesh, c)) continue;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const double w = rule.weights[q] * mesh.jacobian(c, rule.points[q]).det();
      const double v = u.derivative(gamma, mesh.map_point(c, rule.points[q]));
      acc += w * v * v;
    }
  }
  return std::sqrt(acc);
}

struct ColumnPlan {
  std::vector<NormSpec> norms;        // evaluated against v_h
  std::vector<WeightedSpec> weighted;
  std::vector<SharpnessPair> dist;    // bestapprox distance columns
  bool eigen_columns = false;
  std::vector<std::string> names;
};

ColumnPlan plan_columns(const StudyConfig& cfg) {
  ColumnPlan plan;
  if (cfg.problem == StudyProblem::BestApprox) {
    auto add = [&](int j, NormP p) {
      for (const auto& d : plan.dist)
        if (d.j == j && d.p == p) return;
      plan.dist.push_back({j, p});
      plan.names.push_back(dist_column_name(j, p));
    };
    for (const auto& s : cfg.norms) add(s.j, s.p);
    for (const auto& s : cfg.sharpness) add(s.j, s.p);
    if (plan.dist.empty()) add(1, NormP::Two);
    return plan;
  }
  plan.norms = cfg.norms;
  for (auto& s : plan.norms) s.region = cfg.region;
  for (const auto& pair : cfg.sharpness) {
    bool found = false;
    for (const auto& s : plan.norms)
      if (s.full && s.j == pair.j && s.p == pair.p) found = true;
    if (!found) plan.norms.push_back(NormSpec::norm(pair.j, pair.p, cfg.region));
  }
  for (const auto& s : plan.norms) plan.names.push_back(norm_column_name(s));
  plan.weighted = cfg.weighted;
  for (const auto& w : plan.weighted) plan.names.push_back(weighted_column_name(w));
  if (cfg.problem == StudyProblem::EigenLaplace) {
    plan.eigen_columns = true;
    plan.names.push_back("lambda_h");
    plan.names.push_back("lambda_err");
  }
  return plan;
}

ConvergenceTable::Row compute_level(const StudyConfig& cfg, const ColumnPlan& plan, int n) {
  ConvergenceTable::Row row;
  row.n = n;
  try {
    auto mesh = std::make_shared<Mesh>(build_study_mesh(cfg, n));
    row.h = quality(*mesh).h;
    const ManufacturedSolution& u = manufactured(cfg.solution);
    int essential = 1;
    if (cfg.problem == StudyProblem::BestApprox) essential = 0;
    if (cfg.problem == StudyProblem::SourceBiharmonic) essential = 2;
    FESpace space(mesh, cfg.family, essential);
    row.dofs = space.num_dofs();
    const int r = space.element().order;

    if (cfg.problem == StudyProblem::BestApprox) {
      for (const auto& d : plan.dist) {
        if (d.p == NormP::Two)
          row.errors.push_back(best_approx(space, u, d.j, cfg.region).distance);
        else
          row.errors.push_back(best_approx_surrogate(space, u, d.j, d.p, cfg.region).upper);
      }
      return row;
    }

    if (cfg.problem == StudyProblem::EigenLaplace) {
      const SparseSymmetricMatrix a = assemble_bilinear(space, 1);
      const SparseSymmetricMatrix m = assemble_mass(space);
      const EigenPair pair = smallest_eigpair(a, m, 1e-10);
      const ScaledField u_normalized(1.0 / u.l2_norm, u);
      FEFunction plus{&space, pair.coeffs};
      FEFunction minus{&space, pair.coeffs};
      for (auto& c : minus.coeffs) c = -c;
      for (const auto& spec : plan.norms) {
        const double ep = broken_error(space, u_normalized, &plus, spec);
        const double em = broken_error(space, u_normalized, &minus, spec);
        row.errors.push_back(std::min(ep, em));
      }
      for (const auto& w : plan.weighted) {
        const double ep = weighted_error(space, u_normalized, plus, w.j, r, w.p, w.q, cfg.region);
        const double em = weighted_error(space, u_normalized, minus, w.j, r, w.p, w.q, cfg.region);
        row.errors.push_back(std::min(ep, em));
      }
      row.errors.push_back(pair.lambda);
      row.errors.push_back(std::abs(pair.lambda - u.eigenvalue));
      return row;
    }

    // Source problems. The fallback ladder keeps solves as tight as the
    // operator's attainable residual allows (the fourth-order system
    // conditions like h^-4 and floors out earlier than the Laplacian).
    const int m_order = cfg.problem == StudyProblem::SourceBiharmonic ? 2 : 1;
    const SparseSymmetricMatrix a = assemble_bilinear(space, m_order);
    const FunctionField f(m_order == 1 ? std::function<double(Vec2)>([&u](Vec2 p) { return u.f_laplace(p); })
                                       : std::function<double(Vec2)>([&u](Vec2 p) { return u.f_biharmonic(p); }));
    const std::vector<double> b = assemble_load(space, f);
    FEFunction v_h{&space, m_order == 2 ? solve_spd_adaptive(a, b, 1e-10, 1e-8).x
                                        : solve_spd_adaptive(a, b, 1e-12, 1e-10).x};
    for (const auto& spec : plan.norms) row.errors.push_back(broken_error(space, u, &v_h, spec));
    for (const auto& w : plan.weighted)
      row.errors.push_back(weighted_error(space, u, v_h, w.j, r, w.p, w.q, cfg.region));
    return row;
  } catch (const std::exception& e) {
    row.failed = true;
    row.failure = e.what();
    row.errors.assign(plan.names.size(), std::numeric_limits<double>::quiet_NaN());
    return row;
  }
}

}  // namespace

ConvergenceTable run_study(const StudyConfig& cfg, int threads) {
  cfg.validate();
  ConvergenceTable table;
  table.config = cfg;
  const ReferenceElement& el = reference_element(cfg.family);
  table.element_order = el.order;
  const ColumnPlan plan = plan_columns(cfg);
  table.columns = plan.names;

  const ManufacturedSolution& u = manufactured(cfg.solution);

  {
    // Hypothesis gate: D^gamma v_h must vanish for the family's Gamma set
    // before any sharpness verdict is issued.
    auto mesh0 = std::make_shared<Mesh>(build_study_mesh(cfg, cfg.levels.front()));
    FESpace gate_space(mesh0, cfg.family, 0);
    for (const MultiIndex& gamma : el.gamma)
      table.gamma_gate_max =
          std::max(table.gamma_gate_max, check_vanishing(gate_space, gamma, 3));
    if (table.gamma_gate_max > 1e-10)
      throw std::runtime_error("run_study: Gamma-vanishing hypothesis gate failed (" +
                               family_name(cfg.family) + ")");

    if (u.is_polynomial && u.poly_degree < el.order) {
      table.hypothesis_positive = false;
    } else if (u.is_polynomial) {
      double worst = 0.0;
      for (const MultiIndex& gamma : el.gamma)
        if (gamma.order() <= 3)
          worst = std::max(worst, dgamma_norm(u, gamma, *mesh0, cfg.region));
      table.hypothesis_positive = worst > 1e-8;
    }
  }

  table.rows.resize(cfg.levels.size());
  if (threads <= 1 || cfg.levels.size() == 1) {
    for (std::size_t i = 0; i < cfg.levels.size(); ++i)
      table.rows[i] = compute_level(cfg, plan, cfg.levels[i]);
  } else {
    std::vector<std::future<ConvergenceTable::Row>> futures;
    futures.reserve(cfg.levels.size());
    for (std::size_t i = 0; i < cfg.levels.size(); ++i)
      futures.push_back(std::async(std::launch::async, [&cfg, &plan, i] {
        return compute_level(cfg, plan, cfg.levels[i]);
      }));
    for (std::size_t i = 0; i < cfg.levels.size(); ++i) table.rows[i] = futures[i].get();
  }

  fit_rates(table);
  return table;
}

void fit_rates(ConvergenceTable& table) {
  const std::size_t ncols = table.columns.size();
  std::vector<double> h;
  for (const auto& row : table.rows) h.push_back(row.h);
  table.rates.clear();
  for (std::size_t col = 0; col < ncols; ++col) {
    std::vector<double> e;
    for (const auto& row : table.rows)
      e.push_back(row.failed ? std::numeric_limits<double>::quiet_NaN() : row.errors[col]);
    table.rates.push_back(fit_rate(h, e));
  }

  table.sharpness.clear();
  const int r = table.element_order;
  for (const auto& pair : table.config.sharpness) {
    SharpnessReport report;
    report.pair = pair;
    report.column = table.config.problem == StudyProblem::BestApprox
                        ? dist_column_name(pair.j, pair.p)
                        : norm_column_name(NormSpec::norm(pair.j, pair.p));
    const int col = table.column_index(report.column);
    if (col < 0) continue;
    report.rate = table.rates[col];
    bool all_positive = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : table.rows) {
      const double ratio = row.failed ? std::numeric_limits<double>::quiet_NaN()
                                      : sharpness_ratio(row.errors[col], row.h, r, pair.j);
      report.ratios.push_back(ratio);
      if (!(ratio > 0.0) || !std::isfinite(ratio)) all_positive = false;
      if (std::isfinite(ratio) && ratio > 0.0) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    report.band = (all_positive && lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();

    if (!table.hypothesis_positive) {
      report.verdict = Verdict::Skip;
      report.note = "hypothesis ||D^gamma u|| > 0 violated (u lies in the discrete space)";
    } else if (!all_positive) {
      report.verdict = Verdict::Fail;
      report.note = "non-positive or missing ratio";
    } else if (report.band > table.config.band_threshold) {
      report.verdict = Verdict::Fail;
      report.note = "ratio band exceeds threshold";
    } else if (!report.rate.valid ||
               std::abs(report.rate.slope - (r - pair.j)) > table.config.rate_tol) {
      report.verdict = Verdict::Fail;
      report.note = "fitted rate outside tolerance";
    } else {
      report.verdict = Verdict::Pass;
    }
    table.sharpness.push_back(report);
  }
}

namespace {

std::string real17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_real(double v) {
  if (!std::isfinite(v)) return "null";
  return real17(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string mesh_mode_string(const MeshMode& m) {
  switch (m.kind) {
    case MeshMode::Kind::Structured: return "structured";
    case MeshMode::Kind::Perturbed:
      return "perturbed:" + real17(m.amplitude) + ":" + std::to_string(m.seed);
    case MeshMode::Kind::Graded: return "graded:" + real17(m.mu);
  }
  return "?";
}

void emit_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "level,n,h,dofs";
  for (const auto& name : table.columns) out << "," << name;
  for (const auto& s : table.sharpness)
    out << ",ratio_j" << s.pair.j << "_p" << norm_p_name(s.pair.p);
  out << "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out << i << "," << row.n << "," << real17(row.h) << "," << row.dofs;
    for (double e : row.errors) out << "," << real17(e);
    for (const auto& s : table.sharpness) out << "," << real17(s.ratios[i]);
    out << "\n";
  }
}

void emit_json(const ConvergenceTable& table, std::ostream& out) {
  out << "{\n";
  out << "  \"config\": {\"problem\": \"" << problem_name(table.config.problem)
      << "\", \"family\": \"" << family_name(table.config.family) << "\", \"solution\": \""
      << table.config.solution << "\", \"mesh\": \"" << mesh_mode_string(table.config.mesh_mode)
      << "\", \"levels\": [";
  for (std::size_t i = 0; i < table.config.levels.size(); ++i)
    out << (i ? ", " : "") << table.config.levels[i];
  out << "], \"band_threshold\": " << real17(table.config.band_threshold)
      << ", \"rate_tol\": " << real17(table.config.rate_tol) << "},\n";
  out << "  \"element_order\": " << table.element_order << ",\n";
  out << "  \"gamma_gate_max\": " << json_real(table.gamma_gate_max) << ",\n";
  out << "  \"hypothesis_positive\": " << (table.hypothesis_positive ? "true" : "false") << ",\n";
  out << "  \"columns\": [";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? ", " : "") << "\"" << table.columns[i] << "\"";
  out << "],\n";
  out << "  \"rows\": [\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out << "    {\"level\": " << i << ", \"n\": " << row.n << ", \"h\": " << json_real(row.h)
        << ", \"dofs\": " << row.dofs << ", \"errors\": [";
    for (std::size_t k = 0; k < row.errors.size(); ++k)
      out << (k ? ", " : "") << json_real(row.errors[k]);
    out << "], \"failed\": " << (row.failed ? "true" : "false");
    if (row.failed) out << ", \"failure\": \"" << json_escape(row.failure) << "\"";
    out << "}" << (i + 1 < table.rows.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"rates\": [\n";
  for (std::size_t i = 0; i < table.rates.size(); ++i) {
    const auto& r = table.rates[i];
    out << "    {\"column\": \"" << table.columns[i] << "\", \"valid\": "
        << (r.valid ? "true" : "false") << ", \"slope\": " << json_real(r.slope)
        << ", \"residual\": " << json_real(r.residual) << ", \"pairwise\": [";
    for (std::size_t k = 0; k < r.pairwise.size(); ++k)
      out << (k ? ", " : "") << json_real(r.pairwise[k]);
    out << "], \"excluded_levels\": [";
    for (std::size_t k = 0; k < r.excluded_levels.size(); ++k)
      out << (k ? ", " : "") << r.excluded_levels[k];
    out << "]}" << (i + 1 < table.rates.size() ? "," : "") << "\n";
  }
  out << "  ],\n";
  out << "  \"sharpness\": [\n";
  for (std::size_t i = 0; i < table.sharpness.size(); ++i) {
    const auto& s = table.sharpness[i];
    out << "    {\"j\": " << s.pair.j << ", \"p\": \"" << norm_p_name(s.pair.p)
        << "\", \"column\": \"" << s.column << "\", \"ratios\": [";
    for (std::size_t k = 0; k < s.ratios.size(); ++k)
      out << (k ? ", " : "") << json_real(s.ratios[k]);
    out << "], \"band\": " << json_real(s.band) << ", \"rate\": " << json_real(s.rate.slope)
        << ", \"verdict\": \"" << verdict_name(s.verdict) << "\", \"note\": \""
        << json_escape(s.note) << "\"}" << (i + 1 < table.sharpness.size() ? "," : "") << "\n";
  }
  out << "  ]\n";
  out << "}\n";
}

}  // namespace

void emit_table(const ConvergenceTable& table, const std::string& format, std::ostream& out) {
  if (format == "csv")
    emit_csv(table, out);
  else if (format == "json")
    emit_json(table, out);
  else
    throw std::invalid_argument("emit_table: format must be csv or json");
}

void emit_table(const ConvergenceTable& table, const std::string& format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_table: cannot open " + path);
  emit_table(table, format, out);
  if (!out.good()) throw std::runtime_error("emit_table: write failed for " + path);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

NormSpec parse_norm_spec(const std::string& item) {
  const auto parts = split(item, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw std::invalid_argument("config: norm spec must be j:p[:full|semi], got '" + item + "'");
  NormSpec spec;
  spec.j = std::stoi(parts[0]);
  spec.p = norm_p_from_string(parts[1]);
  spec.full = parts.size() < 3 || parts[2] == "full";
  if (parts.size() == 3 && parts[2] != "full" && parts[2] != "semi")
    throw std::invalid_argument("config: norm spec kind must be full or semi");
  return spec;
}

}  // namespace

StudyConfig parse_config_text(const std::string& text) {
  StudyConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problem") {
      cfg.problem = problem_from_string(value);
    } else if (key == "family") {
      cfg.family = family_from_string(value);
    } else if (key == "levels") {
      cfg.levels.clear();
      for (const auto& item : split(value, ',')) cfg.levels.push_back(std::stoi(item));
    } else if (key == "solution") {
      cfg.solution = value;
    } else if (key == "norms") {
      cfg.norms.clear();
      for (const auto& item : split(value, ',')) cfg.norms.push_back(parse_norm_spec(item));
    } else if (key == "sharpness") {
      cfg.sharpness.clear();
      for (const auto& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
          throw std::invalid_argument("config: sharpness pair must be j:p");
        cfg.sharpness.push_back({std::stoi(parts[0]), norm_p_from_string(parts[1])});
      }
    } else if (key == "weighted") {
      cfg.weighted.clear();
      for (const auto& item : split(value, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 3)
          throw std::invalid_argument("config: weighted spec must be j:p:q");
        cfg.weighted.push_back({std::stoi(parts[0]), norm_p_from_string(parts[1]),
                                norm_p_from_string(parts[2])});
      }
    } else if (key == "region") {
      const auto parts = split(value, ',');
      if (parts.size() != 4)
        throw std::invalid_argument("config: region must be x0,y0,x1,y1");
      cfg.region = Region::box(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                               std::stod(parts[3]));
    } else if (key == "mesh") {
      const auto parts = split(value, ':');
      if (parts[0] == "structured") {
        cfg.mesh_mode.kind = MeshMode::Kind::Structured;
      } else if (parts[0] == "perturbed") {
        if (parts.size() != 3)
          throw std::invalid_argument("config: mesh = perturbed:amplitude:seed");
        cfg.mesh_mode.kind = MeshMode::Kind::Perturbed;
        cfg.mesh_mode.amplitude = std::stod(parts[1]);
        cfg.mesh_mode.seed = std::stoull(parts[2]);
      } else if (parts[0] == "graded") {
        if (parts.size() != 2) throw std::invalid_argument("config: mesh = graded:mu");
        cfg.mesh_mode.kind = MeshMode::Kind::Graded;
        cfg.mesh_mode.mu = std::stod(parts[1]);
      } else {
        throw std::invalid_argument("config: unknown mesh mode '" + parts[0] + "'");
      }
    } else if (key == "band_threshold") {
      cfg.band_threshold = std::stod(value);
    } else if (key == "rate_tol") {
      cfg.rate_tol = std::stod(value);
    } else if (key == "out") {
      cfg.out_path = value;
    } else if (key == "format") {
      cfg.out_format = value;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config_file: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace felab
