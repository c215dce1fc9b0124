#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "felab/norms.hpp"
#include "felab/solutions.hpp"

namespace felab {

enum class StudyProblem { SourcePoisson, SourceBiharmonic, EigenLaplace, BestApprox };

StudyProblem problem_from_string(const std::string& s);
std::string problem_name(StudyProblem p);

struct MeshMode {
  enum class Kind { Structured, Perturbed, Graded };
  Kind kind = Kind::Structured;
  double amplitude = 0.0;  // perturbed
  std::uint64_t seed = 0;  // perturbed
  double mu = 1.0;         // graded
};

struct SharpnessPair {
  int j = 0;
  NormP p = NormP::Two;
};

struct WeightedSpec {
  int j = 0;
  NormP p = NormP::Two;
  NormP q = NormP::Two;
};

struct StudyConfig {
  StudyProblem problem = StudyProblem::SourcePoisson;
  Family family = Family::P1;
  std::vector<int> levels;
  std::string solution = "sinsin";
  std::vector<NormSpec> norms;
  std::vector<SharpnessPair> sharpness;
  std::vector<WeightedSpec> weighted;
  Region region;
  MeshMode mesh_mode;
  double band_threshold = 4.0;
  double rate_tol = 0.2;
  std::string out_path;
  std::string out_format = "csv";

  void validate() const;
};

/// Least-squares slope of log E against log h; zero or negative errors are
/// excluded from the fit and flagged. Invalid with fewer than 3 usable
/// levels.
struct RateFit {
  bool valid = false;
  double slope = 0.0;
  double residual = 0.0;
  std::vector<double> pairwise;       // log2-style rate between adjacent levels
  std::vector<int> excluded_levels;   // row indices dropped from the fit
};

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& errors);

enum class Verdict { Pass, Fail, Skip };
std::string verdict_name(Verdict v);

struct SharpnessReport {
  SharpnessPair pair;
  std::string column;
  std::vector<double> ratios;  // E / h^(r-j), one per level
  double band = 0.0;           // max ratio / min ratio
  RateFit rate;
  Verdict verdict = Verdict::Fail;
  std::string note;
};

struct ConvergenceTable {
  StudyConfig config;
  int element_order = 0;
  std::vector<std::string> columns;  // error column names

  struct Row {
    int n = 0;
    double h = 0.0;
    int dofs = 0;
    std::vector<double> errors;
    bool failed = false;
    std::string failure;
  };
  std::vector<Row> rows;

  std::vector<RateFit> rates;  // one per column
  std::vector<SharpnessReport> sharpness;
  double gamma_gate_max = 0.0;  // max |D^gamma v_h| over the family's Gamma
  bool hypothesis_positive = true;

  int column_index(const std::string& name) const;
  bool any_fail() const;
};

/// Runs the refinement ladder described by `cfg`; deterministic for a fixed
/// config (thread count only distributes whole levels).
ConvergenceTable run_study(const StudyConfig& cfg, int threads = 1);

/// Recomputes fitted rates and sharpness verdicts from the table rows.
void fit_rates(ConvergenceTable& table);

/// csv: "level,n,h,dofs,<norm columns>,<ratio columns>"; json mirrors the
/// whole table. Reals carry 17 significant digits and the output is
/// byte-stable for a fixed table.
void emit_table(const ConvergenceTable& table, const std::string& format, std::ostream& out);
void emit_table(const ConvergenceTable& table, const std::string& format, const std::string& path);

/// Flat "key = value" config text; lists are comma-separated.
StudyConfig parse_config_text(const std::string& text);
StudyConfig parse_config_file(const std::string& path);

/// Builds the level mesh for a config (structured/perturbed/graded).
Mesh build_study_mesh(const StudyConfig& cfg, int n);

}  // namespace felab
