// io.hpp -- the HPF1 field-file format, run reports and CSV exports.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hopf/ansatz1d.hpp"
#include "hopf/field.hpp"
#include "hopf/optimize.hpp"
#include "hopf/topology.hpp"

namespace hopf {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field files: magic "HPF1", one-line JSON header
// {"version":1,"manifold":...,"dims":[...],"L":...,"periods":[...],
//  "order":"last-axis-fastest","charge":...}, then raw little-endian
// float64 payload, 3 per site.  "L", "periods" and "charge" are optional;
// "charge" carries the analytic charge of the initializer when known.
inline constexpr int kFieldFormatVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

void write_field(const std::string& path, const Field& field,
                 std::optional<int> charge = std::nullopt);

struct LoadedField {
  Field field;
  std::optional<int> charge;
  bool renormalized = false;  // norms were off by (1e-9, 1e-6] and fixed
};

/// Throws IoError on bad magic/header/size or norms off by more than 1e-6.
LoadedField read_field(const std::string& path);

struct RunReport {
  std::string manifold;
  std::vector<int> dims;
  std::optional<int> Q;
  std::optional<double> Q_numeric;
  std::optional<double> residual;
  std::string charge_method;  // "spectral" | "degree" | "certificate" | "none"
  double E4 = 0, E2 = 0;
  double beta_final = 0;
  std::optional<double> E_over_bound;
  std::optional<double> E_x, E_y, E_z;  // null for 2D runs
  double kappa = 0;
  bool converged = false;
  bool discontinuous = false;
  int iterations = 0;
  double wall_seconds = 0;

  std::string to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);

std::string trace_csv(const std::vector<TraceRow>& trace);
std::string profile_csv(const ProfileSolution& profile);
std::string curves_csv(const PreimageCurve& curves);

}  // namespace hopf
