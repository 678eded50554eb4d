#pragma once

// Serialized forms: the system file read by the tool and the report it
// writes. Complex numbers are [re, im] pairs, matrices are row-major.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcs/purity.hpp"

namespace fcs {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSystemFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

struct SystemFile {
  PopescuSystem sys;
  std::optional<CMatrix> rho;
  double tol = kDefaultTol;
  std::string name;
  std::string description;
};

/// Throws ParseError on malformed structure; shape errors in the operator
/// list are ValidationError (raised by PopescuSystem).
SystemFile parse_system(const std::string& text);
std::string serialize_system(const SystemFile& file);

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, Index rows, Index cols, const std::string& what);

std::string sha256_hex(const std::string& bytes);

struct AmalgamSummary {
  int level = 0;
  Index raw_dim = 0;
  Index quotient_dim = 0;
  double gram_min_eig = 0;
  double gram_hermiticity = 0;
  double cuntz_isometry = 0;
  double cuntz_sum = 0;
  double tilde_isometry = 0;
  double tilde_cuntz_sum = 0;
  double commute = 0;
  double commute_star = 0;
  double compression = 0;
  double grading = 0;
  double boundary_cuntz_sum = 0;
  double boundary_tilde_cuntz_sum = 0;
  int moment_window = 0;
  double moment_deviation = 0;
  double shift_isometry = 0;
  double shift_co_isometry = 0;
  double shift_covariance = 0;
  double shift_vacuum = 0;
  bool lambda_monotone = false;
  bool ok = false;

  /// Recomputes ok from the residuals against tol.
  bool passes(double tol) const;
};

struct CertificateStep {
  std::string step;
  std::string identity;
  double residual = 0;
  bool ok = false;
};

struct Provenance {
  std::string input_name;
  std::string input_sha256;
  double tol = kDefaultTol;
  double subspace_tol = kSubspaceTol;
  double amalgam_tol = 1e-8;
  int cutoff = 4;
  std::vector<std::pair<std::string, std::string>> versions;
  std::vector<std::pair<std::string, double>> timings_ms;  // empty unless requested
};

struct ReportFile {
  Provenance provenance;
  PurityReport report;
  std::optional<AmalgamSummary> amalgam;
  std::string amalgam_status;  // "built", "disabled" or the reason it was skipped
  std::vector<CertificateStep> certificate_chain;
  std::string infinite_volume_note;
};

std::vector<std::pair<std::string, std::string>> library_versions();

/// Certificate chain for a report: the finite identities whose conjunction
/// is the purity verdict, with their residuals.
std::vector<CertificateStep> certificate_chain(const PurityReport& report, double subspace_tol);

std::string infinite_volume_note();

nlohmann::json to_json(const ReportFile& r);
/// Throws ParseError on malformed input and ConsistencyError when the
/// verdict fields contradict each other or the residuals.
ReportFile report_from_json(const nlohmann::json& j);
std::string serialize_report(const ReportFile& r);

}  // namespace fcs
