#include "fcs/io.hpp"

#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include <Eigen/Core>

#include "fcs/errors.hpp"

namespace fcs {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<long>();
}

bool boolean(const json& j, const std::string& what) {
  if (!j.is_boolean()) throw ParseError(what + ": expected a boolean");
  return j.get<bool>();
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) throw ParseError(what + ": expected a string");
  return j.get<std::string>();
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ParseError(what + ": expected an [re, im] pair");
  return {number(j[0], what), number(j[1], what)};
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& what) {
  if (!j.is_array() || Index(j.size()) != rows) throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[std::size_t(r)];
    if (!row.is_array() || Index(row.size()) != cols) throw ParseError(what + ": expected " + std::to_string(cols) + " columns");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[std::size_t(c)], what);
  }
  return m;
}

SystemFile parse_system(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("system file: ") + e.what());
  }
  const std::string where = "system file";
  if (text(field(j, "format", where), "format") != "fcs-lab/system") throw ParseError("system file: wrong format tag");
  if (integer(field(j, "version", where), "version") != kSystemFormatVersion) throw ParseError("system file: unsupported version");
  const long n = integer(field(j, "n", where), "n");
  const long d = integer(field(j, "d", where), "d");
  if (n < 1 || d < 1) throw ParseError("system file: n and d must be positive");
  const json& v = field(j, "v", where);
  if (!v.is_array() || long(v.size()) != d) throw ParseError("system file: v must hold d matrices");
  SystemFile out;
  std::vector<CMatrix> ops;
  for (long k = 0; k < d; ++k) ops.push_back(matrix_from_json(v[std::size_t(k)], n, n, "v[" + std::to_string(k) + "]"));
  out.sys = PopescuSystem(std::move(ops));
  if (j.contains("rho") && !j.at("rho").is_null()) out.rho = matrix_from_json(j.at("rho"), n, n, "rho");
  if (j.contains("tol")) {
    out.tol = number(j.at("tol"), "tol");
    if (!(out.tol > 0)) throw ParseError("system file: tol must be positive");
  }
  if (j.contains("metadata")) {
    const json& meta = j.at("metadata");
    if (!meta.is_object()) throw ParseError("system file: metadata must be an object");
    if (meta.contains("name")) out.name = text(meta.at("name"), "metadata.name");
    if (meta.contains("description")) out.description = text(meta.at("description"), "metadata.description");
  }
  return out;
}

std::string serialize_system(const SystemFile& file) {
  json j;
  j["format"] = "fcs-lab/system";
  j["version"] = kSystemFormatVersion;
  j["n"] = file.sys.n();
  j["d"] = file.sys.d();
  json v = json::array();
  for (const auto& x : file.sys.v()) v.push_back(matrix_to_json(x));
  j["v"] = std::move(v);
  if (file.rho) j["rho"] = matrix_to_json(*file.rho);
  j["tol"] = file.tol;
  j["metadata"] = {{"name", file.name}, {"description", file.description}};
  return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

bool AmalgamSummary::passes(double tol) const {
  const double worst = std::max({cuntz_isometry, cuntz_sum, tilde_isometry, tilde_cuntz_sum, commute, commute_star,
                                 compression, grading, moment_deviation, shift_isometry, shift_co_isometry,
                                 shift_covariance, shift_vacuum});
  return gram_min_eig >= -tol && worst <= tol && lambda_monotone;
}

std::vector<std::pair<std::string, std::string>> library_versions() {
  return {{"fcs-lab", kToolVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

std::string infinite_volume_note() {
  return "Statements about the infinite chain (irreducibility of the chain representation, Haag duality for the "
         "half-chain split) are not tested directly. They are certified indirectly via the finite identity "
         "Fix(tau~) = pi(M) together with ergodicity, which is the certificate chain above.";
}

std::vector<CertificateStep> certificate_chain(const PurityReport& r, double subspace_tol) {
  auto res = [&](const char* key) {
    const auto it = r.residuals.find(key);
    return it == r.residuals.end() ? 0.0 : it->second;
  };
  std::vector<CertificateStep> chain;
  chain.push_back({"validate", "sum_k v_k v_k^* = I", res("validate.unitality"), r.validated});
  chain.push_back({"invariant state", "sum_k v_k^* rho v_k = rho", res("invariant.residual"), true});
  chain.push_back({"support identity", "Fix(tau) = pi(M)'", res("support.equality"), r.support_identity_ok});
  chain.push_back({"factor", "center of pi(M) is C I", double(r.dims.center) - 1.0, r.is_factor});
  chain.push_back({"ergodicity", "tau has simple eigenvalue 1 on pi(M)", 0.0, r.is_ergodic});
  chain.push_back({"modular data", "S = J Delta^{1/2}, J^2 = I, J Delta J = Delta^{-1}", res("modular.max"), true});
  chain.push_back({"dual sum", "sum_k v~_k v~_k^* = I", res("dual.sum"), true});
  chain.push_back({"dual commutant", "v~_k in pi(M)'", res("dual.commutant"), true});
  chain.push_back({"dual vacuum", "v~_I^* Omega = pi(v_rev(I))^* Omega", res("dual.vacuum"), true});
  chain.push_back({"moment duality", "phi(v_I v_J^*) = <v~_rev(I)^* Omega, v~_rev(J)^* Omega>", res("dual.duality"), true});
  chain.push_back({"KMS duality", "<y Omega, tau(x) Omega> = <tau~(y) Omega, x Omega>", res("dual.kms"), true});
  chain.push_back({"dual containment", "pi(M) in Fix(tau~)", res("dual_fix.containment"),
                   res("dual_fix.containment") <= subspace_tol});
  chain.push_back({"dual fixed points", "Fix(tau~) = pi(M)", res("dual_fix.equality"), r.dual_identity_ok.value_or(false)});
  return chain;
}

namespace {

json report_body(const PurityReport& r) {
  json j;
  j["validated"] = r.validated;
  j["invariant_multiplicity"] = r.invariant_multiplicity;
  j["extremal_count"] = r.extremal_count;
  j["is_factor"] = r.is_factor;
  j["is_ergodic"] = r.is_ergodic;
  j["support_identity_ok"] = r.support_identity_ok;
  j["dual_identity_ok"] = r.dual_identity_ok ? json(*r.dual_identity_ok) : json(nullptr);
  j["is_pure"] = r.is_pure;
  j["purity_reason"] = r.purity_reason;
  json spec = json::array();
  for (const cplx& z : r.channel_spectrum) spec.push_back(complex_to_json(z));
  j["channel_spectrum"] = std::move(spec);
  j["mixing_gap"] = r.mixing_gap ? json(*r.mixing_gap) : json(nullptr);
  j["strongly_mixing"] = r.strongly_mixing ? json(*r.strongly_mixing) : json(nullptr);
  j["gauge_group"] = {{"description", r.gauge_h.describe()},
                      {"full_circle", r.gauge_h.full_circle},
                      {"order", r.gauge_h.order},
                      {"differences", r.gauge_h.differences},
                      {"cutoff", r.gauge_h.cutoff}};
  j["dims"] = {{"input_n", r.dims.input_n},   {"support_n", r.dims.support_n}, {"gns", r.dims.gns},
               {"algebra", r.dims.algebra},   {"commutant", r.dims.commutant}, {"center", r.dims.center},
               {"fix_tau", r.dims.fix_tau},   {"fix_dual", r.dims.fix_dual}};
  json res = json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  j["residuals"] = std::move(res);
  return j;
}

PurityReport report_body_from_json(const json& j) {
  const std::string w = "report";
  PurityReport r;
  r.validated = boolean(field(j, "validated", w), "validated");
  r.invariant_multiplicity = integer(field(j, "invariant_multiplicity", w), "invariant_multiplicity");
  r.extremal_count = integer(field(j, "extremal_count", w), "extremal_count");
  r.is_factor = boolean(field(j, "is_factor", w), "is_factor");
  r.is_ergodic = boolean(field(j, "is_ergodic", w), "is_ergodic");
  r.support_identity_ok = boolean(field(j, "support_identity_ok", w), "support_identity_ok");
  if (const json& x = field(j, "dual_identity_ok", w); !x.is_null()) r.dual_identity_ok = boolean(x, "dual_identity_ok");
  r.is_pure = boolean(field(j, "is_pure", w), "is_pure");
  r.purity_reason = text(field(j, "purity_reason", w), "purity_reason");
  const json& spec = field(j, "channel_spectrum", w);
  if (!spec.is_array()) throw ParseError("report: channel_spectrum must be an array");
  for (const json& z : spec) r.channel_spectrum.push_back(complex_from_json(z, "channel_spectrum"));
  if (const json& x = field(j, "mixing_gap", w); !x.is_null()) r.mixing_gap = number(x, "mixing_gap");
  if (const json& x = field(j, "strongly_mixing", w); !x.is_null()) r.strongly_mixing = boolean(x, "strongly_mixing");
  const json& g = field(j, "gauge_group", w);
  r.gauge_h.full_circle = boolean(field(g, "full_circle", w), "gauge_group.full_circle");
  r.gauge_h.order = integer(field(g, "order", w), "gauge_group.order");
  r.gauge_h.cutoff = int(integer(field(g, "cutoff", w), "gauge_group.cutoff"));
  for (const json& x : field(g, "differences", w)) r.gauge_h.differences.push_back(int(integer(x, "gauge_group.differences")));
  if (text(field(g, "description", w), "gauge_group.description") != r.gauge_h.describe())
    throw ConsistencyError("report: gauge group description does not match its data");
  const json& dims = field(j, "dims", w);
  r.dims.input_n = integer(field(dims, "input_n", w), "dims");
  r.dims.support_n = integer(field(dims, "support_n", w), "dims");
  r.dims.gns = integer(field(dims, "gns", w), "dims");
  r.dims.algebra = integer(field(dims, "algebra", w), "dims");
  r.dims.commutant = integer(field(dims, "commutant", w), "dims");
  r.dims.center = integer(field(dims, "center", w), "dims");
  r.dims.fix_tau = integer(field(dims, "fix_tau", w), "dims");
  r.dims.fix_dual = integer(field(dims, "fix_dual", w), "dims");
  const json& res = field(j, "residuals", w);
  if (!res.is_object()) throw ParseError("report: residuals must be an object");
  for (auto it = res.begin(); it != res.end(); ++it) r.residuals[it.key()] = number(it.value(), "residuals." + it.key());
  return r;
}

json amalgam_to_json(const AmalgamSummary& a) {
  return {{"level", a.level},
          {"raw_dim", a.raw_dim},
          {"quotient_dim", a.quotient_dim},
          {"gram_min_eig", a.gram_min_eig},
          {"gram_hermiticity", a.gram_hermiticity},
          {"cuntz_isometry", a.cuntz_isometry},
          {"cuntz_sum", a.cuntz_sum},
          {"tilde_isometry", a.tilde_isometry},
          {"tilde_cuntz_sum", a.tilde_cuntz_sum},
          {"commute", a.commute},
          {"commute_star", a.commute_star},
          {"compression", a.compression},
          {"grading", a.grading},
          {"boundary_cuntz_sum", a.boundary_cuntz_sum},
          {"boundary_tilde_cuntz_sum", a.boundary_tilde_cuntz_sum},
          {"moment_window", a.moment_window},
          {"moment_deviation", a.moment_deviation},
          {"shift_isometry", a.shift_isometry},
          {"shift_co_isometry", a.shift_co_isometry},
          {"shift_covariance", a.shift_covariance},
          {"shift_vacuum", a.shift_vacuum},
          {"lambda_monotone", a.lambda_monotone},
          {"ok", a.ok}};
}

AmalgamSummary amalgam_from_json(const json& j) {
  const std::string w = "amalgam";
  AmalgamSummary a;
  auto num = [&](const char* k) { return number(field(j, k, w), std::string("amalgam.") + k); };
  a.level = int(integer(field(j, "level", w), "amalgam.level"));
  a.raw_dim = integer(field(j, "raw_dim", w), "amalgam.raw_dim");
  a.quotient_dim = integer(field(j, "quotient_dim", w), "amalgam.quotient_dim");
  a.gram_min_eig = num("gram_min_eig");
  a.gram_hermiticity = num("gram_hermiticity");
  a.cuntz_isometry = num("cuntz_isometry");
  a.cuntz_sum = num("cuntz_sum");
  a.tilde_isometry = num("tilde_isometry");
  a.tilde_cuntz_sum = num("tilde_cuntz_sum");
  a.commute = num("commute");
  a.commute_star = num("commute_star");
  a.compression = num("compression");
  a.grading = num("grading");
  a.boundary_cuntz_sum = num("boundary_cuntz_sum");
  a.boundary_tilde_cuntz_sum = num("boundary_tilde_cuntz_sum");
  a.moment_window = int(integer(field(j, "moment_window", w), "amalgam.moment_window"));
  a.moment_deviation = num("moment_deviation");
  a.shift_isometry = num("shift_isometry");
  a.shift_co_isometry = num("shift_co_isometry");
  a.shift_covariance = num("shift_covariance");
  a.shift_vacuum = num("shift_vacuum");
  a.lambda_monotone = boolean(field(j, "lambda_monotone", w), "amalgam.lambda_monotone");
  a.ok = boolean(field(j, "ok", w), "amalgam.ok");
  return a;
}

}  // namespace

json to_json(const ReportFile& r) {
  json j;
  j["format"] = "fcs-lab/report";
  j["version"] = kReportFormatVersion;
  json prov;
  prov["input_name"] = r.provenance.input_name;
  prov["input_sha256"] = r.provenance.input_sha256;
  prov["tolerances"] = {{"tol", r.provenance.tol},
                        {"subspace_tol", r.provenance.subspace_tol},
                        {"amalgam_tol", r.provenance.amalgam_tol}};
  prov["cutoff"] = r.provenance.cutoff;
  json versions = json::object();
  for (const auto& [k, v] : r.provenance.versions) versions[k] = v;
  prov["versions"] = std::move(versions);
  if (!r.provenance.timings_ms.empty()) {
    json t = json::array();
    for (const auto& [k, v] : r.provenance.timings_ms) t.push_back({{"stage", k}, {"ms", v}});
    prov["timings_ms"] = std::move(t);
  }
  j["provenance"] = std::move(prov);
  j["report"] = report_body(r.report);
  j["amalgam_status"] = r.amalgam_status;
  j["amalgam"] = r.amalgam ? amalgam_to_json(*r.amalgam) : json(nullptr);
  json chain = json::array();
  for (const auto& s : r.certificate_chain)
    chain.push_back({{"step", s.step}, {"identity", s.identity}, {"residual", s.residual}, {"ok", s.ok}});
  j["certificate_chain"] = std::move(chain);
  j["infinite_volume"] = r.infinite_volume_note;
  return j;
}

ReportFile report_from_json(const json& j) {
  const std::string w = "report file";
  if (text(field(j, "format", w), "format") != "fcs-lab/report") throw ParseError("report file: wrong format tag");
  if (integer(field(j, "version", w), "version") != kReportFormatVersion) throw ParseError("report file: unsupported version");
  ReportFile r;
  const json& prov = field(j, "provenance", w);
  r.provenance.input_name = text(field(prov, "input_name", w), "input_name");
  r.provenance.input_sha256 = text(field(prov, "input_sha256", w), "input_sha256");
  const json& tols = field(prov, "tolerances", w);
  r.provenance.tol = number(field(tols, "tol", w), "tol");
  r.provenance.subspace_tol = number(field(tols, "subspace_tol", w), "subspace_tol");
  r.provenance.amalgam_tol = number(field(tols, "amalgam_tol", w), "amalgam_tol");
  r.provenance.cutoff = int(integer(field(prov, "cutoff", w), "cutoff"));
  const json& versions = field(prov, "versions", w);
  if (!versions.is_object()) throw ParseError("report file: versions must be an object");
  for (auto it = versions.begin(); it != versions.end(); ++it)
    r.provenance.versions.emplace_back(it.key(), text(it.value(), "versions"));
  if (prov.contains("timings_ms"))
    for (const json& t : prov.at("timings_ms"))
      r.provenance.timings_ms.emplace_back(text(field(t, "stage", w), "stage"), number(field(t, "ms", w), "ms"));
  r.report = report_body_from_json(field(j, "report", w));
  r.amalgam_status = text(field(j, "amalgam_status", w), "amalgam_status");
  if (const json& a = field(j, "amalgam", w); !a.is_null()) r.amalgam = amalgam_from_json(a);
  const json& chain = field(j, "certificate_chain", w);
  if (!chain.is_array()) throw ParseError("report file: certificate_chain must be an array");
  for (const json& s : chain)
    r.certificate_chain.push_back({text(field(s, "step", w), "step"), text(field(s, "identity", w), "identity"),
                                   number(field(s, "residual", w), "residual"), boolean(field(s, "ok", w), "ok")});
  r.infinite_volume_note = text(field(j, "infinite_volume", w), "infinite_volume");

  if (const std::string bad = r.report.consistency_violation(); !bad.empty())
    throw ConsistencyError("report file: " + bad);
  const auto expected = certificate_chain(r.report, r.provenance.subspace_tol);
  if (expected.size() != r.certificate_chain.size()) throw ConsistencyError("report file: certificate chain length mismatch");
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (expected[i].ok != r.certificate_chain[i].ok || expected[i].residual != r.certificate_chain[i].residual)
      throw ConsistencyError("report file: certificate step '" + expected[i].step + "' disagrees with the report");
  if (r.amalgam && r.amalgam->ok != r.amalgam->passes(r.provenance.amalgam_tol))
    throw ConsistencyError("report file: amalgam verdict disagrees with its residuals");
  return r;
}

std::string serialize_report(const ReportFile& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace fcs
