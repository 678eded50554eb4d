#include "fcs/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcs/amalgam.hpp"
#include "fcs/errors.hpp"
#include "fcs/fixtures.hpp"
#include "fcs/io.hpp"

namespace fcs {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << bytes;
  if (!out) throw Error("write to '" + path + "' failed");
}

std::string format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string format_complex(cplx z) {
  if (std::abs(z.imag()) <= 1e-12) return format("%.6g", z.real() == 0 ? 0.0 : z.real());
  return format("%.6g", z.real()) + (z.imag() < 0 ? "-" : "+") + format("%.6g", std::abs(z.imag())) + "i";
}

std::string word_label(const Word& w) {
  if (w.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i] + 1);
  return s;
}

struct AnalyzeArgs {
  std::string input;
  std::string out_path;
  std::optional<double> tol;
  int cutoff = 4;
  std::optional<int> level;
  bool no_amalgam = false;
  bool timings = false;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

AmalgamSummary summarize(const BatteryResult& br, int level, double tol) {
  const AmalgamRep rep = build_amalgam(br.modular, level);
  const RelationReport rel = check_relations(rep);
  const ShiftReport sh = shift_unitary(rep);
  AmalgamSummary a;
  a.level = level;
  a.raw_dim = rep.raw_dim();
  a.quotient_dim = rep.dim();
  a.gram_min_eig = rep.gram_min_eig;
  a.gram_hermiticity = rep.gram_hermiticity;
  a.cuntz_isometry = rel.isometry;
  a.cuntz_sum = rel.cuntz_sum;
  a.tilde_isometry = rel.tilde_isometry;
  a.tilde_cuntz_sum = rel.tilde_cuntz_sum;
  a.commute = rel.commute;
  a.commute_star = rel.commute_star;
  a.compression = rel.compression;
  a.grading = rel.grading;
  a.boundary_cuntz_sum = rel.boundary_cuntz_sum;
  a.boundary_tilde_cuntz_sum = rel.boundary_tilde_cuntz_sum;
  a.moment_window = level - 1;
  a.moment_deviation = level > 1 ? moment_check(rep, br.analyzed, br.state, level - 1) : 0.0;
  a.shift_isometry = sh.isometry;
  a.shift_co_isometry = sh.co_isometry;
  a.shift_covariance = sh.covariance;
  a.shift_vacuum = sh.vacuum;
  a.lambda_monotone = true;
  for (Index c = 0; c < rep.interior.cols(); ++c) {
    const auto prof = lambda_profile(rep, rep.interior.col(c));
    for (int n = 1; n < rep.level; ++n)
      if (prof[std::size_t(n)] < prof[std::size_t(n - 1)] - tol) a.lambda_monotone = false;
  }
  a.ok = a.passes(tol);
  return a;
}

void print_summary(std::ostream& out, const SystemFile& sf, const ReportFile& rf) {
  const PurityReport& r = rf.report;
  out << "system: " << (sf.name.empty() ? rf.provenance.input_name : sf.name) << " (n=" << sf.sys.n()
      << ", d=" << sf.sys.d() << ")\n";
  out << "input sha256: " << rf.provenance.input_sha256 << "\n";
  std::string verdict = r.is_pure ? "PURE" : (r.dual_identity_ok.has_value() ? "NOT PURE" : "UNDECIDED");
  out << "verdict: " << verdict << " (" << r.purity_reason << ")\n";
  out << "certificate chain:\n";
  for (const auto& s : rf.certificate_chain) {
    char line[256];
    std::snprintf(line, sizeof line, "  [%s] %-18s %-58s residual %.3e\n", s.ok ? "ok  " : "FAIL", s.step.c_str(),
                  s.identity.c_str(), s.residual);
    out << line;
  }
  out << "factor: " << (r.is_factor ? "yes" : "no") << ", ergodic: " << (r.is_ergodic ? "yes" : "no")
      << ", invariant states: " << r.invariant_multiplicity << " (extremal " << r.extremal_count << ")\n";
  out << "dimensions: support " << r.dims.support_n << ", gns " << r.dims.gns << ", pi(M) " << r.dims.algebra
      << ", pi(M)' " << r.dims.commutant << ", Fix(tau) " << r.dims.fix_tau << ", Fix(tau~) " << r.dims.fix_dual << "\n";
  out << "channel spectrum:";
  for (std::size_t i = 0; i < r.channel_spectrum.size() && i < 8; ++i) out << " " << format_complex(r.channel_spectrum[i]);
  if (r.channel_spectrum.size() > 8) out << " ...";
  out << "\n";
  if (r.mixing_gap)
    out << "mixing gap: " << format("%.6g", *r.mixing_gap)
        << (r.strongly_mixing.value_or(false) ? " (strongly mixing)" : " (not strongly mixing)") << "\n";
  out << "gauge group: " << r.gauge_h.describe() << "\n";
  out << "amalgam: " << rf.amalgam_status;
  if (rf.amalgam) {
    const AmalgamSummary& a = *rf.amalgam;
    out << " (level " << a.level << ", dim " << a.quotient_dim << "/" << a.raw_dim << ", gram min eig "
        << format("%.3e", a.gram_min_eig) << ", moment deviation " << format("%.3e", a.moment_deviation)
        << ", shift covariance " << format("%.3e", a.shift_covariance) << ") " << (a.ok ? "ok" : "FAIL");
  }
  out << "\n";
  out << "note: " << rf.infinite_volume_note << "\n";
}

int analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  const auto t_start = Clock::now();
  const std::string bytes = read_file(args.input);
  const SystemFile sf = parse_system(bytes);
  const double tol = args.tol.value_or(sf.tol);
  if (!(tol > 0)) throw ParseError("--tol must be positive");
  if (args.cutoff < 0) throw ParseError("--cutoff must be nonnegative");
  const ValidationReport val = validate(sf.sys, tol);
  if (!val.ok) throw ValidationError("system fails validation: ||sum v v^* - I|| = " + format("%.3e", val.residual));

  ReportFile rf;
  rf.provenance.input_name = sf.name.empty() ? args.input : sf.name;
  rf.provenance.input_sha256 = sha256_hex(bytes);
  rf.provenance.tol = tol;
  rf.provenance.cutoff = args.cutoff;
  rf.provenance.versions = library_versions();

  BatteryOptions opts;
  opts.tol = tol;
  opts.cutoff = args.cutoff;
  if (sf.rho) opts.rho = DensityState{*sf.rho};
  auto t0 = Clock::now();
  const BatteryResult br = run_battery(sf.sys, opts);
  if (args.timings) rf.provenance.timings_ms.emplace_back("battery", ms_since(t0));
  rf.report = br.report;
  rf.certificate_chain = certificate_chain(rf.report, rf.provenance.subspace_tol);
  rf.infinite_volume_note = infinite_volume_note();

  bool amalgam_failed = false;
  if (args.no_amalgam) {
    rf.amalgam_status = "disabled";
  } else {
    const int level = args.level.value_or(default_level(br.analyzed.d(), br.modular.gns_dim()));
    if (level < 1) throw ParseError("--level must be at least 1");
    const std::size_t raw = raw_dimension(br.analyzed.d(), br.modular.gns_dim(), level);
    if (raw > AmalgamOptions{}.max_raw) {
      rf.amalgam_status = "skipped: raw dimension " + std::to_string(raw) + " exceeds the guard";
    } else {
      t0 = Clock::now();
      rf.amalgam = summarize(br, level, rf.provenance.amalgam_tol);
      if (args.timings) rf.provenance.timings_ms.emplace_back("amalgam", ms_since(t0));
      rf.amalgam_status = "built";
      amalgam_failed = !rf.amalgam->ok;
    }
  }
  if (args.timings) rf.provenance.timings_ms.emplace_back("total", ms_since(t_start));

  const std::string report = serialize_report(rf);
  report_from_json(nlohmann::json::parse(report));  // round-trip self-check
  if (!args.out_path.empty()) write_file(args.out_path, report);
  print_summary(out, sf, rf);
  if (amalgam_failed) {
    err << "error: amalgamated representation residuals exceed tolerance\n";
    return kExitConsistency;
  }
  return kExitOk;
}

int fixture(const std::string& name_arg, std::optional<unsigned long long> seed, const std::string& out_path,
            std::ostream& out) {
  std::string name = name_arg;
  if (seed) {
    if (name != "random-seeded") throw ParseError("--seed applies only to the random-seeded fixture");
    name += ":" + std::to_string(*seed);
  }
  Fixture fx;
  try {
    fx = make_fixture(name);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  const ValidationReport val = validate(fx.sys);
  if (!val.ok) throw ConsistencyError("fixture '" + name + "' fails validation");
  invariant_states(fx.sys);
  SystemFile sf;
  sf.sys = fx.sys;
  sf.name = fx.name;
  sf.description = fx.description;
  const std::string bytes = serialize_system(sf);
  if (out_path.empty())
    out << bytes;
  else
    write_file(out_path, bytes);
  return kExitOk;
}

int moments(const std::string& input, int max_len, const std::string& order_name, const std::string& out_path,
            std::ostream& out) {
  if (max_len < 0) throw ParseError("--max-len must be nonnegative");
  const WordOrder order = order_name == "reversed" ? WordOrder::Reversed : WordOrder::Forward;
  const SystemFile sf = parse_system(read_file(input));
  const ValidationReport val = validate(sf.sys, sf.tol);
  if (!val.ok) throw ValidationError("system fails validation: ||sum v v^* - I|| = " + format("%.3e", val.residual));
  CMatrix rho;
  if (sf.rho) {
    const double inv = invariance_residual(sf.sys, *sf.rho);
    if (inv > sf.tol) throw ValidationError("supplied state is not invariant: residual " + format("%.3e", inv));
    rho = *sf.rho;
  } else {
    rho = invariant_states(sf.sys, sf.tol).barycenter.rho;
  }
  std::ostringstream table;
  table << "# phi(v_I v_J^*), letters 1.." << sf.sys.d() << ", order "
        << (order == WordOrder::Forward ? "forward" : "reversed") << "\n";
  table << "# I J re im\n";
  const auto words = words_up_to(int(sf.sys.d()), max_len);
  char line[256];
  for (const auto& i : words)
    for (const auto& j : words) {
      cplx m = word_moment(sf.sys.v(), rho, i, j, order);
      const double re = std::abs(m.real()) < 1e-15 ? 0.0 : m.real();
      const double im = std::abs(m.imag()) < 1e-15 ? 0.0 : m.imag();
      std::snprintf(line, sizeof line, "%s %s %.15g %.15g\n", word_label(i).c_str(), word_label(j).c_str(), re, im);
      table << line;
    }
  if (out_path.empty())
    out << table.str();
  else
    write_file(out_path, table.str());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical lab for finitely correlated states: purity certificates via dual Popescu systems", "fcslab"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* an = app.add_subcommand("analyze", "Run the purity battery and the amalgamated representation checks");
  an->add_option("input", aa.input, "System file")->required();
  an->add_option("--out", aa.out_path, "Write the JSON report here");
  an->add_option("--tol", aa.tol, "Validation tolerance (default: the file's tol)");
  an->add_option("--cutoff", aa.cutoff, "Word-length cutoff for the gauge group");
  an->add_option("--level", aa.level, "Truncation level of the amalgamated representation");
  an->add_flag("--no-amalgam", aa.no_amalgam, "Skip the amalgamated representation");
  an->add_flag("--timings", aa.timings, "Record stage timings in the report (breaks byte-identity)");

  std::string fx_name, fx_out;
  std::optional<unsigned long long> fx_seed;
  auto* fx = app.add_subcommand("fixture", "Emit a built-in system file");
  fx->add_option("name", fx_name, "aklt | bernoulli-uniform | bernoulli-basis | nonergodic-z2 | two-block | random-seeded[:seed]")
      ->required();
  fx->add_option("--seed", fx_seed, "Seed for random-seeded");
  fx->add_option("--out", fx_out, "Write the system file here");

  std::string mo_input, mo_out, mo_order = "forward";
  int mo_len = 2;
  auto* mo = app.add_subcommand("moments", "Tabulate word moments phi(v_I v_J^*)");
  mo->add_option("input", mo_input, "System file")->required();
  mo->add_option("--max-len", mo_len, "Maximal word length");
  mo->add_option("--order", mo_order, "Word multiplication order")->check(CLI::IsMember({"forward", "reversed"}));
  mo->add_option("--out", mo_out, "Write the table here");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*an) return analyze(aa, out, err);
    if (*fx) return fixture(fx_name, fx_seed, fx_out, out);
    return moments(mo_input, mo_len, mo_order, mo_out, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal consistency error: " << e.what() << "\n";
    return kExitConsistency;
  }
}

}  // namespace fcs
