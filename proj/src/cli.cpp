#include "levilab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "levilab/curvature.hpp"
#include "levilab/errors.hpp"
#include "levilab/spec_io.hpp"
#include "levilab/wirtinger.hpp"

namespace levilab::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kIdentities = {"integral", "isoperimetric", "minkowski",
                                              "alexandrov", "dirichlet", "newton"};

double default_tolerance(const std::string& identity) {
  if (identity == "integral") return kIntegralTolerance;
  if (identity == "isoperimetric") return kIsoperimetricTolerance;
  if (identity == "minkowski") return kMinkowskiTolerance;
  if (identity == "alexandrov") return kAlexandrovTolerance;
  if (identity == "dirichlet") return kDirichletTolerance;
  return kNewtonTolerance;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--point: malformed number '" + item + "'");
    }
    if (used != item.size()) throw UsageError("--point: malformed number '" + item + "'");
    v.push_back(x);
  }
  return v;
}

unsigned threads_from_env() {
  const char* env = std::getenv("LEVILAB_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long t = std::strtol(env, &end, 10);
  if (*end != '\0' || t < 1 || t > 1024) throw UsageError(std::string("LEVILAB_THREADS: invalid value '") + env + "'");
  return unsigned(t);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  // Write-then-rename so readers never observe a partial report.
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ArgumentError("cannot write " + tmp.string());
    f << text;
    if (!f) throw ArgumentError("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

int run_curvature(const RunConfig& c, std::ostream& out) {
  const SurfaceSpec& s = *c.surface;
  const Point p(c.point);
  const BoundaryFrame fr = make_frame(s, p);
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["point"] = c.point;
  j["value"] = fr.jet.value;
  j["j"] = c.j;
  j["K"] = levi(fr, c.j);
  std::vector<double> all;
  for (int k = 1; k <= s.n(); ++k) all.push_back(levi(fr, k));
  j["K_all"] = all;
  j["H"] = mean_curvature(fr);
  j["pgrad_norm"] = fr.pgrad_norm;
  j["normal"] = std::vector<double>(fr.normal.data(), fr.normal.data() + fr.normal.size());
  j["config"] = c.to_json();
  write_output(c.out, dump(j), out);
  return kExitOk;
}

int run_identities(const RunConfig& c, std::ostream& out) {
  std::mt19937_64 rng(c.seed);
  bool all = true;
  std::ostringstream os;
  const int jlo = c.j_given ? c.j : 1, jhi = c.j_given ? c.j : c.n;
  for (int j = jlo; j <= jhi; ++j) {
    const wirtinger::IdentityCheck checks[] = {wirtinger::check_null_lagrangian(c.n, j, rng, c.degree),
                                               wirtinger::check_lemma_identity(c.n, j, rng, c.degree),
                                               wirtinger::check_euler_sigma(c.n, j, rng, c.degree)};
    for (const auto& chk : checks) {
      const bool ok = chk.passed();
      all = all && ok;
      os << (ok ? "PASS " : "FAIL ") << chk.name << " n=" << c.n << " j=" << j << " degree=" << c.degree
         << " residuals=" << chk.residuals.size() << " max_terms=" << chk.max_terms << "\n";
    }
  }
  os << (all ? "PASS" : "FAIL") << " all identities (exact rational arithmetic, seed " << c.seed << ")\n";
  write_output(c.out, os.str(), out);
  return all ? kExitOk : kExitViolated;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  const VerificationReport r = run_verification(c.identity, *c.surface, c.j, c.choice, c.quad, c.tol);
  nlohmann::ordered_json j = r.to_json();
  j["config"] = c.to_json();
  write_output(c.out, dump(j), out);
  return exit_code(r.verdict);
}

struct BatchRow {
  std::string id;
  std::string verdict;
  double lhs = 0.0, rhs = 0.0, rel_err = 0.0;
  std::string note;
  int code = kExitOk;
};

int run_batch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(c.batch_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && !name.empty() && name[0] != '.') files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  fs::create_directories(c.out_dir);

  RunConfig per = c;
  per.quad.threads = 1;
  std::vector<BatchRow> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BatchRow& row = rows[i];
      row.id = files[i].stem().string();
      try {
        const SurfaceSpec s = load_surface(files[i].string());
        const VerificationReport r = run_verification(c.identity, s, c.j, c.choice, per.quad, c.tol);
        nlohmann::ordered_json j = r.to_json();
        nlohmann::ordered_json cfg = per.to_json();
        cfg["surface_arg"] = files[i].filename().string();
        cfg["surface"] = surface_to_json(s);
        j["config"] = cfg;
        write_output((fs::path(c.out_dir) / (row.id + ".json")).string(), dump(j), out);
        row.verdict = to_string(r.verdict);
        row.lhs = r.lhs;
        row.rhs = r.rhs;
        row.rel_err = r.rel_err;
        row.code = exit_code(r.verdict);
        if (r.identity == Identity::Isoperimetric) row.note = "ratio=" + g17(r.lhs / r.rhs);
      } catch (const ParseError& e) {
        row.verdict = "Error";
        row.note = std::string("parse error: ") + e.what();
        row.code = kExitNumerical;
      } catch (const HypothesisError& e) {
        row.verdict = "HypothesesNotMet";
        row.note = e.what();
        row.code = kExitHypotheses;
      } catch (const std::exception& e) {
        row.verdict = "Error";
        row.note = e.what();
        row.code = kExitNumerical;
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(c.threads, unsigned(std::max<std::size_t>(1, files.size()))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "surface_id,identity,lhs,rhs,rel_err,verdict,note\n";
  bool violated = false, failed = false, hyp = false;
  for (const BatchRow& r : rows) {
    csv << csv_field(r.id) << ',' << c.identity << ',' << g17(r.lhs) << ',' << g17(r.rhs) << ','
        << g17(r.rel_err) << ',' << r.verdict << ',' << csv_field(r.note) << '\n';
    violated = violated || r.code == kExitViolated;
    failed = failed || r.code == kExitNumerical;
    hyp = hyp || r.code == kExitHypotheses;
  }
  write_output((fs::path(c.out_dir) / "summary.csv").string(), csv.str(), out);
  out << csv.str();
  for (const BatchRow& r : rows)
    if (r.code == kExitNumerical) err << "levilab: " << r.id << ": " << r.note << "\n";
  if (violated) return kExitViolated;
  if (failed) return kExitNumerical;
  if (hyp) return kExitHypotheses;
  return kExitOk;
}

}  // namespace

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Equal:
    case Verdict::InequalityHolds: return kExitOk;
    case Verdict::Violated: return kExitViolated;
    case Verdict::HypothesesNotMet: return kExitHypotheses;
  }
  return kExitNumerical;
}

VerificationReport run_verification(const std::string& identity, const SurfaceSpec& surface, int j,
                                    FunctionChoice choice, const QuadratureSpec& q, std::optional<double> tol) {
  const double t = tol.value_or(default_tolerance(identity));
  if (identity == "integral") return verify_integral_formula(surface, choice, j, q, t);
  if (identity == "isoperimetric") return isoperimetric_ratio(surface, j, q, t);
  if (identity == "minkowski") return minkowski_residual(surface, q, t);
  if (identity == "alexandrov") return alexandrov_check(surface, j, q, t);
  if (identity == "dirichlet") {
    if (const auto* e = std::get_if<EllipsoidFamily>(&surface.family())) return dirichlet_chain(e->axes, j, q, t);
    if (const auto* b = std::get_if<SphereFamily>(&surface.family()))
      return dirichlet_chain(std::vector<double>(std::size_t(surface.real_dim()), b->radius), j, q, t);
    throw ArgumentError("dirichlet chain needs an ellipsoid or sphere surface");
  }
  if (identity == "newton") return newton_sweep(surface, j, q, t);
  throw ArgumentError("unknown identity " + identity);
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  if (subcommand == "identities") {
    j["n"] = n;
    j["j"] = j_given ? nlohmann::ordered_json(this->j) : nlohmann::ordered_json("all");
    j["seed"] = seed;
    j["degree"] = degree;
    j["out"] = out;
    return j;
  }
  if (!identity.empty()) j["identity"] = identity;
  if (subcommand == "batch") {
    j["batch_dir"] = batch_dir;
    j["out_dir"] = out_dir;
  } else {
    j["surface_arg"] = surface_arg;
    if (surface) j["surface"] = surface_to_json(*surface);
  }
  if (subcommand == "curvature") j["point"] = point;
  j["j"] = this->j;
  if (subcommand != "curvature") {
    j["quadrature"] = quad.describe();
    j["function_choice"] = to_string(choice);
    j["tolerance"] = tol.value_or(default_tolerance(identity));
    if (identity == "alexandrov") j["constancy_tolerance"] = kConstancyTolerance;
  }
  j["threads"] = threads;
  j["out"] = out;
  return j;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"levilab: Levi curvatures of real hypersurfaces in C^{n+1}"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string quad_text, choice_text = "default", point_text;
  std::optional<double> tol;
  std::optional<unsigned> threads;
  int j = 1;

  auto* curv = app.add_subcommand("curvature", "Levi curvatures, mean curvature and normal at a boundary point");
  curv->add_option("--surface", c.surface_arg, "Surface spec: file path or family:key=value:...")->required();
  curv->add_option("--point", point_text, "Real coordinates x1,y1,...,x{n+1},y{n+1}")->required();
  curv->add_option("--j", j, "Curvature index, 1 <= j <= n (default 1)");
  curv->add_option("--out", c.out, "Output file or - for standard output");

  auto* ident = app.add_subcommand("identities", "Exact symbolic identity suite on generic polynomials");
  ident->add_option("--n", c.n, "Complex dimension minus one, 1 <= n <= 3")->required();
  ident->add_option("--j", j, "Restrict to one j (default: all 1..n)");
  ident->add_option("--seed", c.seed, "Seed for the random rational coefficients (default 1)");
  ident->add_option("--degree", c.degree, "Total degree of the generic polynomial (default 3)");
  ident->add_option("--out", c.out, "Output file or -");

  auto* ver = app.add_subcommand("verify", "Check one integral identity or inequality on a surface");
  ver->add_option("identity", c.identity, "integral | isoperimetric | minkowski | alexandrov | dirichlet | newton")
      ->required()
      ->check(CLI::IsMember(kIdentities));
  ver->add_option("--surface", c.surface_arg, "Surface spec: file path or family:key=value:...")->required();
  ver->add_option("--j", j, "Curvature index, 1 <= j <= n (default 1)");
  ver->add_option("--quad", quad_text, "gauss:order=<m>[,radial=<r>][,frame=auto|identity] | mc:samples=<N>,seed=<S>[,...]");
  ver->add_option("--choice", choice_text, "Defining function for integral: default | exp | dirichlet")
      ->check(CLI::IsMember({"default", "exp", "dirichlet"}));
  ver->add_option("--tol", tol, "Tolerance override");
  ver->add_option("--out", c.out, "Report file or - for standard output");
  ver->add_option("--threads", threads, "Quadrature workers (default LEVILAB_THREADS or 1)");

  auto* bat = app.add_subcommand("batch", "Run one verification over every surface-spec file in a directory");
  bat->add_option("dir", c.batch_dir, "Directory of surface-spec files, processed in filename order")
      ->required()
      ->check(CLI::ExistingDirectory);
  bat->add_option("--identity", c.identity, "Identity to verify")->required()->check(CLI::IsMember(kIdentities));
  bat->add_option("--j", j, "Curvature index (default 1)");
  bat->add_option("--quad", quad_text, "Quadrature spec (default per dimension)");
  bat->add_option("--choice", choice_text, "default | exp | dirichlet")
      ->check(CLI::IsMember({"default", "exp", "dirichlet"}));
  bat->add_option("--tol", tol, "Tolerance override");
  bat->add_option("--out-dir", c.out_dir, "Directory for reports and summary.csv");
  bat->add_option("--threads", threads, "Worker count (default LEVILAB_THREADS or 1)");

  app.footer(surface_format_help());

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::CallForAllHelp&) {
    c.help = app.help("", CLI::AppFormatMode::All);
    return c;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : {curv, ident, ver, bat})
    if (sub->parsed()) c.subcommand = sub->get_name();
  c.j = j;
  c.j_given = (curv->parsed() && curv->count("--j")) || (ident->parsed() && ident->count("--j")) ||
              (ver->parsed() && ver->count("--j")) || (bat->parsed() && bat->count("--j"));
  c.tol = tol;
  c.threads = threads ? *threads : threads_from_env();
  if (c.threads < 1) throw UsageError("--threads must be >= 1");
  if (tol && !(*tol >= 0.0)) throw UsageError("--tol must be nonnegative");
  if (choice_text == "exp") c.choice = FunctionChoice::exponential;
  if (choice_text == "dirichlet") c.choice = FunctionChoice::dirichlet;

  if (c.subcommand == "identities") {
    if (c.n < 1 || c.n > wirtinger::kMaxVars - 1)
      throw UsageError("--n: must satisfy 1 <= n <= " + std::to_string(wirtinger::kMaxVars - 1));
    if (c.j_given && (c.j < 1 || c.j > c.n)) throw UsageError("--j: j = " + std::to_string(c.j) + " exceeds n");
    if (c.degree < 2 || c.degree > 6) throw UsageError("--degree: must be in [2, 6]");
    return c;
  }

  if (c.subcommand != "batch") {
    try {
      c.surface = load_surface(c.surface_arg);
    } catch (const Error& e) {
      throw UsageError(std::string("--surface: ") + e.what());
    }
    if (c.j < 1 || c.j > c.surface->n())
      throw UsageError("--j: j = " + std::to_string(c.j) + " exceeds n = " + std::to_string(c.surface->n()) +
                       " (need 1 <= j <= n)");
  } else if (c.j < 1) {
    throw UsageError("--j: must be >= 1");
  }

  if (c.subcommand == "curvature") {
    c.point = parse_point(point_text);
    if (int(c.point.size()) != c.surface->real_dim())
      throw UsageError("--point: dimension mismatch, expected " + std::to_string(c.surface->real_dim()) +
                       " coordinates, got " + std::to_string(c.point.size()));
    return c;
  }

  const int n = c.surface ? c.surface->n() : 1;
  if (quad_text.empty()) {
    c.quad = default_quadrature(n);
  } else {
    try {
      c.quad = parse_quadrature(quad_text);
    } catch (const Error& e) {
      throw UsageError(std::string("--quad: ") + e.what());
    }
  }
  c.quad.threads = c.threads;

  if (c.subcommand == "verify") {
    const bool ellipsoid = std::holds_alternative<EllipsoidFamily>(c.surface->family());
    const bool sphere = std::holds_alternative<SphereFamily>(c.surface->family());
    if (c.choice == FunctionChoice::dirichlet && !ellipsoid)
      throw UsageError("--choice dirichlet: requires an ellipsoid surface");
    if (c.choice != FunctionChoice::family_default && c.identity != "integral")
      throw UsageError("--choice: only meaningful for verify integral");
    if (c.identity == "dirichlet") {
      if (!ellipsoid && !sphere) throw UsageError("verify dirichlet: requires an ellipsoid or sphere surface");
      for (double x : c.surface->center().coords())
        if (x != 0.0) throw UsageError("verify dirichlet: the ellipsoid must be centered at the origin");
    }
    if (c.identity != "newton" && !c.surface->star_shaped())
      throw UsageError("--surface: " + c.surface->family_name() + " is not star-shaped; quadrature needs a star center");
  }
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.help.empty()) {
    out << c.help;
    return kExitOk;
  }
  try {
    if (c.subcommand == "curvature") return run_curvature(c, out);
    if (c.subcommand == "identities") return run_identities(c, out);
    if (c.subcommand == "verify") return run_verify(c, out);
    return run_batch(c, out, err);
  } catch (const HypothesisError& e) {
    err << "levilab: hypotheses not met: " << e.what() << "\n";
    return kExitHypotheses;
  } catch (const UsageError& e) {
    err << "levilab: usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "levilab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig c;
  try {
    c = parse_args(args);
  } catch (const UsageError& e) {
    std::cerr << "levilab: usage: " << e.what() << "\nRun 'levilab --help' for the grammar.\n";
    return kExitUsage;
  }
  return run(c, std::cout, std::cerr);
}

}  // namespace levilab::cli
