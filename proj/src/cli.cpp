#include "fermicert/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "fermicert/certify.hpp"
#include "fermicert/floquet.hpp"
#include "fermicert/homotopy.hpp"
#include "fermicert/isosys.hpp"
#include "fermicert/lpoly.hpp"
#include "fermicert/version.hpp"

namespace fermicert {

namespace fs = std::filesystem;

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["q1"] = q1;
  j["q2"] = q2;
  j["lambda0"] = lambda0;
  j["slice"] = slice;
  j["precision_bits"] = precision_bits;
  j["seed"] = seed;
  j["budget"] = budget;
  j["tol"] = tol;
  j["threads"] = threads;
  j["out"] = out_dir;
  j["format"] = format;
  j["allow_non_coprime"] = allow_non_coprime;
  j["system"] = system_file;
  j["input"] = input_file;
  return j;
}

std::pair<int, int> parse_site_label_text(const std::string& text) {
  if (text.empty() || (text[0] != 'v' && text[0] != 'V'))
    throw std::invalid_argument("site label must start with 'v': '" + text + "'");
  std::vector<std::string> runs;
  for (std::size_t p = 1; p < text.size();) {
    if (std::isdigit(static_cast<unsigned char>(text[p]))) {
      std::size_t q = p;
      while (q < text.size() && std::isdigit(static_cast<unsigned char>(text[q]))) ++q;
      runs.push_back(text.substr(p, q - p));
      p = q;
    } else {
      ++p;
    }
  }
  if (runs.size() == 2) return {std::stoi(runs[0]), std::stoi(runs[1])};
  if (runs.size() == 1 && runs[0].size() == 2)
    return {runs[0][0] - '0', runs[0][1] - '0'};
  throw std::invalid_argument("cannot parse site label '" + text +
                              "' (use vIJ, v_(I,J) or v[I,J])");
}

namespace {

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

std::string config_header(const RunConfig& cfg) {
  return std::string(kVersion) + "\nconfig: " + cfg.to_json().dump();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw CliError(2, "cannot write " + path);
  out << content;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw CliError(2, "cannot write " + path);
  out << j.dump(2) << "\n";
}

nlohmann::ordered_json stamp(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["config"] = cfg.to_json();
  return j;
}

Lattice2 make_lattice(const RunConfig& cfg) {
  if (!cfg.allow_non_coprime && std::gcd(cfg.q1, cfg.q2) != 1)
    throw CliError(2, "periods must be coprime (use --allow-non-coprime)");
  try {
    return Lattice2(cfg.q1, cfg.q2, cfg.allow_non_coprime);
  } catch (const std::exception& e) {
    throw CliError(2, e.what());
  }
}

/// var index + value from "v11=61/17" style text.
std::pair<int, Rational> parse_slice(const RunConfig& cfg, const Lattice2& lat) {
  auto eq = cfg.slice.find('=');
  if (eq == std::string::npos)
    throw CliError(2, "slice must look like v11=61/17, got '" + cfg.slice + "'");
  auto [i, j] = parse_site_label_text(cfg.slice.substr(0, eq));
  int var;
  try {
    var = lat.site_index(i, j);
  } catch (const std::out_of_range&) {
    throw CliError(2, "slice site (" + std::to_string(i) + "," + std::to_string(j) +
                          ") is outside the " + std::to_string(lat.q1) + "x" +
                          std::to_string(lat.q2) + " domain");
  }
  return {var, parse_rational(cfg.slice.substr(eq + 1))};
}

/// Candidate values in canonical order from a PotentialGrid file (.json
/// object / .csv) or a raw vector (.json array / whitespace text).
std::vector<double> load_candidate(const std::string& path, const Lattice2& lat) {
  auto check_count = [&](std::size_t got) {
    if (static_cast<int>(got) != lat.sites())
      throw CliError(2, "parse error in " + path + ": expected " +
                            std::to_string(lat.sites()) + " values, got " +
                            std::to_string(got));
  };
  auto ends_with = [&](const char* suf) {
    std::string s(suf);
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".csv")) {
    PotentialGrid g = load_potential_csv(path);
    if (g.lattice.q1 != lat.q1 || g.lattice.q2 != lat.q2)
      throw CliError(2, "parse error in " + path + ": grid is " +
                            std::to_string(g.lattice.q1) + "x" +
                            std::to_string(g.lattice.q2) + ", expected " +
                            std::to_string(lat.q1) + "x" + std::to_string(lat.q2));
    return g.values;
  }
  if (ends_with(".json")) {
    std::ifstream in(path);
    if (!in) throw CliError(2, "cannot open " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw CliError(2, "parse error in " + path + ": " + e.what());
    }
    if (j.is_array()) {
      auto vals = j.get<std::vector<double>>();
      check_count(vals.size());
      return vals;
    }
    PotentialGrid g = load_potential_json(path);
    check_count(g.values.size());
    return g.values;
  }
  // plain text: whitespace- or comma-separated numbers
  std::ifstream in(path);
  if (!in) throw CliError(2, "cannot open " + path);
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t pos = 0;
        double d = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        vals.push_back(d);
      } catch (const std::exception&) {
        throw CliError(2, "parse error in " + path + " line " +
                              std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
  }
  check_count(vals.size());
  return vals;
}

int cmd_generate(const RunConfig& cfg) {
  Lattice2 lat = make_lattice(cfg);
  PolynomialSystem sys = generate_system(lat, parse_rational(cfg.lambda0));

  fs::create_directories(cfg.out_dir);
  const std::string header = config_header(cfg);
  export_system(sys, Dialect::A, cfg.out_dir + "/system_a.txt", header);
  export_system(sys, Dialect::B, cfg.out_dir + "/system_b.txt", header);

  std::vector<int> degs = sys.degrees();
  std::sort(degs.begin(), degs.end());
  BigInt bezout = 1;
  for (int d : degs) bezout *= d;
  nlohmann::ordered_json summary = stamp(cfg);
  summary["polynomials"] = sys.polynomials.size();
  summary["z_monomials"] = sys.z_monomial_count;
  summary["degree_multiset"] = degs;
  if (!cfg.slice.empty()) {
    auto [var, val] = parse_slice(cfg, lat);
    SquareSystem sq = slice(sys, var, val);
    bezout = bezout_bound(sq);
    summary["slice_var"] = var;
    summary["slice_value"] = rational_to_string(val);
  }
  summary["bezout_bound"] = bezout.get_str();
  write_json(cfg.out_dir + "/generate_summary.json", summary);

  if (cfg.format == "json") {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << sys.polynomials.size() << " polynomials from " << sys.z_monomial_count
              << " z-monomial coefficients\n";
    std::cout << "degree multiset: {";
    for (std::size_t i = 0; i < degs.size(); ++i)
      std::cout << (i ? "," : "") << degs[i];
    std::cout << "}\n";
    std::cout << "Bezout bound: " << bezout.get_str() << "\n";
    std::cout << "wrote " << cfg.out_dir << "/system_a.txt, " << cfg.out_dir
              << "/system_b.txt\n";
  }
  return 0;
}

int cmd_certify(const RunConfig& cfg) {
  if (cfg.input_file.empty()) throw CliError(2, "certify needs a candidate file");
  if (cfg.slice.empty())
    throw CliError(2, "certify needs --slice to make the system square");
  Lattice2 lat = make_lattice(cfg);
  std::vector<double> vals = load_candidate(cfg.input_file, lat);

  PolynomialSystem sys = generate_system(lat, parse_rational(cfg.lambda0));
  auto [var, val] = parse_slice(cfg, lat);
  SquareSystem sq = slice(sys, var, val);

  std::vector<std::complex<double>> x;
  x.reserve(vals.size());
  for (double d : vals) x.emplace_back(d, 0.0);

  CertifyConfig cc;
  cc.require_real = true;
  cc.precision_bits = cfg.precision_bits;
  Certificate cert = certify_root(sq, x, cc);

  fs::create_directories(cfg.out_dir);
  write_file(cfg.out_dir + "/certificate.txt",
             "# " + std::string(kVersion) + "\n# config: " + cfg.to_json().dump() +
                 "\n" + certificate_text(cert));
  nlohmann::ordered_json cj = stamp(cfg);
  cj["certificate"] = certificate_json(cert);
  write_json(cfg.out_dir + "/certificate.json", cj);

  if (cfg.format == "json") {
    std::cout << cj.dump(2) << "\n";
  } else {
    std::cout << certificate_text(cert);
    std::cout << (cert.real_certified ? "1 certified real solution"
                                      : "0 certified real solutions")
              << "\n";
  }
  return cert.real_certified ? 0 : 1;
}

int cmd_search(const RunConfig& cfg) {
  SquareSystem sq;
  if (!cfg.system_file.empty()) {
    ImportedSystem imp;
    try {
      imp = import_system(cfg.system_file);
    } catch (const std::exception& e) {
      throw CliError(2, e.what());
    }
    try {
      sq = SquareSystem::from_polynomials(imp.n_vars, imp.polynomials);
    } catch (const std::exception& e) {
      throw CliError(2, std::string("--system file: ") + e.what());
    }
  } else {
    if (cfg.slice.empty())
      throw CliError(2, "search needs --slice (or --system FILE)");
    Lattice2 lat = make_lattice(cfg);
    PolynomialSystem sys = generate_system(lat, parse_rational(cfg.lambda0));
    auto [var, val] = parse_slice(cfg, lat);
    sq = slice(sys, var, val);
  }

  fs::create_directories(cfg.out_dir);
  IteratorOptions iopts;
  iopts.checkpoint_path = cfg.out_dir + "/search_checkpoint.json";
  iopts.log = &std::cout;
  iopts.threads = cfg.threads;

  RootIterator it(sq, cfg.seed, iopts);
  const CompiledSystem cs = CompiledSystem::compile(sq);
  CertifyConfig cc;
  cc.require_real = true;
  cc.precision_bits = cfg.precision_bits;

  const std::uint64_t chunk =
      cfg.threads > 1 ? static_cast<std::uint64_t>(4 * cfg.threads) : 1;
  std::uint64_t used = 0;
  while (used < cfg.budget && !it.exhausted()) {
    auto batch = it.next_batch(std::min<std::uint64_t>(chunk, cfg.budget - used));
    used += batch.size();
    for (const auto& r : batch) {
      if (!r.real_flag) continue;
      Certificate cert = certify_root(cs, r.endpoint, cc);
      if (!(cert.certified && cert.real_certified)) continue;

      std::cout << "certified real solution on path " << r.path_index.get_str()
                << "\n";
      nlohmann::ordered_json sol = stamp(cfg);
      sol["path_index"] = r.path_index.get_str();
      auto ep = nlohmann::ordered_json::array();
      for (auto c : r.endpoint) ep.push_back({c.real(), c.imag()});
      sol["endpoint"] = std::move(ep);
      sol["certificate"] = certificate_json(cert);
      write_json(cfg.out_dir + "/solution.json", sol);
      it.save_checkpoint();
      return 0;
    }
  }
  it.save_checkpoint();
  if (it.exhausted()) {
    std::cout << "no certified real solution among all " << it.paths_tracked()
              << " paths\n";
    return 1;
  }
  std::cout << "budget exhausted, checkpoint saved\n";
  return 3;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.input_file.empty()) throw CliError(2, "verify needs a potential file");
  Lattice2 lat = make_lattice(cfg);
  std::vector<double> vals = load_candidate(cfg.input_file, lat);
  PotentialGrid grid{lat, std::move(vals)};

  ResidualReport rep = residual_report(grid, parse_rational(cfg.lambda0),
                                       /*samples=*/8, cfg.seed);
  fs::create_directories(cfg.out_dir);
  nlohmann::ordered_json j = stamp(cfg);
  j["residuals"] = rep.to_json();
  write_json(cfg.out_dir + "/residuals.json", j);

  const bool pass = rep.max_coeff_residual <= cfg.tol &&
                    rep.max_torus_residual <= cfg.tol && std::abs(rep.mean) <= cfg.tol;
  if (cfg.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "max coefficient residual: %.6e\nmax torus residual:       %.6e\n"
                  "mean(V):                  %.6e\n",
                  rep.max_coeff_residual, rep.max_torus_residual, rep.mean);
    std::cout << buf << (pass ? "within" : "exceeds") << " tolerance "
              << cfg.tol << "\n";
  }
  return pass ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Floquet determinant isospectrality tools: generate the "
               "coefficient system, search for real solutions, certify them"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "read option defaults from a config file");

  app.add_option("--q1", cfg.q1, "first period")->capture_default_str();
  app.add_option("--q2", cfg.q2, "second period")->capture_default_str();
  app.add_option("--lambda0", cfg.lambda0, "energy level, exact rational p/q")
      ->capture_default_str();
  app.add_option("--slice", cfg.slice, "pin one site, e.g. v11=61/17");
  app.add_option("--precision-bits", cfg.precision_bits,
                 "working precision for refinement")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--budget", cfg.budget, "max paths to track")->capture_default_str();
  app.add_option("--tol", cfg.tol, "residual tolerance for verify")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "path-tracking worker threads")
      ->envname("FERMI_CERT_THREADS")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", cfg.format, "stdout format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_flag("--allow-non-coprime", cfg.allow_non_coprime,
               "accept lattices with gcd(q1,q2) > 1");
  app.add_option("--system", cfg.system_file,
                 "search an explicit system file instead of the lattice system");

  auto* gen = app.add_subcommand("generate", "build and export the coefficient system");
  auto* cer = app.add_subcommand("certify", "certify a candidate potential");
  cer->add_option("file", cfg.input_file, "candidate values");
  auto* sea = app.add_subcommand("search", "homotopy search for a certified real solution");
  auto* ver = app.add_subcommand("verify", "residual report for a potential");
  ver->add_option("file", cfg.input_file, "potential values");
  for (auto* sub : {gen, cer, sea, ver}) sub->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(cfg);
    if (cer->parsed()) return cmd_certify(cfg);
    if (sea->parsed()) return cmd_search(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    std::cerr << app.help();
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fermicert
