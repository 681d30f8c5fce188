// Command-line front end: fixture loading, subcommand dispatch, caching.
#pragma once

#include "kleincert/exceptionality.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <regex>

namespace kleincert {

inline constexpr std::uint64_t kDefaultSeed = 20240607;

enum class OutputFormat { json, text };

struct RunConfig {
  std::string subcommand;  // e.g. "verify exceptionality", "orbits list"
  std::string group = "j168";
  std::string fixture_path;
  OutputFormat format = OutputFormat::text;
  std::uint64_t seed = kDefaultSeed;
  std::string cache_dir;  // empty: no cache
  unsigned jobs = 1;
  // subcommand arguments
  std::optional<unsigned> degree;
  std::string curve, point;
};

/// Usage or input problem: exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline GroupFixture load_config_fixture(const RunConfig& cfg) {
  if (!cfg.fixture_path.empty()) return load_fixture(cfg.fixture_path);
  try {
    return fixture_by_id(cfg.group);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- invariant cache ----

inline std::filesystem::path cache_file(const RunConfig& cfg, const GroupFixture& fx) {
  return std::filesystem::path(cfg.cache_dir) / ("invariants-" + fixture_digest(fx) + ".json");
}

/// The four invariants, read from or written to the cache when one is set.
inline KleinInvariants cached_invariants(const RunConfig& cfg, const GroupFixture& fx) {
  if (cfg.cache_dir.empty()) return build_invariants();
  const auto path = cache_file(cfg, fx);
  if (std::ifstream in(path); in) {
    try {
      return invariants_from_json(json::parse(in));
    } catch (const std::exception&) {
      // unreadable entry: rebuild and overwrite
    }
  }
  KleinInvariants inv = build_invariants();
  std::error_code ec;
  std::filesystem::create_directories(cfg.cache_dir, ec);
  const auto tmp = path.string() + ".tmp";
  if (std::ofstream out(tmp); out) {
    out << invariants_to_json(inv).dump();
    out.close();
    std::filesystem::rename(tmp, path, ec);
  }
  return inv;
}

// ---- curve and point arguments ----

/// Sum of terms "[param*]m1*m2^k..." with params lambda, mu, nu and factors
/// f, Delta (or D), C, K, y1, y2, y3 or an integer.
inline PPoly parse_curve(const std::string& text, const KleinInvariants& inv) {
  const auto q = field_make(1);
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw UsageError("--curve: empty expression");
  PPoly total(param_zero(q));
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    const std::size_t end = std::min(s.find_first_of("+-", pos), s.size());
    const std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw UsageError("--curve: empty term in '" + text + "'");
    ParamPoly coeff = param_const(FieldElement(q, negative ? -1L : 1L));
    QPoly body = qconst(1);
    std::stringstream ts(term);
    std::string factor;
    while (std::getline(ts, factor, '*')) {
      static const std::regex re(R"(([A-Za-z]+[0-9]?|[0-9]+)(\^([0-9]+))?)");
      std::smatch m;
      if (!std::regex_match(factor, m, re)) throw UsageError("--curve: cannot parse factor '" + factor + "'");
      const std::string name = m[1];
      const unsigned k = m[3].matched ? static_cast<unsigned>(std::stoul(m[3])) : 1;
      if (name == "lambda" || name == "mu" || name == "nu") {
        const std::size_t i = name == "lambda" ? 0 : name == "mu" ? 1 : 2;
        coeff = coeff * param_var(i, q).pow(k);
      } else if (std::isdigit(static_cast<unsigned char>(name[0]))) {
        body = body * qconst(Rational(name)).pow(k);
      } else if (name == "f") {
        body = body * inv.f.pow(k);
      } else if (name == "Delta" || name == "D") {
        body = body * inv.delta.pow(k);
      } else if (name == "C") {
        body = body * inv.c.pow(k);
      } else if (name == "K") {
        body = body * inv.k.pow(k);
      } else if (name == "y1" || name == "y2" || name == "y3") {
        body = body * qvar(static_cast<std::size_t>(name[1] - '1')).pow(k);
      } else {
        throw UsageError("--curve: unknown symbol '" + name + "'");
      }
    }
    total += PPoly::constant(coeff) * curve_from(body);
    pos = end;
  }
  if (total.is_zero() || !total.is_homogeneous()) throw UsageError("--curve: expression is not a nonzero form");
  return total;
}

/// "a:b:c", each coordinate an integer, a fraction p/q, or [c*]zetaN[^k].
inline ProjPoint parse_point(const std::string& text) {
  static const std::regex re(R"(^(-?[0-9]+(/[0-9]+)?)?(\*?zeta([0-9]+)(\^([0-9]+))?)?$)");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("--point: expected three ':'-separated coordinates");
  struct Coord {
    Rational c;
    unsigned n = 1, k = 0;
  };
  std::vector<Coord> cs;
  unsigned conductor = 1;
  for (const auto& p : parts) {
    std::smatch m;
    if (p.empty() || !std::regex_match(p, m, re) || (!m[1].matched && !m[3].matched))
      throw UsageError("--point: cannot parse coordinate '" + p + "'");
    Coord c;
    c.c = m[1].matched ? parse_rational(m[1].str()) : Rational(1);
    if (m[3].matched) {
      c.n = static_cast<unsigned>(std::stoul(m[4]));
      c.k = m[6].matched ? static_cast<unsigned>(std::stoul(m[6])) : 1;
      if (c.n == 0) throw UsageError("--point: zeta0 is undefined");
    }
    conductor = std::lcm(conductor, c.n);
    cs.push_back(c);
  }
  const auto f = field_make(conductor);
  Vec3 v;
  for (std::size_t i = 0; i < 3; ++i) v[i] = root_of_unity(f, cs[i].n, cs[i].k) * cs[i].c;
  if (is_zero_vector(v)) throw UsageError("--point: the zero vector is not a point");
  return ProjPoint(v);
}

// ---- subcommands ----

inline void emit(const Certificate& c, const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == OutputFormat::json)
    out << to_json(c).dump(2) << "\n";
  else
    out << render_text(c);
}

inline int run_verify(const std::string& target, const RunConfig& cfg, std::ostream& out) {
  const GroupFixture fx = load_config_fixture(cfg);
  CaseOptions opt;
  opt.seed = cfg.seed;
  opt.jobs = cfg.jobs;
  opt.invariants = cached_invariants(cfg, fx);
  CaseAnalysis a(fx, klein_claims(fx.id), opt);
  static const std::map<std::string, std::vector<Section>> sections{
      {"group", {Section::group}},   {"invariants", {Section::invariants}},
      {"syzygy", {Section::syzygy}}, {"orbits", {Section::orbits}},
      {"curves", {Section::curves}}, {"exceptionality", all_sections()},
      {"all", all_sections()},       {"report", all_sections()}};
  Certificate c = a.certificate(sections.at(target));
  if (target == "all" || target == "report") {
    try {
      for (auto& o : remark_checks(a.invariants(), a.group())) c.obligations.push_back(std::move(o));
    } catch (const std::exception& e) {
      c.obligations.push_back(computed("remark.checks", "quotient-surface checks", {"Remark", "of weighted degree $42$"},
                                       [msg = std::string(e.what())]() -> Check { throw std::runtime_error(msg); }));
    }
  }
  emit(c, cfg, out);
  return c.verified() ? 0 : 1;
}

inline int run_orbits_list(const RunConfig& cfg, std::ostream& out) {
  const GroupFixture fx = load_config_fixture(cfg);
  const MatrixGroup g = build_group(fx).descended();
  const auto s = special_orbits(g, ExecutionContext(cfg.jobs));
  if (cfg.format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& o : s.orbits) arr.push_back(to_json(o));
    out << json{{"group", fx.id}, {"orbits", arr}, {"min_length", s.min_length()}}.dump(2) << "\n";
  } else {
    out << "group " << fx.id << ": " << s.orbits.size() << " special orbits\n";
    for (const auto& o : s.orbits) {
      const auto p = o.representative.descended(o.representative.minimal_conductor());
      out << "  length " << o.length() << ", stabilizer " << o.stabilizer_order << ", representative ("
          << coefficient_string(p[0]) << " : " << coefficient_string(p[1]) << " : " << coefficient_string(p[2]) << ")"
          << (o.generic_on_fixed_line ? ", generic point of a mirror line" : "") << "\n";
    }
  }
  return s.stabilizers_verified ? 0 : 1;
}

inline int run_invariants_dump(const RunConfig& cfg, std::ostream& out) {
  const GroupFixture fx = load_config_fixture(cfg);
  const KleinInvariants inv = cached_invariants(cfg, fx);
  if (!cfg.degree) {
    if (cfg.format == OutputFormat::json) {
      out << invariants_to_json(inv).dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < 4; ++i)
        out << kInvariantNames[i] << " (degree " << kInvariantDegrees[i] << ", " << inv[i].size() << " terms)\n";
    }
    return 0;
  }
  const MatrixGroup g = build_group(fx).descended();
  const auto chi = trivial_character(g);
  const unsigned d = *cfg.degree;
  const auto mol = molien_series(g, chi, d, ExecutionContext(cfg.jobs));
  const auto sp = semiinvariant_space(g, d, chi);
  if (cfg.format == OutputFormat::json) {
    json basis = json::array();
    for (const auto& b : sp.basis) basis.push_back(to_json(b));
    out << json{{"group", fx.id}, {"degree", d}, {"molien", to_json(mol[d])}, {"dimension", sp.basis.size()},
                {"basis", basis}}
               .dump(2)
        << "\n";
  } else {
    out << "degree " << d << ": dimension " << sp.basis.size() << ", Molien coefficient " << to_string(mol[d]) << "\n";
    for (const auto& b : sp.basis) out << "  " << b.size() << "-term invariant, leading exponent (" << b.leading().first[0]
                                       << ", " << b.leading().first[1] << ", " << b.leading().first[2] << ")\n";
  }
  return sp.consistent() ? 0 : 1;
}

inline int run_curves_analyze(const RunConfig& cfg, std::ostream& out) {
  if (cfg.curve.empty() || cfg.point.empty()) throw UsageError("curves analyze needs --curve and --point");
  const KleinInvariants inv = build_invariants();
  const PPoly p = parse_curve(cfg.curve, inv);
  const ProjPoint q = parse_point(cfg.point);
  if (!evaluate_at(p, q.descended(q.minimal_conductor())).is_zero()) throw UsageError("--point is not on the curve");
  const LocalData d = analyze_point(p, q.descended(q.minimal_conductor()));
  if (cfg.format == OutputFormat::json) {
    out << to_json(d).dump(2) << "\n";
  } else {
    out << "multiplicity " << d.multiplicity;
    if (d.double_point_type) out << ", " << to_string(*d.double_point_type);
    out << "\n";
    for (const auto& a : d.assumptions.list()) out << "  assuming " << a << "\n";
  }
  return 0;
}

inline int run_config(const RunConfig& cfg, std::ostream& out) {
  const auto& s = cfg.subcommand;
  if (s.rfind("verify ", 0) == 0) return run_verify(s.substr(7), cfg, out);
  if (s == "report") return run_verify("report", cfg, out);
  if (s == "orbits list") return run_orbits_list(cfg, out);
  if (s == "invariants dump") return run_invariants_dump(cfg, out);
  if (s == "curves analyze") return run_curves_analyze(cfg, out);
  throw UsageError("unknown subcommand '" + s + "'");
}

/// Parses argv and runs; 0 verified, 1 an obligation failed, 2 usage or input error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  if (const char* env = std::getenv("CACHE_DIR")) cfg.cache_dir = env;
  CLI::App app{"exact verifier for the Klein group case analysis", "kleincert"};
  app.require_subcommand(1);
  std::string format = "text";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", cfg.group, "group id")->check(CLI::IsMember({"j168", "j504"}));
    sub->add_option("--fixture", cfg.fixture_path, "group fixture JSON file");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--seed", cfg.seed, "seed for coordinate changes and spot checks");
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", cfg.cache_dir, "invariant cache directory (env CACHE_DIR)");
  };
  std::string target;
  auto* verify = app.add_subcommand("verify", "check obligations");
  verify->add_option("target", target, "what to verify")
      ->required()
      ->check(CLI::IsMember({"all", "group", "invariants", "syzygy", "orbits", "curves", "exceptionality"}));
  common(verify);
  auto* orbits = app.add_subcommand("orbits", "orbit tools");
  orbits->require_subcommand(1);
  auto* orbits_list = orbits->add_subcommand("list", "list the special orbits");
  common(orbits_list);
  auto* invariants = app.add_subcommand("invariants", "invariant tools");
  invariants->require_subcommand(1);
  auto* dump = invariants->add_subcommand("dump", "print invariants or an invariant space");
  common(dump);
  dump->add_option("--degree", cfg.degree, "degree of the invariant space")->check(CLI::Range(1u, 60u));
  auto* curves = app.add_subcommand("curves", "curve tools");
  curves->require_subcommand(1);
  auto* analyze = curves->add_subcommand("analyze", "local data of a curve at a point");
  common(analyze);
  analyze->add_option("--curve", cfg.curve, "e.g. 'lambda*f^3 + mu*Delta^2'")->required();
  analyze->add_option("--point", cfg.point, "e.g. '1:zeta3^2:zeta3'")->required();
  auto* report = app.add_subcommand("report", "full certificate with the quotient-surface checks");
  common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::text;
  if (*verify) cfg.subcommand = "verify " + target;
  else if (*report) cfg.subcommand = "report";
  else if (*orbits_list) cfg.subcommand = "orbits list";
  else if (*dump) cfg.subcommand = "invariants dump";
  else if (*analyze) cfg.subcommand = "curves analyze";

  try {
    return run_config(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kleincert
