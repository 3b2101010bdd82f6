#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "condlab/conditionality.hpp"
#include "condlab/errors.hpp"
#include "condlab/greedy.hpp"
#include "condlab/interpolation.hpp"
#include "condlab/spaces.hpp"

namespace condlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json scalar_json(const Scalar& s) {
  json j;
  j["decimal"] = s.decimal();
  if (s.is_exact()) j["exact"] = s.exact_text();
  else j["exact"] = nullptr;
  return j;
}

json flagged_json(const Scalar& s, Certification c) {
  json j = scalar_json(s);
  j["flag"] = to_string(c);
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

OperatorNormOptions norm_options(const AnalysisOptions& o, Mode mode) {
  OperatorNormOptions n;
  n.mode = mode;
  n.budget = o.budget;
  n.seed = o.seed;
  n.samples = o.samples;
  n.workers = o.workers;
  return n;
}

/// Runs f in the requested mode. An exact request that the norm or the
/// budget cannot honour is retried heuristically and noted.
template <class F>
auto with_fallback(const AnalysisOptions& o, const std::string& what, json& notes, F&& f) {
  if (o.mode == Mode::Exact) {
    try {
      return f(Mode::Exact);
    } catch (const NotSupported& e) {
      notes.push_back(what + ": " + e.what() + "; heuristic estimate reported");
    } catch (const BudgetExceeded& e) {
      notes.push_back(what + ": " + e.what() + "; heuristic estimate reported");
    }
    return f(Mode::Heuristic);
  }
  return f(o.mode);
}

json fit_json(const std::vector<ConstantValue>& table, std::size_t lo, std::size_t hi) {
  json fits = json::array();
  for (auto model : {GrowthModel::Power, GrowthModel::PolyLog, GrowthModel::Log}) {
    json j;
    j["model"] = to_string(model);
    try {
      const GrowthFit g = growth_fit(table, model, lo, hi);
      j["a"] = g.a;
      j["alpha"] = g.alpha;
      j["r2"] = g.r2;
      j["m_lo"] = g.m_lo;
      j["m_hi"] = g.m_hi;
      j["points"] = g.points;
    } catch (const InvalidArgument& e) {
      j["error"] = e.what();
    }
    fits.push_back(j);
  }
  return fits;
}

std::string witness_name(const std::string& id, const std::string& q, std::size_t m) {
  return "witnesses/" + id + "_" + q + "_" + std::to_string(m) + ".json";
}

}  // namespace

int analyze(const Basis& b, const std::string& basis_id, const AnalysisOptions& options,
            std::ostream& log) {
  const std::size_t n = b.dim();
  const std::size_t m_max = options.m_max == 0 ? n : std::min(options.m_max, n);
  const fs::path out(options.out_dir);
  fs::create_directories(out / "witnesses");

  json notes = json::array();
  json summary;
  summary["basis_id"] = basis_id;
  summary["dim"] = n;
  summary["space"] = to_json(b.space());
  summary["mode"] = to_string(options.mode);
  summary["budget"] = options.budget;
  summary["seed"] = options.seed;
  summary["samples"] = options.samples;
  summary["m_max"] = m_max;

  log << "analyzing " << basis_id << " (dim " << n << ", " << b.space().describe() << ")\n";

  // Basis report; each part may downgrade on its own.
  {
    json r;
    const auto bc = with_fallback(options, "basis constant", notes, [&](Mode m) {
      return basis_constant(b, norm_options(options, m));
    });
    r["basis_constant"] = flagged_json(bc.value, bc.flag);
    const auto sn = with_fallback(options, "seminormalization", notes, [&](Mode m) {
      return seminorm_bounds(b, norm_options(options, m));
    });
    r["seminorm"]["lower"] = scalar_json(sn.lower);
    r["seminorm"]["upper"] = scalar_json(sn.upper);
    r["seminorm"]["dual_upper"] = flagged_json(sn.dual_upper, sn.dual_flag);
    const Scalar tp = type_p_constant(b);
    r["type_p"] = flagged_json(tp, tp.is_exact() ? Certification::CertifiedExact
                                                 : Certification::HeuristicLowerBound);
    const auto tps = with_fallback(options, "type P*", notes, [&](Mode m) {
      return type_p_star_constant(b, norm_options(options, m));
    });
    r["type_p_star"] = flagged_json(tps.value, tps.flag);
    summary["basis_report"] = r;
  }
  log << "  basis report done\n";

  ConditionalityOptions copt;
  copt.mode = options.mode;
  copt.budget = options.budget;
  copt.seed = options.seed;
  copt.workers = options.workers;
  copt.samples = options.samples;
  const auto k = k_table(b, m_max, copt);
  log << "  k table done\n";
  const auto l = L_table(b, m_max, copt, &k);
  log << "  L table done\n";

  std::vector<ReportRow> rows;
  bool any_exact = false;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const auto& kv = k[m - 1];
    const auto& lv = l[m - 1];
    any_exact = any_exact || kv.flag == Certification::CertifiedExact;
    if (kv.flag != Certification::CertifiedExact && options.mode == Mode::Exact)
      notes.push_back("k_" + std::to_string(m) + ": enumeration over budget; " + to_string(kv.flag));
    const std::string kf = witness_name(basis_id, "k", m), lf = witness_name(basis_id, "L", m);
    write_text(out / kf, witness_to_text(kv.witness));
    write_text(out / lf, witness_to_text(lv.witness));
    rows.push_back({basis_id, m, Quantity::K, kv.value, kv.flag, kf});
    rows.push_back({basis_id, m, Quantity::L, lv.value, lv.flag, lf});
  }

  // Quasi-greedy constant: the region search when small and polyhedral.
  QuasiGreedyOptions qopt;
  qopt.budget = options.budget;
  qopt.seed = options.seed;
  qopt.workers = options.workers;
  qopt.samples = options.samples;
  qopt.mode = Mode::Heuristic;
  std::optional<QuasiGreedyEstimate> gamma;
  if (options.mode == Mode::Exact && n <= qopt.exact_limit) {
    qopt.mode = Mode::Exact;
    try {
      gamma = quasi_greedy_estimate(b, qopt);
    } catch (const NotSupported& e) {
      notes.push_back(std::string("Gamma: ") + e.what() + "; sampled estimate reported");
    } catch (const BudgetExceeded& e) {
      notes.push_back(std::string("Gamma: ") + e.what() + "; sampled estimate reported");
    }
    qopt.mode = Mode::Heuristic;
  }
  if (!gamma) gamma = quasi_greedy_estimate(b, qopt);
  {
    const std::string gf = "witnesses/" + basis_id + "_Gamma.json";
    write_text(out / gf, witness_to_text(gamma->witness));
    rows.push_back({basis_id, n, Quantity::Gamma, gamma->value, gamma->flag, gf});
    json g = flagged_json(gamma->value, gamma->flag);
    g["mode"] = to_string(gamma->mode);
    g["greedy_step"] = gamma->witness.m;
    g["witness_file"] = gf;
    if (gamma->certified_sup) g["region_supremum"] = scalar_json(*gamma->certified_sup);
    summary["gamma"] = g;
  }

  write_text(out / "report.csv", report_csv(rows));

  // Fits use m from 2 up to the point where the finite table saturates.
  const std::size_t sat = std::max<std::size_t>(saturation_point(k), 2);
  json fits;
  fits["window"] = {{"m_lo", 2}, {"m_hi", sat}};
  fits["k"] = fit_json(k, 2, sat);
  fits["L"] = fit_json(l, 2, std::max<std::size_t>(saturation_point(l), 2));
  summary["fits"] = fits;
  summary["notes"] = notes;
  write_text(out / "summary.json", summary.dump(2) + "\n");

  log << "wrote " << (out / "report.csv").string() << "\n";
  if (options.mode == Mode::Exact && !any_exact) {
    log << "budget exhausted: no k_m value could be certified\n";
    return kBudgetExhausted;
  }
  return kSuccess;
}

namespace {

struct Common {
  std::optional<std::string> mode;  ///< default exact
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::optional<std::size_t> samples;  ///< default 64
  std::size_t m_max = 0;
  std::string out = ".";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--mode", c.mode, "exact|witness|heuristic (default exact)");
  app->add_option("--budget", c.budget, "Elementary-update budget for exact enumeration")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "Seed for sampled searches")->capture_default_str();
  app->add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  app->add_option("--samples", c.samples, "Samples per randomized estimate (default 64)");
  app->add_option("--m-max", c.m_max, "Largest m (default: the dimension)");
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

AnalysisOptions to_options(const Common& c) {
  AnalysisOptions o;
  o.mode = parse_mode(c.mode.value_or("exact"));
  o.budget = c.budget;
  o.seed = c.seed;
  o.workers = c.workers;
  o.samples = c.samples.value_or(o.samples);
  o.m_max = c.m_max;
  o.out_dir = c.out;
  return o;
}

/// Comma-separated rationals.
RationalVector parse_vector(const std::string& text) {
  RationalVector v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(parse_rational(cell));
  if (v.empty()) throw ParseError("empty vector");
  return v;
}

NormSpec leaf(const std::string& name, std::size_t dim) {
  if (name == "v1") return NormSpec::v1(dim);
  if (name == "sup") return NormSpec::sup(dim);
  if (name == "l1") return NormSpec::lp(1, dim);
  throw InvalidArgument("unknown polyhedral space '" + name + "' (use v1, sup or l1)");
}

json paper_row(const std::string& id, const WitnessCertificate& w, const Rational& paper_bound,
               const std::string& file) {
  json j;
  j["basis_id"] = id;
  j["m"] = w.m;
  j["bound"] = scalar_json(w.bound);
  j["paper_bound"] = scalar_json(Scalar(paper_bound));
  j["meets_paper_bound"] = w.bound >= Scalar(paper_bound);
  j["witness_file"] = file;
  return j;
}

std::string paper_csv(const json& rows) {
  std::string out = "basis_id,m,quantity,value,value_exact,flag,witness_file,paper_bound,paper_bound_exact\n";
  for (const auto& r : rows) {
    out += r["basis_id"].get<std::string>() + "," + std::to_string(r["m"].get<std::size_t>()) +
           ",L," + r["bound"]["decimal"].get<std::string>() + "," +
           (r["bound"]["exact"].is_null() ? "" : r["bound"]["exact"].get<std::string>()) + "," +
           to_string(Certification::WitnessLowerBound) + "," + r["witness_file"].get<std::string>() +
           "," + r["paper_bound"]["decimal"].get<std::string>() + "," +
           r["paper_bound"]["exact"].get<std::string>() + "\n";
  }
  return out;
}

/// Adds the paper witness table to summary.json and writes
/// paper_witnesses.csv next to it.
void attach_paper_witnesses(const fs::path& out, const json& rows) {
  write_text(out / "paper_witnesses.csv", paper_csv(rows));
  std::ifstream in(out / "summary.json");
  json summary = json::parse(in);
  summary["paper_witnesses"] = rows;
  write_text(out / "summary.json", summary.dump(2) + "\n");
}

int scenario(const std::string& name, const Common& c, std::size_t dim, unsigned blocks,
             const std::string& theta, const std::string& q, std::ostream& log) {
  static const std::vector<std::string> kNames{"summing-c0", "diamond-c0-l1", "block-c0", "pisier-xu",
                                                "unconditional-l2"};
  if (std::find(kNames.begin(), kNames.end(), name) == kNames.end())
    throw InvalidArgument("unknown scenario '" + name +
                          "' (summing-c0, diamond-c0-l1, block-c0, pisier-xu, unconditional-l2)");
  AnalysisOptions o = to_options(c);
  const fs::path out(o.out_dir);
  fs::create_directories(out / "witnesses");

  if (name == "unconditional-l2") {
    const Basis b = canonical_basis(NormSpec::lp(2, dim ? dim : 16));
    write_text(out / "basis.json", basis_to_text(b));
    return analyze(b, name, o, log);
  }
  if (name == "summing-c0") {
    const Basis b = summing_basis(NormSpec::sup(dim ? dim : 12));
    write_text(out / "basis.json", basis_to_text(b));
    return analyze(b, name, o, log);
  }
  if (name == "diamond-c0-l1") {
    const std::size_t d = dim ? dim : 32;
    if (d % 2 != 0 || d < 2) throw InvalidArgument("diamond-c0-l1 needs an even --dim");
    const Basis b = diamond(canonical_basis(NormSpec::sup(d / 2)), canonical_basis(NormSpec::lp(1, d / 2)));
    write_text(out / "basis.json", basis_to_text(b));
    if (o.m_max == 0) o.m_max = std::min<std::size_t>(d, 8);
    const int code = analyze(b, name, o, log);
    json rows = json::array();
    for (std::size_t j = 1; 2 * j <= d; ++j) {
      const auto w = paper_witness_diamond(b, j);
      const std::string file = "witnesses/" + name + "_paper_L_" + std::to_string(2 * j) + ".json";
      write_text(out / file, witness_to_text(w));
      rows.push_back(paper_row(name, w, Rational(static_cast<long>(j) - 1) / 2, file));
    }
    attach_paper_witnesses(out, rows);
    return code;
  }
  if (name == "block-c0") {
    const unsigned j_max = blocks ? blocks : 3;
    if (j_max > 10) throw InvalidArgument("--blocks is limited to 10");
    const std::size_t d = (std::size_t{2} << j_max) - 2;
    const Basis b = block_construction(canonical_basis(NormSpec::sup(d))).conditional;
    write_text(out / "basis.json", basis_to_text(b));
    if (o.m_max == 0) o.m_max = std::min<std::size_t>(d, 8);
    const int code = analyze(b, name, o, log);
    json rows = json::array();
    for (unsigned j = 1; j <= j_max; ++j) {
      const auto w = paper_witness_block(b, j);
      const std::string file = "witnesses/" + name + "_paper_L_" + std::to_string(w.m) + ".json";
      write_text(out / file, witness_to_text(w));
      // (m + 3) / 32 - 1/2 with d = C = 1
      rows.push_back(paper_row(name, w, Rational(static_cast<long>(w.m) + 3) / 32 - Rational(1, 2), file));
    }
    attach_paper_witnesses(out, rows);
    return code;
  }
  if (name == "pisier-xu") {
    const Basis b = canonical_basis(pisier_xu_space(parse_rational(theta), parse_rational(q), dim ? dim : 8));
    write_text(out / "basis.json", basis_to_text(b));
    // Interpolated norms are quadratures, never certified, and each costs
    // a K-functional sweep.
    if (!c.mode) o.mode = Mode::Heuristic;
    if (!c.samples) o.samples = 8;
    if (o.m_max == 0) o.m_max = std::min<std::size_t>(b.dim(), 4);
    return analyze(b, name, o, log);
  }
  throw InvalidArgument("unknown scenario '" + name + "'");
}

int kfun(const std::string& f_text, const std::string& x0, const std::string& x1,
         const std::string& theta, const std::string& q, const std::string& grid,
         const std::string& out_file, std::ostream& out) {
  const RationalVector f = parse_vector(f_text);
  const NormSpec s0 = leaf(x0, f.size()), s1 = leaf(x1, f.size());
  std::vector<Rational> ts;
  if (grid.empty()) {
    for (int e = -8; e <= 8; ++e) {
      Rational t(1);
      if (e >= 0) t = Rational(1L << e);
      else t = Rational(1, 1L << -e);
      ts.push_back(t);
    }
  } else {
    ts = parse_vector(grid);
    for (const auto& t : ts)
      if (t <= 0) throw InvalidArgument("grid values must be positive");
  }
  std::string csv = "quantity,t,value,value_exact\n";
  for (const auto& t : ts) {
    const Scalar v = k_functional(f, Scalar(t), s0, s1);
    csv += "K," + format_rational(t) + "," + v.decimal() + "," + v.exact_text() + "\n";
  }
  const NormSpec interp = NormSpec::interpolated(s0, s1, parse_rational(theta), parse_rational(q));
  const Scalar nv = interpolated_norm(f, interp);
  csv += "interpolated_norm,," + nv.decimal() + "," + nv.exact_text() + "\n";
  if (out_file.empty()) out << csv;
  else write_text(out_file, csv);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"condlab: conditionality constants of finite bases"};
  app.require_subcommand(1);

  Common analyze_opts;
  std::string basis_file;
  auto* an = app.add_subcommand("analyze", "Analyze a basis file");
  an->add_option("basis_file", basis_file, "Basis file")->required();
  add_common(an, analyze_opts);

  Common scenario_opts;
  std::string name;
  std::size_t dim = 0;
  unsigned blocks = 0;
  std::string theta = "1/2", q = "2";
  auto* sc = app.add_subcommand("scenario", "Run a preset scenario");
  sc->add_option("name", name, "summing-c0|diamond-c0-l1|block-c0|pisier-xu|unconditional-l2")
      ->required();
  add_common(sc, scenario_opts);
  sc->add_option("--dim", dim, "Ambient dimension");
  sc->add_option("--blocks", blocks, "Number of blocks (block-c0)");
  sc->add_option("--theta", theta, "Interpolation parameter theta, p/q")->capture_default_str();
  sc->add_option("--q", q, "Interpolation exponent q, p/q")->capture_default_str();

  std::string f_text, x0 = "v1", x1 = "sup", k_theta = "1/2", k_q = "2", grid, k_out;
  auto* kf = app.add_subcommand("kfun", "Tabulate the K-functional of a vector");
  kf->add_option("--f", f_text, "Comma-separated rationals")->required();
  kf->add_option("--x0", x0, "v1|sup|l1")->capture_default_str();
  kf->add_option("--x1", x1, "v1|sup|l1")->capture_default_str();
  kf->add_option("--theta", k_theta, "theta, p/q")->capture_default_str();
  kf->add_option("--q", k_q, "q, p/q")->capture_default_str();
  kf->add_option("--t-grid", grid, "Comma-separated t values (default 2^-8..2^8)");
  kf->add_option("--out", k_out, "CSV file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (an->parsed()) {
      const Basis b = read_basis_file(basis_file);
      return analyze(b, fs::path(basis_file).stem().string(), to_options(analyze_opts), err);
    }
    if (sc->parsed()) return scenario(name, scenario_opts, dim, blocks, theta, q, err);
    if (kf->parsed()) return kfun(f_text, x0, x1, k_theta, k_q, grid, k_out, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kBudgetExhausted;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace condlab::cli
