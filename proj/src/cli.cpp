#include "freehardy/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "freehardy/clark.hpp"
#include "freehardy/colligation.hpp"
#include "freehardy/error.hpp"
#include "freehardy/fixtures.hpp"
#include "freehardy/gleason.hpp"
#include "freehardy/kernel.hpp"
#include "freehardy/parse.hpp"

namespace freehardy {

namespace {

using json = nlohmann::json;

constexpr int kSchemaVersion = 1;

struct Config {
  std::string command;
  std::string expr;
  std::string input;
  std::string out;
  std::string format = "json";
  std::string points;
  std::string colligation;
  std::string kernel = "dbr-left";
  std::string direction = "schur-to-herglotz";
  int d = 1;
  int deg = -1;
  int N = 8;
  int p = 1;
  int q = 1;
  int count = 5;
  int level = 3;
  int pins = 10;
  int max_level = 4;
  double tol = 1e-8;
  double rank_tol = 1e-10;
  double radius = 0.4;
  std::uint64_t seed = 1;
};

// A finished command: the report body, an exit status and optional CSV rows.
struct Outcome {
  json result;
  int status = kExitOk;
  std::string verdict;
  std::vector<std::vector<std::string>> csv;
};

json config_echo(const Config& c) {
  json j = {{"d", c.d},     {"deg", c.deg < 0 ? c.N : c.deg}, {"N", c.N},         {"p", c.p},
            {"q", c.q},     {"tol", c.tol},                   {"rank_tol", c.rank_tol},
            {"seed", c.seed}, {"format", c.format}};
  if (!c.expr.empty()) j["expr"] = c.expr;
  if (!c.input.empty()) j["input"] = c.input;
  if (c.command == "eval" || c.command == "transfer-eval" || c.command == "herglotz-verify") {
    j["count"] = c.count;
    j["level"] = c.level;
    j["radius"] = c.radius;
    if (!c.points.empty()) j["points"] = c.points;
  }
  if (c.command == "kernel-gram" || c.command == "schur-check" || c.command == "ce-test") {
    j["pins"] = c.pins;
    j["max_level"] = c.max_level;
  }
  if (c.command == "kernel-gram") j["kernel"] = c.kernel;
  if (c.command == "cayley") j["direction"] = c.direction;
  if (!c.colligation.empty()) j["colligation"] = c.colligation;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, what + " is not valid JSON: " + e.what(), static_cast<long>(e.byte));
  }
}

int effective_deg(const Config& c) { return c.deg < 0 ? c.N : c.deg; }

FreeSeries load_series(Config& c) {
  FreeSeries f;
  if (!c.expr.empty()) {
    f = parse(c.expr, c.d, effective_deg(c), c.p, c.q);
  } else if (!c.input.empty()) {
    const std::string text = read_file(c.input);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
      f = series_from_json(parse_json_text(text, c.input));
      c.d = f.d();
      c.p = f.p();
      c.q = f.q();
      if (c.deg < 0) c.deg = f.deg();
    } else {
      f = parse(text, c.d, effective_deg(c), c.p, c.q);
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "a series is required: pass --expr or --input");
  }
  if (f.deg() > c.N) throw Error(ErrorKind::InvalidInput, "N must be at least deg");
  return f;
}

std::vector<MatrixPoint> load_points(const Config& c) {
  std::vector<MatrixPoint> pts;
  if (!c.points.empty()) {
    for (const auto& p : parse_json_text(read_file(c.points), c.points)) pts.push_back(matrix_point_from_json(p));
    return pts;
  }
  Rng rng(c.seed);
  for (int i = 0; i < c.count; ++i) pts.push_back(random_point(c.d, c.level, c.radius, rng));
  return pts;
}

std::string num(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

void matrix_rows(std::vector<std::vector<std::string>>& rows, const std::string& tag, const Mat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows.push_back({tag, std::to_string(i), std::to_string(j), num(m(i, j).real()), num(m(i, j).imag())});
}

std::vector<std::vector<std::string>> series_rows(const FreeSeries& f) {
  std::vector<std::vector<std::string>> rows{{"word", "i", "j", "re", "im"}};
  for (const auto& [w, c] : f.terms()) matrix_rows(rows, w.str(), c);
  return rows;
}

// ---- commands -------------------------------------------------------------

Outcome cmd_eval(Config& c) {
  const FreeSeries f = load_series(c);
  Outcome o;
  o.result["series"] = to_json(f);
  json vals = json::array();
  o.csv = {{"point", "i", "j", "re", "im"}};
  int idx = 0;
  for (const auto& z : load_points(c)) {
    const Mat v = evaluate(f, z);
    vals.push_back({{"point", to_json(z)}, {"row_norm", z.row_norm()}, {"value", matrix_to_json(v)}});
    matrix_rows(o.csv, std::to_string(idx++), v);
  }
  o.result["values"] = vals;
  return o;
}

Outcome cmd_schur_check(Config& c) {
  const FreeSeries f = load_series(c);
  Outcome o;
  json ladder = json::array();
  o.csv = {{"N", "estimate"}};
  double est = 0.0;
  for (int n = std::max(f.deg(), c.N - 2); n <= c.N; ++n) {
    est = schur_norm_estimate(f, n);
    ladder.push_back({{"N", n}, {"estimate", est}});
    o.csv.push_back({std::to_string(n), num(est)});
  }
  o.result["ladder"] = ladder;
  o.result["estimate"] = est;
  const auto pins = nilpotent_pins(f.d(), c.pins, c.max_level, c.seed);
  const GramCheck g = gram_psd_check(KernelSpec{KernelKind::DbrLeft, f, c.N}, pins, c.tol);
  o.result["gram"] = {{"min_eig", g.min_eig}, {"norm", g.norm}, {"certified", g.certified}, {"pins", c.pins}};
  const bool schur = est <= 1.0 + c.tol && g.certified;
  o.verdict = schur ? "schur (up to truncation)" : "not-schur";
  o.status = schur ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_cayley(Config& c) {
  const FreeSeries f = load_series(c);
  CayleyDirection dir;
  if (c.direction == "schur-to-herglotz")
    dir = CayleyDirection::SchurToHerglotz;
  else if (c.direction == "herglotz-to-schur")
    dir = CayleyDirection::HerglotzToSchur;
  else
    throw Error(ErrorKind::InvalidInput, "unknown direction " + c.direction);
  const FreeSeries g = cayley(f, dir);
  const FreeSeries back = cayley(g, dir == CayleyDirection::SchurToHerglotz ? CayleyDirection::HerglotzToSchur
                                                                             : CayleyDirection::SchurToHerglotz);
  Outcome o;
  o.result["series"] = to_json(g);
  o.result["round_trip_error"] = max_coeff_diff(back, f);
  o.csv = series_rows(g);
  return o;
}

Outcome cmd_moments(Config& c) {
  const FreeSeries f = load_series(c);
  const MomentFunctional mu = clark_moments(f, c.N);
  const Mat M = moment_matrix(mu, std::min(c.N, 3));
  const double lo = min_eig(M), nrm = op_norm(M);
  Outcome o;
  o.result["moments"] = to_json(mu);
  o.result["moment_matrix"] = {{"max_word_length", std::min(c.N, 3)}, {"min_eig", lo}, {"norm", nrm}};
  const bool psd = lo >= -c.tol * std::max(1.0, nrm);
  o.result["psd"] = psd;
  o.csv = {{"word", "i", "j", "re", "im"}};
  for (const auto& [w, m] : mu.moments) matrix_rows(o.csv, w.str(), m);
  o.verdict = psd ? "positive" : "indefinite";
  o.status = psd ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_herglotz_verify(Config& c) {
  const FreeSeries f = load_series(c);
  const FreeSeries b = f.with_degree(c.N);
  const MomentFunctional mu = clark_moments(b, c.N);
  const FreeSeries H = cayley(b, CayleyDirection::SchurToHerglotz);
  double hmax = 1.0;
  for (const auto& [w, m] : H.terms()) hmax = std::max(hmax, op_norm(m));
  auto pts = load_points(c);
  Rng rng(c.seed + 1);
  for (int i = 0; i < c.count; ++i) pts.push_back(random_nilpotent_point(c.d, c.level, c.radius, rng));
  Outcome o;
  json rows = json::array();
  o.csv = {{"point", "kind", "row_norm", "residual", "tail_bound"}};
  double worst_excess = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const MatrixPoint& z = pts[i];
    const Mat bz = evaluate(f, z);
    const Mat I = Mat::Identity(bz.rows(), bz.cols());
    const Mat direct = (I + bz) * (I - bz).inverse();
    const double res = op_norm(direct - herglotz_from_moments(mu, z, c.N));
    const bool nilpotent = i >= pts.size() - static_cast<std::size_t>(c.count);
    const double r = z.row_norm();
    const double tail = nilpotent ? 0.0 : hmax * std::pow(r, c.N + 1) / (1.0 - r);
    worst = std::max(worst, res);
    worst_excess = std::max(worst_excess, res - std::max(c.tol, tail));
    rows.push_back({{"kind", nilpotent ? "nilpotent" : "random"}, {"row_norm", r}, {"residual", res},
                    {"tail_bound", tail}});
    o.csv.push_back({std::to_string(i), nilpotent ? "nilpotent" : "random", num(r), num(res), num(tail)});
  }
  o.result["points"] = rows;
  o.result["max_residual"] = worst;
  const bool ok = worst_excess <= 0.0;
  o.verdict = ok ? "consistent" : "inconsistent";
  o.status = ok ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_gns(Config& c) {
  const FreeSeries f = load_series(c);
  const GnsModel g = gns_build(clark_moments(f, c.N), c.N, c.rank_tol);
  Outcome o;
  o.result["model"] = to_json(g);
  o.result["isometry_defect"] = gns_isometry_defect(g);
  const auto e = hermitian_eig(g.moment);
  json spec = json::array();
  o.csv = {{"index", "eigenvalue"}};
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    spec.push_back(e.values(i));
    o.csv.push_back({std::to_string(i), num(e.values(i))});
  }
  o.result["moment_spectrum"] = spec;
  return o;
}

Outcome cmd_cuntz_check(Config& c) {
  const FreeSeries f = load_series(c);
  Outcome o;
  json ladder = json::array();
  o.csv = {{"N", "defect"}};
  CuntzCheck last;
  for (int n = std::max(1, c.N - 2); n <= c.N; ++n) {
    last = cuntz_check(gns_build(clark_moments(f, n), n, c.rank_tol), c.tol);
    ladder.push_back({{"N", n}, {"defect", last.defect}});
    o.csv.push_back({std::to_string(n), num(last.defect)});
  }
  o.result["ladder"] = ladder;
  o.result["defect"] = last.defect;
  o.result["is_cuntz"] = last.is_cuntz;
  o.verdict = last.is_cuntz ? "cuntz" : "not-cuntz";
  o.status = last.is_cuntz ? kExitOk : kExitNegative;
  return o;
}

json ladder_json(const GapLadder& g) {
  json l = json::array();
  for (std::size_t i = 0; i < g.N.size(); ++i) l.push_back({{"N", g.N[i]}, {"gap", g.gap_norm[i]}});
  return l;
}

Outcome cmd_gleason_gap(Config& c) {
  const FreeSeries f = load_series(c);
  const GapLadder g = extremality_gap(f, c.N, c.tol, c.rank_tol);
  Outcome o;
  o.result["ladder"] = ladder_json(g);
  o.result["gap"] = matrix_to_json(g.gap);
  o.result["gap_norm"] = g.gap_norm.front();
  o.result["extremal"] = g.extremal;
  o.result["trend"] = g.trend;
  o.csv = {{"N", "gap"}};
  for (std::size_t i = 0; i < g.N.size(); ++i) o.csv.push_back({std::to_string(g.N[i]), num(g.gap_norm[i])});
  o.verdict = g.trend;
  o.status = g.extremal ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_ce_test(Config& c) {
  const FreeSeries f = load_series(c);
  // Non-membership only shows once the pin kernel vectors span the words
  // below max_level, which takes about word_count pins per level.
  const int span_pins = c.max_level * static_cast<int>(word_count(f.d(), c.max_level - 1));
  const int count = std::max(c.pins, span_pins);
  const auto pins = nilpotent_pins(f.d(), count, c.max_level, c.seed);
  const CeReport r = ce_test(f, c.N, c.tol, pins, c.rank_tol);
  Outcome o;
  o.result["by_gleason"] = {{"ladder", ladder_json(r.gleason)},
                            {"gap_norm", r.gleason.gap_norm.front()},
                            {"trend", r.gleason.trend},
                            {"ce", r.gleason.extremal}};
  o.result["by_szego"] = {{"distance", r.szego_distance}, {"ce", r.szego_ce}};
  json mem = json::array();
  for (const auto& m : r.membership) mem.push_back(m.infinite ? json("Infinite") : json(m.lambda));
  o.result["by_membership"] = {{"lambda", mem}, {"cap", 1e3}, {"pins", count}, {"ce", r.membership_ce}};
  if (r.cuntz)
    o.result["by_cuntz"] = {{"defect", r.cuntz->defect}, {"ce", r.cuntz->is_cuntz}};
  else
    o.result["by_cuntz"] = nullptr;
  o.result["flags"] = r.flags;
  o.result["verdict"] = r.verdict_ce ? "CE" : "not CE";
  o.csv = {{"N", "gap"}};
  for (std::size_t i = 0; i < r.gleason.N.size(); ++i)
    o.csv.push_back({std::to_string(r.gleason.N[i]), num(r.gleason.gap_norm[i])});
  o.verdict = r.verdict_ce ? "CE" : "not CE";
  o.status = r.verdict_ce ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_realize(Config& c) {
  const FreeSeries f = load_series(c);
  const Colligation U = canonical_colligation(f, c.N, c.rank_tol);
  const FreeSeries back = transfer_series(U, f.deg());
  Outcome o;
  o.result["colligation"] = to_json(U);
  o.result["round_trip_error"] = max_coeff_diff(back, f);
  o.result["norm"] = U.norm();
  o.result["isometry_defect"] = U.isometry_defect();
  o.result["coisometry_defect"] = U.coisometry_defect();
  const int margin = f.deg() + 1;
  const double interior = canonical_coisometry_defect(f, U, c.N, margin, c.rank_tol);
  o.result["interior_margin"] = margin;
  o.result["interior_coisometry_defect"] = interior;
  const bool contractive = interior <= c.tol;
  o.result["contractive_on_interior"] = contractive;
  o.csv = {{"quantity", "value"},
           {"state_dim", std::to_string(U.state_dim)},
           {"round_trip_error", num(max_coeff_diff(back, f))},
           {"norm", num(U.norm())},
           {"interior_coisometry_defect", num(interior)}};
  o.verdict = contractive ? "contractive on interior" : "not contractive";
  o.status = contractive ? kExitOk : kExitNegative;
  return o;
}

Outcome cmd_transfer_eval(Config& c) {
  Colligation U;
  if (!c.colligation.empty()) {
    U = colligation_from_json(parse_json_text(read_file(c.colligation), c.colligation));
    c.d = U.d;
  } else {
    U = canonical_colligation(load_series(c), c.N, c.rank_tol);
  }
  Outcome o;
  json vals = json::array();
  o.csv = {{"point", "i", "j", "re", "im"}};
  int idx = 0;
  for (const auto& z : load_points(c)) {
    const Mat v = transfer_eval(U, z);
    vals.push_back({{"point", to_json(z)}, {"value", matrix_to_json(v)}});
    matrix_rows(o.csv, std::to_string(idx++), v);
  }
  o.result["colligation"] = to_json(U);
  o.result["values"] = vals;
  return o;
}

Outcome cmd_complete_column(Config& c) {
  const FreeSeries f = load_series(c);
  const ColumnCompletion cc = complete_column(f, c.N, c.tol, c.rank_tol);
  Outcome o;
  o.result["a"] = to_json(cc.a);
  o.result["a_empty"] = matrix_to_json(cc.a_empty);
  o.result["colligation"] = to_json(cc.U);
  o.result["isometry_defect"] = cc.isometry_defect;
  o.result["column_norm"] = cc.column_norm;
  o.result["column_gram_min_eig"] = cc.column_gram_min_eig;
  o.csv = series_rows(cc.a);
  const bool ok = cc.column_gram_min_eig >= -c.tol;
  o.verdict = ok ? "completed" : "completion not contractive";
  o.status = ok ? kExitOk : kExitNegative;
  return o;
}

KernelKind kernel_kind(const std::string& s) {
  if (s == "szego") return KernelKind::Szego;
  if (s == "dbr-left") return KernelKind::DbrLeft;
  if (s == "dbr-right") return KernelKind::DbrRight;
  if (s == "herglotz") return KernelKind::Herglotz;
  throw Error(ErrorKind::InvalidInput, "unknown kernel " + s);
}

Outcome cmd_kernel_gram(Config& c) {
  KernelSpec spec{kernel_kind(c.kernel), std::nullopt, c.N};
  if (spec.kind != KernelKind::Szego) spec.B = load_series(c);
  const auto pins = nilpotent_pins(c.d, c.pins, c.max_level, c.seed);
  const GramCheck g = gram_psd_check(spec, pins, c.tol);
  Outcome o;
  o.result["min_eig"] = g.min_eig;
  o.result["norm"] = g.norm;
  o.result["certified"] = g.certified;
  o.result["gram"] = matrix_to_json(g.gram);
  json pj = json::array();
  for (const auto& p : pins) pj.push_back(to_json(p));
  o.result["pins"] = pj;
  o.csv = {{"block", "i", "j", "re", "im"}};
  matrix_rows(o.csv, "gram", g.gram);
  o.verdict = g.certified ? "psd" : "not psd";
  o.status = g.certified ? kExitOk : kExitNegative;
  return o;
}

Outcome dispatch(Config& c) {
  if (c.N < 0) throw Error(ErrorKind::InvalidInput, "N must be nonnegative");
  if (c.deg > c.N) throw Error(ErrorKind::InvalidInput, "N must be at least deg");
  if (!(c.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tol must be positive");
  if (c.command == "eval") return cmd_eval(c);
  if (c.command == "schur-check") return cmd_schur_check(c);
  if (c.command == "cayley") return cmd_cayley(c);
  if (c.command == "moments") return cmd_moments(c);
  if (c.command == "herglotz-verify") return cmd_herglotz_verify(c);
  if (c.command == "gns") return cmd_gns(c);
  if (c.command == "cuntz-check") return cmd_cuntz_check(c);
  if (c.command == "ce-test") return cmd_ce_test(c);
  if (c.command == "gleason-gap") return cmd_gleason_gap(c);
  if (c.command == "realize") return cmd_realize(c);
  if (c.command == "transfer-eval") return cmd_transfer_eval(c);
  if (c.command == "complete-column") return cmd_complete_column(c);
  if (c.command == "kernel-gram") return cmd_kernel_gram(c);
  throw Error(ErrorKind::InvalidInput, "unknown command " + c.command);
}

std::string render(const Config& c, const json& report, const Outcome* o) {
  if (c.format == "csv" && o != nullptr && !o->csv.empty()) {
    std::string s;
    for (const auto& row : o->csv) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
      s += "\n";
    }
    return s;
  }
  return report.dump(2) + "\n";
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + c.out);
  f << text;
}

void add_common(CLI::App* sc, Config& c) {
  sc->add_option("--expr", c.expr, "series as an expression in z1..zd");
  sc->add_option("--input", c.input, "series file (JSON series or expression text)");
  sc->add_option("--d", c.d, "number of variables")->check(CLI::PositiveNumber);
  sc->add_option("--deg", c.deg, "truncation degree of the series (default N)");
  sc->add_option("--N", c.N, "Fock-space truncation")->check(CLI::NonNegativeNumber);
  sc->add_option("--p", c.p, "coefficient rows")->check(CLI::PositiveNumber);
  sc->add_option("--q", c.q, "coefficient columns")->check(CLI::PositiveNumber);
  sc->add_option("--tol", c.tol, "verdict tolerance");
  sc->add_option("--rank_tol", c.rank_tol, "rank cutoff for eigen-factorizations");
  sc->add_option("--seed", c.seed, "seed for sampled points and pins");
  sc->add_option("--out", c.out, "report path (default stdout)");
  sc->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_points(CLI::App* sc, Config& c) {
  sc->add_option("--points", c.points, "JSON array of matrix points");
  sc->add_option("--count", c.count, "number of sampled points")->check(CLI::NonNegativeNumber);
  sc->add_option("--level", c.level, "matrix level of sampled points")->check(CLI::PositiveNumber);
  sc->add_option("--radius", c.radius, "row norm of sampled points");
}

void add_pins(CLI::App* sc, Config& c) {
  sc->add_option("--pins", c.pins, "number of nilpotent pins")->check(CLI::PositiveNumber);
  sc->add_option("--max_level", c.max_level, "largest pin level")->check(CLI::PositiveNumber);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Numerics for free Hardy spaces, deBranges-Rovnyak spaces and Clark functionals"};
  app.name("freehardy-cli");
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eval", "evaluate a series at matrix points"},
      {"schur-check", "multiplier norm ladder and dBR kernel positivity"},
      {"cayley", "Cayley transform between Schur and Herglotz series"},
      {"moments", "Clark functional moments"},
      {"herglotz-verify", "compare the moment Herglotz formula with (I+B)(I-B)^-1"},
      {"gns", "GNS model of the Clark functional"},
      {"cuntz-check", "Cuntz defect of the GNS row isometry"},
      {"ce-test", "column-extremeness battery"},
      {"gleason-gap", "extremality gap of the Gleason solution"},
      {"realize", "canonical deBranges-Rovnyak colligation"},
      {"transfer-eval", "evaluate the transfer function of a colligation"},
      {"complete-column", "complete a non-extreme column"},
      {"kernel-gram", "Gram matrix of an NC kernel on nilpotent pins"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sc = app.add_subcommand(name, help);
    add_common(sc, c);
    if (name == "eval" || name == "transfer-eval" || name == "herglotz-verify") add_points(sc, c);
    if (name == "kernel-gram" || name == "schur-check" || name == "ce-test") add_pins(sc, c);
    if (name == "kernel-gram")
      sc->add_option("--kernel", c.kernel, "szego, dbr-left, dbr-right or herglotz")
          ->check(CLI::IsMember({"szego", "dbr-left", "dbr-right", "herglotz"}));
    if (name == "cayley")
      sc->add_option("--direction", c.direction, "schur-to-herglotz or herglotz-to-schur")
          ->check(CLI::IsMember({"schur-to-herglotz", "herglotz-to-schur"}));
    if (name == "transfer-eval") sc->add_option("--colligation", c.colligation, "colligation JSON file");
    sc->callback([&c, name = name] { c.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  json report = {{"schema_version", kSchemaVersion}, {"command", c.command}};
  try {
    Outcome o = dispatch(c);
    report["config"] = config_echo(c);
    report["result"] = o.result;
    if (!o.verdict.empty()) report["verdict"] = o.verdict;
    report["status"] = o.status;
    emit(c, render(c, report, &o), out);
    return o.status;
  } catch (const Error& e) {
    const bool negative = e.kind() == ErrorKind::NotSchur || e.kind() == ErrorKind::CeObstruction;
    err << "error: " << e.what() << "\n";
    report["config"] = config_echo(c);
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    if (e.position() >= 0) report["error"]["position"] = e.position();
    report["status"] = negative ? kExitNegative : kExitError;
    if (negative) {
      report["verdict"] = to_string(e.kind());
      try {
        emit(c, render(c, report, nullptr), out);
      } catch (const Error& inner) {
        err << "error: " << inner.what() << "\n";
        return kExitError;
      }
    }
    return negative ? kExitNegative : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace freehardy
