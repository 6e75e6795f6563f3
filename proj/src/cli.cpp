#include "moran/cli.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "moran/errors.hpp"
#include "moran/fuglede.hpp"
#include "moran/parallel.hpp"
#include "moran/spectra.hpp"
#include "moran/tiling.hpp"

namespace moran {

namespace {

std::size_t parse_level(const std::string &text) {
  if (text == "inf") return kInfiniteLevel;
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0)
    throw InputError("level must be a positive integer or 'inf', got '" + text + "'");
  return value;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::size_t default_level(const MoranSystem &system) {
  return system.is_finite() ? system.horizon() : kInfiniteLevel;
}

std::string level_name(std::size_t n) {
  return n >= kInfiniteLevel - 1 ? "inf" : std::to_string(n);
}

void row(std::ostream &out, const std::string &key, const std::string &value) {
  out << std::left << std::setw(14) << key << value << '\n';
}

std::string join(const CandidateSet &set) {
  std::string out;
  for (const auto &x : set) out += (out.empty() ? "" : ",") + x.str();
  return out;
}

struct Options {
  std::string system_path;
  std::string level = "";
  std::string lambda_path;
  std::size_t budget = 5000;
  std::size_t split = 0;
  std::string from, to, step;
  double eps = 1e-12;
  std::int64_t max_period = 256;
  bool json = false;
  std::string a_path, b_path;
  std::int64_t period = 0, r = 0;
  std::string digits_path;
};

int analyze(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = o.level.empty() ? default_level(sys) : parse_level(o.level);
  row(out, "system", serialize_system(sys));
  row(out, "horizon", level_name(sys.horizon()));
  const ConvergenceReport conv = check_convergence(sys);
  row(out, "convergence", to_string(conv.verdict));
  if (conv.sum) row(out, conv.sum_exact ? "sum" : "sum_bound", conv.sum->str());
  row(out, "certificate", to_string(conv.certificate));
  if (!conv.note.empty()) row(out, "note", conv.note);
  if (n == kInfiniteLevel && !sys.has_periodic_tail()) {
    row(out, "diameter", "not closed-form for this tail");
  } else {
    const SupportInfo info = support_info(sys, n);
    row(out, "level", level_name(n));
    row(out, "support", "[0, " + info.diameter.str() + "]");
    row(out, "diameter", info.diameter.str());
  }
  if (n != kInfiniteLevel || !sys.is_finite())
    row(out, "spectral", to_string(truncation_spectral_verdict(sys, n)));
  return 0;
}

std::size_t finite_level(const Options &o, const MoranSystem &sys) {
  const std::size_t n = parse_level(o.level);
  if (n == kInfiniteLevel) throw InputError("this command needs a finite --level");
  if (!sys.is_addressable(n)) throw InputError("level " + std::to_string(n) + " not addressable");
  return n;
}

int spectrum(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = finite_level(o, sys);
  try {
    out << format_candidate_set(canonical_spectrum(sys, n));
  } catch (const NotSpectralError &e) {
    out << "NotSpectral(" << e.level() << ")\n";
  }
  return 0;
}

int check_spectrum(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = finite_level(o, sys);
  const CandidateSet set = load_candidate_set(o.lambda_path);
  const SpectrumCertificate cert = is_spectrum(MeasureWindow::head(sys, n), set);
  row(out, "status", to_string(cert.status));
  row(out, "window", "1.." + std::to_string(n));
  row(out, "atoms", std::to_string(cert.atom_count) + (cert.atoms_collide ? " (collisions)" : ""));
  row(out, "size", std::to_string(set.size()));
  if (cert.violation)
    row(out, "violation", cert.violation->first.str() + ", " + cert.violation->second.str());
  return 0;
}

int search(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = finite_level(o, sys);
  SearchOptions options;
  options.vertex_budget = o.budget;
  const auto found = spectrum_search(MeasureWindow::head(sys, n), options);
  if (found)
    out << format_candidate_set(*found);
  else
    out << "none\n";
  return 0;
}

int decompose(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = finite_level(o, sys);
  const CandidateSet set = load_candidate_set(o.lambda_path);
  const DecompositionResult result = suitable_decomposition(sys, n, o.split, set);
  const DecompositionReport report = verify_decomposition(result);
  row(out, "anchors", join(result.anchors));
  for (const auto &[alpha, part] : result.parts) row(out, "part " + alpha.str(), join(part));
  auto flag = [](bool b) { return std::string(b ? "pass" : "FAIL"); };
  row(out, "(a)", flag(report.partition));
  row(out, "(b)", flag(report.anchors_spectrum));
  row(out, "(c)", flag(report.parts_spectra));
  row(out, "(d)", flag(report.containments));
  for (const auto &f : report.failures) out << f << '\n';
  return 0;
}

int qgrid(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = parse_level(o.level);
  const CandidateSet set = load_candidate_set(o.lambda_path);
  const MeasureWindow window(sys, 1, n);
  const auto samples = q_grid(window, set, Rational::parse(o.from), Rational::parse(o.to),
                              Rational::parse(o.step), o.eps);
  out << "xi,Q\n";
  for (const auto &s : samples) out << s.xi.str() << ',' << shortest(s.q) << '\n';
  return 0;
}

int tile(const Options &o, std::ostream &out) {
  const TileVerdict v = is_integer_tile(load_digit_set(o.digits_path), o.max_period);
  out << format_tile_verdict(v) << '\n';
  return std::holds_alternative<TileUnknown>(v) ? 2 : 0;
}

int complement(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const std::size_t n = finite_level(o, sys);
  try {
    const ComplementResult c = canonical_complement(sys, n);
    std::string levels;
    for (const auto &lv : c.levels) {
      if (!levels.empty()) levels += "; ";
      levels += "b=" + lv.base.get_str() + " N=" + lv.count.get_str() + " scale=" + lv.scale.get_str();
    }
    row(out, "levels", levels);
    row(out, "digits", format_integer_list(c.digits.elements));
    row(out, "complement", format_integer_list(c.complement.elements));
    row(out, "L", std::to_string(c.length));
    row(out, "certified", c.certified ? "true" : "false");
  } catch (const NotSpectralError &e) {
    out << "NotSpectral(" << e.level() << ")\n";
  }
  return 0;
}

int fuglede(const Options &o, std::ostream &out) {
  const MoranSystem sys = load_system(o.system_path);
  const FugledeReport r = fuglede_report(sys, finite_level(o, sys));
  out << (o.json ? format_fuglede_json(r) : format_fuglede_text(r));
  return 0;
}

int tijdeman(const Options &o, std::ostream &out) {
  const RescaledTiling t = tijdeman_rescale(load_digit_set(o.a_path), load_digit_set(o.b_path),
                                            o.period, o.r);
  row(out, "scaled", format_integer_list(t.scaled));
  row(out, "complement", format_integer_list(t.complement));
  row(out, "period", std::to_string(t.period));
  row(out, "verified", "true");
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Exact computations on Cantor-Moran measures with consecutive digits", "moran"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  Options o;

  auto *cmd_analyze = app.add_subcommand("analyze", "convergence, support and spectrality summary");
  cmd_analyze->add_option("system", o.system_path)->required();
  cmd_analyze->add_option("--level", o.level, "level n or 'inf'");

  auto *cmd_spectrum = app.add_subcommand("spectrum", "canonical spectrum of levels 1..n");
  cmd_spectrum->add_option("system", o.system_path)->required();
  cmd_spectrum->add_option("--level", o.level)->required();

  auto *cmd_check = app.add_subcommand("check-spectrum", "decide whether a set is a spectrum");
  cmd_check->add_option("system", o.system_path)->required();
  cmd_check->add_option("--level", o.level)->required();
  cmd_check->add_option("--lambda", o.lambda_path)->required();

  auto *cmd_search = app.add_subcommand("search", "exhaustive spectrum search");
  cmd_search->add_option("system", o.system_path)->required();
  cmd_search->add_option("--level", o.level)->required();
  cmd_search->add_option("--budget", o.budget, "vertex budget");

  auto *cmd_decompose = app.add_subcommand("decompose", "suitable decomposition of a spectrum");
  cmd_decompose->add_option("system", o.system_path)->required();
  cmd_decompose->add_option("--level", o.level)->required();
  cmd_decompose->add_option("--split", o.split)->required();
  cmd_decompose->add_option("--lambda", o.lambda_path)->required();

  auto *cmd_qgrid = app.add_subcommand("qgrid", "sample Q over a rational grid as CSV");
  cmd_qgrid->add_option("system", o.system_path)->required();
  cmd_qgrid->add_option("--level", o.level)->required();
  cmd_qgrid->add_option("--lambda", o.lambda_path)->required();
  cmd_qgrid->add_option("--from", o.from)->required();
  cmd_qgrid->add_option("--to", o.to)->required();
  cmd_qgrid->add_option("--step", o.step)->required();
  cmd_qgrid->add_option("--eps", o.eps);

  auto *cmd_tile = app.add_subcommand("tile", "integer tile verdict for a digit set");
  cmd_tile->add_option("digits", o.digits_path)->required();
  cmd_tile->add_option("--max-period", o.max_period);

  auto *cmd_complement = app.add_subcommand("complement", "canonical tiling complement");
  cmd_complement->add_option("system", o.system_path)->required();
  cmd_complement->add_option("--level", o.level)->required();

  auto *cmd_fuglede = app.add_subcommand("fuglede", "spectrality, complement and uniform convolution");
  cmd_fuglede->add_option("system", o.system_path)->required();
  cmd_fuglede->add_option("--level", o.level)->required();
  cmd_fuglede->add_flag("--json", o.json);

  auto *cmd_tijdeman = app.add_subcommand("tijdeman", "rescale a tiling by r coprime to #A");
  cmd_tijdeman->add_option("--a", o.a_path)->required();
  cmd_tijdeman->add_option("--b", o.b_path)->required();
  cmd_tijdeman->add_option("--period", o.period)->required();
  cmd_tijdeman->add_option("--r", o.r)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  set_default_threads(threads);
  try {
    if (cmd_analyze->parsed()) return analyze(o, out);
    if (cmd_spectrum->parsed()) return spectrum(o, out);
    if (cmd_check->parsed()) return check_spectrum(o, out);
    if (cmd_search->parsed()) return search(o, out);
    if (cmd_decompose->parsed()) return decompose(o, out);
    if (cmd_qgrid->parsed()) return qgrid(o, out);
    if (cmd_tile->parsed()) return tile(o, out);
    if (cmd_complement->parsed()) return complement(o, out);
    if (cmd_fuglede->parsed()) return fuglede(o, out);
    if (cmd_tijdeman->parsed()) return tijdeman(o, out);
  } catch (const ResourceLimit &e) {
    err << "resource limit: " << e.what() << '\n';
    return 2;
  } catch (const NotSpectralError &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace moran
