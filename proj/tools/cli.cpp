#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "sumrules/report_io.hpp"
#include "sumrules/series.hpp"
#include "sumrules/sumrules.hpp"

namespace sumrules::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

int to_int(const std::string& s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw UsageError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

enum class Format { text, json, csv };

struct Common {
  std::string model = "isw";
  double tol = kDefaultTolerance;
  long long kmax = 0;  // 0: library default
  std::string format = "text";
  std::string out_path;
  double hbar = 1.0;
  double mass = 1.0;
  double width = 1.0;
  double kappa0 = 1.0;

  void add_to(CLI::App& app) {
    app.add_option("--model", model, "isw or delta")->check(CLI::IsMember({"isw", "delta"}));
    app.add_option("--tol", tol, "relative tolerance");
    app.add_option("--kmax", kmax, "truncation cap for brute sums (env SUMRULE_KMAX)");
    app.add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", out_path, "write output to FILE");
    app.add_option("--hbar", hbar, "reduced Planck constant");
    app.add_option("--mass", mass, "particle mass");
    app.add_option("--width", width, "square-well width a");
    app.add_option("--kappa0", kappa0, "delta-well wavenumber K0");
  }

  ModelSpec spec() const {
    try {
      UnitScales u{hbar, mass};
      return model == "isw" ? ModelSpec::isw(width, u) : ModelSpec::delta(kappa0, u);
    } catch (const InvalidSpec& e) {
      throw UsageError(e.what());
    }
  }

  VerifyOptions options() const {
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    VerifyOptions o;
    o.tol = tol;
    if (kmax < 0) throw UsageError("--kmax must be positive");
    if (kmax > 0) o.k_max = kmax;
    return o;
  }

  Format fmt() const { return format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text; }
};

std::vector<int> levels(const std::string& text) {
  auto ns = parse_int_list(text);
  for (int n : ns)
    if (n < 1) throw UsageError("--n values must be >= 1");
  return ns;
}

void emit_reports(std::ostream& os, Format f, const std::vector<VerificationReport>& reports) {
  switch (f) {
    case Format::json: io::write_json(os, reports); break;
    case Format::csv: io::write_csv(os, reports); break;
    case Format::text: io::write_text(os, reports); break;
  }
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

// A report for a sum that could not be evaluated (e.g. the routes disagreed).
VerificationReport failed_report(const std::string& rule, const ModelSpec& model,
                                 std::map<std::string, double> params, double tol) {
  VerificationReport r;
  r.rule_id = rule;
  r.model = to_string(model.kind());
  r.params = std::move(params);
  r.tolerance = tol;
  r.analytic = r.numeric_closed = r.numeric_brute = std::nan("");
  r.rel_err_closed = r.rel_err = std::nan("");
  r.passed = false;
  return r;
}

struct SeriesArgs {
  int p = 1;
  double z = 0.5;
  std::string parity = "all";
  std::string n_text;
  bool weighted = false;
  bool removed = false;
};

std::vector<VerificationReport> run_series(const SeriesArgs& a, const Common& c) {
  const auto opt = c.options();
  const Parity parity = a.parity == "even" ? Parity::even : a.parity == "odd" ? Parity::odd : Parity::all;
  std::vector<VerificationReport> out;
  auto finish = [&](VerificationReport r, const TruncationTrace& tr) {
    r.model = "series";
    r.tolerance = opt.tol;
    r.trace = tr;
    r.finalize();
    // The brute route is judged against its own tail bound.
    r.passed = r.rel_err_closed <= opt.tol &&
               r.abs_err <= tr.tail_estimate + opt.tol * std::max(std::abs(r.analytic), kRelErrFloor);
    out.push_back(std::move(r));
  };

  if (a.removed) {
    for (int n : levels(a.n_text.empty() ? "1" : a.n_text)) {
      VerificationReport r;
      r.rule_id = "removed_term";
      r.params = {{"n", n}};
      r.analytic = series::removed_term_closed(n);
      r.numeric_closed = series::removed_term_sum_limit(n);
      series::BruteQuery q{3, static_cast<double>(n), Parity::all, true, n, opt.tol * 1e-2, opt.k_max};
      auto tr = series::brute_sum(q);
      r.numeric_brute = tr.value();
      finish(std::move(r), tr);
    }
    return out;
  }
  if (a.weighted) {
    for (int n : levels(a.n_text.empty() ? "1" : a.n_text)) {
      VerificationReport r;
      r.rule_id = "weighted_k2";
      r.params = {{"n", n}, {"p", a.p}};
      const double nd = n;
      const double pi2 = std::numbers::pi * std::numbers::pi;
      // Known closed forms for p = 3, 4 (odd n), 5; otherwise the series value.
      if (a.p == 3) r.analytic = pi2 / (64.0 * nd * nd);
      else if (a.p == 5) r.analytic = (15.0 * pi2 * nd - pi2 * pi2 * nd * nd * nd) / (3072.0 * std::pow(nd, 7));
      else if (a.p == 4 && n % 2 == 1) r.analytic = pi2 * pi2 / (768.0 * nd * nd) - pi2 / (128.0 * std::pow(nd, 4));
      else r.analytic = series::weighted_k2_sum(a.p, n);
      r.numeric_closed = series::weighted_k2_sum(a.p, n);
      const Parity par = n % 2 == 1 ? Parity::even : Parity::odd;
      series::BruteQuery q{a.p, nd, par, true, std::nullopt, opt.tol * 1e-2, opt.k_max};
      auto tr = series::brute_sum(q);
      r.numeric_brute = tr.value();
      finish(std::move(r), tr);
    }
    return out;
  }
  VerificationReport r;
  r.rule_id = std::string("S_p_") + to_string(parity);
  r.params = {{"p", a.p}, {"z", a.z}};
  r.analytic = series::sp_parity_closed(a.p, parity, a.z);
  r.numeric_closed = r.analytic;
  series::BruteQuery q{a.p, a.z, parity, false, std::nullopt, opt.tol * 1e-2, opt.k_max};
  auto tr = series::brute_sum(q);
  r.numeric_brute = tr.value();
  finish(std::move(r), tr);
  return out;
}

void emit_sweep(std::ostream& os, Format f, const std::vector<VerificationReport>& reports) {
  if (f == Format::csv) os << "rule,model,n,terms,partial_sum,abs_err\n";
  if (f == Format::json) os << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto& tr = std::get<TruncationTrace>(r.trace);
    const double n = r.params.at("n");
    if (f == Format::json) {
      os << "  {\"rule\":" << io::json_string(r.rule_id) << ",\"model\":" << io::json_string(r.model)
         << ",\"n\":" << io::format_double(n) << ",\"analytic\":" << io::format_double(r.analytic)
         << ",\"tail_estimate\":" << io::format_double(tr.tail_estimate) << ",\"checkpoints\":[";
      for (std::size_t j = 0; j < tr.checkpoints.size(); ++j) os << (j ? "," : "") << tr.checkpoints[j];
      os << "],\"partial_sums\":[";
      for (std::size_t j = 0; j < tr.partial_sums.size(); ++j)
        os << (j ? "," : "") << io::format_double(tr.partial_sums[j]);
      os << "]}" << (i + 1 < reports.size() ? ",\n" : "\n");
      continue;
    }
    for (std::size_t j = 0; j < tr.checkpoints.size(); ++j) {
      const double err = std::abs(tr.partial_sums[j] - r.analytic);
      if (f == Format::csv) {
        os << r.rule_id << ',' << r.model << ',' << io::format_double(n) << ',' << tr.checkpoints[j] << ','
           << io::format_double(tr.partial_sums[j]) << ',' << io::format_double(err) << '\n';
      } else {
        os << r.rule_id << " n=" << io::format_short(n) << " terms=" << tr.checkpoints[j]
           << " partial=" << io::format_short(tr.partial_sums[j], 15) << " err=" << io::format_short(err, 3)
           << '\n';
      }
    }
  }
  if (f == Format::json) os << "]\n";
}

const char* kCsvNote =
    "CSV columns (verify, stark, series): rule,model,n,q,F,analytic,numeric_closed,numeric_brute,"
    "rel_err_closed,rel_err_brute,passed,terms_used,evaluations,error_bound,B_odd,B_even. "
    "CSV columns (sweep): rule,model,n,terms,partial_sum,abs_err.";

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty entry in list '" + text + "'");
    if (auto pos = part.find(".."); pos != std::string::npos) {
      const int lo = to_int(part.substr(0, pos));
      const int hi = to_int(part.substr(pos + 2));
      if (hi < lo) throw UsageError("empty range '" + part + "'");
      for (int i = lo; i <= hi; ++i) out.push_back(i);
    } else {
      out.push_back(to_int(part));
    }
  }
  if (out.empty()) throw UsageError("empty list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(to_double(part));
  }
  if (out.empty()) throw UsageError("empty list");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of quantum sum rules for the square well and the delta well"};
  app.footer(kCsvNote);
  app.require_subcommand(1);

  Common verify_c, stark_c, series_c, sweep_c;
  std::string rule = "all";
  std::string n_text = "1";
  std::string q_text = "1";
  double field = 1.0;
  SeriesArgs sa;
  std::string sweep_rule = "trk";

  auto* verify = app.add_subcommand("verify", "check closure, TRK, monopole and Bethe sum rules");
  verify_c.add_to(*verify);
  verify->add_option("--rule", rule, "closure, trk, monopole, bethe or all")
      ->check(CLI::IsMember({"closure", "trk", "monopole", "bethe", "all"}));
  verify->add_option("--n", n_text, "square-well levels, e.g. 1..20 or 1,3,5");
  verify->add_option("--q", q_text, "Bethe momentum transfers, e.g. 0.1,1,10");

  auto* stark = app.add_subcommand("stark", "second-order Stark shifts by perturbation sum and closed form");
  stark_c.add_to(*stark);
  stark->add_option("--n", n_text, "square-well levels");
  stark->add_option("--F", field, "field strength");

  auto* ser = app.add_subcommand("series", "evaluate S_p sums, weighted sums or the removed-term limit");
  series_c.add_to(*ser);
  ser->add_option("--p", sa.p, "power p");
  ser->add_option("--z", sa.z, "argument z");
  ser->add_option("--parity", sa.parity, "all, even or odd")->check(CLI::IsMember({"all", "even", "odd"}));
  ser->add_option("--n", sa.n_text, "integer arguments for --weighted / --removed");
  ser->add_flag("--weighted", sa.weighted, "sum of k^2/(k^2-n^2)^p over k of parity opposite to n");
  ser->add_flag("--removed", sa.removed, "limit of the all-k sum with the k=n term removed");

  auto* sweep = app.add_subcommand("sweep", "export the partial-sum convergence trace (square well)");
  sweep_c.add_to(*sweep);
  sweep->add_option("--rule", sweep_rule, "closure, trk or monopole")
      ->check(CLI::IsMember({"closure", "trk", "monopole"}));
  sweep->add_option("--n", n_text, "square-well levels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Common& c = verify->parsed() ? verify_c : stark->parsed() ? stark_c : ser->parsed() ? series_c : sweep_c;
  std::ofstream file;
  try {
    // Validate everything before doing any work.
    const auto model = c.spec();
    const auto opt = c.options();
    if (!c.out_path.empty()) {
      file.open(c.out_path);
      if (!file) throw UsageError("cannot open output file '" + c.out_path + "'");
    }
    std::ostream& os = c.out_path.empty() ? out : file;
    std::vector<VerificationReport> reports;

    if (verify->parsed()) {
      const bool isw = model.kind() == ModelKind::isw;
      if (rule == "bethe" && isw) throw UsageError("the Bethe rule needs --model delta");
      std::vector<std::string> rules =
          rule == "all" ? std::vector<std::string>{"closure", "trk", "monopole"} : std::vector<std::string>{rule};
      if (rule == "all" && !isw) rules.push_back("bethe");
      const auto ns = isw ? levels(n_text) : std::vector<int>{1};
      const auto qs = parse_double_list(q_text);
      for (double q : qs)
        if (!(q > 0.0)) throw UsageError("--q values must be positive");
      for (const auto& id : rules) {
        const bool bethe = id == "bethe";
        for (int n : ns) {
          for (double q : bethe ? qs : std::vector<double>{0.0}) {
            try {
              reports.push_back(sumrules::verify(*rule_from_id(id, q), model, n, opt));
            } catch (const Error& e) {
              err << id << ": " << e.what() << '\n';
              std::map<std::string, double> params;
              if (isw) params["n"] = n;
              if (bethe) params["q"] = q;
              reports.push_back(failed_report(id, model, params, opt.tol));
            }
          }
        }
      }
      emit_reports(os, c.fmt(), reports);
    } else if (stark->parsed()) {
      const auto ns = model.kind() == ModelKind::isw ? levels(n_text) : std::vector<int>{1};
      for (int n : ns) {
        try {
          reports.push_back(stark_verify(model, n, field, opt));
        } catch (const Error& e) {
          err << "stark: " << e.what() << '\n';
          reports.push_back(failed_report("stark", model, {{"n", n}, {"F", field}}, opt.tol));
        }
      }
      emit_reports(os, c.fmt(), reports);
    } else if (ser->parsed()) {
      if (sa.weighted && sa.removed) throw UsageError("--weighted and --removed are exclusive");
      try {
        reports = run_series(sa, c);
      } catch (const UsageError&) {
        throw;
      } catch (const InvalidSpec& e) {
        throw UsageError(e.what());
      } catch (const Unsupported& e) {
        throw UsageError(e.what());
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      } catch (const PoleError& e) {
        throw UsageError(e.what());
      }
      emit_reports(os, c.fmt(), reports);
    } else {
      if (model.kind() != ModelKind::isw) throw UsageError("sweep needs --model isw");
      for (int n : levels(n_text)) reports.push_back(sumrules::verify(*rule_from_id(sweep_rule), model, n, opt));
      emit_sweep(os, c.fmt(), reports);
    }
    os.flush();
    if (!os) throw UsageError("failed writing output");
    return all_passed(reports) ? 0 : 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace sumrules::cli
