#pragma once

// Text, JSON and CSV rendering of verification reports. Numbers are written
// with 17 significant digits so a parse reproduces the double exactly.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sumrules/core.hpp"

namespace sumrules::io {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_short(double v, int digits = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline double component(const VerificationReport& r, const std::string& name) {
  for (const auto& [k, v] : r.components)
    if (k == name) return v;
  return std::nan("");
}

inline void write_json(std::ostream& os, const VerificationReport& r) {
  os << "{\"rule\":" << json_string(r.rule_id) << ",\"model\":" << json_string(r.model) << ",\"params\":{";
  bool first = true;
  for (const auto& [k, v] : r.params) {
    os << (first ? "" : ",") << json_string(k) << ':' << format_double(v);
    first = false;
  }
  os << "},\"analytic\":" << format_double(r.analytic) << ",\"numeric_closed\":" << format_double(r.numeric_closed)
     << ",\"numeric_brute\":" << format_double(r.numeric_brute)
     << ",\"rel_err_closed\":" << format_double(r.rel_err_closed) << ",\"rel_err_brute\":" << format_double(r.rel_err)
     << ",\"tolerance\":" << format_double(r.tolerance) << ",\"passed\":" << (r.passed ? "true" : "false")
     << ",\"trace\":{";
  if (const auto* t = std::get_if<TruncationTrace>(&r.trace)) {
    os << "\"terms_used\":" << t->terms_used << ",\"tail_estimate\":" << format_double(t->tail_estimate)
       << ",\"converged\":" << (t->converged ? "true" : "false");
  } else {
    const auto& q = std::get<QuadratureResult>(r.trace);
    os << "\"evaluations\":" << q.evaluations << ",\"est_error\":" << format_double(q.est_error)
       << ",\"converged\":" << (q.converged ? "true" : "false");
  }
  os << "},\"components\":{";
  first = true;
  for (const auto& [k, v] : r.components) {
    os << (first ? "" : ",") << json_string(k) << ':' << format_double(v);
    first = false;
  }
  os << "}}";
}

inline void write_json(std::ostream& os, const std::vector<VerificationReport>& reports) {
  os << "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    os << "  ";
    write_json(os, reports[i]);
    os << (i + 1 < reports.size() ? ",\n" : "\n");
  }
  os << "]\n";
}

inline const char* csv_header() {
  return "rule,model,n,q,F,analytic,numeric_closed,numeric_brute,rel_err_closed,rel_err_brute,passed,"
         "terms_used,evaluations,error_bound,B_odd,B_even";
}

inline void write_csv_row(std::ostream& os, const VerificationReport& r) {
  auto param = [&](const char* key) {
    auto it = r.params.find(key);
    return it == r.params.end() ? std::string() : format_double(it->second);
  };
  auto opt = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  std::size_t terms = 0;
  std::size_t evals = 0;
  if (const auto* t = std::get_if<TruncationTrace>(&r.trace)) terms = t->terms_used;
  else evals = std::get<QuadratureResult>(r.trace).evaluations;
  os << r.rule_id << ',' << r.model << ',' << param("n") << ',' << param("q") << ',' << param("F") << ','
     << format_double(r.analytic) << ',' << format_double(r.numeric_closed) << ','
     << format_double(r.numeric_brute) << ',' << format_double(r.rel_err_closed) << ','
     << format_double(r.rel_err) << ',' << (r.passed ? "true" : "false") << ',' << terms << ',' << evals << ','
     << format_double(error_bound(r.trace)) << ',' << opt(component(r, "B_odd")) << ','
     << opt(component(r, "B_even")) << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<VerificationReport>& reports) {
  os << csv_header() << '\n';
  for (const auto& r : reports) write_csv_row(os, r);
}

namespace detail {
inline std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}
}  // namespace detail

/// Human-readable table; Bethe rows show the channel split, Stark rows the sign.
inline void write_text(std::ostream& os, const std::vector<VerificationReport>& reports) {
  using detail::pad;
  for (const auto& r : reports) {
    std::ostringstream line;
    line << pad(r.rule_id, 10) << pad(r.model, 7);
    if (auto it = r.params.find("n"); it != r.params.end()) line << pad("n=" + format_short(it->second), 7);
    if (auto it = r.params.find("q"); it != r.params.end()) line << pad("q=" + format_short(it->second), 10);
    if (auto it = r.params.find("F"); it != r.params.end()) line << pad("F=" + format_short(it->second), 9);
    if (r.rule_id == "bethe") {
      line << pad("B_o=" + format_short(component(r, "B_odd"), 10), 20)
           << pad("B_e=" + format_short(component(r, "B_even"), 10), 20)
           << pad("total=" + format_short(r.numeric_closed, 10), 22)
           << pad("q^2/2=" + format_short(r.analytic, 10), 22);
    } else {
      line << pad("analytic=" + format_short(r.analytic, 12), 28)
           << pad("closed=" + format_short(r.numeric_closed, 12), 26)
           << pad("brute=" + format_short(r.numeric_brute, 12), 25);
    }
    if (r.rule_id == "stark") line << pad(r.analytic < 0 ? "sign=-" : (r.analytic > 0 ? "sign=+" : "sign=0"), 8);
    line << pad("err_c=" + format_short(r.rel_err_closed, 3), 16) << pad("err_b=" + format_short(r.rel_err, 3), 16)
         << (r.passed ? "PASS" : "FAIL");
    os << line.str() << '\n';
  }
}

}  // namespace sumrules::io
