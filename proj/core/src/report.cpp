#include <cmath>
#include <ostream>
#include <string>
#include <type_traits>

#include "ccc/analysis.hpp"
#include "ccc/csv.hpp"

namespace ccc::analysis {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T>
void write_list(std::ostream& os, const std::vector<T>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ' ';
    if constexpr (std::is_floating_point_v<T>) {
      os << csv::format_double(xs[i]);
    } else {
      os << xs[i];
    }
  }
}

}  // namespace

void write_report_text(std::ostream& os, const CertificationReport& r) {
  using csv::format_double;
  os << "certification report\n";
  os << "n = " << r.n << "\n";
  os << "horizon = " << r.horizon << "\n";
  os << "tau = " << r.tau << "\n";
  os << "kappa_tau = " << format_double(r.kappa_tau) << "\n";
  os << "mu_interval = (" << format_double(r.interval.lower) << ", "
     << format_double(r.interval.upper) << ")\n";
  os << "mu_star = " << format_double(r.mu_star) << "\n";
  os << "m_kappa = " << format_double(r.m_kappa) << "\n";
  os << "mu = " << format_double(r.mu) << "\n";
  os << "delta = " << format_double(r.delta) << "\n";
  os << "n_bound = " << format_double(r.n_bound) << "\n";
  os << "transitions = " << r.transition_times.size() << "\n";
  os << "transition_times = ";
  write_list(os, r.transition_times);
  os << "\n";
  os << "t_prime = " << r.t_prime << "\n";
  os << "limsup_tail = " << format_double(r.limsup_value) << " (threshold "
     << format_double(r.limsup_threshold) << ", approximate)\n";
  os << "f = " << format_double(r.f) << "\n";
  os << "g = " << format_double(r.g) << "\n";
  os << "worst_case = " << format_double(r.worst_case) << "\n";
  os << "max_state_norm = " << format_double(r.max_state_norm) << "\n";
  if (r.x0_norm_substituted) os << "x0 outside span(W): bound uses ||A0 x0||_W\n";
  os << "a0_norm = " << format_double(r.a0_norm) << "\n";
  os << "input_constant = " << format_double(r.input_constant) << "\n";
  os << "max_input_norm = " << format_double(r.max_input_norm) << "\n";
  os << "alpha = " << format_double(r.alpha) << "\n";
  os << "beta = " << format_double(r.beta) << "\n";
  os << "v2_after_last = " << format_double(r.v2_after_last) << "\n";
  os << "closed_loop_residual = " << format_double(r.closed_loop_residual) << "\n";
  os << "deadbeat_residual = " << format_double(r.deadbeat_residual) << "\n";
  os << "kappa_series = ";
  write_list(os, r.kappa);
  os << "\n";
  os << "state_norm_series = ";
  write_list(os, r.state_norm);
  os << "\n";
  for (std::size_t i = 0; i < r.state_norm.size(); ++i) {
    if (std::isinf(r.state_norm[i])) os << "unbounded-norm state at t = " << i << "\n";
  }
  os << "\nverdicts\n";
  for (const auto& v : r.verdicts) {
    os << (v.passed ? "PASS " : "FAIL ") << v.name;
    if (v.approximate) os << " [approximate]";
    os << ": " << v.detail << "\n";
  }
  os << "overall = " << (r.all_passed() ? "PASS" : "FAIL") << "\n";
}

void write_report_csv(std::ostream& os, const CertificationReport& r) {
  os << "verdict,passed,approximate,detail\n";
  for (const auto& v : r.verdicts) {
    os << v.name << ',' << (v.passed ? 1 : 0) << ',' << (v.approximate ? 1 : 0) << ','
       << quote(v.detail) << '\n';
  }
}

}  // namespace ccc::analysis
