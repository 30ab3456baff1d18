#include "hyperzeta/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace hyperzeta {
namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw ZetaError(ErrorCode::kParseError, what); }

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_space();
    return i_ >= s_.size();
  }
  bool accept(char c) {
    skip_space();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  int64_t integer() {
    skip_space();
    size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
    if (start < s_.size() && s_[start] == '+') ++start;
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + s_.size(), v);
    if (ec == std::errc::result_out_of_range) fail("integer out of range");
    if (ec != std::errc() || ptr == s_.data() + start) fail("expected an integer");
    i_ = static_cast<size_t>(ptr - s_.data());
    return v;
  }
  char peek() {
    skip_space();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) const {
    parse_fail("position " + std::to_string(i_ + 1) + ": " + what);
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
};

std::string strip(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Re-raises a ParseError from a value parser with the setting's name in front.
template <class F>
auto with_key(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const ZetaError& e) {
    if (e.code() != ErrorCode::kParseError) throw;
    const std::string prefix = std::string(error_name(ErrorCode::kParseError)) + ": ";
    parse_fail(key + ": " + std::string(e.what()).substr(prefix.size()));
  }
}

int64_t parse_int(std::string_view text, const std::string& key) {
  return with_key(key, [&] {
    Scanner s(text);
    const int64_t v = s.integer();
    if (!s.done()) s.fail("trailing characters");
    return v;
  });
}

const std::vector<std::string> kKeys = {"p",     "n",     "modulus", "P",      "precision", "guard",
                                        "trunc", "basis", "verify",  "format", "threads",   "budget"};

nlohmann::json integer_json(Integer v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<int64_t>(v);
  return to_string(v);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string r;
  for (size_t i = 0; i < parts.size(); ++i) r += (i ? sep : "") + parts[i];
  return r;
}

std::string coeff_text(const std::vector<int64_t>& c, int n) {
  if (n == 1) return std::to_string(c.empty() ? 0 : c[0]);
  std::vector<std::string> parts;
  for (int k = 0; k < n; ++k) parts.push_back(std::to_string(k < static_cast<int>(c.size()) ? c[k] : 0));
  return "[" + join(parts, ", ") + "]";
}

std::string integers_text(const std::vector<Integer>& v) {
  std::vector<std::string> parts;
  for (auto x : v) parts.push_back(to_string(x));
  return "[" + join(parts, ", ") + "]";
}

std::string poly_text(const std::vector<Integer>& Q) {
  std::string r;
  for (size_t i = 0; i < Q.size(); ++i) {
    if (Q[i] == 0) continue;
    const Integer a = Q[i] < 0 ? -Q[i] : Q[i];
    r += r.empty() ? (Q[i] < 0 ? "-" : "") : (Q[i] < 0 ? " - " : " + ");
    if (i == 0 || a != 1) r += to_string(a);
    if (i >= 1) r += "t";
    if (i >= 2) r += "^" + std::to_string(i);
  }
  return r.empty() ? "0" : r;
}

nlohmann::json report_json(const ZetaResult& r, const JobConfig& job, const VerifyReport* v) {
  nlohmann::json j;
  j["status"] = "ok";
  j["p"] = r.p;
  j["n"] = r.n;
  j["q"] = integer_json(r.q);
  j["modulus"] = r.spec.modulus;
  j["P_lift"] = r.lifted_P;
  j["genus"] = r.genus;
  j["basis"] = basis_name(r.basis);
  j["plan"] = {{"N", r.plan.N}, {"guard", r.plan.guard}, {"Nw", r.plan.Nw}, {"K", r.plan.K},
               {"guard_required", r.plan.guard_required}};
  nlohmann::json Q = nlohmann::json::array();
  for (auto a : r.Q) Q.push_back(integer_json(a));
  j["Q"] = Q;
  j["group_order"] = integer_json(r.group_order);
  nlohmann::json counts = nlohmann::json::array();
  for (size_t m = 0; m < r.counts.size(); ++m) counts.push_back({{"m", m + 1}, {"count", integer_json(r.counts[m])}});
  j["counts"] = counts;
  j["guard_consumed"] = r.guard_consumed;
  j["denominator"] = r.denominator;
  j["det_check_digits"] = r.det_check_digits;
  if (v) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : v->entries) {
      nlohmann::json x{{"m", e.m}, {"predicted", integer_json(e.predicted)}};
      if (e.observed) {
        x["observed"] = *e.observed;
        x["status"] = e.agree() ? "agree" : "mismatch";
      } else {
        x["observed"] = nullptr;
        x["status"] = "budget_exceeded";
      }
      entries.push_back(x);
    }
    j["verify"] = entries;
  }
  if (job.telemetry) {
    j["telemetry"] = {{"wall_seconds", r.times.total},
                      {"stage_seconds",
                       {{"lift", r.times.lift}, {"frobenius", r.times.frobenius}, {"charpoly", r.times.charpoly}}},
                      {"peak_memory_kb", r.peak_memory_kb},
                      {"threads", job.options.threads}};
  }
  return j;
}

void report_text(std::ostream& out, const ZetaResult& r, const JobConfig& job, const VerifyReport* v) {
  std::vector<std::string> mod, lift;
  for (auto c : r.spec.modulus) mod.push_back(std::to_string(c));
  for (const auto& c : r.lifted_P) lift.push_back(coeff_text(c, r.n));
  out << "field            F_" << to_string(r.q) << "  (p = " << r.p << ", n = " << r.n << ")\n";
  out << "modulus          [" << join(mod, ", ") << "]\n";
  out << "P (lift)         [" << join(lift, ", ") << "]\n";
  out << "genus            " << r.genus << "\n";
  out << "basis            " << basis_name(r.basis) << "\n";
  out << "plan             N = " << r.plan.N << ", guard = " << r.plan.guard << ", Nw = " << r.plan.Nw
      << ", K = " << r.plan.K << "\n";
  out << "Q                " << integers_text(r.Q) << "\n";
  out << "Q(t)             " << poly_text(r.Q) << "\n";
  out << "group order      " << to_string(r.group_order) << "\n";
  for (size_t m = 0; m < r.counts.size(); ++m) {
    out << "#X(F_q^" << m + 1 << ")" << std::string(m + 1 >= 10 ? 7 : 8, ' ') << to_string(r.counts[m]) << "\n";
  }
  out << "guard consumed   " << r.guard_consumed << " of " << r.plan.guard << " digits\n";
  out << "denominator      p^" << r.denominator << "\n";
  out << "det check        " << r.det_check_digits << " digits\n";
  if (v) {
    for (const auto& e : v->entries) {
      out << "verify m=" << e.m << "       predicted " << to_string(e.predicted) << ", counted ";
      if (e.observed) {
        out << *e.observed << (e.agree() ? "  agree" : "  MISMATCH") << "\n";
      } else {
        out << "-  budget exceeded\n";
      }
    }
  }
  if (job.telemetry) {
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(3);
    t << r.times.total << " s (lift " << r.times.lift << ", frobenius " << r.times.frobenius << ", charpoly "
      << r.times.charpoly << ")";
    out << "wall time        " << t.str() << "\n";
    out << "peak memory      " << r.peak_memory_kb << " KB\n";
  }
}

}  // namespace

std::vector<std::vector<int64_t>> parse_coefficients(std::string_view text, int n) {
  Scanner s(text);
  std::vector<std::vector<int64_t>> out;
  if (s.done()) s.fail("empty coefficient list");
  do {
    if (s.accept('[')) {
      std::vector<int64_t> c;
      if (s.peek() != ']') {
        do c.push_back(s.integer());
        while (s.accept(','));
      }
      s.expect(']');
      if (static_cast<int>(c.size()) != n) {
        s.fail("bracketed coefficient has " + std::to_string(c.size()) + " entries, expected n = " + std::to_string(n));
      }
      out.push_back(std::move(c));
    } else {
      out.push_back({s.integer()});
    }
  } while (s.accept(','));
  if (!s.done()) s.fail("expected ',' or end of list");
  return out;
}

std::vector<int64_t> parse_int_list(std::string_view text) {
  Scanner s(text);
  const bool bracket = s.accept('[');
  std::vector<int64_t> out;
  do out.push_back(s.integer());
  while (s.accept(','));
  if (bracket) s.expect(']');
  if (!s.done()) s.fail("expected ',' or end of list");
  return out;
}

std::map<std::string, std::string> parse_curve_file(std::string_view text, const std::string& origin) {
  std::map<std::string, std::string> out;
  size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (strip(line).empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(where + ": expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      parse_fail(where + ":1: unknown key '" + key + "'");
    }
    if (value.empty()) parse_fail(where + ":" + std::to_string(eq + 2) + ": empty value for '" + key + "'");
    if (out.count(key)) parse_fail(where + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

JobConfig make_job(const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) parse_fail("unknown setting '" + key + "'");
  }
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = settings.find(k);
    return it == settings.end() ? nullptr : &it->second;
  };
  JobConfig job;
  if (!get("p")) parse_fail("missing required setting 'p'");
  if (!get("P")) parse_fail("missing required setting 'P'");
  const int64_t p = parse_int(*get("p"), "p");
  if (p < 2) throw ZetaError(ErrorCode::kInvalidParams, "p must be a prime, got " + std::to_string(p));
  job.spec.p = static_cast<uint64_t>(p);
  if (auto v = get("n")) {
    const int64_t n = parse_int(*v, "n");
    if (n < 1 || n > 64) throw ZetaError(ErrorCode::kInvalidParams, "n must be between 1 and 64");
    job.spec.n = static_cast<int>(n);
  }
  if (auto v = get("modulus")) job.spec.modulus = with_key("modulus", [&] { return parse_int_list(*v); });
  job.spec.coeffs = with_key("P", [&] { return parse_coefficients(*get("P"), job.spec.n); });

  auto& o = job.options.overrides;
  if (auto v = get("precision")) o.precision = static_cast<int>(parse_int(*v, "precision"));
  if (auto v = get("guard")) {
    const std::string g = strip(*v);
    o.guard_relative = !g.empty() && g[0] == '+';
    o.guard = static_cast<int>(parse_int(o.guard_relative ? std::string_view(g).substr(1) : std::string_view(g), "guard"));
    if (*o.guard < 0) throw ZetaError(ErrorCode::kInvalidParams, "guard must be non-negative");
  }
  if (auto v = get("trunc")) o.truncation = static_cast<int>(parse_int(*v, "trunc"));
  if (auto v = get("basis")) {
    const std::string b = strip(*v);
    if (b == "y1") {
      job.options.basis = BasisMode::kY1;
    } else if (b == "y3") {
      job.options.basis = BasisMode::kY3;
    } else {
      parse_fail("basis: expected 'y1' or 'y3', got '" + b + "'");
    }
  }
  if (auto v = get("verify")) {
    const int64_t m = parse_int(*v, "verify");
    if (m < 0 || m > 64) throw ZetaError(ErrorCode::kInvalidParams, "verify depth must be between 0 and 64");
    job.verify = static_cast<int>(m);
  }
  if (auto v = get("format")) {
    const std::string f = strip(*v);
    if (f == "text") {
      job.format = OutputFormat::kText;
    } else if (f == "json-like" || f == "json") {
      job.format = OutputFormat::kJson;
    } else {
      parse_fail("format: expected 'text' or 'json-like', got '" + f + "'");
    }
  }
  job.options.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (auto v = get("threads")) {
    const int64_t t = parse_int(*v, "threads");
    if (t < 1 || t > 1024) throw ZetaError(ErrorCode::kInvalidParams, "threads must be between 1 and 1024");
    job.options.threads = static_cast<int>(t);
  }
  if (auto v = get("budget")) {
    const int64_t b = parse_int(*v, "budget");
    if (b < 1) throw ZetaError(ErrorCode::kInvalidParams, "budget must be positive");
    job.budget = static_cast<uint64_t>(b);
  }
  return job;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kParamMismatch:
    case ErrorCode::kNotSquarefree:
    case ErrorCode::kNotMonic:
    case ErrorCode::kWrongDegree:
    case ErrorCode::kEvenCharacteristic:
    case ErrorCode::kCurveMismatch:
    case ErrorCode::kNewtonNonconvergence:
      return 2;
    case ErrorCode::kPrecisionRange:
    case ErrorCode::kGuardExhausted:
    case ErrorCode::kLiftAmbiguous:
      return 3;
    case ErrorCode::kBudgetExceeded:
      return 5;
    default:
      return 1;
  }
}

bool parse_input(int argc, char** argv, JobConfig& job, int& exit_code, std::ostream& err) {
  CLI::App app{"Zeta function and Jacobian order of y^2 = P(x) over F_q, q = p^n"};
  std::map<std::string, std::string> flags;
  std::string file;
  bool no_telemetry = false;
  const std::map<std::string, std::string> help = {
      {"p", "odd prime p"},
      {"n", "extension degree n (q = p^n)"},
      {"modulus", "F_q modulus, n+1 integers, constant first, monic"},
      {"P", "coefficients of P, constant first; each an integer or [d0,...,d(n-1)]"},
      {"precision", "target digits N"},
      {"guard", "guard digits, absolute or +k over the default"},
      {"trunc", "last retained Frobenius series term K"},
      {"basis", "y1 (x^i dx/y) or y3 (x^i dx/y^3)"},
      {"verify", "compare with brute-force counts for m = 1..M"},
      {"format", "text or json-like"},
      {"threads", "worker threads (default: hardware concurrency)"},
      {"budget", "brute-force enumeration budget (field elements)"},
  };
  std::map<std::string, CLI::Option*> opts;
  for (const auto& key : kKeys) opts[key] = app.add_option("--" + key, flags[key], help.at(key));
  app.add_option("--curve-file", file, "read 'key = value' settings from a file; flags take precedence");
  app.add_flag("--no-telemetry", no_telemetry, "omit wall time and memory from the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e, err, err);
    if (exit_code != 0) exit_code = 2;
    return false;
  }
  try {
    std::map<std::string, std::string> settings;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) parse_fail("cannot read curve file '" + file + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      settings = parse_curve_file(buf.str(), file);
    }
    for (const auto& key : kKeys) {
      if (opts[key]->count() > 0) settings[key] = flags[key];
    }
    job = make_job(settings);
    job.telemetry = !no_telemetry;
  } catch (const ZetaError& e) {
    err << "error: " << e.what() << "\n";
    exit_code = exit_code_for(e.code());
    return false;
  }
  return true;
}

int run(const JobConfig& job, std::ostream& out, std::ostream& err) {
  try {
    const ZetaResult r = assemble_zeta(job.spec, job.options);
    VerifyReport report;
    const VerifyReport* v = nullptr;
    if (job.verify > 0) {
      report = verify(r.spec, r.Q, job.verify, job.budget, job.options.threads);
      v = &report;
    }
    if (job.format == OutputFormat::kJson) {
      out << report_json(r, job, v).dump(2) << "\n";
    } else {
      report_text(out, r, job, v);
    }
    if (v && !report.entries.empty()) {
      for (const auto& e : report.entries) {
        if (e.observed && !e.agree()) return 4;
      }
      if (report.budget_exceeded()) return 5;
    }
    return 0;
  } catch (const ZetaError& e) {
    if (job.format == OutputFormat::kJson) {
      nlohmann::json j{{"status", "error"}, {"error", std::string(error_name(e.code()))}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace hyperzeta
