#include "frechet/cli_bench.hpp"

#include "frechet/simplification.hpp"

#include "json.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace frechet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

BigInt pow10(unsigned k) {
  BigInt r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
T parse_number(std::string_view s, const char* field) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError(std::string("bad ") + field + " field '" + std::string(s) + "'", 0);
  return v;
}

BigInt parse_bigint(std::string_view s, const char* field) {
  std::size_t i = s.size() > 0 && s[0] == '-' ? 1 : 0;
  if (i == s.size() || !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(), is_digit))
    throw ParseError(std::string("bad ") + field + " field '" + std::string(s) + "'", 0);
  return BigInt(std::string(s));
}

}  // namespace

std::int64_t quantize(std::string_view s, int scale, std::size_t line) {
  auto fail = [&] { return ParseError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'", line); };
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  BigInt mant = 0;
  long exp = scale, digits = 0;
  for (; i < s.size() && is_digit(s[i]); ++i, ++digits) mant = mant * 10 + (s[i] - '0');
  if (i < s.size() && s[i] == '.')
    for (++i; i < s.size() && is_digit(s[i]); ++i, ++digits, --exp) mant = mant * 10 + (s[i] - '0');
  if (digits == 0) throw fail();
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    if (i == s.size()) throw fail();
    long e = 0;
    for (; i < s.size() && is_digit(s[i]); ++i) e = std::min<long>(e * 10 + (s[i] - '0'), 100000);
    exp += eneg ? -e : e;
  }
  if (i != s.size()) throw fail();
  BigInt q;
  if (mant == 0) {
    q = 0;
  } else if (exp >= 0) {
    if (exp > 20) throw RangeError("line " + std::to_string(line) + ": value out of 32-bit range", line);
    q = mant * pow10(static_cast<unsigned>(exp));
  } else if (-exp > 400) {
    q = 0;
  } else {
    const BigInt d = pow10(static_cast<unsigned>(-exp));
    q = mant / d;
    if (2 * (mant % d) >= d) q += 1;
  }
  if (negative) q = -q;
  if (q > std::numeric_limits<std::int32_t>::max() || q < std::numeric_limits<std::int32_t>::min())
    throw RangeError("line " + std::to_string(line) + ": value out of 32-bit range", line);
  return q.convert_to<std::int64_t>();
}

Curve parse_curve_text(std::string_view text, int scale) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  std::size_t line = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line;
    std::vector<std::string_view> tok;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      const std::size_t b = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > b) tok.push_back(raw.substr(b, i - b));
    }
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2) throw ParseError("line " + std::to_string(line) + ": expected two coordinates", line);
    pts.emplace_back(quantize(tok[0], scale, line), quantize(tok[1], scale, line));
  }
  if (pts.empty()) throw ParseError("no vertices", line);
  return Curve::from_integers(pts);
}

Curve parse_curve_file(const std::filesystem::path& path, int scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curve_text(ss.str(), scale);
}

void write_curve(std::ostream& os, const Curve& c) {
  for (const Point& p : c.vertices()) os << p.x << ' ' << p.y << '\n';
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  DatasetManifest m;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    m.name = j.value("name", path.stem().string());
    m.scale = j.value("scale", 0);
    for (const auto& f : j.at("curves")) m.files.push_back(path.parent_path() / f.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  for (const auto& f : m.files) parse_curve_file(f, m.scale);
  return m;
}

std::optional<PairSelection> parse_pair_selection(std::string_view s) {
  if (s == "all") return PairSelection{PairMode::All, 0};
  if (s == "choose2") return PairSelection{PairMode::Choose2, 0};
  if (s.starts_with("first:")) {
    std::size_t k = 0;
    const std::string_view v = s.substr(6);
    const auto r = std::from_chars(v.data(), v.data() + v.size(), k);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) return std::nullopt;
    return PairSelection{PairMode::First, k};
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> select_pairs(std::size_t curves, const PairSelection& sel) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < curves; ++i)
    for (std::size_t j = sel.mode == PairMode::All ? 0 : i + 1; j < curves; ++j)
      if (i != j) out.emplace_back(i, j);
  if (sel.mode == PairMode::First && out.size() > sel.first) out.resize(sel.first);
  return out;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::Error: return "error";
  }
  return "?";
}

std::string csv_header() {
  return "pair_id,n,m,engine,simplify,wall_seconds,parse_seconds,rational_num,rational_den,radicand_num,"
         "radicand_den,root_sign,iterations,vertices_inserted,status";
}

std::string to_csv(const ResultRecord& r) {
  std::ostringstream os;
  os << r.pair_id << ',' << r.n << ',' << r.m << ',' << to_string(r.engine) << ',' << (r.simplify ? "on" : "off")
     << ',' << format_double(r.wall_seconds) << ',' << format_double(r.parse_seconds) << ','
     << r.value.rational.num() << ',' << r.value.rational.den() << ',' << r.value.radicand.num() << ','
     << r.value.radicand.den() << ',' << r.value.sign << ',' << r.iterations << ',' << r.vertices_inserted << ','
     << to_string(r.status);
  return os.str();
}

ResultRecord parse_csv_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = split(line, ',');
  if (f.size() != 15) throw ParseError("expected 15 fields, got " + std::to_string(f.size()), 0);
  ResultRecord r;
  r.pair_id = std::string(f[0]);
  r.n = parse_number<std::size_t>(f[1], "n");
  r.m = parse_number<std::size_t>(f[2], "m");
  const auto engine = parse_engine(f[3]);
  if (!engine) throw ParseError("bad engine field", 0);
  r.engine = *engine;
  if (f[4] != "on" && f[4] != "off") throw ParseError("bad simplify field", 0);
  r.simplify = f[4] == "on";
  r.wall_seconds = parse_number<double>(f[5], "wall_seconds");
  r.parse_seconds = parse_number<double>(f[6], "parse_seconds");
  const BigInt rd = parse_bigint(f[8], "rational_den"), cd = parse_bigint(f[10], "radicand_den");
  if (rd <= 0 || cd <= 0) throw ParseError("denominator must be positive", 0);
  const int sign = parse_number<int>(f[11], "root_sign");
  r.value = ExactRoot(IntFraction(parse_bigint(f[7], "rational_num"), rd),
                      IntFraction(parse_bigint(f[9], "radicand_num"), cd), sign);
  r.iterations = parse_number<std::size_t>(f[12], "iterations");
  r.vertices_inserted = parse_number<std::size_t>(f[13], "vertices_inserted");
  if (f[14] == "ok") r.status = RunStatus::Ok;
  else if (f[14] == "timeout") r.status = RunStatus::Timeout;
  else if (f[14] == "error") r.status = RunStatus::Error;
  else throw ParseError("bad status field", 0);
  return r;
}

std::vector<ResultRecord> read_csv(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty() || (no == 1 && line.starts_with("pair_id,"))) continue;
    try {
      out.push_back(parse_csv_record(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(no) + ": " + e.what(), no);
    }
  }
  return out;
}

PairOutcome compute_pair(const Curve& a, const Curve& b, Engine engine, bool simplify) {
  PairOutcome out;
  if (simplify) {
    LosslessOptions opt;
    opt.engine = engine;
    const LosslessResult r = lossless_compute(a, b, opt);
    out.value2 = r.value2;
    out.iterations = r.solves;
    out.vertices_inserted = r.vertices_inserted;
  } else {
    const FrechetResult r = compute_exact_frechet(a, b, {engine});
    out.value2 = r.value2;
    out.iterations = r.solves;
    out.vertices_inserted = r.vertices_inserted;
  }
  return out;
}

namespace {

ResultRecord run_child(const DatasetManifest& manifest, std::size_t i, std::size_t j, const RunOptions& o,
                       ResultRecord r) {
  const auto t0 = Clock::now();
  const Curve a = parse_curve_file(manifest.files[i], manifest.scale);
  const Curve b = parse_curve_file(manifest.files[j], manifest.scale);
  r.parse_seconds = seconds_since(t0);
  const PairOutcome out = compute_pair(a, b, o.engine, o.simplify);
  r.wall_seconds = seconds_since(t0);
  r.value = out.value2.root();
  r.iterations = out.iterations;
  r.vertices_inserted = out.vertices_inserted;
  r.status = r.wall_seconds > o.timeout_seconds ? RunStatus::Timeout : RunStatus::Ok;
  return r;
}

ResultRecord run_isolated(const DatasetManifest& manifest, std::size_t i, std::size_t j, const RunOptions& o,
                          ResultRecord r) {
  int fds[2];
  if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
  const auto t0 = Clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    close(fds[0]);
    std::string line;
    int code = 0;
    try {
      line = to_csv(run_child(manifest, i, j, o, r));
    } catch (...) {
      code = 3;
    }
    for (std::size_t done = 0; done < line.size();) {
      const ssize_t w = write(fds[1], line.data() + done, line.size() - done);
      if (w <= 0) break;
      done += static_cast<std::size_t>(w);
    }
    close(fds[1]);
    _exit(code);
  }
  close(fds[1]);
  std::string data;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    const double left = o.timeout_seconds - seconds_since(t0);
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    const int ready = poll(&p, 1, static_cast<int>(std::min(left * 1000 + 1, 1e9)));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    const ssize_t got = read(fds[0], buf, sizeof buf);
    if (got <= 0) break;
    data.append(buf, static_cast<std::size_t>(got));
  }
  close(fds[0]);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  r.wall_seconds = seconds_since(t0);
  if (timed_out) {
    r.status = RunStatus::Timeout;
    r.wall_seconds = o.timeout_seconds;
    return r;
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0 || data.empty()) {
    r.status = RunStatus::Error;
    return r;
  }
  return parse_csv_record(data);
}

}  // namespace

void run_pairs(const DatasetManifest& manifest, const RunOptions& options,
               const std::function<void(const ResultRecord&)>& sink) {
  std::vector<std::size_t> sizes;
  for (const auto& f : manifest.files) sizes.push_back(parse_curve_file(f, manifest.scale).size());
  for (const auto& [i, j] : select_pairs(manifest.files.size(), options.pairs)) {
    ResultRecord r;
    r.pair_id = std::to_string(i) + "-" + std::to_string(j);
    r.n = sizes[i];
    r.m = sizes[j];
    r.engine = options.engine;
    r.simplify = options.simplify;
    r.value = ExactRoot(IntFraction(0));
    sink(run_isolated(manifest, i, j, options, r));
  }
}

namespace {

using Float256 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256>>;

Float256 to_float(const IntFraction& f) { return Float256(f.num()) / Float256(f.den()); }

Float256 evaluate(const ExactRoot& x) {
  const Float256 r = to_float(x.rational);
  if (x.radicand.is_zero()) return r;
  const Float256 s = boost::multiprecision::sqrt(to_float(x.radicand));
  return x.sign < 0 ? r - s : r + s;
}

ErrorStats stats(std::vector<double> v) {
  ErrorStats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.max = v.back();
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  const std::size_t h = v.size() / 2;
  s.median = v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
  return s;
}

}  // namespace

AccuracyReport accuracy_report(const std::vector<ResultRecord>& records,
                               const std::function<std::optional<ExactRoot>(const ResultRecord&)>& reference) {
  AccuracyReport rep;
  std::vector<double> exact, as_double;
  for (const ResultRecord& r : records) {
    if (r.status != RunStatus::Ok) continue;
    const std::optional<ExactRoot> ref = reference(r);
    if (!ref) {
      ++rep.skipped;
      continue;
    }
    ++rep.compared;
    const bool same = compare_root_expressions(r.value, *ref) == Ordering::Equal;
    if (!same) ++rep.exact_mismatches;
    const Float256 truth = evaluate(*ref);
    exact.push_back(same ? 0.0 : static_cast<double>(abs(evaluate(r.value) - truth)));
    const double d = r.value.to_double();
    const double err = static_cast<double>(abs(Float256(d) - truth));
    as_double.push_back(err);
    const double t = static_cast<double>(truth);
    const double ulp = std::nextafter(std::abs(t), std::numeric_limits<double>::infinity()) - std::abs(t);
    rep.max_ulps = std::max(rep.max_ulps, err / ulp);
  }
  rep.exact = stats(std::move(exact));
  rep.as_double = stats(std::move(as_double));
  return rep;
}

std::string to_csv(const AccuracyReport& r) {
  std::ostringstream os;
  os << "kind,compared,skipped,mismatches,max,mean,median,max_ulps\n";
  os << "exact," << r.compared << ',' << r.skipped << ',' << r.exact_mismatches << ',' << format_double(r.exact.max)
     << ',' << format_double(r.exact.mean) << ',' << format_double(r.exact.median) << ",0\n";
  os << "double," << r.compared << ',' << r.skipped << ',' << r.exact_mismatches << ','
     << format_double(r.as_double.max) << ',' << format_double(r.as_double.mean) << ','
     << format_double(r.as_double.median) << ',' << format_double(r.max_ulps) << '\n';
  return os.str();
}

}  // namespace frechet
