#include "dsab/ground_motion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dsab/io_util.hpp"
#include "dsab/rng.hpp"

namespace dsab {

namespace {

constexpr double kGravity = 9.81;  // m/s^2 per g

[[noreturn]] void parse_fail(const std::string& name, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(name + ": line " + std::to_string(line_no) + ": " +
                           what);
}

bool parse_double(std::string_view token, double& out) {
  const std::string buf(trim(token));
  if (buf.empty()) return false;
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size();
}

GroundMotionRecord parse_csv(std::istream& in, const std::string& name) {
  std::vector<double> times;
  std::vector<double> accels;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto comma = body.find(',');
    if (comma == std::string_view::npos)
      parse_fail(name, line_no, "expected 'time,accel'");
    double t = 0.0, a = 0.0;
    if (!parse_double(body.substr(0, comma), t))
      parse_fail(name, line_no, "non-numeric time value");
    if (!parse_double(body.substr(comma + 1), a))
      parse_fail(name, line_no, "non-numeric acceleration value");
    times.push_back(t);
    accels.push_back(a);
    lines.push_back(line_no);
  }
  if (times.size() < 2)
    throw std::runtime_error(name + ": fewer than two samples");

  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) parse_fail(name, lines[1], "non-monotone time column");
  const double tol = 1e-6 * dt;
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double step = times[i + 1] - times[i];
    if (!(step > 0.0)) parse_fail(name, lines[i + 1], "non-monotone time column");
    if (std::abs(step - dt) > tol)
      parse_fail(name, lines[i + 1], "non-uniform time step");
  }

  GroundMotionRecord record{name, dt, std::move(accels)};
  validate(record);
  return record;
}

std::optional<double> find_header_field(const std::string& line,
                                        const char* key) {
  const auto pos = line.find(key);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t i = pos + std::string_view(key).size();
  while (i < line.size() && (line[i] == ' ' || line[i] == '=' || line[i] == ':'))
    ++i;
  std::size_t j = i;
  while (j < line.size() &&
         (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' ||
          line[j] == '-' || line[j] == '+' || line[j] == 'e' || line[j] == 'E'))
    ++j;
  double value = 0.0;
  if (j == i || !parse_double(line.substr(i, j - i), value)) return std::nullopt;
  return value;
}

GroundMotionRecord parse_at2(std::istream& in, const std::string& name) {
  std::optional<double> npts;
  std::optional<double> dt;
  std::string line;
  std::size_t line_no = 0;
  for (int h = 0; h < 4; ++h) {
    if (!std::getline(in, line))
      throw std::runtime_error(name + ": malformed header: fewer than 4 lines");
    ++line_no;
    if (!npts) npts = find_header_field(line, "NPTS");
    if (!dt) dt = find_header_field(line, "DT");
  }
  if (!npts || !dt)
    throw std::runtime_error(name +
                             ": malformed header: NPTS or DT field missing");
  if (*npts < 2.0 || *npts != std::floor(*npts))
    throw std::runtime_error(name + ": malformed header: bad NPTS value");
  if (!(*dt > 0.0))
    throw std::runtime_error(name + ": malformed header: bad DT value");
  const auto expected = static_cast<std::size_t>(*npts);

  std::vector<double> accels;
  accels.reserve(expected);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens{line};
    std::string token;
    while (tokens >> token) {
      double g = 0.0;
      if (!parse_double(token, g))
        parse_fail(name, line_no, "non-numeric sample '" + token + "'");
      accels.push_back(g * kGravity);
    }
  }
  if (accels.size() != expected)
    throw std::runtime_error(name + ": sample count " +
                             std::to_string(accels.size()) +
                             " does not match NPTS " + std::to_string(expected));

  GroundMotionRecord record{name, *dt, std::move(accels)};
  validate(record);
  return record;
}

}  // namespace

void validate(const GroundMotionRecord& record) {
  if (!(record.dt > 0.0))
    throw std::invalid_argument("ground motion: dt must be positive");
  if (record.accel.size() < 2)
    throw std::invalid_argument("ground motion: needs at least two samples");
  for (const double a : record.accel) {
    if (!std::isfinite(a))
      throw std::invalid_argument("ground motion: non-finite sample");
  }
}

GroundMotionRecord parse_record(std::istream& source, RecordFormat format,
                                std::string name) {
  switch (format) {
    case RecordFormat::TwoColumnCsv:
      return parse_csv(source, name);
    case RecordFormat::PeerAt2:
      return parse_at2(source, name);
  }
  throw std::invalid_argument("unknown record format");
}

GroundMotionRecord load_record(const std::filesystem::path& path,
                               std::optional<RecordFormat> format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open record file: " + path.string());
  RecordFormat fmt;
  if (format) {
    fmt = *format;
  } else {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    fmt = (ext == ".at2") ? RecordFormat::PeerAt2 : RecordFormat::TwoColumnCsv;
  }
  return parse_record(in, fmt, path.stem().string());
}

GroundMotionRecord resample(const GroundMotionRecord& record, double new_dt) {
  validate(record);
  if (!(new_dt > 0.0))
    throw std::invalid_argument("resample: new_dt must be positive");
  if (new_dt == record.dt) return record;

  const double total = record.duration();
  const auto steps = static_cast<std::size_t>(
      std::floor(total / new_dt * (1.0 + 1e-12)));
  if (steps < 1)
    throw std::invalid_argument("resample: new_dt exceeds record duration");

  std::vector<double> out(steps + 1);
  const std::size_t last = record.accel.size() - 1;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * new_dt;
    auto j = static_cast<std::size_t>(t / record.dt);
    if (j >= last) j = last - 1;
    double frac = t / record.dt - static_cast<double>(j);
    frac = std::clamp(frac, 0.0, 1.0);
    out[i] = record.accel[j] + frac * (record.accel[j + 1] - record.accel[j]);
  }
  return GroundMotionRecord{record.name, new_dt, std::move(out)};
}

void write_csv(const GroundMotionRecord& record, std::ostream& out) {
  out << "# " << record.name << "\n";
  for (std::size_t i = 0; i < record.accel.size(); ++i) {
    out << format_double(static_cast<double>(i) * record.dt) << ','
        << format_double(record.accel[i]) << '\n';
  }
}

GroundMotionRecord synthetic_record(double duration, double dt, double peak,
                                    std::uint64_t seed) {
  if (!(duration > 0.0) || !(dt > 0.0) || !(peak > 0.0))
    throw std::invalid_argument("synthetic_record: arguments must be positive");
  Rng rng(seed);
  constexpr int kComponents = 14;
  struct Component {
    double freq, amp, phase;
  };
  std::vector<Component> parts;
  parts.reserve(kComponents);
  for (int i = 0; i < kComponents; ++i) {
    // Log-spaced 0.4..4.5 Hz band, jittered.
    const double f =
        0.4 * std::pow(4.5 / 0.4, static_cast<double>(i) / (kComponents - 1));
    parts.push_back({f * rng.uniform(0.9, 1.1), rng.uniform(0.5, 1.0),
                     rng.uniform(0.0, 2.0 * M_PI)});
  }

  const auto n = static_cast<std::size_t>(std::floor(duration / dt)) + 1;
  const double rise_end = 0.15 * duration;
  const double decay_start = 0.5 * duration;
  const double decay_tau = 0.2 * duration;
  std::vector<double> accel(n);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double s = 0.0;
    for (const auto& p : parts)
      s += p.amp * std::sin(2.0 * M_PI * p.freq * t + p.phase);
    double env = 1.0;
    if (t < rise_end)
      env = (t / rise_end) * (t / rise_end);
    else if (t > decay_start)
      env = std::exp(-(t - decay_start) / decay_tau);
    accel[i] = env * s;
    max_abs = std::max(max_abs, std::abs(accel[i]));
  }
  const double scale = peak / max_abs;
  for (double& a : accel) a *= scale;
  return GroundMotionRecord{"synthetic", dt, std::move(accel)};
}

}  // namespace dsab
