#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsab {

// Ground acceleration time history on a uniform grid, in m/s^2.
// Immutable after construction; safe to share read-only across workers.
struct GroundMotionRecord {
  std::string name;
  double dt = 0.0;            // sampling interval, s
  std::vector<double> accel;  // m/s^2

  std::size_t size() const { return accel.size(); }
  double duration() const {
    return accel.size() < 2 ? 0.0 : dt * static_cast<double>(accel.size() - 1);
  }
};

enum class RecordFormat { TwoColumnCsv, PeerAt2 };

// Throws std::invalid_argument unless dt > 0, at least two samples, and
// every sample is finite.
void validate(const GroundMotionRecord& record);

// TwoColumnCsv: comma-separated time(s),accel(m/s^2); lines starting with
// '#' and blank lines are ignored; dt is taken from the first two time
// stamps and the time column must be uniform to 1e-6*dt.
// PeerAt2: four header lines, with NPTS= and DT= fields on one of them,
// followed by whitespace-separated acceleration values in g (converted to
// m/s^2 with g = 9.81).
// Parse failures throw std::runtime_error naming the offending line.
GroundMotionRecord parse_record(std::istream& source, RecordFormat format,
                                std::string name = "record");

// Format defaults to PeerAt2 for a .at2/.AT2 extension, TwoColumnCsv
// otherwise. The record name is the file stem.
GroundMotionRecord load_record(const std::filesystem::path& path,
                               std::optional<RecordFormat> format = std::nullopt);

// Linear interpolation onto the grid i*new_dt, i = 0..floor(duration/new_dt).
// new_dt == dt returns an identical copy. The last grid point may land up to
// one new_dt short of the original end time when the durations do not divide.
GroundMotionRecord resample(const GroundMotionRecord& record, double new_dt);

// Two-column CSV in the layout parse_record accepts; values round-trip
// exactly.
void write_csv(const GroundMotionRecord& record, std::ostream& out);

// Band-limited amplitude-modulated sum of sinusoids scaled to the requested
// peak. A stand-in strong-motion record for demos and tests when no measured
// record is at hand; fully determined by the seed.
GroundMotionRecord synthetic_record(double duration, double dt, double peak,
                                    std::uint64_t seed);

}  // namespace dsab
