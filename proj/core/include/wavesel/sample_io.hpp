#pragma once

#include <iosfwd>
#include <string>

#include "wavesel/signals.hpp"

namespace wavesel {

inline constexpr const char* kSampleSchema = "wavesel.sample/1";

/// CSV layout: one `# schema=... signal=... noise=... n=... seed=...`
/// comment line, an `x,y` header, then one row per observation.
/// Doubles are written with 17 significant digits so reading is exact.
void write_sample_csv(const RegressionSample& sample, std::ostream& out);
RegressionSample read_sample_csv(std::istream& in);

/// {"schema", "meta": {...}, "x": [...], "y": [...]}
std::string sample_to_json(const RegressionSample& sample);
RegressionSample sample_from_json(const std::string& text);

/// Dispatches on the file extension (.json or anything else as CSV).
RegressionSample load_sample(const std::string& path);
void save_sample(const RegressionSample& sample, const std::string& path);

/// Sorts jointly by x and validates equal lengths; used after reading
/// external files.
void normalize_sample(RegressionSample& sample);

}  // namespace wavesel
