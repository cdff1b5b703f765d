#pragma once

// JSON file formats: frames, measurements, certificates and reconstruction
// results. Doubles are written in shortest round-trip form, so write-then-read
// reproduces every value bit for bit.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "framephase/injectivity.hpp"
#include "framephase/reconstruct.hpp"

namespace framephase::io {

using Json = nlohmann::json;

/// Malformed input; the message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"field":"real"|"complex","n":N,"m":M,"vectors":[[...],...]}; complex entries are [re, im].
Json frame_to_json(const AnyFrame& frame);
AnyFrame frame_from_json(const Json& j, const Tolerance& tol = {});

/// {"m":M,"magnitudes":[...]}.
Json measurement_to_json(const MagnitudeVector& a);
MagnitudeVector measurement_from_json(const Json& j);

/// {"verdict":..., "failing_subset":[1-based indices]|null, "witness":{"x":[...],"y":[...]}|null,
///  "checked_subsets":n, "reason":...}
template <FieldScalar T>
Json certificate_to_json(const InjectivityCertificate<T>& cert);

/// {"status":..., "rays":[[...],...], "residuals":[...], "patterns_explored":n, ...}
template <FieldScalar T>
Json result_to_json(const ReconstructionResult<T>& result);

template <FieldScalar T>
Json vector_to_json(std::span<const T> v);
Vector<Complex> complex_vector_from_json(const Json& j, std::string_view what);

/// Parses a comma-separated list such as "1,-2.5" or "1+2i, -0.5i, 3".
Vector<Complex> parse_signal_list(std::string_view text);
/// Real view of a parsed signal; throws FormatError if an entry has a nonzero imaginary part.
Vector<double> require_real(std::span<const Complex> v, std::string_view what);

Json read_json_file(const std::filesystem::path& path);
/// Writes j.dump(2) plus a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);
void write_text_file(const std::filesystem::path& path, std::string_view text);

AnyFrame read_frame_file(const std::filesystem::path& path, const Tolerance& tol = {});
void write_frame_file(const std::filesystem::path& path, const AnyFrame& frame);
MagnitudeVector read_measurement_file(const std::filesystem::path& path);
void write_measurement_file(const std::filesystem::path& path, const MagnitudeVector& a);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace framephase::io
