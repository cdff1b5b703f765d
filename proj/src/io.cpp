#include "framephase/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace framephase::io {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double number_from_json(const Json& j, std::string_view what) {
  if (!j.is_number()) throw FormatError(std::string(what) + ": expected a number, got " + j.dump());
  return j.get<double>();
}

std::size_t count_from_json(const Json& j, std::string_view key) {
  if (!j.contains(key)) throw FormatError("missing field \"" + std::string(key) + "\"");
  const Json& v = j.at(std::string(key));
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw FormatError("field \"" + std::string(key) + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

template <FieldScalar T>
Json scalar_to_json(const T& v) {
  if constexpr (is_complex_v<T>) {
    return Json::array({v.real(), v.imag()});
  } else {
    return v;
  }
}

Complex scalar_from_json(const Json& j, bool complex_field, std::string_view what) {
  if (complex_field) {
    if (!j.is_array() || j.size() != 2)
      throw FormatError(std::string(what) + ": complex entries must be [re, im] arrays");
    return {number_from_json(j[0], what), number_from_json(j[1], what)};
  }
  return number_from_json(j, what);
}

template <FieldScalar T>
Json frame_vectors_to_json(const Frame<T>& f) {
  Json vectors = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vector<T> v = f.vector(i);
    vectors.push_back(vector_to_json<T>(v));
  }
  return vectors;
}

}  // namespace

template <FieldScalar T>
Json vector_to_json(std::span<const T> v) {
  Json out = Json::array();
  for (const T& e : v) out.push_back(scalar_to_json(e));
  return out;
}

Vector<Complex> complex_vector_from_json(const Json& j, std::string_view what) {
  if (!j.is_array()) throw FormatError(std::string(what) + ": expected an array");
  Vector<Complex> out;
  for (const Json& e : j) out.push_back(e.is_array() ? scalar_from_json(e, true, what)
                                                     : scalar_from_json(e, false, what));
  return out;
}

Json frame_to_json(const AnyFrame& frame) {
  return std::visit(
      [](const auto& f) {
        Json j;
        j["field"] = std::string(field_name(f.field()));
        j["n"] = f.dim();
        j["m"] = f.size();
        j["vectors"] = frame_vectors_to_json(f);
        return j;
      },
      frame);
}

AnyFrame frame_from_json(const Json& j, const Tolerance& tol) {
  if (!j.is_object()) throw FormatError("frame file must hold a JSON object");
  if (!j.contains("field") || !j["field"].is_string())
    throw FormatError("missing string field \"field\"");
  const std::string field = j["field"].get<std::string>();
  if (field != "real" && field != "complex")
    throw FormatError("field must be \"real\" or \"complex\", got \"" + field + "\"");
  const bool is_complex_field = field == "complex";
  const std::size_t n = count_from_json(j, "n");
  const std::size_t m = count_from_json(j, "m");
  if (!j.contains("vectors") || !j["vectors"].is_array())
    throw FormatError("missing array field \"vectors\"");
  const Json& vs = j["vectors"];
  if (vs.size() != m)
    throw FormatError("\"vectors\" has " + std::to_string(vs.size()) + " entries but m = " +
                      std::to_string(m));

  Matrix<Complex> cm(n, m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::string what = "vectors[" + std::to_string(i) + "]";
    if (!vs[i].is_array() || vs[i].size() != n)
      throw FormatError(what + " must be an array of length n = " + std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) cm(k, i) = scalar_from_json(vs[i][k], is_complex_field, what);
  }
  try {
    if (is_complex_field) return ComplexFrame(std::move(cm), tol);
    Matrix<double> rm(n, m);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < m; ++i) rm(k, i) = cm(k, i).real();
    return RealFrame(std::move(rm), tol);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid frame: ") + e.what());
  }
}

Json measurement_to_json(const MagnitudeVector& a) {
  Json j;
  j["m"] = a.size();
  j["magnitudes"] = a.values;
  return j;
}

MagnitudeVector measurement_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("measurement file must hold a JSON object");
  const std::size_t m = count_from_json(j, "m");
  if (!j.contains("magnitudes") || !j["magnitudes"].is_array())
    throw FormatError("missing array field \"magnitudes\"");
  MagnitudeVector a;
  for (const Json& e : j["magnitudes"]) a.values.push_back(number_from_json(e, "magnitudes"));
  if (a.size() != m)
    throw FormatError("\"magnitudes\" has " + std::to_string(a.size()) + " entries but m = " +
                      std::to_string(m));
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return a;
}

template <FieldScalar T>
Json certificate_to_json(const InjectivityCertificate<T>& cert) {
  Json j;
  j["verdict"] = std::string(verdict_name(cert.verdict));
  if (cert.failing_subset) {
    Json idx = Json::array();
    for (std::size_t i : cert.failing_subset->indices()) idx.push_back(i + 1);
    j["failing_subset"] = idx;
  } else {
    j["failing_subset"] = nullptr;
  }
  if (cert.witness) {
    j["witness"] = {{"x", vector_to_json<T>(cert.witness->x)},
                    {"y", vector_to_json<T>(cert.witness->y)}};
  } else {
    j["witness"] = nullptr;
  }
  j["checked_subsets"] = cert.checked_subsets;
  j["reason"] = cert.reason;
  return j;
}

template <FieldScalar T>
Json result_to_json(const ReconstructionResult<T>& result) {
  Json j;
  j["status"] = std::string(status_name(result.status));
  Json rays = Json::array();
  for (const auto& r : result.rays) rays.push_back(vector_to_json<T>(r.representative()));
  j["rays"] = rays;
  j["residuals"] = result.residuals;
  j["patterns_explored"] = result.patterns_explored;
  if constexpr (is_complex_v<T>) {
    j["restarts_used"] = result.restarts_used;
    j["best_residual"] = result.best_residual;
  }
  j["truncated"] = result.truncated;
  return j;
}

Vector<Complex> parse_signal_list(std::string_view text) {
  auto parse_real = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw FormatError("cannot parse number \"" + std::string(s) + "\" in \"" +
                        std::string(text) + "\"");
    return v;
  };
  auto strip_plus = [](std::string_view s) {
    return (!s.empty() && s.front() == '+') ? s.substr(1) : s;
  };

  Vector<Complex> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string_view tok = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (tok.empty()) throw FormatError("empty entry in signal list \"" + std::string(text) + "\"");

    if (tok.back() == 'i') {
      tok.remove_suffix(1);
      // Split at the last sign that does not start the token or follow an exponent marker.
      std::size_t split = std::string_view::npos;
      for (std::size_t k = tok.size(); k-- > 1;) {
        if ((tok[k] == '+' || tok[k] == '-') && tok[k - 1] != 'e' && tok[k - 1] != 'E') {
          split = k;
          break;
        }
      }
      const std::string_view re = split == std::string_view::npos ? std::string_view{} : tok.substr(0, split);
      std::string_view im = split == std::string_view::npos ? tok : tok.substr(split);
      double imv;
      if (im.empty() || im == "+") imv = 1.0;
      else if (im == "-") imv = -1.0;
      else imv = parse_real(strip_plus(im));
      out.emplace_back(re.empty() ? 0.0 : parse_real(strip_plus(re)), imv);
    } else {
      out.emplace_back(parse_real(strip_plus(tok)), 0.0);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Vector<double> require_real(std::span<const Complex> v, std::string_view what) {
  Vector<double> out;
  out.reserve(v.size());
  for (const Complex& z : v) {
    if (z.imag() != 0.0) throw FormatError(std::string(what) + ": complex entry for a real frame");
    out.push_back(z.real());
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

AnyFrame read_frame_file(const std::filesystem::path& path, const Tolerance& tol) {
  const Json j = read_json_file(path);
  try {
    return frame_from_json(j, tol);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_frame_file(const std::filesystem::path& path, const AnyFrame& frame) {
  write_json_file(path, frame_to_json(frame));
}

MagnitudeVector read_measurement_file(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return measurement_from_json(j);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_measurement_file(const std::filesystem::path& path, const MagnitudeVector& a) {
  write_json_file(path, measurement_to_json(a));
}

template Json vector_to_json<double>(std::span<const double>);
template Json vector_to_json<Complex>(std::span<const Complex>);
template Json certificate_to_json<double>(const InjectivityCertificate<double>&);
template Json certificate_to_json<Complex>(const InjectivityCertificate<Complex>&);
template Json result_to_json<double>(const ReconstructionResult<double>&);
template Json result_to_json<Complex>(const ReconstructionResult<Complex>&);

}  // namespace framephase::io
