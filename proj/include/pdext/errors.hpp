// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pdext {

enum class errc {
  invalid_argument,
  out_of_domain,
  non_uniform_grid,
  asymmetric_data,
  negative_density,
  not_convex,
  not_decreasing,
  tangent_horizontal,
  measure_shape_mismatch,
  no_backing_measure,
  not_psd,
  not_cnd,
  too_few_paths,
  domain_not_interval,
  not_an_extension,
  io_failure,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument:       return "InvalidArgument";
    case errc::out_of_domain:          return "OutOfDomain";
    case errc::non_uniform_grid:       return "NonUniformGrid";
    case errc::asymmetric_data:        return "AsymmetricData";
    case errc::negative_density:       return "NegativeDensity";
    case errc::not_convex:             return "NotConvex";
    case errc::not_decreasing:         return "NotDecreasing";
    case errc::tangent_horizontal:     return "TangentHorizontal";
    case errc::measure_shape_mismatch: return "MeasureShapeMismatch";
    case errc::no_backing_measure:     return "NoBackingMeasure";
    case errc::not_psd:                return "NotPSD";
    case errc::not_cnd:                return "NotCND";
    case errc::too_few_paths:          return "TooFewPaths";
    case errc::domain_not_interval:    return "DomainNotInterval";
    case errc::not_an_extension:       return "NotAnExtension";
    case errc::io_failure:             return "IoFailure";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw error(code, what);
}

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) raise(code, what);
}

}  // namespace pdext
