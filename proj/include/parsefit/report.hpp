#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "parsefit/io.hpp"

namespace parsefit {

struct AnalyzeOptions {
  int k_lo = -8;  // per-component table window, clamped to the index set
  int k_hi = 8;
  bool run_oracle = true;
};

/// Note attached to reports whenever a singular value sits on the 1/2
/// threshold and adjacent components tie.
extern const char* kHalfThresholdNote;

Json build_analyze_report(const FrameDocument& doc, const std::string& input_path,
                          const AnalyzeOptions& opt, const Tolerances& tol);

Json build_approx_report(const FrameDocument& doc, const std::string& input_path,
                         std::optional<int> component, int enumerate_limit,
                         std::uint64_t seed, const Tolerances& tol);

Json build_oracle_report(const FrameDocument& doc, const std::string& input_path,
                         std::optional<int> k, const Tolerances& tol);

/// True iff every per-k row of an oracle report passed.
bool oracle_report_passed(const Json& report);

Json build_connect_report(const FrameDocument& x, const FrameDocument& y,
                          const FrameDocument& f, int samples,
                          const Tolerances& tol);

bool connect_report_passed(const Json& report);

}  // namespace parsefit
