#pragma once

namespace riskgene {

inline constexpr const char* kToolName = "riskgene-sim";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace riskgene
