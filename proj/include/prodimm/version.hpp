#pragma once

namespace prodimm {

inline constexpr const char* kEngineName = "prodimm";
inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace prodimm
