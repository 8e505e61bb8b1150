#pragma once

namespace diskqmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace diskqmc
