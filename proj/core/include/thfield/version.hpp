#pragma once

namespace thfield {

inline constexpr const char* kVersion = "0.1.0";

}
