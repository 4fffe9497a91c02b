#pragma once

namespace stringspectra {

/// Library version, stamped into CSV headers and JSON metadata.
inline constexpr const char* version = "0.1.0";

}  // namespace stringspectra
