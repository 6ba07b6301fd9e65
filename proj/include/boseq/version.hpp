#pragma once

namespace boseq {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace boseq
