#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kanopt {

std::uint64_t fnv1a64(std::string_view text);
std::string to_hex(std::uint64_t value);

}  // namespace kanopt
