#pragma once

#include <cstdint>
#include <string>

namespace rq {

std::uint64_t fnv1a64(const std::string& data);

// "fnv1a64:<hex>" content hash used to pin inputs inside reports.
std::string content_digest(const std::string& data);

}  // namespace rq
