#pragma once

#include <string>
#include <string_view>

namespace tgk {

// FIPS 180-4 SHA-256; used for content-addressed blobs and state
// fingerprints.
std::string sha256_hex(std::string_view data);

}  // namespace tgk
