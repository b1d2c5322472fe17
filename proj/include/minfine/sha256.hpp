// Copyright 2026 The minfine Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>

namespace minfine {

/// Incremental SHA-256 (FIPS 180-4); used to fingerprint input files.
class Sha256 {
  public:
    Sha256();
    void update(const void* data, std::size_t size);
    void update(const std::string& data) { update(data.data(), data.size()); }
    std::string hexDigest();  // finalizes; further updates are invalid

  private:
    void processBlock(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::size_t bufferLen_ = 0;
    std::uint64_t totalBits_ = 0;
};

std::string sha256_hex(const std::string& data);

}  // namespace minfine
