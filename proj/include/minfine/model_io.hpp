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

#include <string>

#include "minfine/model.hpp"

namespace minfine {

struct LoadedModel {
    EnergySystemModel model;
    // SHA-256 over the document bytes followed by every referenced CSV,
    // in reference order.
    std::string contentHash;
};

/// Parses a model document (strict schema: unknown keys are rejected with
/// their JSON pointer). CSV references resolve relative to the document.
LoadedModel load_model_with_hash(const std::string& path);
EnergySystemModel load_model(const std::string& path);

EnergySystemModel model_from_json_text(const std::string& text,
                                       const std::string& baseDir);

/// Canonical serialization: fixed key order, defaults materialized,
/// series inlined. load(save(m)) reproduces m and the bytes are a fixpoint.
std::string model_to_json_text(const EnergySystemModel& model);
void save_model(const EnergySystemModel& model, const std::string& path);

/// Column values of a CSV file read by header name; errors carry
/// line/column context.
std::vector<double> read_csv_column(const std::string& path,
                                    const std::string& column);

/// Write-to-temp-then-rename so readers never see partial files.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace minfine
