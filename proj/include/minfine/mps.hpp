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

#include <iosfwd>
#include <string>

#include "minfine/problem.hpp"

namespace minfine {

/// Free-format MPS with 17-significant-digit numbers. Row names are the
/// problem's tags; binaries sit inside INTORG/INTEND markers and get BV
/// bound lines; infinite bounds are omitted per MPS convention. The
/// objective constant, when nonzero, is written negated as an RHS entry
/// on the objective row.
std::string write_mps(const SparseProblem& problem);
void write_mps(const SparseProblem& problem, const std::string& path);

/// Parses what write_mps emits (plus FX/MI/PL bounds). The returned
/// problem preserves names and ordering, so write-read-write is
/// byte-identical.
SparseProblem read_mps(std::istream& in);
SparseProblem read_mps_string(const std::string& text);
SparseProblem read_mps_file(const std::string& path);

}  // namespace minfine
