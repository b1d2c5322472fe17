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

#include "minfine/mps.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace minfine {

namespace {

const char* sense_letter(RowSense sense) {
    switch (sense) {
        case RowSense::lessEqual: return "L";
        case RowSense::greaterEqual: return "G";
        case RowSense::equal: return "E";
    }
    return "E";
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int lineNo) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == nullptr || *end != '\0') {
        throw Error("MPS line " + std::to_string(lineNo) + ": bad number '" +
                    tok + "'");
    }
    return v;
}

}  // namespace

std::string write_mps(const SparseProblem& problem) {
    problem.checkConsistent();
    if (problem.rows.empty()) {
        throw Error("cannot write MPS for a problem without rows");
    }
    if (problem.numVars == 0) {
        throw Error("cannot write MPS for a problem without variables");
    }
    int n = problem.numVars;
    int m = static_cast<int>(problem.rows.size());

    std::vector<std::string> rowNames(m);
    std::set<std::string> seenRows;
    for (int i = 0; i < m; ++i) {
        rowNames[i] = problem.rows[i].tag.empty() ? "c" + std::to_string(i)
                                                  : problem.rows[i].tag;
        if (rowNames[i] == "OBJ" || !seenRows.insert(rowNames[i]).second) {
            throw Error("MPS export needs unique row tags; '" + rowNames[i] +
                        "' repeats or collides with OBJ");
        }
    }
    std::vector<std::string> colNames(n);
    std::set<std::string> seenCols;
    for (int j = 0; j < n; ++j) {
        colNames[j] = problem.columnName(j);
        if (!seenCols.insert(colNames[j]).second) {
            throw Error("MPS export needs unique column names; '" + colNames[j] +
                        "' repeats");
        }
    }

    // Column-major coefficient lists, ordered by row within each column.
    std::vector<std::vector<std::pair<int, double>>> perCol(n);
    for (int i = 0; i < m; ++i) {
        for (const auto& [col, coeff] : problem.rows[i].entries) {
            perCol[col].emplace_back(i, coeff);
        }
    }

    std::ostringstream out;
    out << "NAME " << problem.name << "\n";
    out << "ROWS\n";
    out << " N OBJ\n";
    for (int i = 0; i < m; ++i) {
        out << " " << sense_letter(problem.rows[i].sense) << " " << rowNames[i]
            << "\n";
    }
    out << "COLUMNS\n";
    int markerCount = 0;
    bool inInteger = false;
    for (int j = 0; j < n; ++j) {
        bool integral = problem.integrality[j] != 0;
        if (integral != inInteger) {
            ++markerCount;
            out << "    MARKER" << markerCount << " 'MARKER' "
                << (integral ? "'INTORG'" : "'INTEND'") << "\n";
            inInteger = integral;
        }
        // The objective entry is always written so every column registers.
        out << "    " << colNames[j] << " OBJ " << format_full(problem.objective[j])
            << "\n";
        for (const auto& [row, coeff] : perCol[j]) {
            out << "    " << colNames[j] << " " << rowNames[row] << " "
                << format_full(coeff) << "\n";
        }
    }
    if (inInteger) {
        ++markerCount;
        out << "    MARKER" << markerCount << " 'MARKER' 'INTEND'\n";
    }
    out << "RHS\n";
    for (int i = 0; i < m; ++i) {
        if (problem.rows[i].rhs != 0.0) {
            out << "    RHS1 " << rowNames[i] << " "
                << format_full(problem.rows[i].rhs) << "\n";
        }
    }
    if (problem.objectiveConstant != 0.0) {
        out << "    RHS1 OBJ " << format_full(-problem.objectiveConstant) << "\n";
    }
    out << "BOUNDS\n";
    for (int j = 0; j < n; ++j) {
        double lo = problem.lowerBounds[j];
        double hi = problem.upperBounds[j];
        bool integral = problem.integrality[j] != 0;
        if (integral && lo == 0.0 && hi == 1.0) {
            out << " BV BND1 " << colNames[j] << "\n";
            continue;
        }
        if (lo == 0.0 && hi == kInf) continue;
        if (lo == -kInf && hi == kInf) {
            out << " FR BND1 " << colNames[j] << "\n";
            continue;
        }
        if (lo == -kInf) {
            out << " MI BND1 " << colNames[j] << "\n";
        } else if (lo != 0.0) {
            out << " LO BND1 " << colNames[j] << " " << format_full(lo) << "\n";
        }
        if (hi != kInf) {
            out << " UP BND1 " << colNames[j] << " " << format_full(hi) << "\n";
        }
    }
    out << "ENDATA\n";
    return out.str();
}

void write_mps(const SparseProblem& problem, const std::string& path) {
    std::string text = write_mps(problem);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path + " for writing");
    file << text;
    if (!file.good()) throw Error("write failed for " + path);
}

SparseProblem read_mps(std::istream& in) {
    SparseProblem p;
    p.numVars = 0;

    enum class Section { start, rows, columns, rhs, ranges, bounds, done };
    Section section = Section::start;
    bool sawEndata = false;
    bool inInteger = false;

    std::map<std::string, int> rowByName;
    std::map<std::string, int> colByName;
    std::vector<std::map<int, double>> colEntries;  // per column: row -> coeff
    std::string objName = "OBJ";
    bool haveObjRow = false;

    auto columnIndex = [&](const std::string& name) {
        auto it = colByName.find(name);
        if (it != colByName.end()) return it->second;
        int j = p.numVars++;
        colByName[name] = j;
        p.colNames.push_back(name);
        p.lowerBounds.push_back(0.0);
        p.upperBounds.push_back(kInf);
        p.objective.push_back(0.0);
        p.integrality.push_back(inInteger ? 1 : 0);
        colEntries.emplace_back();
        return j;
    };
    auto rowIndex = [&](const std::string& name, int lineNo) {
        auto it = rowByName.find(name);
        if (it == rowByName.end()) {
            throw Error("MPS line " + std::to_string(lineNo) +
                        ": unknown row " + name);
        }
        return it->second;
    };

    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '*') continue;
        bool header = line[0] != ' ' && line[0] != '\t';
        std::vector<std::string> f = tokenize(line);
        if (f.empty()) continue;
        if (header) {
            const std::string& kw = f[0];
            if (kw == "NAME") {
                if (section != Section::start) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": NAME after data sections");
                }
                p.name = f.size() > 1 ? f[1] : "";
            } else if (kw == "ROWS") {
                if (section != Section::start) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": ROWS out of order");
                }
                section = Section::rows;
            } else if (kw == "COLUMNS") {
                if (section != Section::rows) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": COLUMNS must follow ROWS");
                }
                section = Section::columns;
            } else if (kw == "RHS") {
                if (section != Section::columns) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": RHS must follow COLUMNS");
                }
                section = Section::rhs;
            } else if (kw == "RANGES") {
                throw Error("MPS line " + std::to_string(lineNo) +
                            ": RANGES sections are not supported");
            } else if (kw == "BOUNDS") {
                if (section != Section::rhs && section != Section::columns) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": BOUNDS out of order");
                }
                section = Section::bounds;
            } else if (kw == "ENDATA") {
                sawEndata = true;
                section = Section::done;
                break;
            } else {
                throw Error("MPS line " + std::to_string(lineNo) +
                            ": unknown section " + kw);
            }
            continue;
        }
        switch (section) {
            case Section::rows: {
                if (f.size() != 2) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": ROWS entries need sense and name");
                }
                const std::string& sense = f[0];
                const std::string& name = f[1];
                if (sense == "N") {
                    if (haveObjRow) {
                        throw Error("MPS line " + std::to_string(lineNo) +
                                    ": multiple objective rows");
                    }
                    haveObjRow = true;
                    objName = name;
                    continue;
                }
                RowDef row;
                if (sense == "L") {
                    row.sense = RowSense::lessEqual;
                } else if (sense == "G") {
                    row.sense = RowSense::greaterEqual;
                } else if (sense == "E") {
                    row.sense = RowSense::equal;
                } else {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": unknown row sense " + sense);
                }
                row.tag = name;
                if (rowByName.count(name) != 0) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": duplicate row " + name);
                }
                rowByName[name] = static_cast<int>(p.rows.size());
                p.rows.push_back(std::move(row));
                break;
            }
            case Section::columns: {
                if (f.size() >= 3 && f[1] == "'MARKER'") {
                    if (f[2] == "'INTORG'") {
                        inInteger = true;
                    } else if (f[2] == "'INTEND'") {
                        inInteger = false;
                    } else {
                        throw Error("MPS line " + std::to_string(lineNo) +
                                    ": unknown marker " + f[2]);
                    }
                    continue;
                }
                if (f.size() != 3 && f.size() != 5) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": COLUMNS entries need (column, row, value) "
                                "groups");
                }
                int j = columnIndex(f[0]);
                for (std::size_t base = 1; base + 1 < f.size(); base += 2) {
                    double v = parse_number(f[base + 1], lineNo);
                    if (f[base] == objName) {
                        p.objective[j] += v;
                    } else {
                        colEntries[j][rowIndex(f[base], lineNo)] += v;
                    }
                }
                break;
            }
            case Section::rhs: {
                if (f.size() != 3 && f.size() != 5) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": RHS entries need (set, row, value) groups");
                }
                for (std::size_t base = 1; base + 1 < f.size(); base += 2) {
                    double v = parse_number(f[base + 1], lineNo);
                    if (f[base] == objName) {
                        p.objectiveConstant = -v;
                    } else {
                        p.rows[rowIndex(f[base], lineNo)].rhs = v;
                    }
                }
                break;
            }
            case Section::bounds: {
                if (f.size() < 3) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": BOUNDS entries need type, set and column");
                }
                const std::string& type = f[0];
                auto it = colByName.find(f[2]);
                if (it == colByName.end()) {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": bound for unknown column " + f[2]);
                }
                int j = it->second;
                auto value = [&]() {
                    if (f.size() < 4) {
                        throw Error("MPS line " + std::to_string(lineNo) +
                                    ": bound type " + type + " needs a value");
                    }
                    return parse_number(f[3], lineNo);
                };
                if (type == "LO") {
                    p.lowerBounds[j] = value();
                } else if (type == "UP") {
                    p.upperBounds[j] = value();
                } else if (type == "FX") {
                    double v = value();
                    p.lowerBounds[j] = v;
                    p.upperBounds[j] = v;
                } else if (type == "FR") {
                    p.lowerBounds[j] = -kInf;
                    p.upperBounds[j] = kInf;
                } else if (type == "MI") {
                    p.lowerBounds[j] = -kInf;
                } else if (type == "PL") {
                    p.upperBounds[j] = kInf;
                } else if (type == "BV") {
                    p.lowerBounds[j] = 0.0;
                    p.upperBounds[j] = 1.0;
                    p.integrality[j] = 1;
                } else {
                    throw Error("MPS line " + std::to_string(lineNo) +
                                ": unknown bound type " + type);
                }
                break;
            }
            default:
                throw Error("MPS line " + std::to_string(lineNo) +
                            ": data outside any section");
        }
    }
    if (!sawEndata) throw Error("MPS stream ends without ENDATA");
    if (!haveObjRow) throw Error("MPS stream lacks an objective row");

    for (int j = 0; j < p.numVars; ++j) {
        for (const auto& [row, coeff] : colEntries[j]) {
            if (coeff != 0.0) p.rows[row].entries.emplace_back(j, coeff);
        }
    }
    for (auto& row : p.rows) {
        std::sort(row.entries.begin(), row.entries.end());
        if (row.entries.empty()) {
            throw Error("MPS row " + row.tag + " has no nonzero entries");
        }
    }
    p.checkConsistent();
    return p;
}

SparseProblem read_mps_string(const std::string& text) {
    std::istringstream in(text);
    return read_mps(in);
}

SparseProblem read_mps_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return read_mps(in);
}

}  // namespace minfine
