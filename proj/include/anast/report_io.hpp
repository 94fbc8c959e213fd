#pragma once

#include <string>

#include <json.hpp>

#include "anast/protocol.hpp"

namespace anast {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// JSON form of a report. Keys are emitted sorted, doubles round-trip, and
// everything wall-clock dependent lives under the single top-level "timing"
// key so byte comparisons can drop it.
nlohmann::json report_to_json(const RunReport& rep);

// report_to_json pretty-printed with a trailing newline.
std::string report_json_text(const RunReport& rep);

// Tab-separated long form of the accuracy matrix: one line per evaluated
// (task_learned, task_evaluated) pair, header included, full precision.
std::string report_flat_table(const RunReport& rep);

// Writes the two renderings; creates/overwrites the files.
void write_report_files(const RunReport& rep, const std::string& json_path,
                        const std::string& table_path);

}  // namespace anast
