#include "anast/report_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>

namespace anast {

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

nlohmann::json report_to_json(const RunReport& rep) {
  nlohmann::json j;
  j["schema"] = "anast-report/1";
  j["scenario"] = rep.scenario;
  j["method"] = rep.method;
  j["accuracy_matrix"] = rep.matrix.rows;
  j["metrics"] = {{"acc", rep.acc},
                  {"acc_weighted", rep.acc_weighted},
                  {"bwt", rep.bwt},
                  {"bwt_defined", rep.bwt_defined}};

  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskSummary& t : rep.tasks) {
    tasks.push_back({{"name", t.name},
                     {"source", t.source},
                     {"classes", t.classes},
                     {"train_rows", t.train_rows},
                     {"test_rows", t.test_rows}});
  }
  j["tasks"] = std::move(tasks);

  const ExpansionSpec& e = rep.config.expansion;
  j["config"] = {{"manifest", rep.config.manifest_path},
                 {"gamma", rep.config.gamma},
                 {"split_ratio", rep.config.split_ratio},
                 {"split_seed", rep.config.split_seed},
                 {"expansion",
                  {{"kind", to_string(e.kind)},
                   {"activation", to_string(e.activation)},
                   {"input_dim", e.input_dim},
                   {"output_dim", e.output_dim},
                   {"seed", e.seed},
                   {"scale", e.scale}}},
                 {"sources", rep.config.source_paths},
                 {"overrides", rep.config.overrides}};

  j["warnings"] = rep.warnings;

  double total = 0.0;
  for (double s : rep.task_seconds) total += s;
  j["timing"] = {{"task_seconds", rep.task_seconds},
                 {"total_seconds", total}};
  return j;
}

std::string report_json_text(const RunReport& rep) {
  return report_to_json(rep).dump(2) + "\n";
}

std::string report_flat_table(const RunReport& rep) {
  std::string out = "task_learned\ttask_evaluated\taccuracy\n";
  for (std::size_t t = 0; t < rep.matrix.rows.size(); ++t) {
    for (std::size_t i = 0; i < rep.matrix.rows[t].size(); ++i) {
      out += std::to_string(t);
      out += '\t';
      out += std::to_string(i);
      out += '\t';
      out += format_double(rep.matrix.rows[t][i]);
      out += '\n';
    }
  }
  return out;
}

void write_report_files(const RunReport& rep, const std::string& json_path,
                        const std::string& table_path) {
  write_text_file(json_path, report_json_text(rep));
  write_text_file(table_path, report_flat_table(rep));
}

}  // namespace anast
