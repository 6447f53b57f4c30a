#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trigene/distribution.hpp"

namespace trigene::cli {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Writes `content` to a sibling temp file and renames it over `path`, so a
/// failed run never leaves a partial file behind.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// `# key: value` lines.
class CsvHeader {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value) { add(key, format_double(value)); }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

/// Rates, occupancies and truncation facts shared by the CSV header and JSON.
Json describe(const Distribution& d, double input_delta);
CsvHeader csv_header(const Distribution& d, double input_delta);

/// n,p_n,cumulative table with a metadata header.
std::string distribution_csv(const Distribution& d, double input_delta);
Json distribution_json(const Distribution& d, double input_delta);

}  // namespace trigene::cli
