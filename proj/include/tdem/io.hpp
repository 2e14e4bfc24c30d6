#pragma once

// Tabular output (CSV canonical, JSON mirror), SHA-256 checksums and run
// manifests. Numbers are printed with 17 significant digits so repeated
// runs can be compared byte for byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "tdem/error.hpp"

namespace tdem::io {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error("no column '" + name + "'");
  }
};

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return csv_quote(v);
      },
      c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_quote(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

inline nlohmann::json to_json(const Table& t) {
  nlohmann::json j;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) r.push_back(nullptr);
            else if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) r.push_back(v);
              else r.push_back(format_double(v));
            } else r.push_back(v);
          },
          c);
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

/// Writes `stem`.csv or `stem`.json; returns the written path.
inline std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& t,
                                         const std::string& format) {
  if (format == "json") {
    const auto p = dir / (stem + ".json");
    write_text(p, to_json(t).dump(2) + "\n");
    return p;
  }
  const auto p = dir / (stem + ".csv");
  write_text(p, to_csv(t));
  return p;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 digest failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

struct OutputFile {
  std::string path;  // relative to the manifest directory
  std::string sha256;
};

struct RunManifest {
  nlohmann::json config;
  std::string tool_version;
  std::string subcommand;
  double wall_time_s = 0.0;
  std::vector<OutputFile> outputs;
  std::filesystem::path directory;
  nlohmann::json options = nlohmann::json::object();  // command-line flags that shaped the run

  void add_output(const std::filesystem::path& file) {
    outputs.push_back({std::filesystem::relative(file, directory).generic_string(), sha256_file(file)});
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["subcommand"] = subcommand;
    j["wall_time_s"] = wall_time_s;
    j["config"] = config;
    j["options"] = options;
    j["outputs"] = nlohmann::json::array();
    for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
    return j;
  }

  std::filesystem::path write() const {
    const auto p = directory / "manifest.json";
    write_text(p, to_json().dump(2) + "\n");
    return p;
  }
};

inline nlohmann::json error_json(const std::string& code, const std::string& message,
                                 nlohmann::json context = nlohmann::json::object()) {
  return {{"code", code}, {"message", message}, {"context", std::move(context)}};
}

}  // namespace tdem::io
