#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "dsbn/errors.hpp"

namespace dsbn::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Report::columns(const std::string& kind, std::vector<std::string> names) {
  columns_.emplace_back(kind, std::move(names));
}

void Report::row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

void Report::write(std::ostream& out) const {
  if (config_.format == "json") {
    nlohmann::ordered_json doc;
    doc["report"] = title_;
    nlohmann::ordered_json run;
    run["command"] = config_.command;
    run["seed"] = config_.seed;
    for (const auto& [k, v] : config_.params) run[k] = v;
    doc["run"] = run;
    for (const auto& [k, v] : notes_) doc["notes"][k] = v;
    std::map<std::string, std::vector<std::string>> cols(columns_.begin(), columns_.end());
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
      nlohmann::ordered_json obj;
      obj["kind"] = r.front();
      auto it = cols.find(r.front());
      for (std::size_t i = 1; i < r.size(); ++i) {
        const std::string key = it != cols.end() && i - 1 < it->second.size() ? it->second[i - 1] : std::to_string(i);
        obj[key] = r[i];
      }
      rows.push_back(obj);
    }
    doc["rows"] = rows;
    out << doc.dump(1) << '\n';
    return;
  }
  out << "# dsbn " << title_ << '\n';
  out << "# run.command\t" << config_.command << '\n';
  out << "# run.seed\t" << config_.seed << '\n';
  for (const auto& [k, v] : config_.params) out << "# run." << k << '\t' << v << '\n';
  for (const auto& [k, v] : notes_) out << "# " << k << '\t' << v << '\n';
  std::map<std::string, bool> announced;
  for (const auto& r : rows_) {
    if (!announced[r.front()]) {
      announced[r.front()] = true;
      for (const auto& [kind, names] : columns_) {
        if (kind != r.front()) continue;
        out << '#' << kind;
        for (const auto& n : names) out << '\t' << n;
        out << '\n';
      }
    }
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << r[i];
    out << '\n';
  }
}

std::string Report::str() const {
  std::ostringstream s;
  write(s);
  return s.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw ValidationError("write to '" + path + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

}  // namespace dsbn::cli
