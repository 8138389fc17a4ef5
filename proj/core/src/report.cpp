#include "kanopt/report.hpp"

#include <sstream>

#include "json.hpp"

namespace kanopt {

using ordered_json = nlohmann::ordered_json;

Report::Report(std::string command_echo, std::string digest,
               std::string status)
    : command_(std::move(command_echo)),
      digest_(std::move(digest)),
      status_(std::move(status)) {}

void Report::set_scalar(const std::string& key, std::string value) {
  payload_.push_back({Entry::Kind::scalar, key, std::move(value), {}, {}});
}

void Report::set_list(const std::string& key,
                      std::vector<std::string> values) {
  payload_.push_back({Entry::Kind::list, key, {}, std::move(values), {}});
}

void Report::set_map(
    const std::string& key,
    std::vector<std::pair<std::string, std::string>> entries) {
  payload_.push_back({Entry::Kind::map, key, {}, {}, std::move(entries)});
}

void Report::set_findings(const ValidationReport& report) {
  findings_.clear();
  for (const auto& v : report.violations) {
    findings_.push_back({v.rule, v.witness});
  }
}

void Report::set_diagnostics(const std::vector<std::string>& lines) {
  diagnostics_ = lines;
}

void Report::set_timing(std::int64_t ms) { timing_ms_ = ms; }

std::string Report::machine_text() const {
  ordered_json j;
  j["schema"] = 1;
  j["command"] = command_;
  j["digest"] = digest_;
  j["status"] = status_;
  ordered_json payload = ordered_json::object();
  for (const auto& e : payload_) {
    switch (e.kind) {
      case Entry::Kind::scalar:
        payload[e.key] = e.scalar;
        break;
      case Entry::Kind::list:
        payload[e.key] = e.list;
        break;
      case Entry::Kind::map: {
        ordered_json m = ordered_json::object();
        for (const auto& [k, v] : e.map) m[k] = v;
        payload[e.key] = std::move(m);
        break;
      }
    }
  }
  j["payload"] = std::move(payload);
  ordered_json findings = ordered_json::array();
  for (const auto& [rule, witness] : findings_) {
    ordered_json f;
    f["rule"] = rule;
    f["witness"] = witness;
    findings.push_back(std::move(f));
  }
  j["findings"] = std::move(findings);
  if (!diagnostics_.empty()) j["diagnostics"] = diagnostics_;
  if (timing_ms_) j["timing_ms"] = *timing_ms_;
  return j.dump(2) + "\n";
}

std::string Report::human_text() const {
  std::ostringstream out;
  out << "command: " << command_ << "\n";
  out << "digest: " << digest_ << "\n";
  out << "status: " << status_ << "\n";
  for (const auto& e : payload_) {
    switch (e.kind) {
      case Entry::Kind::scalar:
        out << e.key << ": " << e.scalar << "\n";
        break;
      case Entry::Kind::list: {
        out << e.key << ":";
        if (e.list.empty()) out << " (none)";
        for (const auto& v : e.list) out << " " << v;
        out << "\n";
        break;
      }
      case Entry::Kind::map:
        out << e.key << ":\n";
        for (const auto& [k, v] : e.map) {
          out << "  " << k << " -> " << v << "\n";
        }
        break;
    }
  }
  if (findings_.empty()) {
    out << "findings: none\n";
  } else {
    out << "findings:\n";
    for (const auto& [rule, witness] : findings_) {
      out << "  " << rule;
      if (!witness.empty()) out << " [" << witness << "]";
      out << "\n";
    }
  }
  for (const auto& d : diagnostics_) out << "diagnostic: " << d << "\n";
  if (timing_ms_) out << "timing_ms: " << *timing_ms_ << "\n";
  return out.str();
}

}  // namespace kanopt
