#include "cli/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bfamily/dynamics.hpp"

namespace bfam::cli {

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(std::string_view header) { text_.append(header).push_back('\n'); }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) text_.push_back(',');
      first = false;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      text_.append(buf);
    }
    text_.push_back('\n');
  }
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text_;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
  }

 private:
  std::string text_;
};

std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::string_view header,
                                          std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError(path.string() + ": unexpected header");
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      const std::string cell = line.substr(pos, comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size()) {
        throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      row.push_back(v);
      pos = comma + 1;
    }
    if (row.size() != columns) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                    " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_diagnostics(const std::filesystem::path& path, const std::vector<DiagRecord>& records) {
  CsvWriter w(kDiagHeader);
  for (const auto& r : records) {
    w.row({r.t, r.dt, r.l2_u, r.hs_u, r.hsm1_rho, r.min_ux, r.max_ux, r.sup_rho, r.sup_rhox, r.E1, r.E2, r.int_rho,
           r.R_m2, r.R_rho2, r.R_rhox2, r.R_rhoxx2, r.transport_res, r.symmetry_res});
  }
  w.save(path);
}

void write_origin(const std::filesystem::path& path, const std::vector<OriginSample>& origin) {
  CsvWriter w(kOriginHeader);
  for (const auto& o : origin) w.row({o.t, o.u, o.ux, o.uxx, o.rho, o.pconv});
  w.save(path);
}

void write_identities(const std::filesystem::path& path, const std::vector<IdentitySample>& samples) {
  CsvWriter w(kIdentityHeader);
  for (const auto& s : samples) {
    w.row({s.t, s.lhs[0], s.rhs[0], s.lhs[1], s.rhs[1], s.lhs[2], s.rhs[2], s.lhs[3], s.rhs[3]});
  }
  w.save(path);
}

void write_snapshot(const std::filesystem::path& path, const State& s) {
  const Field m = momentum(s);
  CsvWriter w(kSnapshotHeader);
  for (std::size_t j = 0; j < s.u.size(); ++j) w.row({s.grid().node(j), s.u[j], s.rho[j], m[j]});
  w.save(path);
}

std::vector<DiagRecord> read_diagnostics(const std::filesystem::path& path) {
  std::vector<DiagRecord> out;
  for (const auto& v : read_csv(path, kDiagHeader, 18)) {
    DiagRecord r;
    r.t = v[0];
    r.dt = v[1];
    r.l2_u = v[2];
    r.hs_u = v[3];
    r.hsm1_rho = v[4];
    r.min_ux = v[5];
    r.max_ux = v[6];
    r.sup_rho = v[7];
    r.sup_rhox = v[8];
    r.E1 = v[9];
    r.E2 = v[10];
    r.int_rho = v[11];
    r.R_m2 = v[12];
    r.R_rho2 = v[13];
    r.R_rhox2 = v[14];
    r.R_rhoxx2 = v[15];
    r.transport_res = v[16];
    r.symmetry_res = v[17];
    out.push_back(r);
  }
  return out;
}

std::vector<OriginSample> read_origin(const std::filesystem::path& path) {
  std::vector<OriginSample> out;
  for (const auto& v : read_csv(path, kOriginHeader, 6)) out.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
  return out;
}

std::vector<IdentitySample> read_identities(const std::filesystem::path& path) {
  std::vector<IdentitySample> out;
  for (const auto& v : read_csv(path, kIdentityHeader, 9)) {
    IdentitySample s;
    s.t = v[0];
    for (int k = 0; k < 4; ++k) {
      s.lhs[k] = v[1 + 2 * k];
      s.rhs[k] = v[2 + 2 * k];
    }
    out.push_back(s);
  }
  return out;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j{{"status", to_string(r.status)}, {"t_final", r.t_final}, {"steps", r.steps}, {"last_dt", r.last_dt}};
  if (r.blowup) {
    j["blowup_diagnostic"] = {{"quantity", to_string(r.blowup->quantity)},
                              {"value", r.blowup->value},
                              {"location_index", r.blowup->location_index},
                              {"location_x", r.blowup->location_x},
                              {"trigger", to_string(r.blowup->trigger)}};
  } else {
    j["blowup_diagnostic"] = nullptr;
  }
  j["overflow_stage"] = r.overflow_stage ? nlohmann::json(*r.overflow_stage) : nlohmann::json(nullptr);
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport r;
  const auto status = parse_run_status(j.at("status").get<std::string>());
  if (!status) throw IoError("manifest: unknown run status");
  r.status = *status;
  r.t_final = j.at("t_final").get<double>();
  r.steps = j.at("steps").get<std::size_t>();
  r.last_dt = j.value("last_dt", 0.0);
  const auto& b = j.at("blowup_diagnostic");
  if (!b.is_null()) {
    BlowUpDiagnostic d;
    const auto q = parse_blowup_quantity(b.at("quantity").get<std::string>());
    const auto t = parse_blowup_trigger(b.at("trigger").get<std::string>());
    if (!q || !t) throw IoError("manifest: bad blow-up diagnostic");
    d.quantity = *q;
    d.trigger = *t;
    d.value = b.at("value").get<double>();
    d.location_index = b.at("location_index").get<std::size_t>();
    d.location_x = b.at("location_x").get<double>();
    r.blowup = d;
  }
  if (j.contains("overflow_stage") && !j.at("overflow_stage").is_null()) r.overflow_stage = j.at("overflow_stage").get<int>();
  return r;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace bfam::cli
