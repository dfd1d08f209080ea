#pragma once

#include <filesystem>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bfamily/trajectory.hpp"

namespace bfam::cli {

/// Filesystem failure while reading or writing run outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kDiagHeader =
    "t,dt,l2_u,hs_u,hsm1_rho,min_ux,max_ux,sup_rho,sup_rhox,E1,E2,int_rho,R_m2,R_rho2,R_rhox2,R_rhoxx2,"
    "transport_res,symmetry_res";
inline constexpr std::string_view kSnapshotHeader = "x,u,rho,m";
inline constexpr std::string_view kOriginHeader = "t,u,ux,uxx,rho,pconv";
inline constexpr std::string_view kIdentityHeader =
    "t,lhs_m2,rhs_m2,lhs_rho2,rhs_rho2,lhs_rhox2,rhs_rhox2,lhs_rhoxx2,rhs_rhoxx2";

void write_diagnostics(const std::filesystem::path& path, const std::vector<DiagRecord>& records);
void write_origin(const std::filesystem::path& path, const std::vector<OriginSample>& origin);
void write_identities(const std::filesystem::path& path, const std::vector<IdentitySample>& samples);
void write_snapshot(const std::filesystem::path& path, const State& s);

/// Readers restore what the writers stored. Record step indices are not in
/// the CSV and are left at zero.
std::vector<DiagRecord> read_diagnostics(const std::filesystem::path& path);
std::vector<OriginSample> read_origin(const std::filesystem::path& path);
std::vector<IdentitySample> read_identities(const std::filesystem::path& path);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace bfam::cli
