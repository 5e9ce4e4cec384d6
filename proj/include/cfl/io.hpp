#pragma once

#include "cfl/config.hpp"
#include "cfl/fields.hpp"
#include "cfl/reconstruct.hpp"
#include "cfl/spectral.hpp"

namespace cfl {

/// Columnar CSV with a schema-version and config-digest comment header.
/// Header row: x,t,re_q,im_q,re_r,im_r,re_qx,im_qx,re_rx,im_rx
void write_field_grid_csv(const std::string& path, const FieldGrid& grid,
                          const std::string& digest_hex);
FieldGrid read_field_grid_csv(const std::string& path);

void write_traces(const std::string& path, const BoundaryTraces& traces, double L, double T_end,
                  const std::string& digest_hex);
BoundaryTraces read_traces(const std::string& path);

/// Initial-profile ingestion format: versioned structured text with columns
/// x, re_q0, im_q0, re_r0, im_r0 and an optional [boundary] block with
/// columns t, re_g0, im_g0, re_h0, im_h0.
struct Profile {
    std::vector<double> x;
    std::vector<Complex> q0, r0;
    std::vector<double> t;             // empty when no boundary block
    std::vector<Complex> g0, h0;
};
void write_profile(const std::string& path, const Profile& p);
Profile read_profile(const std::string& path);

void write_scattering_records(const std::string& path,
                              const std::vector<ScatteringRecord>& recs,
                              const std::string& digest_hex);
std::vector<ScatteringRecord> read_scattering_records(const std::string& path);

/// Report CSV: x,t,re_qx_rec,im_qx_rec,re_qx_ref,im_qx_ref,rel_err_q,rel_err_r
void write_reconstruction_csv(const std::string& path, const ReconstructionReport& rep,
                              const std::string& digest_hex);
void write_reconstruction_summary(const std::string& path, const ReconstructionReport& rep,
                                  const std::string& digest_hex);

}  // namespace cfl
