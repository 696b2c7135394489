// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "eps_state.hpp"

namespace machlim {

// One per-sample row of the run CSV.  For limit-solver runs the analogous
// quantities are stored (pi in the p column, w in u, h in H, vartheta dev in
// theta_dev, eps = 0).
struct DiagnosticsRecord {
    double t = 0.0;
    double eps = 0.0;
    double Hs_p = 0.0;
    double Hs_u = 0.0;
    double Hs_H = 0.0;
    double Hs_theta_dev = 0.0;
    double triple_norm = 0.0;
    double divH_res = 0.0;
    double constraint_res = 0.0;
    double energy_total = 0.0;
    double acoustic_L2_local = 0.0;
    double curl_btu_Hsm1 = 0.0;
};

extern const char* const kDiagnosticsHeader;

std::string format_record(const DiagnosticsRecord& r);

// Deterministic CSV writing: '.' decimal separator, '\n' line endings,
// %.17g doubles, mandatory header row.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    void line(const std::string& s);

    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

private:
    struct Impl;
    Impl* impl_;
};

std::string format_double(double v);

// sqrt( integral of mask * f^2 ).
double masked_l2(const ScalarField& mask, const ScalarField& f);

// curl(e^{-theta} u), the incompressible component diagnostic.
VectorField curl_weighted_velocity(const ScalarField& theta, const VectorField& u);

DiagnosticsRecord compute_eps_diagnostics(const EpsState& state, const PhysParams& params,
                                          double s_report, const ScalarField& probe_mask,
                                          double triple_value);

DiagnosticsRecord compute_limit_diagnostics(const LimitState& state,
                                            const PhysParams& params, double s_report,
                                            const ScalarField& probe_mask);

}  // namespace machlim
