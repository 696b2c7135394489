// SPDX-License-Identifier: Apache-2.0
#include "diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "eps_system.hpp"
#include "limit_system.hpp"
#include "norms.hpp"
#include "ops.hpp"

namespace machlim {

const char* const kDiagnosticsHeader =
    "t,eps,Hs_p,Hs_u,Hs_H,Hs_theta_dev,triple_norm,divH_res,constraint_res,"
    "energy_total,acoustic_L2_local,curl_btu_Hsm1";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_record(const DiagnosticsRecord& r) {
    std::string s;
    const double vals[] = {r.t,          r.eps,           r.Hs_p,
                           r.Hs_u,       r.Hs_H,          r.Hs_theta_dev,
                           r.triple_norm, r.divH_res,     r.constraint_res,
                           r.energy_total, r.acoustic_L2_local, r.curl_btu_Hsm1};
    for (std::size_t i = 0; i < std::size(vals); ++i) {
        if (i) s += ",";
        s += format_double(vals[i]);
    }
    return s;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary | std::ios::trunc);
    if (!impl_->out) throw FormatError("cannot open csv for writing: " + path);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::line(const std::string& s) {
    impl_->out << s << '\n';
    if (!impl_->out) throw FormatError("csv write failed");
}

double masked_l2(const ScalarField& mask, const ScalarField& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc += mask.values[i] * f.values[i] * f.values[i];
    return std::sqrt(acc * f.grid.cell_volume());
}

VectorField curl_weighted_velocity(const ScalarField& theta, const VectorField& u) {
    ScalarField binv(theta.grid);
    for (std::size_t i = 0; i < binv.values.size(); ++i)
        binv.values[i] = std::exp(-theta.values[i]);
    return curl(multiply(dealias(binv), u));
}

DiagnosticsRecord compute_eps_diagnostics(const EpsState& st, const PhysParams& par,
                                          double s, const ScalarField& probe_mask,
                                          double triple_value) {
    DiagnosticsRecord r;
    r.t = st.time;
    r.eps = par.eps;
    r.Hs_p = sobolev_norm(st.p, s);
    r.Hs_u = sobolev_norm(st.u, s);
    r.Hs_H = sobolev_norm(st.H, s);
    ScalarField dev(st.grid());
    for (std::size_t i = 0; i < dev.values.size(); ++i)
        dev.values[i] = st.theta.values[i] - par.theta_bar;
    r.Hs_theta_dev = sobolev_norm(dev, s);
    r.triple_norm = triple_value;
    r.divH_res = div_h_residual(st);
    r.constraint_res = constraint_residual(st, par);
    r.energy_total = reconstructed_total_energy(st, par);
    r.acoustic_L2_local = masked_l2(probe_mask, st.p);
    r.curl_btu_Hsm1 = sobolev_norm(curl_weighted_velocity(st.theta, st.u), s - 1.0);
    return r;
}

DiagnosticsRecord compute_limit_diagnostics(const LimitState& st, const PhysParams& par,
                                            double s, const ScalarField& probe_mask) {
    DiagnosticsRecord r;
    r.t = st.time;
    r.eps = 0.0;
    r.Hs_p = sobolev_norm(st.pi, s);
    r.Hs_u = sobolev_norm(st.w, s);
    r.Hs_H = sobolev_norm(st.h, s);
    ScalarField dev(st.grid());
    for (std::size_t i = 0; i < dev.values.size(); ++i)
        dev.values[i] = st.vartheta.values[i] - par.theta_bar;
    r.Hs_theta_dev = sobolev_norm(dev, s);
    r.triple_norm = 0.0;
    r.divH_res = l2_norm(div(st.h)) / std::max(1.0, sobolev_norm(st.h, 1.0));
    r.constraint_res = limit_constraint_residual(st, par);
    // limit energy: int e^{-vartheta}|w|^2/2 + |h|^2/2
    double acc = 0.0;
    for (std::size_t i = 0; i < st.vartheta.values.size(); ++i) {
        const double w2 = st.w[0].values[i] * st.w[0].values[i] +
                          st.w[1].values[i] * st.w[1].values[i] +
                          st.w[2].values[i] * st.w[2].values[i];
        const double h2 = st.h[0].values[i] * st.h[0].values[i] +
                          st.h[1].values[i] * st.h[1].values[i] +
                          st.h[2].values[i] * st.h[2].values[i];
        acc += 0.5 * std::exp(-st.vartheta.values[i]) * w2 + 0.5 * h2;
    }
    r.energy_total = acc * st.grid().cell_volume();
    r.acoustic_L2_local = masked_l2(probe_mask, st.pi);
    r.curl_btu_Hsm1 = sobolev_norm(curl_weighted_velocity(st.vartheta, st.w), s - 1.0);
    return r;
}

}  // namespace machlim
