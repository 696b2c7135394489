// SPDX-License-Identifier: Apache-2.0
#include "identities.hpp"

#include "norms.hpp"
#include "ops.hpp"
#include "rng.hpp"

namespace machlim {

const char* to_string(IdentityName name) {
    switch (name) {
        case IdentityName::div_fa: return "div_fa";
        case IdentityName::curl_fa: return "curl_fa";
        case IdentityName::div_cross: return "div_cross";
        case IdentityName::curl_cross: return "curl_cross";
        case IdentityName::grad_dot: return "grad_dot";
        case IdentityName::energy_exchange_1: return "energy_exchange_1";
        case IdentityName::energy_exchange_2: return "energy_exchange_2";
    }
    return "?";
}

std::vector<IdentityName> all_identities() {
    return {IdentityName::div_fa,         IdentityName::curl_fa,
            IdentityName::div_cross,      IdentityName::curl_cross,
            IdentityName::grad_dot,       IdentityName::energy_exchange_1,
            IdentityName::energy_exchange_2};
}

namespace {

// (b . grad) a, componentwise dealiased products.
VectorField advect(const VectorField& b, const VectorField& a) {
    VectorField out(a.grid());
    for (int c = 0; c < 3; ++c) out[c] = dot(b, grad(a[c]));
    return out;
}

const ScalarField& need_scalar(const std::optional<ScalarField>& f, const char* what) {
    if (!f) throw ContractViolation(std::string("check_identity: missing input ") + what);
    return *f;
}

const VectorField& need_vector(const std::optional<VectorField>& v, const char* what) {
    if (!v) throw ContractViolation(std::string("check_identity: missing input ") + what);
    return *v;
}

}  // namespace

IdentityCase check_identity(IdentityName name, const IdentityInputs& in) {
    double residual = 0.0;
    double input_norm = 0.0;
    switch (name) {
        case IdentityName::div_fa: {
            const auto& f = need_scalar(in.f, "f");
            const auto& a = need_vector(in.a, "a");
            ScalarField lhs = div(multiply(f, a));
            ScalarField rhs = add(multiply(f, div(a)), dot(grad(f), a));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(f, 1.0) + sobolev_norm(a, 1.0);
            break;
        }
        case IdentityName::curl_fa: {
            const auto& f = need_scalar(in.f, "f");
            const auto& a = need_vector(in.a, "a");
            // curl(f a) = f curl a - a x grad f  (= f curl a + grad f x a)
            VectorField lhs = curl(multiply(f, a));
            VectorField rhs = sub(multiply(f, curl(a)), cross(a, grad(f)));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(f, 1.0) + sobolev_norm(a, 1.0);
            break;
        }
        case IdentityName::div_cross: {
            const auto& a = need_vector(in.a, "a");
            const auto& b = need_vector(in.b, "b");
            ScalarField lhs = div(cross(a, b));
            ScalarField rhs = sub(dot(b, curl(a)), dot(a, curl(b)));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(a, 1.0) + sobolev_norm(b, 1.0);
            break;
        }
        case IdentityName::curl_cross: {
            const auto& a = need_vector(in.a, "a");
            const auto& b = need_vector(in.b, "b");
            VectorField lhs = curl(cross(a, b));
            VectorField rhs = sub(advect(b, a), advect(a, b));
            rhs = add(rhs, multiply(div(b), a));
            rhs = sub(rhs, multiply(div(a), b));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(a, 1.0) + sobolev_norm(b, 1.0);
            break;
        }
        case IdentityName::grad_dot: {
            const auto& a = need_vector(in.a, "a");
            const auto& b = need_vector(in.b, "b");
            VectorField lhs = grad(dot(a, b));
            VectorField rhs = add(advect(a, b), advect(b, a));
            rhs = add(rhs, cross(a, curl(b)));
            rhs = add(rhs, cross(b, curl(a)));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(a, 1.0) + sobolev_norm(b, 1.0);
            break;
        }
        case IdentityName::energy_exchange_1: {
            const auto& H = need_vector(in.H, "H");
            VectorField cH = curl(H);
            ScalarField lhs = div(cross(H, cH));
            ScalarField rhs = sub(dot(cH, cH), dot(curl(cH), H));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(H, 1.0);
            break;
        }
        case IdentityName::energy_exchange_2: {
            const auto& u = need_vector(in.u, "u");
            const auto& H = need_vector(in.H, "H");
            VectorField uxH = cross(u, H);
            ScalarField lhs = div(cross(uxH, H));
            ScalarField rhs = add(dot(cross(curl(H), H), u), dot(curl(uxH), H));
            residual = l2_norm(sub(lhs, rhs));
            input_norm = sobolev_norm(u, 1.0) + sobolev_norm(H, 1.0);
            break;
        }
    }
    return IdentityCase{name, residual, input_norm};
}

std::vector<IdentityCase> run_identity_suite(const Grid& grid, std::uint64_t seed,
                                             int rounds) {
    const int band = std::max(1, grid.n() / 6);
    std::vector<IdentityCase> worst;
    for (IdentityName name : all_identities()) {
        IdentityCase max_case{name, 0.0, 0.0};
        for (int r = 0; r < rounds; ++r) {
            const std::uint64_t s = mix_seed(seed, 100 * static_cast<int>(name) + r);
            IdentityInputs in;
            in.f = random_band_limited(grid, band, mix_seed(s, 1));
            in.a = random_band_limited_vector(grid, band, mix_seed(s, 2));
            in.b = random_band_limited_vector(grid, band, mix_seed(s, 3));
            in.u = random_band_limited_vector(grid, band, mix_seed(s, 4));
            in.H = random_band_limited_vector(grid, band, mix_seed(s, 5));
            IdentityCase c = check_identity(name, in);
            if (r == 0 || c.relative() > max_case.relative()) max_case = c;
        }
        worst.push_back(max_case);
    }
    return worst;
}

}  // namespace machlim
