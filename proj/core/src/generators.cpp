#include "mqg/generators.hpp"

#include <cmath>

#include "mqg/rng.hpp"

namespace mqg {

std::string_view mdgp_kind_name(MdgpKind kind) {
    switch (kind) {
        case MdgpKind::iBWN: return "iBWN";
        case MdgpKind::cBWN: return "cBWN";
        case MdgpKind::wVAR: return "wVAR";
        case MdgpKind::sVAR: return "sVAR";
        case MdgpKind::wVGARCH: return "wVGARCH";
        case MdgpKind::sVGARCH: return "sVGARCH";
    }
    throw DomainError("unknown model kind");
}

MdgpKind mdgp_kind_from_name(std::string_view name) {
    for (MdgpKind kind : all_mdgp_kinds) {
        if (mdgp_kind_name(kind) == name) return kind;
    }
    throw DomainError("unknown model kind: '" + std::string(name) + "'");
}

ModelParams default_params(MdgpKind kind) {
    ModelParams p;
    switch (kind) {
        case MdgpKind::iBWN:
            p.noise_cov = {{{1.00, 0.00}, {0.00, 1.00}}};
            break;
        case MdgpKind::cBWN:
            p.noise_cov = {{{1.00, 0.86}, {0.86, 1.50}}};
            break;
        case MdgpKind::wVAR:
            p.intercept = {2.50, 0.50};
            p.ar = {{{0.20, 0.10}, {0.02, 0.10}}};
            p.noise_cov = {{{1.00, 0.10}, {0.10, 1.50}}};
            break;
        case MdgpKind::sVAR:
            p.intercept = {0.0, 0.0};
            p.ar = {{{0.70, 0.02}, {0.30, 0.80}}};
            p.noise_cov = {{{1.00, 0.86}, {0.86, 1.50}}};
            break;
        case MdgpKind::wVGARCH:
            p.omega = {0.05, 0.02};
            p.arch = {0.10, 0.05};
            p.garch = {0.85, 0.88};
            p.noise_cov = {{{1.00, 0.10}, {0.10, 1.50}}};
            break;
        case MdgpKind::sVGARCH:
            p.omega = {0.05, 0.02};
            p.arch = {0.10, 0.05};
            p.garch = {0.85, 0.88};
            p.noise_cov = {{{1.00, 0.86}, {0.86, 1.50}}};
            break;
    }
    return p;
}

std::size_t default_burn_in(MdgpKind kind) {
    switch (kind) {
        case MdgpKind::iBWN:
        case MdgpKind::cBWN:
            return 0;
        default:
            return 500;
    }
}

namespace {

bool is_recursive(MdgpKind kind) { return default_burn_in(kind) > 0; }
bool is_vgarch(MdgpKind kind) {
    return kind == MdgpKind::wVGARCH || kind == MdgpKind::sVGARCH;
}
bool is_var(MdgpKind kind) {
    return kind == MdgpKind::wVAR || kind == MdgpKind::sVAR;
}

/// Lower-triangular Cholesky factor of a symmetric 2x2 matrix.
Mat2 cholesky2(const Mat2& sigma) {
    const double a = sigma[0][0];
    const double b = sigma[0][1];
    const double d = sigma[1][1];
    if (sigma[1][0] != b) throw DomainError("noise covariance must be symmetric");
    if (a <= 0.0) throw DomainError("noise covariance is not positive definite");
    const double l00 = std::sqrt(a);
    const double l10 = b / l00;
    const double rest = d - l10 * l10;
    if (rest <= 0.0) throw DomainError("noise covariance is not positive definite");
    return {{{l00, 0.0}, {l10, std::sqrt(rest)}}};
}

/// Correlation matrix of a covariance matrix.
Mat2 correlation_of(const Mat2& sigma) {
    const double s1 = std::sqrt(sigma[0][0]);
    const double s2 = std::sqrt(sigma[1][1]);
    const double rho = sigma[0][1] / (s1 * s2);
    return {{{1.0, rho}, {rho, 1.0}}};
}

Vec2 correlated_normals(const Mat2& chol, Xoshiro256pp& rng) {
    const GaussianPair z = next_gaussian_pair(rng);
    return {chol[0][0] * z.z0,
            chol[1][0] * z.z0 + chol[1][1] * z.z1};
}

/// Stationary mean (I - ar)^-1 * intercept.
Vec2 var_stationary_mean(const ModelParams& p) {
    const double a = 1.0 - p.ar[0][0];
    const double b = -p.ar[0][1];
    const double c = -p.ar[1][0];
    const double d = 1.0 - p.ar[1][1];
    const double det = a * d - b * c;
    if (det == 0.0) throw DomainError("VAR coefficient matrix has a unit root");
    return {(d * p.intercept[0] - b * p.intercept[1]) / det,
            (-c * p.intercept[0] + a * p.intercept[1]) / det};
}

} // namespace

MultivariateSeries generate(const MdgpSpec& spec) {
    if (spec.length < 2) throw DomainError("series length must be >= 2");

    const ModelParams params =
        spec.override_params ? *spec.override_params : default_params(spec.kind);
    const std::size_t burn = spec.burn_in ? *spec.burn_in : default_burn_in(spec.kind);
    const std::size_t total = burn + spec.length;

    Xoshiro256pp rng(spec.seed);
    std::vector<double> y1, y2;
    y1.reserve(spec.length);
    y2.reserve(spec.length);

    const auto record = [&](std::size_t t, double a, double b) {
        if (t >= burn) {
            y1.push_back(a);
            y2.push_back(b);
        }
    };

    if (!is_recursive(spec.kind)) {
        const Mat2 chol = cholesky2(params.noise_cov);
        for (std::size_t t = 0; t < total; ++t) {
            const Vec2 eps = correlated_normals(chol, rng);
            record(t, eps[0], eps[1]);
        }
    } else if (is_var(spec.kind)) {
        const Mat2 chol = cholesky2(params.noise_cov);
        Vec2 y = var_stationary_mean(params);
        for (std::size_t t = 0; t < total; ++t) {
            const Vec2 eps = correlated_normals(chol, rng);
            const Vec2 next = {
                params.intercept[0] + params.ar[0][0] * y[0] + params.ar[0][1] * y[1] + eps[0],
                params.intercept[1] + params.ar[1][0] * y[0] + params.ar[1][1] * y[1] + eps[1]};
            y = next;
            record(t, y[0], y[1]);
        }
    } else if (is_vgarch(spec.kind)) {
        // Constant-conditional-correlation diagonal GARCH(1,1):
        //   h_{i,t} = omega_i + arch_i * eps_{i,t-1}^2 + garch_i * h_{i,t-1}
        //   eps_t   = sqrt(h_t) .* z_t,  z_t ~ N(0, R),  R = corr(noise_cov)
        const Mat2 chol_r = cholesky2(correlation_of(params.noise_cov));
        Vec2 h{};
        for (int i = 0; i < 2; ++i) {
            const double persistence = params.arch[i] + params.garch[i];
            if (persistence >= 1.0) {
                throw DomainError("VGARCH component " + std::to_string(i + 1) +
                                  " is non-stationary (arch + garch >= 1)");
            }
            h[i] = params.omega[i] / (1.0 - persistence); // unconditional variance
        }
        Vec2 eps_prev{0.0, 0.0};
        bool first = true;
        for (std::size_t t = 0; t < total; ++t) {
            if (!first) {
                for (int i = 0; i < 2; ++i) {
                    h[i] = params.omega[i] + params.arch[i] * eps_prev[i] * eps_prev[i] +
                           params.garch[i] * h[i];
                }
            }
            first = false;
            const Vec2 z = correlated_normals(chol_r, rng);
            const Vec2 eps = {std::sqrt(h[0]) * z[0], std::sqrt(h[1]) * z[1]};
            eps_prev = eps;
            record(t, eps[0], eps[1]);
        }
    }

    std::vector<UnivariateSeries> components;
    components.emplace_back(std::move(y1));
    components.emplace_back(std::move(y2));
    return MultivariateSeries(std::move(components));
}

std::vector<LabeledSeries> generate_dataset(std::size_t n_per_model,
                                            std::size_t length,
                                            std::uint64_t base_seed,
                                            std::optional<std::size_t> burn_in) {
    return generate_dataset(
        std::vector<MdgpKind>(all_mdgp_kinds.begin(), all_mdgp_kinds.end()),
        n_per_model, length, base_seed, burn_in);
}

std::vector<LabeledSeries> generate_dataset(const std::vector<MdgpKind>& kinds,
                                            std::size_t n_per_model,
                                            std::size_t length,
                                            std::uint64_t base_seed,
                                            std::optional<std::size_t> burn_in) {
    if (n_per_model == 0) throw DomainError("need at least one instance per model");

    std::vector<LabeledSeries> dataset;
    dataset.reserve(kinds.size() * n_per_model);
    std::size_t running_index = 0;
    for (MdgpKind kind : kinds) {
        const auto kind_index = static_cast<std::uint64_t>(kind);
        for (std::size_t i = 0; i < n_per_model; ++i) {
            const std::uint64_t stream = (kind_index << 32) | static_cast<std::uint64_t>(i);
            MdgpSpec spec;
            spec.kind = kind;
            spec.length = length;
            spec.seed = derive_seed(base_seed, stream);
            spec.burn_in = burn_in;

            char id[8];
            std::snprintf(id, sizeof(id), "%04zu", running_index++);
            dataset.push_back({id, kind, spec.seed, generate(spec)});
        }
    }
    return dataset;
}

} // namespace mqg
