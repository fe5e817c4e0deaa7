#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mqg/series.hpp"

namespace mqg {

/// The six bivariate data-generating processes: independent / correlated
/// white noise, weak / strong VAR(1), weak / strong VGARCH(1,1).
enum class MdgpKind { iBWN, cBWN, wVAR, sVAR, wVGARCH, sVGARCH };

constexpr std::array<MdgpKind, 6> all_mdgp_kinds{
    MdgpKind::iBWN, MdgpKind::cBWN, MdgpKind::wVAR,
    MdgpKind::sVAR, MdgpKind::wVGARCH, MdgpKind::sVGARCH};

std::string_view mdgp_kind_name(MdgpKind kind);

/// Throws DomainError for an unknown name.
MdgpKind mdgp_kind_from_name(std::string_view name);

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

/// Model matrices of one process. VAR kinds use intercept/ar/noise_cov;
/// VGARCH kinds use omega/arch/garch (diagonal terms) plus noise_cov, whose
/// correlation drives the innovations; white noise uses noise_cov only.
struct ModelParams {
    Vec2 intercept{0.0, 0.0};
    Mat2 ar{{{0.0, 0.0}, {0.0, 0.0}}};
    Vec2 omega{0.0, 0.0};
    Vec2 arch{0.0, 0.0};
    Vec2 garch{0.0, 0.0};
    Mat2 noise_cov{{{1.0, 0.0}, {0.0, 1.0}}};
};

/// The fixed parameterization of each kind.
ModelParams default_params(MdgpKind kind);

/// 500 for the recursive kinds (VAR, VGARCH), 0 for white noise.
std::size_t default_burn_in(MdgpKind kind);

struct MdgpSpec {
    MdgpKind kind = MdgpKind::iBWN;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> burn_in;          // unset: default_burn_in(kind)
    std::optional<ModelParams> override_params;  // unset: default_params(kind)
};

/// Draws one bivariate series of `spec.length` observations. Identical specs
/// produce identical output on every platform (xoshiro256++ innovations,
/// Box-Muller normals, Cholesky-correlated). Burn-in samples are generated
/// first and discarded. Throws DomainError for length < 2, a non-positive-
/// definite noise covariance, or non-stationary VGARCH terms.
MultivariateSeries generate(const MdgpSpec& spec);

struct LabeledSeries {
    std::string id;     // zero-padded dataset-wide index
    MdgpKind kind;
    std::uint64_t seed; // the instance's derived seed
    MultivariateSeries series;
};

/// n_per_model instances of every kind (in all_mdgp_kinds order), each of the
/// given length. The instance seed is derive_seed(base_seed, k * 2^32 + i)
/// where k is the kind's canonical index and i the instance index, so any
/// subset of models regenerates identically. burn_in overrides the per-kind
/// default when set.
std::vector<LabeledSeries> generate_dataset(std::size_t n_per_model,
                                            std::size_t length,
                                            std::uint64_t base_seed,
                                            std::optional<std::size_t> burn_in = {});

/// Same, restricted to the listed kinds.
std::vector<LabeledSeries> generate_dataset(const std::vector<MdgpKind>& kinds,
                                            std::size_t n_per_model,
                                            std::size_t length,
                                            std::uint64_t base_seed,
                                            std::optional<std::size_t> burn_in = {});

} // namespace mqg
