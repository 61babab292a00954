#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace freebeta {

/// Failure categories raised by the library. Every throw site carries one.
enum class errc {
    division_by_zero_series,
    nonzero_constant_inner,
    not_invertible_series,
    insufficient_depth,
    insufficient_order,
    zero_mean,
    zero_constant_s,
    order_mismatch,
    on_support,
    unsupported_family,
    invalid_parameters,
    invalid_tau,
    malformed_input,
    size_limit_exceeded,
    invalid_partition,
    truncation_too_small,
    outside_support,
    outside_domain,
    quadrature_failure,
    singular_covariance,
    empty_input,
};

inline constexpr std::string_view to_string(errc code) noexcept
{
    switch (code) {
        case errc::division_by_zero_series: return "DivisionByZeroSeries";
        case errc::nonzero_constant_inner: return "NonzeroConstantInner";
        case errc::not_invertible_series: return "NotInvertibleSeries";
        case errc::insufficient_depth: return "InsufficientDepth";
        case errc::insufficient_order: return "InsufficientOrder";
        case errc::zero_mean: return "ZeroMeanError";
        case errc::zero_constant_s: return "ZeroConstantS";
        case errc::order_mismatch: return "OrderMismatch";
        case errc::on_support: return "OnSupportError";
        case errc::unsupported_family: return "UnsupportedFamily";
        case errc::invalid_parameters: return "InvalidParameters";
        case errc::invalid_tau: return "InvalidTau";
        case errc::malformed_input: return "MalformedInput";
        case errc::size_limit_exceeded: return "SizeLimitExceeded";
        case errc::invalid_partition: return "InvalidPartition";
        case errc::truncation_too_small: return "TruncationTooSmall";
        case errc::outside_support: return "OutsideSupport";
        case errc::outside_domain: return "OutsideDomain";
        case errc::quadrature_failure: return "QuadratureFailure";
        case errc::singular_covariance: return "SingularCovariance";
        case errc::empty_input: return "EmptyInput";
    }
    return "Unknown";
}

class error : public std::runtime_error
{
public:
    error(errc code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace freebeta
