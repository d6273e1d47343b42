#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace vekua {

/// Thrown when an operation receives structurally invalid input
/// (dimension mismatch, even grid size, malformed spec, ...).
/// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a computation cannot certify its result within the
/// configured precision budget (never silent garbage).
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

/// One floating-point zero tolerance for the whole project, stated once:
/// a floating value z with tracked magnitude `scale` counts as zero iff
/// |z| <= kFloatZeroTol * (1 + scale).
inline constexpr double kFloatZeroTol = 1e-9;

/// Compatibility defects between the zero tolerance and this bound are
/// accepted but flagged with a warning in solve outcomes.
inline constexpr double kCompatWarnTol = 1e-6;

/// Margin below which a sampled principal symbol counts as elliptic-safe.
inline constexpr double kEllipticityMargin = 1e-6;

/// Worker-count cap for partitioned scans; the merge order is fixed by
/// block index, so results never depend on the actual thread count.
inline unsigned worker_count() {
    if (const char* env = std::getenv("VEKUA_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 64) return static_cast<unsigned>(v);
    }
    return 1;
}

} // namespace vekua
